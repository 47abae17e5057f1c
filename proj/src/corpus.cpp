/*
 * Copyright 2026 The covtomo Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <covtomo/corpus.hpp>

namespace covtomo {

long FormRng::uniform(long lo, long hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(m_engine() % span);
}

Rational FormRng::small_rational()
{
    long num = uniform(-5, 5);
    if (num == 0) num = 1;
    return make_rational(num, uniform(1, 4));
}

Polynomial FormRng::polynomial(int dim, int max_degree, int max_terms)
{
    Polynomial p(dim);
    const long terms = uniform(1, max_terms);
    for (long t = 0; t < terms; ++t) {
        Monomial m;
        long budget = uniform(0, max_degree);
        for (int i = 0; i < dim && budget > 0; ++i) {
            const long e = (i == dim - 1) ? budget : uniform(0, budget);
            m.exp[i] = static_cast<std::uint8_t>(e);
            budget -= e;
        }
        p.add_term(m, small_rational());
    }
    return p;
}

Form FormRng::form(int dim, int grade, int max_degree, FiberSpec fiber)
{
    Form f(dim, grade, fiber);
    for (BasisMask b : basis_of_grade(dim, grade)) {
        for (int r = 0; r < fiber.rows(); ++r) {
            for (int c = 0; c < fiber.cols(); ++c) {
                if (uniform(0, 3) == 0) continue;
                f.add(b, r, c, polynomial(dim, max_degree, 3));
            }
        }
    }
    return f;
}

std::vector<CorpusEntry> random_corpus(std::uint64_t seed, int count, const std::vector<int>& dims, int max_degree)
{
    FormRng rng(seed);
    std::vector<CorpusEntry> out;
    int cursor = 0;
    while (static_cast<int>(out.size()) < count) {
        const int dim = dims[cursor % dims.size()];
        for (int grade = 0; grade <= dim && static_cast<int>(out.size()) < count; ++grade) {
            Point center;
            Point half;
            for (int i = 0; i < dim; ++i) {
                center.push_back(make_rational(rng.uniform(-2, 2), 2));
                half.push_back(Rational(2));
            }
            const FiberSpec fiber{static_cast<int>(rng.uniform(1, 2)), false};
            out.push_back({rng.form(dim, grade, max_degree, fiber), StarDomain::box(center, half)});
        }
        ++cursor;
    }
    return out;
}

} // namespace covtomo
