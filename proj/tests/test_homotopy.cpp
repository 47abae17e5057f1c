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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_main.hpp"

#include <covtomo/corpus.hpp>
#include <covtomo/homotopy.hpp>

using namespace covtomo;
using testing::F;
using testing::P;
using testing::Q;

namespace {

const StarDomain unit_half = StarDomain::interval(0, 1, Q(1, 2));

std::vector<Form> corpus_for_dim(std::uint64_t seed, int dim, int count)
{
    FormRng rng(seed);
    std::vector<Form> out;
    for (int i = 0; i < count; ++i) out.push_back(rng.form(dim, i % (dim + 1), 4, FiberSpec{1 + i % 2, false}));
    return out;
}

StarDomain centered(int dim, const Point& c)
{
    Point half(dim, Rational(3));
    return StarDomain::box(c, half);
}

} // namespace

TEST_CASE("homotopy_H examples")
{
    CHECK(homotopy_H(F(1, "dx"), Point{Q(0)}) == F(1, "x"));
    CHECK(homotopy_H(F(1, "dx"), unit_half) == F(1, "x - 1/2"));
    CHECK(homotopy_H(F(2, "x dy - y dx"), Point{Q(0), Q(0)}).is_zero());
    CHECK(homotopy_H(F(2, "x^2 + y"), Point{Q(0), Q(0)}) == Form(2, 0));
    // the t-weight convention: d H w = w on a closed 1-form
    const Form closed = exterior_d(F(2, "x^3*y - y^2"));
    CHECK(exterior_d(homotopy_H(closed, Point{Q(1, 3), Q(-2)})) == closed);
}

TEST_CASE("decompose examples")
{
    const Decomposition a = decompose(F(1, "dx"), unit_half);
    CHECK(a.exact_part == F(1, "dx"));
    CHECK(a.antiexact_part.is_zero());
    CHECK(a.center_value.is_zero());

    const StarDomain origin2 = centered(2, {Q(0), Q(0)});
    const Form w = F(2, "x dy - y dx");
    const Decomposition b = decompose(w, origin2);
    CHECK(b.exact_part.is_zero());
    CHECK(b.antiexact_part == w);
    CHECK(is_antiexact(w, origin2.center));
    CHECK_FALSE(is_exact(w));

    const Decomposition c = decompose(F(3, "5"), centered(3, {Q(1), Q(0), Q(2)}));
    CHECK(c.exact_part.is_zero());
    CHECK(c.antiexact_part.is_zero());
    CHECK(c.center_value == F(3, "5"));
}

TEST_CASE("decomposition reconstructs and is idempotent")
{
    for (int dim = 1; dim <= 3; ++dim) {
        const StarDomain dom = centered(dim, Point(dim, Q(1, 2)));
        for (const Form& w : corpus_for_dim(100 + dim, dim, 20)) {
            const Decomposition parts = decompose(w, dom);
            CHECK(parts.exact_part + parts.antiexact_part + parts.center_value == w);
            CHECK(homotopy_H(parts.antiexact_part, dom).is_zero());
            if (w.grade() >= 1) {
                CHECK(is_antiexact(parts.antiexact_part, dom.center));
                const Decomposition again = decompose(parts.exact_part, dom);
                CHECK(again.exact_part == parts.exact_part);
                CHECK(again.antiexact_part.is_zero());
            }
        }
    }
}

TEST_CASE("verify_identities on a random corpus of 200 forms")
{
    int total = 0;
    for (int dim = 1; dim <= 3; ++dim) {
        const int count = dim == 1 ? 50 : 75;
        FormRng rng(dim);
        Point c;
        for (int i = 0; i < dim; ++i) c.push_back(rng.small_rational());
        const IdentityReport report = verify_identities(corpus_for_dim(dim * 13, dim, count), centered(dim, c));
        CHECK(report.checks.size() == static_cast<std::size_t>(6 * count));
        CHECK(report.all_pass());
        total += count;
    }
    CHECK(total == 200);
}

TEST_CASE("verify_identities trivial inputs")
{
    const IdentityReport zero = verify_identities({Form(2, 1)}, centered(2, {Q(0), Q(0)}));
    CHECK(zero.all_pass());
    const Form top = F(2, "dx^dy");
    const StarDomain dom = centered(2, {Q(0), Q(0)});
    CHECK(homotopy_H(homotopy_H(top, dom), dom).is_zero());
    CHECK(exterior_d(homotopy_H(top, dom)) == top);
}

TEST_CASE("a wrong t-weight is reported with a witness")
{
    HomotopyOperator wrong = [](const Form& w, const Point& x0) {
        if (w.grade() == 0) return Form(w.dim(), 0, w.fiber());
        Form integrated(w.dim(), w.grade(), w.fiber());
        for (const auto& [key, p] : w.terms())
            integrated.add(key.basis, key.row, key.col, poly_integrate_t(poly_substitute_ray(p, x0), w.grade()));
        return insert_radial(integrated, x0);
    };
    const IdentityReport report = verify_identities({F(1, "dx")}, unit_half, wrong);
    CHECK_FALSE(report.all_pass());
    const auto failures = report.failures();
    REQUIRE_FALSE(failures.empty());
    CHECK(failures.front().identity == "dH+Hd=I-s*");
    REQUIRE(failures.front().witness_point.has_value());
}
