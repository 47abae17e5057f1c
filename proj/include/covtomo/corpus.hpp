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
#pragma once

#include <covtomo/domain.hpp>
#include <covtomo/form.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace covtomo {

/// Portable seeded generator: mt19937_64 with explicit range reduction so the
/// generated corpus is identical across standard libraries.
class FormRng
{
public:
    explicit FormRng(std::uint64_t seed)
        : m_engine(seed)
    {
    }

    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi);
    Rational small_rational();
    Polynomial polynomial(int dim, int max_degree, int max_terms);
    Form form(int dim, int grade, int max_degree, FiberSpec fiber = {});

private:
    std::mt19937_64 m_engine;
};

struct CorpusEntry {
    Form form;
    StarDomain domain;
};

/// count forms cycling through dims and all grades, each paired with a
/// domain whose center is a random small rational point.
std::vector<CorpusEntry> random_corpus(std::uint64_t seed, int count, const std::vector<int>& dims,
                                       int max_degree = 4);

} // namespace covtomo
