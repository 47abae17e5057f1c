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

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace covtomo {

/// Arbitrary-precision rational, always kept in canonical form (gcd = 1, den > 0).
using Rational = mpq_class;
using Point = std::vector<Rational>;

inline Rational make_rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "-p/q" style decimal strings.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact conversion of a finite double to a rational.
Rational from_double(double v);

std::vector<double> to_double(const Point& p);

} // namespace covtomo
