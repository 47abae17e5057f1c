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
#include <covtomo/rational.hpp>

#include <cmath>
#include <stdexcept>

namespace covtomo {

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) {
        throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    }
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational from_double(double v)
{
    if (!std::isfinite(v)) throw std::invalid_argument("from_double: non-finite value");
    Rational q(v);
    q.canonicalize();
    return q;
}

std::vector<double> to_double(const Point& p)
{
    std::vector<double> out;
    out.reserve(p.size());
    for (const auto& c : p) out.push_back(c.get_d());
    return out;
}

} // namespace covtomo
