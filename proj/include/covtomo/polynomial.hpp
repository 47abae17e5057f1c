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

#include <covtomo/errors.hpp>
#include <covtomo/rational.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace covtomo {

inline constexpr int kMaxDim = 8;
inline constexpr int kDefaultDegreeCap = 16;

/// Exponent multi-index. Unused trailing slots stay zero.
struct Monomial {
    std::array<std::uint8_t, kMaxDim> exp{};

    int degree() const
    {
        int d = 0;
        for (auto e : exp) d += e;
        return d;
    }
    auto operator<=>(const Monomial&) const = default;
};

/// Current degree cap for polynomial products on this thread.
int degree_cap();

/// RAII override of the thread-local degree cap.
class DegreeCapScope
{
public:
    explicit DegreeCapScope(int cap);
    ~DegreeCapScope();
    DegreeCapScope(const DegreeCapScope&) = delete;
    DegreeCapScope& operator=(const DegreeCapScope&) = delete;

private:
    int m_previous;
};

/// Sparse multivariate polynomial with rational coefficients. No zero
/// coefficient is ever stored.
class Polynomial
{
public:
    using TermMap = std::map<Monomial, Rational>;

    explicit Polynomial(int dim = 1);

    static Polynomial constant(int dim, const Rational& c);
    static Polynomial variable(int dim, int index);
    static Polynomial monomial(int dim, const Monomial& m, const Rational& c);

    int dim() const { return m_dim; }
    bool is_zero() const { return m_terms.empty(); }
    /// -1 for the zero polynomial.
    int degree() const;
    const TermMap& terms() const { return m_terms; }
    Rational coefficient(const Monomial& m) const;
    bool is_constant() const;

    /// Accumulates c * m; drops the entry if it cancels.
    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);

    Polynomial derivative(int index) const;
    /// Multiplies by x_index.
    Polynomial times_variable(int index) const;

    Rational eval(const Point& point) const;
    double eval(std::span<const double> point) const;

    /// Human-readable form, e.g. "x^2*y-1/2". Variables are x,y,z for dim <= 3
    /// and x1..xn otherwise.
    std::string to_string() const;

    bool operator==(const Polynomial& other) const = default;

private:
    void check_dim(const Polynomial& other) const;

    int m_dim;
    TermMap m_terms;
};

Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_sub(const Polynomial& a, const Polynomial& b);
/// Exact product; throws DegreeCapExceeded when the result exceeds max_degree.
Polynomial poly_mul(const Polynomial& a, const Polynomial& b, int max_degree);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Rational poly_eval(const Polynomial& p, const Point& point);

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Rational& c, const Polynomial& a);

/// q(t, x) = sum_m t^m q_m(x).
struct RayPolynomial {
    int dim = 1;
    std::map<int, Polynomial> by_t_power;
};

/// p(x0 + t (x - x0)) expanded in powers of t.
RayPolynomial poly_substitute_ray(const Polynomial& p, const Point& x0);

/// Integral over t in [0,1] of q(t,x) t^weight_power.
Polynomial poly_integrate_t(const RayPolynomial& q, int weight_power);

std::string variable_name(int dim, int index);

/// All exponent multi-indices of total degree <= max_degree in dim variables,
/// ordered by degree then lexicographically.
std::vector<Monomial> monomials_up_to(int dim, int max_degree);

} // namespace covtomo
