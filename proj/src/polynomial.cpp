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
#include <covtomo/polynomial.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace covtomo {

namespace {

thread_local int t_degree_cap = kDefaultDegreeCap;

void check_dim_arg(int dim)
{
    if (dim < 1 || dim > kMaxDim) {
        throw DimensionMismatch("polynomial dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
}

Monomial add_exponents(const Monomial& a, const Monomial& b)
{
    Monomial m;
    for (int i = 0; i < kMaxDim; ++i) m.exp[i] = static_cast<std::uint8_t>(a.exp[i] + b.exp[i]);
    return m;
}

} // namespace

int degree_cap() { return t_degree_cap; }

DegreeCapScope::DegreeCapScope(int cap)
    : m_previous(t_degree_cap)
{
    t_degree_cap = cap;
}

DegreeCapScope::~DegreeCapScope() { t_degree_cap = m_previous; }

Polynomial::Polynomial(int dim)
    : m_dim(dim)
{
    check_dim_arg(dim);
}

Polynomial Polynomial::constant(int dim, const Rational& c)
{
    Polynomial p(dim);
    p.add_term(Monomial{}, c);
    return p;
}

Polynomial Polynomial::variable(int dim, int index)
{
    if (index < 0 || index >= dim) throw DimensionMismatch("variable index out of range");
    Monomial m;
    m.exp[index] = 1;
    return monomial(dim, m, Rational(1));
}

Polynomial Polynomial::monomial(int dim, const Monomial& m, const Rational& c)
{
    Polynomial p(dim);
    for (int i = dim; i < kMaxDim; ++i) {
        if (m.exp[i] != 0) throw DimensionMismatch("monomial uses a variable beyond dim");
    }
    p.add_term(m, c);
    return p;
}

int Polynomial::degree() const
{
    int d = -1;
    for (const auto& [m, c] : m_terms) d = std::max(d, m.degree());
    return d;
}

Rational Polynomial::coefficient(const Monomial& m) const
{
    auto it = m_terms.find(m);
    return it == m_terms.end() ? Rational(0) : it->second;
}

bool Polynomial::is_constant() const
{
    return m_terms.empty() || (m_terms.size() == 1 && m_terms.begin()->first.degree() == 0);
}

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (sgn(c) == 0) return;
    auto [it, inserted] = m_terms.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) m_terms.erase(it);
    }
}

void Polynomial::check_dim(const Polynomial& other) const
{
    if (m_dim != other.m_dim) {
        throw DimensionMismatch("polynomial dimension mismatch: " + std::to_string(m_dim) + " vs " +
                                std::to_string(other.m_dim));
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    check_dim(other);
    for (const auto& [m, c] : other.m_terms) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
    check_dim(other);
    for (const auto& [m, c] : other.m_terms) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c)
{
    if (sgn(c) == 0) {
        m_terms.clear();
        return *this;
    }
    for (auto& [m, v] : m_terms) v *= c;
    return *this;
}

Polynomial Polynomial::derivative(int index) const
{
    if (index < 0 || index >= m_dim) throw DimensionMismatch("derivative index out of range");
    Polynomial out(m_dim);
    for (const auto& [m, c] : m_terms) {
        if (m.exp[index] == 0) continue;
        Monomial d = m;
        d.exp[index] -= 1;
        out.add_term(d, c * m.exp[index]);
    }
    return out;
}

Polynomial Polynomial::times_variable(int index) const
{
    if (index < 0 || index >= m_dim) throw DimensionMismatch("variable index out of range");
    Polynomial out(m_dim);
    for (const auto& [m, c] : m_terms) {
        Monomial d = m;
        d.exp[index] += 1;
        out.m_terms.emplace(d, c);
    }
    return out;
}

Rational Polynomial::eval(const Point& point) const
{
    if (static_cast<int>(point.size()) != m_dim) throw DimensionMismatch("evaluation point length mismatch");
    Rational sum(0);
    for (const auto& [m, c] : m_terms) {
        Rational term = c;
        for (int i = 0; i < m_dim; ++i) {
            for (int e = 0; e < m.exp[i]; ++e) term *= point[i];
        }
        sum += term;
    }
    return sum;
}

double Polynomial::eval(std::span<const double> point) const
{
    if (static_cast<int>(point.size()) != m_dim) throw DimensionMismatch("evaluation point length mismatch");
    double sum = 0.0;
    for (const auto& [m, c] : m_terms) {
        double term = c.get_d();
        for (int i = 0; i < m_dim; ++i) {
            for (int e = 0; e < m.exp[i]; ++e) term *= point[i];
        }
        sum += term;
    }
    return sum;
}

std::string variable_name(int dim, int index)
{
    if (dim <= 3) {
        static const char* names[] = {"x", "y", "z"};
        return names[index];
    }
    return "x" + std::to_string(index + 1);
}

std::string Polynomial::to_string() const
{
    if (m_terms.empty()) return "0";
    std::vector<std::pair<Monomial, Rational>> ordered(m_terms.begin(), m_terms.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() > b.first.degree();
        return a.first > b.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : ordered) {
        Rational mag = abs(c);
        if (sgn(c) < 0) {
            os << "-";
        } else if (!first) {
            os << "+";
        }
        first = false;
        std::string vars;
        for (int i = 0; i < m_dim; ++i) {
            if (m.exp[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += variable_name(m_dim, i);
            if (m.exp[i] > 1) vars += "^" + std::to_string(m.exp[i]);
        }
        if (vars.empty()) {
            os << covtomo::to_string(mag);
        } else if (mag == 1) {
            os << vars;
        } else {
            os << covtomo::to_string(mag) << "*" << vars;
        }
    }
    return os.str();
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b)
{
    Polynomial out = a;
    out += b;
    return out;
}

Polynomial poly_sub(const Polynomial& a, const Polynomial& b)
{
    Polynomial out = a;
    out -= b;
    return out;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b, int max_degree)
{
    if (a.dim() != b.dim()) throw DimensionMismatch("polynomial dimension mismatch in product");
    Polynomial out(a.dim());
    if (a.is_zero() || b.is_zero()) return out;
    const int deg = a.degree() + b.degree();
    if (deg > max_degree) {
        throw DegreeCapExceeded("polynomial product degree " + std::to_string(deg) + " exceeds cap " +
                                std::to_string(max_degree));
    }
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) out.add_term(add_exponents(ma, mb), ca * cb);
    }
    return out;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) { return poly_mul(a, b, degree_cap()); }

Rational poly_eval(const Polynomial& p, const Point& point) { return p.eval(point); }

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return poly_add(a, b); }
Polynomial operator-(const Polynomial& a, const Polynomial& b) { return poly_sub(a, b); }
Polynomial operator-(const Polynomial& a)
{
    Polynomial out = a;
    out *= Rational(-1);
    return out;
}
Polynomial operator*(const Polynomial& a, const Polynomial& b) { return poly_mul(a, b); }
Polynomial operator*(const Rational& c, const Polynomial& a)
{
    Polynomial out = a;
    out *= c;
    return out;
}

RayPolynomial poly_substitute_ray(const Polynomial& p, const Point& x0)
{
    const int n = p.dim();
    if (static_cast<int>(x0.size()) != n) throw DimensionMismatch("ray center length mismatch");
    if (n + 1 > kMaxDim) throw DimensionMismatch("ray substitution needs dim + 1 <= kMaxDim");
    const int ext = n + 1;
    const int t_index = n;

    // factor_i = x0_i + t x_i - t x0_i in (x, t)
    std::vector<Polynomial> factors;
    factors.reserve(n);
    for (int i = 0; i < n; ++i) {
        Polynomial f(ext);
        f.add_term(Monomial{}, x0[i]);
        Monomial tx;
        tx.exp[i] = 1;
        tx.exp[t_index] = 1;
        f.add_term(tx, Rational(1));
        Monomial t;
        t.exp[t_index] = 1;
        f.add_term(t, -x0[i]);
        factors.push_back(std::move(f));
    }

    // Cache powers per variable.
    std::vector<std::vector<Polynomial>> powers(n);
    Polynomial combined(ext);
    for (const auto& [m, c] : p.terms()) {
        Polynomial term = Polynomial::constant(ext, c);
        for (int i = 0; i < n; ++i) {
            const int e = m.exp[i];
            if (e == 0) continue;
            auto& cache = powers[i];
            if (cache.empty()) cache.push_back(Polynomial::constant(ext, Rational(1)));
            while (static_cast<int>(cache.size()) <= e) {
                cache.push_back(poly_mul(cache.back(), factors[i], 2 * kMaxDim * 255));
            }
            term = poly_mul(term, cache[e], 2 * kMaxDim * 255);
        }
        combined += term;
    }

    RayPolynomial out;
    out.dim = n;
    for (const auto& [m, c] : combined.terms()) {
        Monomial xm = m;
        const int tp = xm.exp[t_index];
        xm.exp[t_index] = 0;
        auto it = out.by_t_power.try_emplace(tp, Polynomial(n)).first;
        it->second.add_term(xm, c);
    }
    for (auto it = out.by_t_power.begin(); it != out.by_t_power.end();) {
        it = it->second.is_zero() ? out.by_t_power.erase(it) : std::next(it);
    }
    return out;
}

Polynomial poly_integrate_t(const RayPolynomial& q, int weight_power)
{
    if (weight_power < 0) throw Error("poly_integrate_t: negative weight power");
    Polynomial out(q.dim);
    for (const auto& [tp, coeff] : q.by_t_power) {
        Polynomial scaled = coeff;
        scaled *= Rational(1, tp + weight_power + 1);
        out += scaled;
    }
    return out;
}

std::vector<Monomial> monomials_up_to(int dim, int max_degree)
{
    std::vector<Monomial> out;
    if (max_degree < 0) return out;
    Monomial m;
    // odometer over exponents bounded by max_degree
    std::function<void(int, int)> rec = [&](int var, int remaining) {
        if (var == dim) {
            out.push_back(m);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            m.exp[var] = static_cast<std::uint8_t>(e);
            rec(var + 1, remaining - e);
        }
        m.exp[var] = 0;
    };
    rec(0, max_degree);
    std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a > b;
    });
    return out;
}

} // namespace covtomo
