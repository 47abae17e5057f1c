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
#include <covtomo/polynomial.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace covtomo {

/// Values in V (column vectors, fiber_dim x 1) or End(V) (fiber_dim x fiber_dim).
struct FiberSpec {
    int fiber_dim = 1;
    bool endo = false;

    int rows() const { return fiber_dim; }
    int cols() const { return endo ? fiber_dim : 1; }
    bool scalar() const { return fiber_dim == 1; }
    bool operator==(const FiberSpec&) const = default;
};

/// Sorted set of basis one-form indices, bit i <-> dx^{i}.
using BasisMask = std::uint32_t;

struct TermKey {
    BasisMask basis = 0;
    int row = 0;
    int col = 0;
    auto operator<=>(const TermKey&) const = default;
};

int grade_of(BasisMask mask);
std::vector<int> basis_indices(BasisMask mask);
/// Sorting sign of an index list and its mask; sign 0 when an index repeats.
std::pair<BasisMask, int> normalize_basis(const std::vector<int>& indices);
/// All masks of a grade, ordered lexicographically by their index lists.
std::vector<BasisMask> basis_of_grade(int dim, int grade);
/// "dx^dy", or "1" for grade 0.
std::string basis_name(int dim, BasisMask mask);
/// Every coefficient channel of a grade: bases in basis_of_grade order, then
/// fiber row, then fiber column.
std::vector<TermKey> form_channels(int dim, int grade, const FiberSpec& fiber);

/// Graded, fiber-valued differential form with exact polynomial coefficients.
class Form
{
public:
    using TermMap = std::map<TermKey, Polynomial>;

    Form(int dim, int grade, FiberSpec fiber = {});

    static Form function(const Polynomial& p);
    /// dx^{index} with unit coefficient.
    static Form one_form(int dim, int index);
    static Form volume(int dim);
    /// Constant-coefficient form c dx^I.
    static Form basis_form(int dim, const std::vector<int>& indices, const Rational& c = 1);

    int dim() const { return m_dim; }
    int grade() const { return m_grade; }
    const FiberSpec& fiber() const { return m_fiber; }
    const TermMap& terms() const { return m_terms; }
    bool is_zero() const { return m_terms.empty(); }
    int max_degree() const;

    Polynomial coefficient(BasisMask basis, int row = 0, int col = 0) const;
    /// Accumulates p onto one coefficient channel; cancelling entries are dropped.
    void add(BasisMask basis, int row, int col, const Polynomial& p);
    void add(BasisMask basis, const Polynomial& p) { add(basis, 0, 0, p); }

    Form& operator+=(const Form& other);
    Form& operator-=(const Form& other);
    Form& operator*=(const Rational& c);
    bool operator==(const Form& other) const = default;

    /// Re-labels a scalar form as having the given fiber, placing it in one entry.
    Form embedded(FiberSpec fiber, int row, int col) const;

    std::string to_string() const;

private:
    void check_compatible(const Form& other) const;

    int m_dim;
    int m_grade;
    FiberSpec m_fiber;
    TermMap m_terms;
};

Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator-(const Form& a);
Form operator*(const Rational& c, const Form& a);
/// Product of a scalar function with a form.
Form operator*(const Polynomial& f, const Form& a);

/// End(V)-valued one-form, optionally carrying the vector field X used on
/// the contravariant side.
struct Connection {
    Form form;
    std::optional<std::vector<Polynomial>> dual_vector;

    explicit Connection(Form f, std::optional<std::vector<Polynomial>> x = std::nullopt);
    /// Scalar connection f dx^i combos given as a scalar one-form.
    static Connection scalar(const Form& one_form);
    static Connection zero(int dim, int fiber_dim = 1);
    int dim() const { return form.dim(); }
    int fiber_dim() const { return form.fiber().fiber_dim; }
};

Form wedge(const Form& a, const Form& b);
Form exterior_d(const Form& w);
/// Insertion of K = (x - x0)^i d_i.
Form insert_radial(const Form& w, const Point& x0);
/// Insertion of a polynomial vector field.
Form insert_vector(const Form& w, const std::vector<Polynomial>& field);
/// s*_{x0}: the value at x0 for grade 0, zero otherwise.
Form pullback_center(const Form& w, const Point& x0);
/// Covariant derivative dw + A ^ w.
Form covariant_d(const Form& w, const Connection& a);

/// Coefficient evaluation of every channel at a point (channel order of terms()).
std::vector<double> eval_channels(const Form& w, const std::vector<double>& x);

/// Constant-coefficient form with the coefficients of w evaluated at p.
Form form_at(const Form& w, const Point& p);
/// Every channel of w at x, in form_channels order (absent channels are 0).
std::vector<double> channel_values(const Form& w, const std::vector<double>& x);

/// Double-precision evaluator for fast sampling.
class CompiledForm
{
public:
    explicit CompiledForm(const Form& w);
    /// max over channels of |coefficient| at x.
    double max_abs(const std::vector<double>& x) const;
    std::vector<double> eval(const std::vector<double>& x) const;
    const std::vector<TermKey>& keys() const { return m_keys; }

private:
    struct Term {
        Monomial m;
        double c;
    };
    int m_dim;
    int m_max_exp = 0;
    std::vector<TermKey> m_keys;
    std::vector<std::vector<Term>> m_channels;
};

struct SupNormOptions {
    int per_axis = 64;
    int max_refinements = 3;
    double rel_tol = 0.01;
};

/// Max-coefficient supremum over the closed region, estimated by nested
/// lattices (each refinement keeps the previous points).
double sup_norm(const Form& w, const StarDomain& region, const SupNormOptions& opts = {});
/// Supremum over the lattice points of dom inside the ball B(center, radius).
double sup_norm_ball(const Form& w, const StarDomain& dom, double radius, int per_axis);
/// Max over a fixed point set.
double sup_norm_points(const Form& w, const std::vector<std::vector<double>>& points);

/// Radius k / ||A||; +infinity when A = 0. Rejects k = 0.
double convergence_radius(const Connection& a, int grade, const StarDomain& region,
                          const SupNormOptions& opts = {});

} // namespace covtomo
