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
#include <covtomo/form.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace covtomo {

int grade_of(BasisMask mask) { return std::popcount(mask); }

std::vector<int> basis_indices(BasisMask mask)
{
    std::vector<int> out;
    for (int i = 0; mask != 0; ++i, mask >>= 1) {
        if (mask & 1u) out.push_back(i);
    }
    return out;
}

std::pair<BasisMask, int> normalize_basis(const std::vector<int>& indices)
{
    BasisMask mask = 0;
    int inversions = 0;
    for (std::size_t a = 0; a < indices.size(); ++a) {
        if (mask & (1u << indices[a])) return {0, 0};
        mask |= 1u << indices[a];
        for (std::size_t b = a + 1; b < indices.size(); ++b) {
            if (indices[a] > indices[b]) ++inversions;
        }
    }
    return {mask, inversions % 2 == 0 ? 1 : -1};
}

std::vector<BasisMask> basis_of_grade(int dim, int grade)
{
    std::vector<BasisMask> out;
    for (BasisMask m = 0; m < (1u << dim); ++m) {
        if (grade_of(m) == grade) out.push_back(m);
    }
    std::sort(out.begin(), out.end(),
              [](BasisMask a, BasisMask b) { return basis_indices(a) < basis_indices(b); });
    return out;
}

std::vector<TermKey> form_channels(int dim, int grade, const FiberSpec& fiber)
{
    std::vector<TermKey> out;
    for (BasisMask b : basis_of_grade(dim, grade)) {
        for (int r = 0; r < fiber.rows(); ++r) {
            for (int c = 0; c < fiber.cols(); ++c) out.push_back({b, r, c});
        }
    }
    return out;
}

std::string basis_name(int dim, BasisMask mask)
{
    if (mask == 0) return "1";
    std::string s;
    for (int i : basis_indices(mask)) {
        if (!s.empty()) s += "^";
        s += "d" + variable_name(dim, i);
    }
    return s;
}

namespace {

/// Sign of dx^I ^ dx^J for disjoint I, J (sorted merge).
int merge_sign(BasisMask a, BasisMask b)
{
    int swaps = 0;
    for (int j : basis_indices(b)) swaps += std::popcount(a >> (j + 1));
    return swaps % 2 == 0 ? 1 : -1;
}

} // namespace

Form::Form(int dim, int grade, FiberSpec fiber)
    : m_dim(dim)
    , m_grade(grade)
    , m_fiber(fiber)
{
    if (dim < 1 || dim > kMaxDim - 1) throw DimensionMismatch("form dimension out of range");
    if (grade < 0 || grade > dim) throw DimensionMismatch("form grade must lie in [0, dim]");
    if (fiber.fiber_dim < 1) throw Error("fiber dimension must be positive");
}

Form Form::function(const Polynomial& p)
{
    Form f(p.dim(), 0);
    f.add(0, p);
    return f;
}

Form Form::one_form(int dim, int index) { return basis_form(dim, {index}); }

Form Form::volume(int dim)
{
    std::vector<int> idx(dim);
    for (int i = 0; i < dim; ++i) idx[i] = i;
    return basis_form(dim, idx);
}

Form Form::basis_form(int dim, const std::vector<int>& indices, const Rational& c)
{
    Form f(dim, static_cast<int>(indices.size()));
    auto [mask, sign] = normalize_basis(indices);
    if (sign != 0) f.add(mask, Polynomial::constant(dim, c * sign));
    return f;
}

int Form::max_degree() const
{
    int d = -1;
    for (const auto& [k, p] : m_terms) d = std::max(d, p.degree());
    return d;
}

Polynomial Form::coefficient(BasisMask basis, int row, int col) const
{
    auto it = m_terms.find(TermKey{basis, row, col});
    return it == m_terms.end() ? Polynomial(m_dim) : it->second;
}

void Form::add(BasisMask basis, int row, int col, const Polynomial& p)
{
    if (grade_of(basis) != m_grade) throw DimensionMismatch("basis grade does not match form grade");
    if (basis >= (1u << m_dim)) throw DimensionMismatch("basis index beyond form dimension");
    if (row < 0 || row >= m_fiber.rows() || col < 0 || col >= m_fiber.cols()) {
        throw DimensionMismatch("fiber index out of range");
    }
    if (p.dim() != m_dim) throw DimensionMismatch("coefficient dimension mismatch");
    if (p.is_zero()) return;
    TermKey key{basis, row, col};
    auto [it, inserted] = m_terms.try_emplace(key, p);
    if (!inserted) {
        it->second += p;
        if (it->second.is_zero()) m_terms.erase(it);
    }
}

void Form::check_compatible(const Form& other) const
{
    if (m_dim != other.m_dim || m_grade != other.m_grade || !(m_fiber == other.m_fiber)) {
        throw DimensionMismatch("forms differ in dimension, grade or fiber");
    }
}

Form& Form::operator+=(const Form& other)
{
    check_compatible(other);
    for (const auto& [k, p] : other.m_terms) add(k.basis, k.row, k.col, p);
    return *this;
}

Form& Form::operator-=(const Form& other)
{
    check_compatible(other);
    for (const auto& [k, p] : other.m_terms) add(k.basis, k.row, k.col, -p);
    return *this;
}

Form& Form::operator*=(const Rational& c)
{
    if (sgn(c) == 0) {
        m_terms.clear();
        return *this;
    }
    for (auto& [k, p] : m_terms) p *= c;
    return *this;
}

Form Form::embedded(FiberSpec fiber, int row, int col) const
{
    if (!m_fiber.scalar()) throw Error("embedded: source form must be scalar valued");
    Form out(m_dim, m_grade, fiber);
    for (const auto& [k, p] : m_terms) out.add(k.basis, row, col, p);
    return out;
}

std::string Form::to_string() const
{
    if (m_terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, p] : m_terms) {
        if (!first) os << " + ";
        first = false;
        if (!m_fiber.scalar()) {
            os << "[" << k.row;
            if (m_fiber.endo) os << "," << k.col;
            os << "]:";
        }
        if (m_grade == 0) {
            os << p.to_string();
            continue;
        }
        const std::string b = basis_name(m_dim, k.basis);
        if (p == Polynomial::constant(m_dim, 1)) {
            os << b;
        } else if (p == Polynomial::constant(m_dim, -1)) {
            os << "-" << b;
        } else {
            os << "(" << p.to_string() << ")" << b;
        }
    }
    return os.str();
}

Form operator+(const Form& a, const Form& b)
{
    Form out = a;
    out += b;
    return out;
}

Form operator-(const Form& a, const Form& b)
{
    Form out = a;
    out -= b;
    return out;
}

Form operator-(const Form& a)
{
    Form out = a;
    out *= Rational(-1);
    return out;
}

Form operator*(const Rational& c, const Form& a)
{
    Form out = a;
    out *= c;
    return out;
}

Form operator*(const Polynomial& f, const Form& a)
{
    Form out(a.dim(), a.grade(), a.fiber());
    for (const auto& [k, p] : a.terms()) out.add(k.basis, k.row, k.col, poly_mul(f, p));
    return out;
}

Connection::Connection(Form f, std::optional<std::vector<Polynomial>> x)
    : form(std::move(f))
    , dual_vector(std::move(x))
{
    if (form.grade() != 1) throw DimensionMismatch("connection must be a one-form");
    if (!form.fiber().scalar() && !form.fiber().endo) {
        throw DimensionMismatch("connection values must lie in End(V)");
    }
    if (dual_vector && static_cast<int>(dual_vector->size()) != form.dim()) {
        throw DimensionMismatch("dual vector field length mismatch");
    }
}

Connection Connection::scalar(const Form& one_form) { return Connection(one_form); }

Connection Connection::zero(int dim, int fiber_dim)
{
    return Connection(Form(dim, 1, FiberSpec{fiber_dim, fiber_dim > 1}));
}

Form wedge(const Form& a, const Form& b)
{
    if (a.dim() != b.dim()) throw DimensionMismatch("wedge: dimension mismatch");
    const int n = a.dim();
    const FiberSpec& fa = a.fiber();
    const FiberSpec& fb = b.fiber();
    FiberSpec out_fiber;
    enum class Mode { LeftScalar, RightScalar, Matrix } mode;
    if (fa.scalar()) {
        out_fiber = fb;
        mode = Mode::LeftScalar;
    } else if (fb.scalar()) {
        out_fiber = fa;
        mode = Mode::RightScalar;
    } else if (fa.cols() == fb.rows()) {
        out_fiber = FiberSpec{fa.rows(), fb.endo};
        mode = Mode::Matrix;
    } else {
        throw DimensionMismatch("wedge: incompatible fibers");
    }
    const int grade = a.grade() + b.grade();
    // Above top degree the product vanishes; report it as the zero top form.
    if (grade > n) return Form(n, n, out_fiber);
    Form out(n, grade, out_fiber);
    for (const auto& [ka, pa] : a.terms()) {
        for (const auto& [kb, pb] : b.terms()) {
            if (ka.basis & kb.basis) continue;
            int row = 0, col = 0;
            switch (mode) {
            case Mode::LeftScalar:
                row = kb.row;
                col = kb.col;
                break;
            case Mode::RightScalar:
                row = ka.row;
                col = ka.col;
                break;
            case Mode::Matrix:
                if (ka.col != kb.row) continue;
                row = ka.row;
                col = kb.col;
                break;
            }
            Polynomial prod = poly_mul(pa, pb);
            if (merge_sign(ka.basis, kb.basis) < 0) prod *= Rational(-1);
            out.add(ka.basis | kb.basis, row, col, prod);
        }
    }
    return out;
}

Form exterior_d(const Form& w)
{
    const int n = w.dim();
    if (w.grade() == n) return Form(n, n, w.fiber());
    Form out(n, w.grade() + 1, w.fiber());
    for (const auto& [k, p] : w.terms()) {
        for (int j = 0; j < n; ++j) {
            if (k.basis & (1u << j)) continue;
            Polynomial dp = p.derivative(j);
            if (dp.is_zero()) continue;
            // dx^j ^ dx^I: sign from the indices of I below j.
            const int below = std::popcount(k.basis & ((1u << j) - 1u));
            if (below % 2) dp *= Rational(-1);
            out.add(k.basis | (1u << j), k.row, k.col, dp);
        }
    }
    return out;
}

Form insert_vector(const Form& w, const std::vector<Polynomial>& field)
{
    const int n = w.dim();
    if (static_cast<int>(field.size()) != n) throw DimensionMismatch("vector field length mismatch");
    if (w.grade() == 0) throw DimensionMismatch("insertion into a grade-0 form");
    Form out(n, w.grade() - 1, w.fiber());
    for (const auto& [k, p] : w.terms()) {
        int position = 0;
        for (int i : basis_indices(k.basis)) {
            if (!field[i].is_zero()) {
                Polynomial c = poly_mul(field[i], p);
                if (position % 2) c *= Rational(-1);
                out.add(k.basis & ~(1u << i), k.row, k.col, c);
            }
            ++position;
        }
    }
    return out;
}

Form insert_radial(const Form& w, const Point& x0)
{
    const int n = w.dim();
    if (static_cast<int>(x0.size()) != n) throw DimensionMismatch("center length mismatch");
    std::vector<Polynomial> k;
    for (int i = 0; i < n; ++i) {
        Polynomial ki = Polynomial::variable(n, i);
        ki -= Polynomial::constant(n, x0[i]);
        k.push_back(ki);
    }
    return insert_vector(w, k);
}

Form pullback_center(const Form& w, const Point& x0)
{
    Form out(w.dim(), w.grade(), w.fiber());
    if (w.grade() != 0) return out;
    for (const auto& [k, p] : w.terms()) out.add(k.basis, k.row, k.col, Polynomial::constant(w.dim(), p.eval(x0)));
    return out;
}

Form covariant_d(const Form& w, const Connection& a) { return exterior_d(w) + wedge(a.form, w); }

std::vector<double> eval_channels(const Form& w, const std::vector<double>& x)
{
    std::vector<double> out;
    for (const auto& [k, p] : w.terms()) out.push_back(p.eval(std::span<const double>(x)));
    return out;
}

CompiledForm::CompiledForm(const Form& w)
    : m_dim(w.dim())
{
    for (const auto& [k, p] : w.terms()) {
        m_keys.push_back(k);
        std::vector<Term> terms;
        for (const auto& [m, c] : p.terms()) {
            terms.push_back({m, c.get_d()});
            for (int i = 0; i < m_dim; ++i) m_max_exp = std::max<int>(m_max_exp, m.exp[i]);
        }
        m_channels.push_back(std::move(terms));
    }
}

std::vector<double> CompiledForm::eval(const std::vector<double>& x) const
{
    // Power table per variable.
    std::vector<double> pw(static_cast<std::size_t>(m_dim) * (m_max_exp + 1));
    for (int i = 0; i < m_dim; ++i) {
        double v = 1.0;
        for (int e = 0; e <= m_max_exp; ++e) {
            pw[i * (m_max_exp + 1) + e] = v;
            v *= x[i];
        }
    }
    std::vector<double> out;
    out.reserve(m_channels.size());
    for (const auto& ch : m_channels) {
        double s = 0.0;
        for (const auto& t : ch) {
            double v = t.c;
            for (int i = 0; i < m_dim; ++i) v *= pw[i * (m_max_exp + 1) + t.m.exp[i]];
            s += v;
        }
        out.push_back(s);
    }
    return out;
}

double CompiledForm::max_abs(const std::vector<double>& x) const
{
    double m = 0.0;
    for (double v : eval(x)) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm_points(const Form& w, const std::vector<std::vector<double>>& points)
{
    if (w.is_zero()) return 0.0;
    CompiledForm cf(w);
    double m = 0.0;
    for (const auto& x : points) m = std::max(m, cf.max_abs(x));
    return m;
}

double sup_norm(const Form& w, const StarDomain& region, const SupNormOptions& opts)
{
    if (w.is_zero()) return 0.0;
    int per_axis = opts.per_axis;
    double estimate = sup_norm_points(w, lattice_points(region, per_axis));
    for (int r = 0; r < opts.max_refinements; ++r) {
        per_axis = 2 * per_axis - 1;
        if (r > 0 && std::pow(per_axis, region.dim) > 4.0e6) break;
        const double refined = std::max(estimate, sup_norm_points(w, lattice_points(region, per_axis)));
        const bool settled = refined - estimate <= opts.rel_tol * std::max(refined, 1e-300);
        estimate = refined;
        if (settled) break;
    }
    return estimate;
}

double sup_norm_ball(const Form& w, const StarDomain& dom, double radius, int per_axis)
{
    return sup_norm_points(w, lattice_points(dom, per_axis, radius));
}

double convergence_radius(const Connection& a, int grade, const StarDomain& region, const SupNormOptions& opts)
{
    if (grade <= 0) throw Error("the Neumann series needs grade k > 0");
    const double norm = sup_norm(a.form, region, opts);
    if (norm == 0.0) return std::numeric_limits<double>::infinity();
    return grade / norm;
}

Form form_at(const Form& w, const Point& p)
{
    Form out(w.dim(), w.grade(), w.fiber());
    for (const auto& [k, poly] : w.terms()) out.add(k.basis, k.row, k.col, Polynomial::constant(w.dim(), poly.eval(p)));
    return out;
}

std::vector<double> channel_values(const Form& w, const std::vector<double>& x)
{
    const auto channels = form_channels(w.dim(), w.grade(), w.fiber());
    std::vector<double> out(channels.size(), 0.0);
    for (const auto& [k, p] : w.terms()) {
        const auto it = std::find(channels.begin(), channels.end(), k);
        out[it - channels.begin()] = p.eval(std::span<const double>(x));
    }
    return out;
}

} // namespace covtomo
