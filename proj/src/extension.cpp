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
#include <covtomo/extension.hpp>
#include <covtomo/form_system.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace covtomo {

namespace {

double det(std::vector<std::vector<double>> m)
{
    const int n = static_cast<int>(m.size());
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r) {
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        }
        if (m[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return d;
}

// Jacobian d(rho)_i / d x_j of the radial retraction.
std::vector<std::vector<double>> retraction_jacobian(const StarDomain& dom, const std::vector<double>& x)
{
    const int n = dom.dim;
    const auto c = dom.center_d();
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = x[i] - c[i];
    std::vector<std::vector<double>> jac(n, std::vector<double>(n, 0.0));
    if (dom.kind == BoundaryKind::Sphere) {
        double r2 = 0.0;
        for (double t : v) r2 += t * t;
        const double r = std::sqrt(r2);
        const double radius = to_double(dom.radius);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) jac[i][j] = radius / r * ((i == j ? 1.0 : 0.0) - v[i] * v[j] / r2);
        }
        return jac;
    }
    const auto lo = dom.bounding_lower();
    const auto hi = dom.bounding_upper();
    int face = -1;
    double best = std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (int a = 0; a < n; ++a) {
        if (v[a] == 0.0) continue;
        const double g = (v[a] > 0 ? hi[a] : lo[a]) - c[a];
        const double s = g / v[a];
        if (s < best) {
            best = s;
            face = a;
            gap = g;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            jac[i][j] = gap * ((i == j ? 1.0 : 0.0) / v[face] - (j == face ? v[i] / (v[face] * v[face]) : 0.0));
        }
    }
    return jac;
}

bool constant_channels(const GridForm& w)
{
    const GridGeometry& g = w.geometry();
    std::vector<double> first;
    for (int node = 0; node < g.node_count(); ++node) {
        if (!g.active[node]) continue;
        std::vector<double> v(w.channel_count());
        for (int ch = 0; ch < w.channel_count(); ++ch) v[ch] = w.at(node, ch);
        if (first.empty()) {
            first = v;
        } else {
            for (int ch = 0; ch < w.channel_count(); ++ch) {
                if (std::abs(v[ch] - first[ch]) > 1e-14 * (1.0 + std::abs(first[ch]))) return false;
            }
        }
    }
    return true;
}

} // namespace

BoundaryData BoundaryData::from_form(const Form& ambient)
{
    BoundaryData b;
    b.dim = ambient.dim();
    b.grade = ambient.grade();
    b.fiber = ambient.fiber();
    b.polynomial = ambient;
    return b;
}

BoundaryData BoundaryData::from_endpoints(const Form& lower, const Form& upper)
{
    if (lower.dim() != 1 || upper.dim() != 1) throw DimensionMismatch("endpoint data are one-dimensional");
    if (lower.grade() != upper.grade() || !(lower.fiber() == upper.fiber())) {
        throw DimensionMismatch("endpoint values differ in grade or fiber");
    }
    BoundaryData b;
    b.dim = 1;
    b.grade = lower.grade();
    b.fiber = lower.fiber();
    b.lower_value = lower;
    b.upper_value = upper;
    return b;
}

BoundaryData BoundaryData::from_function(int dim, int grade, FiberSpec fiber, ChannelFunction f)
{
    BoundaryData b;
    b.dim = dim;
    b.grade = grade;
    b.fiber = fiber;
    b.function = std::move(f);
    return b;
}

std::vector<double> BoundaryData::eval(const std::vector<double>& x) const
{
    if (polynomial) return channel_values(*polynomial, x);
    if (lower_value) throw Error("endpoint data are resolved against a domain; use exact_value");
    if (!function) throw Error("boundary data carry no values");
    return function(x);
}

Form BoundaryData::exact_value(const Point& p, const StarDomain& dom) const
{
    if (polynomial) return form_at(*polynomial, p);
    if (lower_value) {
        if (dom.dim != 1) throw DimensionMismatch("endpoint data on a multi-dimensional domain");
        if (p[0] == dom.lower[0]) return form_at(*lower_value, p);
        if (p[0] == dom.upper[0]) return form_at(*upper_value, p);
        throw Error("endpoint data evaluated away from the endpoints");
    }
    throw Error("boundary data are not exact");
}

std::string to_string(Regularity r)
{
    switch (r) {
    case Regularity::C0AwayFromCenter:
        return "C0-away-from-center";
    case Regularity::Smooth:
        return "smooth";
    case Regularity::Distributional:
        return "distributional";
    }
    return "unknown";
}

ExtensionMode parse_extension_mode(const std::string& s)
{
    if (s == "radial") return ExtensionMode::Radial;
    if (s == "heat") return ExtensionMode::Heat;
    if (s == "harmonic") return ExtensionMode::Harmonic;
    throw Error("unknown extension mode '" + s + "' (expected radial, heat or harmonic)");
}

std::string to_string(ExtensionMode m)
{
    switch (m) {
    case ExtensionMode::Radial:
        return "radial";
    case ExtensionMode::Heat:
        return "heat";
    case ExtensionMode::Harmonic:
        return "harmonic";
    }
    return "unknown";
}

namespace {

// Evaluator that resolves 1D endpoint data against the domain.
ChannelFunction evaluator(const BoundaryData& alpha, const StarDomain& dom)
{
    if (alpha.dim != dom.dim) throw DimensionMismatch("boundary data and domain dimension differ");
    if (alpha.endpoints()) {
        const auto lo = channel_values(*alpha.lower_value, {to_double(dom.lower[0])});
        const auto hi = channel_values(*alpha.upper_value, {to_double(dom.upper[0])});
        const double mid = to_double(dom.center[0]);
        return [lo, hi, mid](const std::vector<double>& x) { return x[0] < mid ? lo : hi; };
    }
    return [&alpha](const std::vector<double>& x) { return alpha.eval(x); };
}

} // namespace

std::vector<double> radial_retraction(const StarDomain& dom, const std::vector<double>& x)
{
    const int n = dom.dim;
    const auto c = dom.center_d();
    std::vector<double> v(n);
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = x[i] - c[i];
        r2 += v[i] * v[i];
    }
    if (r2 == 0.0) throw Error("the radial retraction is undefined at the center");
    double s;
    if (dom.kind == BoundaryKind::Sphere) {
        s = to_double(dom.radius) / std::sqrt(r2);
    } else {
        const auto lo = dom.bounding_lower();
        const auto hi = dom.bounding_upper();
        s = std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a) {
            if (v[a] == 0.0) continue;
            s = std::min(s, ((v[a] > 0 ? hi[a] : lo[a]) - c[a]) / v[a]);
        }
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = c[i] + s * v[i];
    return out;
}

std::vector<double> radial_value(const BoundaryData& alpha, const StarDomain& dom, const std::vector<double>& x)
{
    const ChannelFunction f = evaluator(alpha, dom);
    const std::vector<double> rho = radial_retraction(dom, x);
    const std::vector<double> a = f(rho);
    if (alpha.grade == 0) return a;
    const int n = dom.dim;
    const auto jac = retraction_jacobian(dom, x);
    const auto in_channels = form_channels(n, alpha.grade, alpha.fiber);
    std::vector<double> out(in_channels.size(), 0.0);
    std::map<TermKey, int> index;
    for (std::size_t i = 0; i < in_channels.size(); ++i) index[in_channels[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < in_channels.size(); ++i) {
        if (a[i] == 0.0) continue;
        const auto rows = basis_indices(in_channels[i].basis);
        for (BasisMask target : basis_of_grade(n, alpha.grade)) {
            const auto cols = basis_indices(target);
            std::vector<std::vector<double>> minor(rows.size(), std::vector<double>(cols.size()));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                for (std::size_t c = 0; c < cols.size(); ++c) minor[r][c] = jac[rows[r]][cols[c]];
            }
            out[index.at({target, in_channels[i].row, in_channels[i].col})] += a[i] * det(minor);
        }
    }
    return out;
}

ExtensionResult extend_radial(const BoundaryData& alpha, const StarDomain& dom)
{
    ExtensionResult res;
    res.mode = ExtensionMode::Radial;
    res.regularity = Regularity::C0AwayFromCenter;
    res.grade = alpha.grade;
    res.fiber = alpha.fiber;
    if (dom.dim == 1 && alpha.exact()) {
        const Form lo = alpha.exact_value({dom.lower[0]}, dom);
        const Form hi = alpha.exact_value({dom.upper[0]}, dom);
        DistributionForm dist{alpha.grade, alpha.fiber, {}};
        const auto channels = form_channels(1, alpha.grade, alpha.fiber);
        bool jump = false;
        for (const TermKey& k : channels) {
            if (alpha.grade == 1) {
                // The retraction is locally constant, so pulled-back 1-forms vanish.
                dist.channels.push_back(Distribution1D(dom.lower[0], dom.upper[0]));
                continue;
            }
            const Rational l = lo.coefficient(k.basis, k.row, k.col).eval({dom.lower[0]});
            const Rational h = hi.coefficient(k.basis, k.row, k.col).eval({dom.upper[0]});
            jump = jump || l != h;
            dist.channels.push_back(Distribution1D::step(dom.lower[0], dom.upper[0], dom.center[0], l, h));
        }
        if (!jump) res.exact = alpha.grade == 1 ? Form(1, 1, alpha.fiber) : lo;
        res.distribution = std::move(dist);
        return res;
    }
    const GridGeometryPtr geom = make_geometry(dom);
    GridForm grid(geom, alpha.grade, alpha.fiber);
    const auto c = dom.center_d();
    for (int node = 0; node < geom->node_count(); ++node) {
        if (!geom->active[node]) continue;
        std::vector<double> x = geom->coords[node];
        if (x == c) {
            // Undefined at the center: use the ray along the first axis.
            x[0] += 0.5 * dom.max_extent();
        }
        const auto v = radial_value(alpha, dom, x);
        for (int ch = 0; ch < grid.channel_count(); ++ch) grid.at(node, ch) = v[ch];
    }
    res.center_singularity = alpha.grade > 0 || !constant_channels(grid);
    res.grid = std::move(grid);
    return res;
}

ExtensionResult extend_heat(const BoundaryData& alpha, const StarDomain& dom, double T, int steps)
{
    ExtensionResult res;
    res.mode = ExtensionMode::Heat;
    res.regularity = Regularity::Smooth;
    res.grade = alpha.grade;
    res.fiber = alpha.fiber;
    const GridGeometryPtr geom = make_geometry(dom);
    res.grid = solve_heat(boundary_values(geom, alpha.grade, alpha.fiber, evaluator(alpha, dom)), T, steps);
    return res;
}

Polynomial coordinate_laplacian(const Polynomial& p)
{
    Polynomial out(p.dim());
    for (int i = 0; i < p.dim(); ++i) out += p.derivative(i).derivative(i);
    return out;
}

Polynomial harmonic_on_sphere(const Polynomial& p, const Point& center, const Rational& radius)
{
    const int n = p.dim();
    const Polynomial lap = coordinate_laplacian(p);
    if (lap.is_zero()) return p;
    Polynomial s = Polynomial::constant(n, -radius * radius);
    for (int i = 0; i < n; ++i) {
        const Polynomial v = Polynomial::variable(n, i) - Polynomial::constant(n, center[i]);
        s += v * v;
    }
    const UnknownSpace space(n, 0, {}, std::max(p.degree() - 2, 0));
    const FormSolve q = solve_form_equation(
        space, [&](const Form& u) { return Form::function(coordinate_laplacian(s * u.coefficient(0))); },
        Form::function(-lap));
    if (!q.info.consistent) throw SolverFailure("harmonic polynomial extension failed (internal)");
    return p + s * q.solution.coefficient(0);
}

ExtensionResult extend_harmonic(const BoundaryData& alpha, const StarDomain& dom, double tol, bool prefer_exact)
{
    ExtensionResult res;
    res.mode = ExtensionMode::Harmonic;
    res.regularity = Regularity::Smooth;
    res.grade = alpha.grade;
    res.fiber = alpha.fiber;
    if (prefer_exact && dom.dim == 1 && alpha.exact()) {
        const Form lo = alpha.exact_value({dom.lower[0]}, dom);
        const Form hi = alpha.exact_value({dom.upper[0]}, dom);
        const Rational width = dom.upper[0] - dom.lower[0];
        Polynomial s = Polynomial::variable(1, 0) - Polynomial::constant(1, dom.lower[0]);
        s *= Rational(1) / width;
        res.exact = lo + s * (hi - lo);
        return res;
    }
    if (prefer_exact && dom.kind == BoundaryKind::Sphere && alpha.polynomial) {
        Form out(dom.dim, alpha.grade, alpha.fiber);
        for (const auto& [k, p] : alpha.polynomial->terms()) {
            out.add(k.basis, k.row, k.col, harmonic_on_sphere(p, dom.center, dom.radius));
        }
        res.exact = std::move(out);
        return res;
    }
    const GridGeometryPtr geom = make_geometry(dom);
    res.grid = solve_harmonic(boundary_values(geom, alpha.grade, alpha.fiber, evaluator(alpha, dom)), tol);
    return res;
}

ExtensionResult extend(const BoundaryData& alpha, const StarDomain& dom, ExtensionMode mode, const ExtensionOptions& opts)
{
    switch (mode) {
    case ExtensionMode::Radial:
        return extend_radial(alpha, dom);
    case ExtensionMode::Heat:
        return extend_heat(alpha, dom, opts.T, opts.steps);
    case ExtensionMode::Harmonic:
        return extend_harmonic(alpha, dom, opts.tol, opts.prefer_exact);
    }
    throw Error("unknown extension mode");
}

CurrentResult extension_current(const ExtensionResult& phi, const Connection& a)
{
    CurrentResult out;
    out.center_singularity = phi.center_singularity;
    if (phi.exact) {
        out.exact = covariant_d(*phi.exact, a);
        return out;
    }
    if (phi.distribution) {
        const DistributionForm& d = *phi.distribution;
        if (a.dim() != 1) throw DimensionMismatch("distributional currents are one-dimensional");
        const Distribution1D& ref = d.channels.front();
        DistributionForm j{std::min(d.grade + 1, 1), d.fiber, {}};
        const auto in_ch = form_channels(1, d.grade, d.fiber);
        const auto out_ch = form_channels(1, j.grade, d.fiber);
        for (const TermKey& ko : out_ch) {
            Distribution1D acc(ref.lower(), ref.upper());
            if (d.grade == 0) {
                for (std::size_t i = 0; i < in_ch.size(); ++i) {
                    const TermKey& ki = in_ch[i];
                    if (ki.row == ko.row && ki.col == ko.col) acc = acc + d.channels[i].derivative();
                    // (A ^ Phi)_{r,c} = sum_m A_{r,m} Phi_{m,c} dx
                    Polynomial coeff(1);
                    if (a.form.fiber().scalar()) {
                        if (ki.row == ko.row && ki.col == ko.col) coeff = a.form.coefficient(1u, 0, 0);
                    } else if (ki.col == ko.col) {
                        coeff = a.form.coefficient(1u, ko.row, ki.row);
                    }
                    if (!coeff.is_zero()) acc = acc + d.channels[i].times(coeff);
                }
            }
            j.channels.push_back(std::move(acc));
        }
        out.distribution = std::move(j);
        return out;
    }
    if (phi.grid) {
        GridForm j = discrete_d(*phi.grid);
        const GridForm aw = grid_wedge(a.form, *phi.grid);
        if (aw.channel_count() != j.channel_count()) throw DimensionMismatch("connection and extension fibers differ");
        for (std::size_t i = 0; i < j.values().size(); ++i) j.values()[i] += aw.values()[i];
        out.grid = std::move(j);
        return out;
    }
    throw Error("empty extension result");
}

} // namespace covtomo
