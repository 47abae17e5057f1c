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
#include <covtomo/tomography.hpp>

#include <covtomo/errors.hpp>
#include <covtomo/form_system.hpp>
#include <covtomo/homotopy.hpp>
#include <covtomo/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace covtomo {

namespace {

FiberSpec endo_fiber(int m) { return FiberSpec{m, m > 1}; }

double coefficient_max(const Form& w)
{
    double out = 0.0;
    for (const auto& [k, p] : w.terms()) {
        for (const auto& [m, c] : p.terms()) out = std::max(out, std::abs(to_double(c)));
    }
    return out;
}

/// Difference of two forms whose grades may differ only through the zero-form
/// conventions at the grade edges.
Form difference(const Form& a, const Form& b)
{
    if (a.grade() == b.grade()) return a - b;
    if (a.is_zero()) return -b;
    if (b.is_zero()) return a;
    throw DimensionMismatch("forms of different grade");
}

std::vector<double> elementwise(const GridForm& a, const GridForm& b, double sb)
{
    if (a.values().size() != b.values().size()) throw DimensionMismatch("grid forms differ in layout");
    std::vector<double> out(a.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + sb * b.values()[i];
    return out;
}

/// Rational lattice of roughly count points inside the closed domain.
std::vector<Point> rational_lattice(const StarDomain& dom, int count)
{
    const int n = dom.dim;
    int per_axis = count;
    if (n > 1) per_axis = std::max(3, static_cast<int>(std::ceil(std::pow(static_cast<double>(count), 1.0 / n))) + 1);
    Point lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        if (dom.kind == BoundaryKind::Sphere) {
            lo[i] = dom.center[i] - dom.radius;
            hi[i] = dom.center[i] + dom.radius;
        } else {
            lo[i] = dom.lower[i];
            hi[i] = dom.upper[i];
        }
    }
    std::vector<Point> out;
    std::vector<int> idx(n, 0);
    while (true) {
        Point p(n);
        for (int i = 0; i < n; ++i) {
            p[i] = lo[i] + (hi[i] - lo[i]) * Rational(idx[i], per_axis - 1);
            p[i].canonicalize();
        }
        if (dom.contains(to_double(p))) out.push_back(p);
        int i = 0;
        while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
        if (i == n) break;
    }
    return out;
}

double lattice_sup(const Form& w, const StarDomain& dom)
{
    const int per_axis = dom.dim == 1 ? 65 : (dom.dim == 2 ? 33 : 13);
    return sup_norm_points(w, lattice_points(dom, per_axis));
}

ExtensionResult extend_for(const BoundaryData& alpha, const StarDomain& dom, ExtensionMode mode,
                           const ExtensionOptions& opts)
{
    return extend(alpha, dom, mode, opts);
}

Form require_exact_extension(const ExtensionResult& ext)
{
    if (!ext.exact) throw Error("this recovery needs an exact polynomial extension (harmonic or smooth radial data)");
    return *ext.exact;
}

} // namespace

std::string to_string(RecoveryMode m)
{
    switch (m) {
    case RecoveryMode::Current:
        return "current";
    case RecoveryMode::Connection:
        return "connection";
    case RecoveryMode::Joint:
        return "joint";
    }
    return "unknown";
}

RecoveryReport recover_current(const BoundaryData& alpha, const Connection& a, const StarDomain& dom,
                               ExtensionMode extension, const ExtensionOptions& opts, const SeriesConfig& cfg)
{
    RecoveryReport rep;
    rep.mode = RecoveryMode::Current;
    rep.extension = extend_for(alpha, dom, extension, opts);
    rep.current = extension_current(rep.extension, a);
    rep.connection = a;
    rep.gauge_note = "J = d^A Phi is a single form for fixed Phi; the representation (c, phi) is determined up to "
                     "gauge modes in E intersect ker(A^_), which leave J unchanged";
    DegreeCapScope cap(cfg.series_degree_cap);

    if (rep.extension.exact) {
        const Form& phi = *rep.extension.exact;
        const Form& j = *rep.current.exact;
        if (j.is_zero()) {
            rep.branch = "J=0";
            rep.c_data = apply_G(phi, a, dom);
        } else {
            const Decomposition dj = decompose(j, dom);
            if (dj.antiexact_part.is_zero()) {
                rep.branch = "exact";
                rep.c_data = apply_G(phi, a, dom) - homotopy_H(j, dom);
            } else {
                rep.branch = "general";
                const int deg = std::max(0, j.max_degree()) + cfg.algebraic_extra_degree;
                const WedgeSolve alg = solve_wedge_equation(a, dj.antiexact_part, deg);
                rep.residuals["algebraic"] = alg.info.residual_max;
                if (alg.info.consistent) {
                    const Form j_tilde = difference(dj.exact_part, exterior_d(alg.w));
                    rep.c_data = apply_G(phi - alg.w, a, dom) - homotopy_H(j_tilde, dom);
                } else {
                    rep.notes.push_back("antiexact part of J is not in Im(A^_) within the polynomial ansatz; "
                                        "the exact datum c is not formed");
                }
            }
        }
        rep.residuals["J_minus_dA_Phi"] = coefficient_max(difference(j, covariant_d(phi, a)));
        if (rep.c_data && phi.grade() == 0) {
            // Function case: c collapses to the value at the center.
            rep.residuals["c_minus_center_value"] = coefficient_max(*rep.c_data - pullback_center(phi, dom.center));
        }
        if (rep.c_data && phi.grade() >= 1 && phi.grade() < dom.dim) {
            std::optional<TransportSolution> sol;
            if (rep.branch == "J=0") sol = solve_homogeneous(*rep.c_data, a, dom, cfg);
            else if (rep.branch == "exact") sol = solve_exact_inhomogeneous(*rep.c_data, j, a, dom, cfg);
            else sol = solve_general(j, a, dom, cfg, std::nullopt, *rep.c_data);
            const auto pts = series_test_points(dom, sol->test_radius, cfg);
            rep.residuals["reconstruction"] = sup_norm_points(sol->phi - phi, pts);
            rep.residuals["series_tail"] = sol->tail_norm;
            rep.residuals["series_radius"] = sol->radius;
        }
        return rep;
    }

    if (rep.extension.grid && rep.current.grid) {
        rep.branch = "sampled";
        GridForm phi = *rep.extension.grid;
        GridForm hj = quadrature_H(*rep.current.grid);
        GridForm ha = quadrature_H(grid_wedge(a.form, phi));
        GridForm c = phi;
        c.values() = elementwise(phi, hj, -1.0);
        c.values() = elementwise(c, ha, 1.0);
        rep.c_grid = c;
        rep.residuals["J_max"] = max_abs(*rep.current.grid);
        rep.notes.push_back("grid extension: c = G Phi - H J by ray quadrature, valid when J is exact");
        return rep;
    }

    rep.branch = "distributional";
    rep.notes.push_back("distributional current; the exact datum is not formed for non-smooth extensions");
    return rep;
}

RecoveryReport recover_connection(const BoundaryData& alpha, const Form& j, const StarDomain& dom,
                                  ExtensionMode extension, int ansatz_degree, int sample_count,
                                  const ExtensionOptions& opts)
{
    if (ansatz_degree < 0) throw Error("ansatz degree must be >= 0");
    if (sample_count < 1) throw Error("sample count must be >= 1");
    RecoveryReport rep;
    rep.mode = RecoveryMode::Connection;
    rep.extension = extend_for(alpha, dom, extension, opts);
    const Form phi = require_exact_extension(rep.extension);
    const int n = dom.dim;
    const FiberSpec af = endo_fiber(phi.fiber().fiber_dim);
    const Form dphi = exterior_d(phi);
    const Form r = difference(j, dphi);
    rep.current.exact = j;

    std::ostringstream rel;
    rel << "A ^ (" << phi.to_string() << ") = " << r.to_string();
    rep.relation = rel.str();

    const UnknownSpace space(n, 1, af, ansatz_degree);
    if (phi.grade() == n) {
        // A ^ Phi vanishes identically on top forms.
        rep.branch = "top-form";
        rep.kernel_dimension = space.size();
        rep.polynomial_exact = r.is_zero();
        rep.residuals["feasibility"] = coefficient_max(r);
        if (!r.is_zero()) throw Infeasible("no connection reproduces J for this Phi: Phi is a top form and J != d Phi");
        rep.connection = Connection(Form(n, 1, af));
        rep.gauge_note = "Phi is a top form: every A is admissible, ker(Phi^_) is everything (ansatz dimension " +
                         std::to_string(space.size()) + ")";
        return rep;
    }
    if (j.grade() != phi.grade() + 1) throw DimensionMismatch("J must have one grade above Phi");

    DegreeCapScope cap(std::max(degree_cap(), ansatz_degree + std::max(0, phi.max_degree()) + 1));
    const auto op = [&](const Form& u) { return wedge(u, phi); };
    const FormSolve fs = solve_form_equation(space, op, r);
    rep.connection = Connection(fs.solution);
    rep.polynomial_exact = fs.info.consistent;
    rep.kernel_dimension = fs.info.nullity;
    rep.residuals["feasibility"] = fs.info.residual_max;
    rep.branch = fs.info.consistent ? "polynomial" : "relation";

    const Form aphi = wedge(fs.solution, phi);
    const Decomposition split = decompose(aphi, dom);
    const Decomposition dj = decompose(j, dom);
    rep.residuals["split_exact"] = coefficient_max(difference(split.exact_part, difference(dj.exact_part, dphi)));
    rep.residuals["split_antiexact"] = coefficient_max(difference(split.antiexact_part, dj.antiexact_part));
    rep.residuals["ansatz_lattice"] = lattice_sup(difference(aphi, r), dom);

    // Pointwise exact solve of A(p) ^ Phi(p) = R(p).
    const UnknownSpace local(n, 1, af, 0);
    int pointwise_kernel = -1;
    Rational worst = 0;
    for (const Point& p : rational_lattice(dom, sample_count)) {
        const Form phip = form_at(phi, p);
        const Form rp = form_at(r, p);
        const FormSolve ps = solve_form_equation(local, [&](const Form& u) { return wedge(u, phip); }, rp);
        if (!ps.info.consistent) {
            std::ostringstream msg;
            msg << "no connection reproduces J for this Phi: A(p) ^ Phi(p) = J(p) - dPhi(p) has no solution at p = (";
            for (std::size_t i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << to_string(p[i]);
            msg << ")";
            throw Infeasible(msg.str());
        }
        const Form defect = difference(wedge(ps.solution, phip), rp);
        for (const auto& [k, c] : defect.terms()) {
            for (const auto& [m, q] : c.terms()) worst = std::max<Rational>(worst, abs(q));
        }
        if (pointwise_kernel < 0) pointwise_kernel = ps.info.nullity;
        rep.sample_points.push_back(p);
        rep.sampled_connection.push_back(ps.solution);
    }
    rep.relation_residual_max = worst;
    rep.residuals["relation"] = to_double(worst);

    std::ostringstream note;
    note << "A is determined up to ker(Phi^_): pointwise kernel dimension " << std::max(0, pointwise_kernel)
         << ", ansatz kernel dimension " << fs.info.nullity;
    rep.gauge_note = note.str();
    if (!fs.info.consistent) {
        rep.notes.push_back("the exact connection is not polynomial of degree <= " + std::to_string(ansatz_degree) +
                            "; the least-squares ansatz is the best polynomial approximation and the relation holds "
                            "pointwise");
    }
    return rep;
}

void RegularizationWeights::validate() const
{
    if (!(a >= 0.0) || !(b >= 0.0) || !(gamma >= 0.0)) throw Error("regularization weights must be non-negative");
    if (!(a + b > 0.0)) throw Error("regularization weights need a + b > 0");
}

JointObjective::JointObjective(const Form& phi, const StarDomain& dom, const RegularizationWeights& w,
                               int ansatz_degree, int lattice_per_axis)
    : m_dim(dom.dim)
    , m_fiber(phi.fiber().fiber_dim)
    , m_w(w)
{
    w.validate();
    if (ansatz_degree < 0) throw Error("ansatz degree must be >= 0");
    const int per_axis = lattice_per_axis > 0 ? lattice_per_axis : (m_dim == 1 ? 17 : (m_dim == 2 ? 9 : 5));
    m_points = lattice_points(dom, per_axis);
    const UnknownSpace space(m_dim, 1, endo_fiber(m_fiber), ansatz_degree);
    for (int c = 0; c < space.size(); ++c) m_basis.push_back(space.basis_element(c));
    const Form dphi = exterior_d(phi);
    const std::size_t np = m_points.size();
    m_a.assign(np, {});
    m_da.assign(np, {});
    m_a_wedge_phi.assign(np, {});
    m_dphi.assign(np, {});
    const bool top = phi.grade() == m_dim;
    std::vector<Form> wedges, ds;
    for (const Form& b : m_basis) {
        ds.push_back(exterior_d(b));
        if (!top) wedges.push_back(wedge(b, phi));
    }
    parallel_for(np, [&](std::size_t p) {
        const auto& x = m_points[p];
        if (!top) m_dphi[p] = channel_values(dphi, x);
        for (std::size_t k = 0; k < m_basis.size(); ++k) {
            m_a[p].push_back(channel_values(m_basis[k], x));
            if (m_dim >= 2) m_da[p].push_back(channel_values(ds[k], x));
            if (!top) m_a_wedge_phi[p].push_back(channel_values(wedges[k], x));
        }
    });
}

void JointObjective::connection_at(std::size_t p, const std::vector<double>& theta, std::vector<double>& out) const
{
    out.assign(m_a[p].empty() ? 0 : m_a[p][0].size(), 0.0);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (theta[k] == 0.0) continue;
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += theta[k] * m_a[p][k][c];
    }
}

void JointObjective::curvature(std::size_t p, const std::vector<double>& theta, std::vector<double>& out) const
{
    out.clear();
    if (m_dim < 2) return;
    const int m = m_fiber;
    out.assign(m_da[p][0].size(), 0.0);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += theta[k] * m_da[p][k][c];
    }
    std::vector<double> a;
    connection_at(p, theta, a);
    const auto at = [&](int i, int r, int c) { return a[(i * m + r) * m + c]; };
    int pair = 0;
    for (int i = 0; i < m_dim; ++i) {
        for (int k = i + 1; k < m_dim; ++k, ++pair) {
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    double s = 0.0;
                    for (int q = 0; q < m; ++q) s += at(i, r, q) * at(k, q, c) - at(k, r, q) * at(i, q, c);
                    out[(pair * m + r) * m + c] += s;
                }
            }
        }
    }
}

void JointObjective::current(std::size_t p, const std::vector<double>& theta, std::vector<double>& out) const
{
    out = m_dphi[p];
    if (m_a_wedge_phi[p].empty()) return;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += theta[k] * m_a_wedge_phi[p][k][c];
    }
}

double JointObjective::operator()(const std::vector<double>& theta) const
{
    if (theta.size() != m_basis.size()) throw DimensionMismatch("coefficient vector has the wrong length");
    std::vector<double> per_point(m_points.size(), 0.0);
    parallel_for(m_points.size(), [&](std::size_t p) {
        std::vector<double> buf;
        double s = 0.0;
        if (m_w.a > 0.0) {
            connection_at(p, theta, buf);
            double q = 0.0;
            for (double v : buf) q += v * v;
            s += m_w.a * q;
        }
        if (m_w.b > 0.0) {
            curvature(p, theta, buf);
            double q = 0.0;
            for (double v : buf) q += v * v;
            s += m_w.b * q;
        }
        if (m_w.gamma > 0.0) {
            current(p, theta, buf);
            double q = 0.0;
            for (double v : buf) q += v * v;
            s += m_w.gamma * q;
        }
        per_point[p] = s;
    });
    return std::accumulate(per_point.begin(), per_point.end(), 0.0);
}

Form JointObjective::connection_form(const std::vector<double>& theta) const
{
    Form out(m_dim, 1, endo_fiber(m_fiber));
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (theta[k] != 0.0) out += from_double(theta[k]) * m_basis[k];
    }
    return out;
}

double JointObjective::lattice_norm_A(const std::vector<double>& theta) const
{
    double out = 0.0;
    std::vector<double> buf;
    for (std::size_t p = 0; p < m_points.size(); ++p) {
        connection_at(p, theta, buf);
        for (double v : buf) out = std::max(out, std::abs(v));
    }
    return out;
}

double JointObjective::lattice_norm_J(const std::vector<double>& theta) const
{
    double out = 0.0;
    std::vector<double> buf;
    for (std::size_t p = 0; p < m_points.size(); ++p) {
        current(p, theta, buf);
        for (double v : buf) out = std::max(out, std::abs(v));
    }
    return out;
}

std::vector<double> JointObjective::coordinates(const Form& a) const
{
    std::vector<double> out(m_basis.size(), 0.0);
    for (std::size_t k = 0; k < m_basis.size(); ++k) {
        const auto& [key, poly] = *m_basis[k].terms().begin();
        const Monomial mono = poly.terms().begin()->first;
        out[k] = to_double(a.coefficient(key.basis, key.row, key.col).coefficient(mono));
    }
    return out;
}

RecoveryReport recover_joint(const BoundaryData& alpha, const StarDomain& dom, const RegularizationWeights& w,
                             const JointOptions& opts)
{
    w.validate();
    if (opts.iterations < 0) throw Error("iteration count must be >= 0");
    RecoveryReport rep;
    rep.mode = RecoveryMode::Joint;
    rep.extension = extend_harmonic(alpha, dom);
    const Form phi = require_exact_extension(rep.extension);
    const JointObjective obj(phi, dom, w, opts.ansatz_degree, opts.lattice_per_axis);
    const std::size_t nv = static_cast<std::size_t>(obj.size());

    std::vector<double> theta(nv, 0.0);
    if (opts.initial) {
        if (opts.initial->size() != nv) throw DimensionMismatch("initial coefficients have the wrong length");
        theta = *opts.initial;
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> u(-opts.initial_scale, opts.initial_scale);
        for (double& t : theta) t = u(rng);
    }

    const auto gradient = [&](const std::vector<double>& x) {
        std::vector<double> g(nv);
        std::vector<double> y = x;
        for (std::size_t i = 0; i < nv; ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
            y[i] = x[i] + h;
            const double fp = obj(y);
            y[i] = x[i] - h;
            const double fm = obj(y);
            y[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        return g;
    };
    const auto dot = [](const std::vector<double>& p, const std::vector<double>& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * q[i];
        return s;
    };

    double f = obj(theta);
    rep.objective_history.push_back(f);
    std::vector<double> g = gradient(theta);
    double gnorm = std::sqrt(dot(g, g));
    double step = gnorm > 0.0 ? 1.0 / gnorm : 1.0;
    std::string stop = "iteration limit";
    int accepted = 0;
    for (int it = 0; it < opts.iterations; ++it) {
        if (gnorm <= opts.gradient_tol || f == 0.0) {
            stop = "converged";
            break;
        }
        std::vector<double> trial(nv);
        double ft = f;
        bool ok = false;
        for (int back = 0; back < 60; ++back) {
            for (std::size_t i = 0; i < nv; ++i) trial[i] = theta[i] - step * g[i];
            ft = obj(trial);
            if (ft <= f - 1e-4 * step * gnorm * gnorm && ft < f) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) {
            stop = "no further decrease";
            break;
        }
        std::vector<double> gn = gradient(trial);
        std::vector<double> s(nv), y(nv);
        for (std::size_t i = 0; i < nv; ++i) {
            s[i] = trial[i] - theta[i];
            y[i] = gn[i] - g[i];
        }
        const double sy = dot(s, y);
        step = sy > 0.0 ? dot(s, s) / sy : 2.0 * step;
        theta = trial;
        g = gn;
        gnorm = std::sqrt(dot(g, g));
        f = ft;
        rep.objective_history.push_back(f);
        ++accepted;
    }
    rep.iterations = accepted;
    for (std::size_t i = 1; i < rep.objective_history.size(); ++i) {
        if (rep.objective_history[i] > rep.objective_history[i - 1]) rep.monotone = false;
    }

    const Form aform = obj.connection_form(theta);
    rep.connection = Connection(aform);
    rep.current.exact = covariant_d(phi, *rep.connection);
    rep.branch = stop;
    rep.residuals["objective"] = f;
    rep.residuals["gradient_norm"] = gnorm;
    rep.residuals["lattice_A"] = obj.lattice_norm_A(theta);
    rep.residuals["lattice_J"] = obj.lattice_norm_J(theta);
    SupNormOptions sup;
    sup.per_axis = dom.dim == 1 ? 64 : (dom.dim == 2 ? 32 : 12);
    sup.max_refinements = 1;
    rep.residuals["sup_A"] = sup_norm(aform, dom, sup);
    if (dom.dim >= 2) {
        DegreeCapScope cap(std::max(degree_cap(), 2 * opts.ansatz_degree + 1));
        rep.residuals["sup_F"] = sup_norm(exterior_d(aform) + wedge(aform, aform), dom, sup);
    } else {
        rep.residuals["sup_F"] = 0.0;
    }
    rep.residuals["sup_J"] = sup_norm(*rep.current.exact, dom, sup);
    rep.gauge_note = "minimizer over the degree-" + std::to_string(opts.ansatz_degree) +
                     " polynomial ansatz (" + std::to_string(nv) +
                     " coefficients); no global optimality certificate";
    return rep;
}

} // namespace covtomo
