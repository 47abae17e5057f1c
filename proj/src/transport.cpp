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
#include <covtomo/form_system.hpp>
#include <covtomo/homotopy.hpp>
#include <covtomo/transport.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace covtomo {

namespace {

// On a star-shaped domain dH w = w holds exactly when dw = 0 (grade >= 1).
void require_exact(const Form& w, const char* what)
{
    if (w.grade() == 0) throw NotExact(std::string(what) + " has grade 0 and cannot be exact");
    if (!exterior_d(w).is_zero()) throw NotExact(std::string(what) + " is not exact (dH w != w)");
}

struct SeriesOutcome {
    Form phi;
    std::vector<double> norms;
    int terms = 0;
    double tail = 0.0;
};

struct TestRegion {
    double radius = 0.0;
    double test_radius = 0.0;
    std::vector<std::vector<double>> points;
};

TestRegion test_region(const Connection& a, int grade, const StarDomain& dom, const SeriesConfig& cfg)
{
    TestRegion region;
    region.radius = convergence_radius(a, grade, dom);
    double r = cfg.test_radius ? *cfg.test_radius : cfg.eval_region_radius_fraction * region.radius;
    if (!std::isfinite(r)) r = dom.max_extent();
    region.test_radius = std::min(r, dom.max_extent());
    region.points = series_test_points(dom, region.test_radius, cfg);
    return region;
}

SeriesOutcome run_series(const Form& c0, const Connection& a, const StarDomain& dom, const SeriesConfig& cfg,
                         const TestRegion& region)
{
    if (cfg.max_terms < 1) throw Error("series configuration needs max_terms >= 1");
    if (!(cfg.tail_tol > 0.0)) throw Error("series configuration needs tail_tol > 0");
    DegreeCapScope cap(std::max(degree_cap(), cfg.series_degree_cap));
    SeriesOutcome out{c0, {}, 1, 0.0};
    Form term = c0;
    out.norms.push_back(sup_norm_points(term, region.points));
    out.tail = out.norms.back();
    if (term.is_zero() || out.tail <= cfg.tail_tol) return out;
    for (int l = 1; l < cfg.max_terms; ++l) {
        term = -homotopy_H(wedge(a.form, term), dom.center);
        out.phi += term;
        out.terms = l + 1;
        out.tail = sup_norm_points(term, region.points);
        out.norms.push_back(out.tail);
        if (term.is_zero() || out.tail <= cfg.tail_tol) return out;
    }
    std::ostringstream msg;
    msg << "Neumann series did not decay below " << cfg.tail_tol << " within " << cfg.max_terms
        << " terms (last term norm " << out.tail << ", convergence radius " << region.radius << ", test radius "
        << region.test_radius << ")";
    throw Divergence(msg.str());
}

double residual_on(const Form& phi, const Connection& a, const Form& j, const TestRegion& region)
{
    DegreeCapScope cap(std::max(degree_cap(), 4 * (phi.max_degree() + a.form.max_degree() + 2)));
    Form res = covariant_d(phi, a);
    if (!j.is_zero() || res.grade() == j.grade()) res -= j;
    return sup_norm_points(res, region.points);
}

void enforce_residual(TransportSolution& sol, const Form& j, const Connection& a, const TestRegion& region)
{
    sol.residual_max = residual_on(sol.phi, a, j, region);
    const double scale = std::max(1.0, sup_norm_points(j, region.points));
    if (sol.residual_max > 10.0 * sol.tail_norm + 1e-11 * scale) {
        std::ostringstream msg;
        msg << "series residual " << sol.residual_max << " exceeds 10 x tail norm " << sol.tail_norm
            << " (the connection is not flat on these data or the right-hand side is incompatible)";
        throw SolverFailure(msg.str());
    }
}

void fill(TransportSolution& sol, const SeriesOutcome& s, const TestRegion& region)
{
    sol.phi = s.phi;
    sol.term_norms = s.norms;
    sol.terms_used = s.terms;
    sol.tail_norm = s.tail;
    sol.radius = region.radius;
    sol.test_radius = region.test_radius;
}

} // namespace

std::vector<std::vector<double>> series_test_points(const StarDomain& dom, double radius, const SeriesConfig& cfg)
{
    int per_axis = cfg.lattice_per_axis;
    if (per_axis <= 0) per_axis = dom.dim == 1 ? 33 : dom.dim == 2 ? 25 : 13;
    return lattice_points(dom, per_axis, radius);
}

Form apply_G(const Form& phi, const Connection& a, const StarDomain& dom)
{
    return phi + homotopy_H(wedge(a.form, phi), dom.center);
}

TransportSolution solve_homogeneous(const Form& c, const Connection& a, const StarDomain& dom, const SeriesConfig& cfg)
{
    if (c.grade() == 0) throw Error("the Neumann series needs grade k > 0");
    if (!c.is_zero()) require_exact(c, "homogeneous datum c");
    const TestRegion region = test_region(a, c.grade(), dom, cfg);
    TransportSolution sol(c);
    if (wedge(a.form, c).is_zero()) {
        SeriesOutcome s{c, {sup_norm_points(c, region.points)}, 1, 0.0};
        fill(sol, s, region);
        sol.tail_norm = 0.0;
        sol.branch = a.form.is_zero() ? "zero-connection" : "gauge-mode";
    } else {
        fill(sol, run_series(c, a, dom, cfg, region), region);
        sol.branch = "series";
    }
    enforce_residual(sol, Form(c.dim(), std::min(c.grade() + 1, c.dim()), c.fiber()), a, region);
    return sol;
}

TransportSolution solve_exact_inhomogeneous(const Form& c, const Form& j_exact, const Connection& a,
                                            const StarDomain& dom, const SeriesConfig& cfg)
{
    if (c.grade() == 0) throw Error("the Neumann series needs grade k > 0");
    if (j_exact.grade() != c.grade() + 1) throw DimensionMismatch("current grade must be one above the unknown");
    if (!c.is_zero()) require_exact(c, "homogeneous datum c");
    if (!j_exact.is_zero()) require_exact(j_exact, "current J_e");
    const Form hj = homotopy_H(j_exact, dom.center);
    const TestRegion region = test_region(a, c.grade(), dom, cfg);
    TransportSolution sol(c);
    if (!hj.is_zero() && wedge(a.form, hj).is_zero()) {
        // H J_e is covariantly inert: phi = phi_H + H J_e.
        TransportSolution hom = solve_homogeneous(c, a, dom, cfg);
        sol = hom;
        sol.phi = hom.phi + hj;
        sol.branch = "homogeneous+HJ";
    } else {
        fill(sol, run_series(c + hj, a, dom, cfg, region), region);
        sol.branch = j_exact.is_zero() ? "series" : "series(c+HJ)";
    }
    enforce_residual(sol, j_exact, a, region);
    return sol;
}

WedgeSolve solve_wedge_equation(const Connection& a, const Form& target, int max_degree)
{
    const int k = target.grade() - 1;
    if (k < 0) throw DimensionMismatch("A ^ w = target needs target grade >= 1");
    FiberSpec fiber = target.fiber();
    if (!(a.form.fiber().scalar()) && fiber.endo) throw Error("unsupported fiber in the wedge equation");
    const UnknownSpace space(target.dim(), k, fiber, std::max(max_degree, 0));
    DegreeCapScope cap(std::max(degree_cap(), max_degree + a.form.max_degree() + 1));
    FormSolve s = solve_form_equation(space, [&](const Form& u) { return wedge(a.form, u); }, target);
    return WedgeSolve{s.solution, std::move(s.info)};
}

Form project_to_kernel(const Connection& a, const Form& w)
{
    if (w.is_zero()) return w;
    if (w.grade() == w.dim()) return w;
    const Form image = wedge(a.form, w);
    if (image.is_zero()) return w;
    const WedgeSolve z = solve_wedge_equation(a, image, w.max_degree());
    return w - z.w;
}

TransportSolution solve_general(const Form& j, const Connection& a, const StarDomain& dom, const SeriesConfig& cfg,
                                const std::optional<Form>& phi3_choice, const std::optional<Form>& c)
{
    const int k = j.grade() - 1;
    if (k < 1) throw Error("the Neumann series needs grade k > 0");
    const Form c0 = c ? *c : Form(j.dim(), k, j.fiber());
    if (c0.grade() != k) throw DimensionMismatch("datum c must have the grade of the unknown");

    const Decomposition split = decompose(j, dom);
    const Form& j_e = split.exact_part;
    const Form& j_a = split.antiexact_part;

    Form phi2(j.dim(), k, j.fiber());
    int rank = 0, nullity = 0;
    double algebraic_residual = 0.0;
    if (!j_a.is_zero()) {
        const WedgeSolve ws = solve_wedge_equation(a, j_a, j_a.max_degree() + cfg.algebraic_extra_degree);
        rank = ws.info.rank;
        nullity = ws.info.nullity;
        algebraic_residual = ws.info.residual_max;
        if (!ws.info.consistent) {
            std::ostringstream msg;
            msg << "infeasible algebraic step: J_a is not in Im(A^_) (least-squares residual "
                << ws.info.residual_max << ")";
            throw Infeasible(msg.str());
        }
        phi2 = ws.w;
    }
    const Form phi3 = phi3_choice ? project_to_kernel(a, *phi3_choice) : Form(j.dim(), k, j.fiber());
    Form j_tilde = j_e - exterior_d(phi2 + phi3);

    TransportSolution first = solve_exact_inhomogeneous(c0, j_tilde, a, dom, cfg);
    TransportSolution sol = first;
    sol.phi = first.phi + phi2 + phi3;
    sol.parts = TransportParts{first.phi, phi2, phi3};
    sol.branch = j_a.is_zero() ? first.branch : "split:" + first.branch;
    sol.algebraic_rank = rank;
    sol.algebraic_nullity = nullity;
    sol.algebraic_residual = algebraic_residual;
    const TestRegion region = test_region(a, k, dom, cfg);
    enforce_residual(sol, j, a, region);
    return sol;
}

bool ZeroDivisorReport::all_pass() const
{
    return std::all_of(entries.begin(), entries.end(), [](const ZeroDivisorEntry& e) { return e.pass; });
}

ZeroDivisorReport check_no_zero_divisors(const std::vector<Form>& c_list, const Connection& a, const StarDomain& dom,
                                         const SeriesConfig& cfg, double tol)
{
    ZeroDivisorReport report;
    for (std::size_t i = 0; i < c_list.size(); ++i) {
        ZeroDivisorEntry e;
        e.id = static_cast<int>(i);
        const Form& c = c_list[i];
        if (!c.is_zero()) {
            const TransportSolution sol = solve_homogeneous(c, a, dom, cfg);
            const auto pts = series_test_points(dom, sol.test_radius, cfg);
            DegreeCapScope cap(std::max(degree_cap(), cfg.series_degree_cap));
            const Form g = apply_G(sol.phi, a, dom);
            e.norm_c = sup_norm_points(c, pts);
            e.norm_G_phi = sup_norm_points(g, pts);
            e.defect = sup_norm_points(g - c, pts);
            e.pass = e.norm_c > 0.0 && e.defect <= tol && std::abs(e.norm_G_phi - e.norm_c) <= tol;
        }
        report.entries.push_back(e);
    }
    return report;
}

} // namespace covtomo
