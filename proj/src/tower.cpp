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
#include <covtomo/tower.hpp>

#include <covtomo/errors.hpp>
#include <covtomo/form_system.hpp>
#include <covtomo/homotopy.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace covtomo {

namespace {

double coefficient_max(const Form& w)
{
    double out = 0.0;
    for (const auto& [k, p] : w.terms()) {
        for (const auto& [m, c] : p.terms()) out = std::max(out, std::abs(to_double(c)));
    }
    return out;
}

Form difference(const Form& a, const Form& b)
{
    if (a.grade() == b.grade()) return a - b;
    if (a.is_zero()) return -b;
    if (b.is_zero()) return a;
    throw DimensionMismatch("forms of different grade");
}

int sign_between(const Form& lhs, const Form& rhs)
{
    if (lhs == rhs) return 1;
    if (lhs == -rhs) return -1;
    return 0;
}

/// Generic probe form of a grade: every basis element with a distinct monomial.
Form probe(int dim, int grade)
{
    Form out(dim, grade);
    int j = 0;
    for (BasisMask m : basis_of_grade(dim, grade)) {
        Polynomial p(dim);
        Monomial mono;
        mono.exp[j % dim] = static_cast<std::uint8_t>(1 + j / dim);
        p.add_term(mono, make_rational(j + 2, j + 1));
        p.add_term(Monomial{}, 1);
        out.add(m, p);
        ++j;
    }
    return out;
}

Connection scalar_as_connection(const Form& one_form, int fiber_dim)
{
    if (fiber_dim == 1) return Connection(one_form);
    Form a(one_form.dim(), 1, FiberSpec{fiber_dim, true});
    for (int r = 0; r < fiber_dim; ++r) a += one_form.embedded(FiberSpec{fiber_dim, true}, r, r);
    return Connection(a);
}

/// Max coefficient of the pullback of w to the boundary at rational points.
double trace_misfit(const Form& w, const StarDomain& dom, int count)
{
    double out = 0.0;
    for (const Point& p : rational_boundary_points(dom, count)) {
        const Form v = form_at(w, p);
        if (w.grade() == 0 || dom.dim == 1) {
            if (w.grade() > 0) continue; // 1-forms pull back to zero on boundary points
            out = std::max(out, coefficient_max(v));
            continue;
        }
        if (w.grade() == dom.dim) continue;
        const Point nrm = boundary_normal(dom, p);
        Form nflat(dom.dim, 1);
        for (int i = 0; i < dom.dim; ++i) nflat.add(BasisMask{1} << i, Polynomial::constant(dom.dim, nrm[i]));
        out = std::max(out, coefficient_max(wedge(nflat, v)));
    }
    return out;
}

std::string describe(const std::exception& e)
{
    if (dynamic_cast<const Divergence*>(&e)) return std::string("series divergence: ") + e.what();
    if (dynamic_cast<const NotExact*>(&e)) return std::string("not exact: ") + e.what();
    if (dynamic_cast<const SolverFailure*>(&e)) return std::string("solver failure: ") + e.what();
    return e.what();
}

} // namespace

std::string to_string(LevelKind k) { return k == LevelKind::Covariant ? "covariant" : "contravariant"; }

LevelSpec LevelSpec::covariant(Connection a, std::optional<Form> aux)
{
    LevelSpec s;
    s.kind = LevelKind::Covariant;
    s.connection = std::move(a);
    s.aux = std::move(aux);
    return s;
}

LevelSpec LevelSpec::contravariant(std::vector<Polynomial> x, std::optional<Form> aux)
{
    if (x.empty()) throw DimensionMismatch("contravariant level needs a vector field");
    LevelSpec s;
    s.kind = LevelKind::Contravariant;
    s.vector_field = std::move(x);
    s.aux = std::move(aux);
    return s;
}

int LevelSpec::dim() const
{
    return kind == LevelKind::Covariant ? connection->dim() : static_cast<int>(vector_field.size());
}

TowerSpec decompose_operator(std::vector<LevelSpec> levels, const Form& j, const BoundaryData& alpha)
{
    if (levels.empty()) throw Error("a tower needs at least one level");
    const int n = alpha.dim;
    const int k = static_cast<int>(levels.size());
    std::vector<int> grades(k);
    for (int i = 0; i < k; ++i) {
        if (levels[i].kind == LevelKind::Covariant && !levels[i].connection) {
            throw DimensionMismatch("level " + std::to_string(i + 1) + ": covariant level without a connection");
        }
        if (levels[i].dim() != n) {
            throw DimensionMismatch("level " + std::to_string(i + 1) + ": operator dimension differs from the data");
        }
    }
    grades[k - 1] = alpha.grade;
    for (int i = k - 2; i >= 0; --i) grades[i] = grades[i + 1] - levels[i].shift();
    if (j.dim() != n || j.grade() != grades[k - 1] + levels[k - 1].shift()) {
        std::ostringstream msg;
        msg << "grade mismatch at level " << k << ": J has grade " << j.grade() << ", expected "
            << grades[k - 1] + levels[k - 1].shift();
        throw DimensionMismatch(msg.str());
    }
    for (int i = 0; i < k; ++i) {
        const int g = grades[i];
        const bool ok = levels[i].kind == LevelKind::Covariant ? (g >= 0 && g <= n - 1) : (g >= 1 && g <= n);
        if (!ok) {
            std::ostringstream msg;
            msg << "grade mismatch at level " << i + 1 << ": " << to_string(levels[i].kind)
                << " operator on grade " << g << " in dimension " << n;
            throw DimensionMismatch(msg.str());
        }
        if (levels[i].aux && (levels[i].aux->grade() != g || levels[i].aux->dim() != n)) {
            throw DimensionMismatch("grade mismatch at level " + std::to_string(i + 1) + ": aux datum");
        }
        if (levels[i].connection && levels[i].connection->fiber_dim() != alpha.fiber.fiber_dim) {
            throw DimensionMismatch("level " + std::to_string(i + 1) + ": connection fiber differs from the data");
        }
    }
    return TowerSpec{std::move(levels), alpha, j, grades};
}

Form contravariant_d(const Form& chi, const std::vector<Polynomial>& x)
{
    const MetricContext ctx{chi.dim()};
    const Form d = codifferential(chi, ctx);
    const Form i = insert_vector(chi, x);
    return d.grade() == i.grade() ? d + i : (d.is_zero() ? i : d);
}

Form apply_level(const LevelSpec& level, const Form& phi)
{
    if (level.kind == LevelKind::Covariant) return covariant_d(phi, *level.connection);
    return contravariant_d(phi, level.vector_field);
}

TransportSolution solve_contravariant(const Form& rho, const std::vector<Polynomial>& x, int fiber_dim,
                                      const StarDomain& dom, const SeriesConfig& cfg, const std::optional<Form>& aux)
{
    const int n = dom.dim;
    const int g = rho.grade() + 1;
    if (g > n) throw DimensionMismatch("contravariant unknown above top grade");
    if (g == n) throw Error("the dual of a top-grade contravariant level is a grade-0 equation");
    const MetricContext ctx{n};
    const Form xflat = flat(x);
    // Signs of * delta *^{-1} against d and * i_X *^{-1} against X^flat ^ _.
    const Form p = probe(n, n - g);
    const Form chi_p = hodge_star_inverse(p, ctx);
    int sd = sign_between(hodge_star(codifferential(chi_p, ctx), ctx), exterior_d(p));
    int si = sign_between(hodge_star(insert_vector(chi_p, x), ctx), wedge(xflat, p));
    if (exterior_d(p).is_zero()) sd = 1;
    if (xflat.is_zero()) si = 1;
    if (sd == 0 || si == 0) throw Error("Hodge duality sign probe failed");
    const Connection dual = scalar_as_connection(Rational(sd * si) * xflat, fiber_dim);
    const Form target = Rational(sd) * hodge_star(rho, ctx);
    std::optional<Form> c;
    if (aux) c = hodge_star(*aux, ctx);
    TransportSolution s = solve_general(target, dual, dom, cfg, std::nullopt, c);
    s.phi = hodge_star_inverse(s.phi, ctx);
    s.branch = "dual:" + s.branch;
    return s;
}

TowerSolution solve_tower(const TowerSpec& spec, const StarDomain& dom, const TowerConfig& cfg)
{
    const int k = static_cast<int>(spec.levels.size());
    TowerSolution out;
    out.status = TowerStatus::Solved;
    std::vector<Form> phis(k, Form(dom.dim, 0));
    std::vector<double> radii;
    DegreeCapScope cap(cfg.series.series_degree_cap);

    const auto block = [&](LevelReport rep, const std::string& reason) {
        rep.solved = false;
        rep.message = reason;
        out.level_reports.push_back(rep);
        out.status = TowerStatus::Blocked;
        out.blocked_level = rep.level;
        out.reason = reason;
    };

    for (int i = k - 1; i >= 0; --i) {
        const LevelSpec& level = spec.levels[i];
        LevelReport rep;
        rep.level = i + 1;
        rep.kind = level.kind;
        const FiberSpec fiber = spec.alpha.fiber;
        try {
            Form base(dom.dim, spec.grades[i], fiber);
            Form rhs = i == k - 1 ? spec.J : phis[i + 1];
            if (i == k - 1) {
                const ExtensionResult ext = extend(spec.alpha, dom, cfg.extension, cfg.extension_options);
                if (!ext.exact) {
                    block(rep, "top-level extension is not an exact polynomial form");
                    break;
                }
                base = *ext.exact;
                rhs = difference(spec.J, apply_level(level, base));
            }
            Form phi = base;
            if (rhs.is_zero() && !level.aux) {
                rep.branch = "zero";
            } else {
                TransportSolution s = level.kind == LevelKind::Covariant
                                          ? solve_general(rhs, *level.connection, dom, cfg.series, std::nullopt,
                                                          level.aux)
                                          : solve_contravariant(rhs, level.vector_field, fiber.fiber_dim, dom,
                                                                cfg.series, level.aux);
                phi = base + s.phi;
                rep.branch = s.branch;
                rep.terms_used = s.terms_used;
                rep.tail_norm = s.tail_norm;
                rep.test_radius = s.test_radius;
                radii.push_back(s.test_radius);
            }
            const Form target = i == k - 1 ? spec.J : phis[i + 1];
            const double radius = rep.test_radius > 0.0 ? rep.test_radius : dom.max_extent();
            rep.residual =
                sup_norm_points(difference(apply_level(level, phi), target), series_test_points(dom, radius, cfg.series));
            if (i == k - 1) {
                rep.boundary_misfit = trace_misfit(phi - base, dom, cfg.boundary_points);
                if (*rep.boundary_misfit > cfg.tol) {
                    block(rep, "trace of the level solution misses alpha");
                    break;
                }
            }
            if (!(rep.residual <= cfg.tol)) {
                block(rep, "level residual above tolerance");
                break;
            }
            rep.solved = true;
            phis[i] = phi;
            out.level_reports.push_back(rep);
        } catch (const std::exception& e) {
            block(rep, describe(e));
            break;
        }
    }
    if (out.status == TowerStatus::Solved) {
        out.phis = phis;
        Form composed = phis[0];
        for (int i = 0; i < k; ++i) composed = apply_level(spec.levels[i], composed);
        const double radius = radii.empty() ? dom.max_extent() : *std::min_element(radii.begin(), radii.end());
        out.composed_residual =
            sup_norm_points(difference(composed, spec.J), series_test_points(dom, radius, cfg.series));
    } else {
        for (int i = out.blocked_level; i < k; ++i) out.phis.push_back(phis[i]);
    }
    return out;
}

MaxwellResult maxwell_reconstruct(const Form& j, const std::optional<BoundaryData>& alpha_f, const StarDomain& dom,
                                  const MaxwellOptions& opts)
{
    if (dom.dim != 3 || j.dim() != 3 || j.grade() != 1) throw DimensionMismatch("Maxwell reconstruction needs a 1-form J in R^3");
    if (!j.fiber().scalar()) throw DimensionMismatch("Maxwell reconstruction needs a scalar current");
    if (opts.degree < 0) throw Error("c1 degree must be >= 0");
    const MetricContext ctx{3};
    DegreeCapScope cap(std::max(degree_cap(), opts.degree + j.max_degree() + 4));
    const Form dj = codifferential(j, ctx);
    if (!dj.is_zero()) throw ConservationViolation("current is not conserved: delta J = " + dj.to_string());

    MaxwellResult res{Form(3, 1), Form(3, 2), cohomotopy_h(j, dom, ctx), Form(3, 2), {}, 0, 0, 0, {}};

    // c1 = sum theta_m delta(m vol), nonconstant monomials only (delta kills constants).
    std::vector<Form> basis;
    for (const Monomial& m : monomials_up_to(3, opts.degree + 1)) {
        if (m.degree() == 0) continue;
        Form v(3, 3);
        v.add(BasisMask{7}, Polynomial::monomial(3, m, 1));
        basis.push_back(codifferential(v, ctx));
    }
    const int nb = static_cast<int>(basis.size());
    FormEquationBuilder eq(nb);
    std::vector<Form> dbasis;
    for (const Form& b : basis) dbasis.push_back(exterior_d(b));
    eq.add_identity(dbasis, -exterior_d(res.hJ));
    if (alpha_f) {
        if (alpha_f->grade != 2 || alpha_f->dim != 3) throw DimensionMismatch("boundary data for F must be a 2-form");
        const auto points = rational_boundary_points(dom, opts.boundary_points);
        for (const Point& p : points) {
            const Point nrm = boundary_normal(dom, p);
            Form nflat(3, 1);
            for (int i = 0; i < 3; ++i) nflat.add(BasisMask{1} << i, Polynomial::constant(3, nrm[i]));
            std::vector<Form> images;
            for (const Form& b : basis) images.push_back(wedge(nflat, form_at(b, p)));
            const Form target = wedge(nflat, alpha_f->exact_value(p, dom) - form_at(res.hJ, p));
            // N ^ (2-form) is a single volume channel at p.
            std::map<int, Rational> row;
            for (int c = 0; c < nb; ++c) {
                const Rational v = images[c].coefficient(BasisMask{7}).coefficient(Monomial{});
                if (v != 0) row[c] = v;
            }
            eq.add_row(row, target.coefficient(BasisMask{7}).coefficient(Monomial{}));
            ++res.boundary_rows;
        }
    }
    const LinearSolveResult sol = eq.solve();
    res.constraint_rank = sol.rank;
    res.c1_freedom = sol.nullity;
    res.residuals["constraint"] = sol.residual_max;
    if (!sol.consistent) {
        std::ostringstream msg;
        msg << "Maxwell constraints dF = 0" << (alpha_f ? " and j*F = alpha" : "")
            << " have no exact solution at c1 degree " << opts.degree << " (residual " << sol.residual_max << ")";
        throw Infeasible(msg.str());
    }
    for (int c = 0; c < nb; ++c) {
        if (sol.x[c] != 0) res.c1 += sol.x[c] * basis[c];
    }
    res.F = res.c1 + res.hJ;
    res.A = homotopy_H(res.F, dom);

    const auto pts = lattice_points(dom, opts.lattice_per_axis);
    res.residuals["dF"] = sup_norm_points(exterior_d(res.F), pts);
    res.residuals["deltaF_minus_J"] = sup_norm_points(codifferential(res.F, ctx) - j, pts);
    res.residuals["dA_minus_F"] = sup_norm_points(exterior_d(res.A) - res.F, pts);
    res.residuals["delta_dA_minus_J"] = sup_norm_points(codifferential(exterior_d(res.A), ctx) - j, pts);
    res.residuals["conservation"] = 0.0;
    if (alpha_f) {
        double misfit = 0.0;
        for (const Point& p : rational_boundary_points(dom, opts.boundary_points)) {
            const Point nrm = boundary_normal(dom, p);
            Form nflat(3, 1);
            for (int i = 0; i < 3; ++i) nflat.add(BasisMask{1} << i, Polynomial::constant(3, nrm[i]));
            misfit = std::max(misfit, coefficient_max(wedge(nflat, form_at(res.F, p) - alpha_f->exact_value(p, dom))));
        }
        res.residuals["boundary_misfit"] = misfit;
    }
    std::ostringstream note;
    note << "A is unique up to an exact c2 (default 0); " << res.c1_freedom
         << " directions of the coexact c1 remain free at degree " << opts.degree;
    res.gauge_note = note.str();
    return res;
}

} // namespace covtomo
