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
#include <covtomo/json_io.hpp>

#include <covtomo/errors.hpp>
#include <covtomo/parse.hpp>

#include <cmath>

namespace covtomo {

namespace {

Json point_to_json(const Point& p)
{
    Json out = Json::array();
    for (const Rational& q : p) out.push_back(to_json(q));
    return out;
}

Point point_from_json(const Json& j)
{
    if (!j.is_array()) return Point{rational_from_json(j)};
    Point out;
    for (const Json& e : j) out.push_back(rational_from_json(e));
    return out;
}

Json doubles(const std::vector<double>& v)
{
    Json out = Json::array();
    for (double x : v) out.push_back(real_to_json(x));
    return out;
}

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw Error(std::string("JSON input lacks field '") + key + "'");
    return j.at(key);
}

} // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_float()) return from_double(j.get<double>());
    throw Error("expected a rational as string or number");
}

Json real_to_json(double v)
{
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

Json to_json(const Polynomial& p)
{
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json exp = Json::array();
        for (int i = 0; i < p.dim(); ++i) exp.push_back(static_cast<int>(m.exp[i]));
        terms.push_back({{"exp", exp}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
    }
    return {{"dim", p.dim()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const Json& j)
{
    if (j.is_object() && j.contains("text")) return parse_polynomial(field(j, "dim").get<int>(), j.at("text").get<std::string>());
    const int dim = field(j, "dim").get<int>();
    Polynomial p(dim);
    for (const Json& t : field(j, "terms")) {
        Monomial m;
        const Json& exp = field(t, "exp");
        if (static_cast<int>(exp.size()) != dim) throw DimensionMismatch("monomial exponent length differs from dim");
        for (int i = 0; i < dim; ++i) {
            const int e = exp[i].get<int>();
            if (e < 0 || e > 255) throw Error("exponent out of range");
            m.exp[i] = static_cast<std::uint8_t>(e);
        }
        Rational c(mpz_class(field(t, "num").get<std::string>()), mpz_class(field(t, "den").get<std::string>()));
        c.canonicalize();
        p.add_term(m, c);
    }
    return p;
}

Json to_json(const Form& w)
{
    Json terms = Json::array();
    for (const auto& [k, p] : w.terms()) {
        Json fiber = w.fiber().endo ? Json::array({k.row, k.col}) : Json::array({k.row});
        terms.push_back({{"basis", basis_indices(k.basis)}, {"fiber", fiber}, {"poly", to_json(p)}});
    }
    return {{"dim", w.dim()},
            {"grade", w.grade()},
            {"fiber_dim", w.fiber().fiber_dim},
            {"endo", w.fiber().endo},
            {"terms", terms},
            {"text", w.to_string()}};
}

Form form_from_json(const Json& j)
{
    if (j.is_object() && j.contains("text") && !j.contains("terms")) {
        Form f = parse_form(field(j, "dim").get<int>(), j.at("text").get<std::string>());
        if (j.contains("grade") && j.at("grade").get<int>() != f.grade()) {
            if (!f.is_zero()) throw DimensionMismatch("form text has a different grade than declared");
            f = Form(f.dim(), j.at("grade").get<int>());
        }
        return f;
    }
    const int dim = field(j, "dim").get<int>();
    const int grade = field(j, "grade").get<int>();
    const FiberSpec fiber{j.value("fiber_dim", 1), j.value("endo", false)};
    Form w(dim, grade, fiber);
    for (const Json& t : field(j, "terms")) {
        std::vector<int> idx = field(t, "basis").get<std::vector<int>>();
        if (static_cast<int>(idx.size()) != grade) throw DimensionMismatch("basis length differs from grade");
        const auto [mask, sign] = normalize_basis(idx);
        if (sign == 0) throw Error("repeated basis index");
        for (int i : idx) {
            if (i < 0 || i >= dim) throw DimensionMismatch("basis index out of range");
        }
        const std::vector<int> fb = t.value("fiber", std::vector<int>{0});
        const int row = fb.empty() ? 0 : fb[0];
        const int col = fb.size() > 1 ? fb[1] : 0;
        if (row < 0 || row >= fiber.rows() || col < 0 || col >= fiber.cols()) throw DimensionMismatch("fiber index out of range");
        Polynomial p = polynomial_from_json(field(t, "poly"));
        if (sign < 0) p *= -1;
        w.add(mask, row, col, p);
    }
    return w;
}

Json to_json(const StarDomain& dom)
{
    Json out;
    out["dim"] = dom.dim;
    switch (dom.kind) {
    case BoundaryKind::Interval:
        out["kind"] = "interval";
        out["lower"] = point_to_json(dom.lower);
        out["upper"] = point_to_json(dom.upper);
        break;
    case BoundaryKind::Sphere:
        out["kind"] = "sphere";
        out["radius"] = to_json(dom.radius);
        break;
    case BoundaryKind::Box:
        out["kind"] = "box";
        out["lower"] = point_to_json(dom.lower);
        out["upper"] = point_to_json(dom.upper);
        break;
    }
    out["center"] = point_to_json(dom.center);
    if (dom.grid) out["grid"] = {{"nodes", dom.grid->nodes_per_axis}, {"polar", dom.grid->polar}};
    return out;
}

StarDomain domain_from_json(const Json& j)
{
    const std::string kind = field(j, "kind").get<std::string>();
    StarDomain dom;
    if (kind == "interval") {
        const Point lo = point_from_json(field(j, "lower"));
        const Point hi = point_from_json(field(j, "upper"));
        if (lo.size() != 1 || hi.size() != 1) throw DimensionMismatch("interval endpoints must be 1D");
        Rational c = j.contains("center") ? point_from_json(j.at("center")).at(0) : Rational((lo[0] + hi[0]) / 2);
        c.canonicalize();
        dom = StarDomain::interval(lo[0], hi[0], c);
    } else if (kind == "sphere") {
        Point c = j.contains("center") ? point_from_json(j.at("center"))
                                       : Point(field(j, "dim").get<int>(), Rational(0));
        dom = StarDomain::sphere(c, rational_from_json(field(j, "radius")));
    } else if (kind == "box") {
        const Point lo = point_from_json(field(j, "lower"));
        const Point hi = point_from_json(field(j, "upper"));
        if (lo.size() != hi.size()) throw DimensionMismatch("box corners differ in dimension");
        Point center(lo.size()), half(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            center[i] = (lo[i] + hi[i]) / 2;
            half[i] = (hi[i] - lo[i]) / 2;
            center[i].canonicalize();
            half[i].canonicalize();
        }
        dom = StarDomain::box(center, half);
        if (j.contains("center")) dom.center = point_from_json(j.at("center"));
    } else {
        throw Error("unknown domain kind '" + kind + "'");
    }
    if (j.contains("grid")) {
        GridSpec g;
        g.nodes_per_axis = j.at("grid").value("nodes", std::vector<int>{});
        g.polar = j.at("grid").value("polar", false);
        dom.grid = g;
    }
    dom.validate();
    return dom;
}

Json to_json(const Connection& a)
{
    Json out{{"A", to_json(a.form)}};
    if (a.dual_vector) {
        Json x = Json::array();
        for (const Polynomial& p : *a.dual_vector) x.push_back(to_json(p));
        out["X"] = x;
    }
    return out;
}

std::vector<Polynomial> vector_field_from_json(const Json& j, int dim)
{
    std::vector<Polynomial> out;
    for (const Json& e : j) {
        if (e.is_string()) out.push_back(parse_polynomial(dim, e.get<std::string>()));
        else if (e.is_number()) out.push_back(Polynomial::constant(dim, rational_from_json(e)));
        else out.push_back(polynomial_from_json(e));
    }
    if (static_cast<int>(out.size()) != dim) throw DimensionMismatch("vector field needs one component per axis");
    return out;
}

Connection connection_from_json(const Json& j)
{
    if (j.is_object() && j.contains("A")) {
        Form a = form_from_json(j.at("A"));
        std::optional<std::vector<Polynomial>> x;
        if (j.contains("X")) x = vector_field_from_json(j.at("X"), a.dim());
        return Connection(a, x);
    }
    return Connection(form_from_json(j));
}

BoundaryData boundary_from_json(const Json& j)
{
    if (j.contains("form")) return BoundaryData::from_form(form_from_json(j.at("form")));
    if (j.contains("lower")) return BoundaryData::from_endpoints(form_from_json(j.at("lower")), form_from_json(field(j, "upper")));
    throw Error("boundary data need 'form' or 'lower'/'upper'");
}

Json to_json(const BoundaryData& b)
{
    if (b.polynomial) return {{"form", to_json(*b.polynomial)}};
    if (b.lower_value) return {{"lower", to_json(*b.lower_value)}, {"upper", to_json(*b.upper_value)}};
    return {{"function", true}, {"dim", b.dim}, {"grade", b.grade}};
}

Json to_json(const Distribution1D& d)
{
    Json pieces = Json::array(), jumps = Json::array(), atoms = Json::array();
    for (const auto& p : d.pieces()) pieces.push_back({{"a", to_json(p.a)}, {"b", to_json(p.b)}, {"poly", to_json(p.p)}, {"text", p.p.to_string()}});
    for (const auto& jm : d.jumps()) jumps.push_back({{"at", to_json(jm.at)}, {"height", to_json(jm.height)}});
    for (const auto& a : d.atoms()) atoms.push_back({{"at", to_json(a.at)}, {"weight", to_json(a.weight)}});
    return {{"kind", "distribution1d"}, {"lower", to_json(d.lower())}, {"upper", to_json(d.upper())},
            {"pieces", pieces}, {"jumps", jumps}, {"atoms", atoms}};
}

Json to_json(const DistributionForm& d)
{
    Json channels = Json::array();
    const auto keys = form_channels(1, d.grade, d.fiber);
    for (std::size_t i = 0; i < d.channels.size(); ++i) {
        Json c = to_json(d.channels[i]);
        c["channel"] = basis_name(1, keys[i].basis);
        channels.push_back(c);
    }
    return {{"kind", "distribution_form"}, {"grade", d.grade}, {"channels", channels}};
}

Json to_json(const GridForm& g)
{
    const GridGeometry& geo = g.geometry();
    Json names = Json::array();
    for (int c = 0; c < g.channel_count(); ++c) names.push_back(g.channel_name(c));
    Json coords = Json::array(), values = Json::array();
    for (int n = 0; n < geo.node_count(); ++n) {
        if (!geo.active[n]) continue;
        coords.push_back(doubles(geo.coords[n]));
        std::vector<double> v(g.channel_count());
        for (int c = 0; c < g.channel_count(); ++c) v[c] = g.at(n, c);
        values.push_back(doubles(v));
    }
    return {{"kind", "grid_form"}, {"dim", geo.dim()}, {"grade", g.grade()}, {"polar", geo.polar},
            {"channels", names}, {"coords", coords}, {"values", values}};
}

Json to_json(const ExtensionResult& r)
{
    Json out{{"mode", to_string(r.mode)}, {"regularity", to_string(r.regularity)}, {"grade", r.grade},
             {"center_singularity", r.center_singularity}};
    if (r.exact) out["Phi"] = to_json(*r.exact);
    if (r.distribution) out["distribution"] = to_json(*r.distribution);
    if (r.grid) out["grid"] = to_json(*r.grid);
    return out;
}

Json to_json(const CurrentResult& r)
{
    Json out{{"center_singularity", r.center_singularity}};
    if (r.exact) out["J"] = to_json(*r.exact);
    if (r.distribution) out["distribution"] = to_json(*r.distribution);
    if (r.grid) out["grid"] = to_json(*r.grid);
    return out;
}

Json to_json(const TransportSolution& s)
{
    Json out{{"phi", to_json(s.phi)},
             {"branch", s.branch},
             {"terms_used", s.terms_used},
             {"tail_norm", real_to_json(s.tail_norm)},
             {"radius", real_to_json(s.radius)},
             {"test_radius", real_to_json(s.test_radius)},
             {"residual_max", real_to_json(s.residual_max)},
             {"term_norms", doubles(s.term_norms)}};
    if (s.parts) {
        out["parts"] = {{"phi1", to_json(s.parts->phi1)}, {"phi2", to_json(s.parts->phi2)}, {"phi3", to_json(s.parts->phi3)},
                        {"algebraic_rank", s.algebraic_rank}, {"algebraic_nullity", s.algebraic_nullity},
                        {"algebraic_residual", real_to_json(s.algebraic_residual)}};
    }
    return out;
}

Json to_json(const IdentityReport& r)
{
    Json out = Json::array();
    for (const IdentityCheck& c : r.checks) {
        Json e{{"identity", c.identity}, {"form_id", c.form_id}, {"status", c.pass ? "pass" : "fail"}};
        if (c.witness_point) e["witness_point"] = point_to_json(*c.witness_point);
        out.push_back(e);
    }
    return out;
}

Json to_json(const RecoveryReport& r)
{
    Json out{{"mode", to_string(r.mode)}, {"branch", r.branch}};
    out["extension"] = to_json(r.extension);
    out["current"] = to_json(r.current);
    if (r.c_data) out["c"] = to_json(*r.c_data);
    if (r.c_grid) out["c_grid"] = to_json(*r.c_grid);
    if (r.connection) out["recovered"] = to_json(*r.connection);
    Json res = Json::object();
    for (const auto& [k, v] : r.residuals) res[k] = real_to_json(v);
    out["residuals"] = res;
    out["gauge_note"] = r.gauge_note;
    out["notes"] = r.notes;
    if (r.mode == RecoveryMode::Connection) {
        out["polynomial_exact"] = r.polynomial_exact;
        out["kernel_dimension"] = r.kernel_dimension;
        out["relation"] = r.relation;
        out["relation_residual_max"] = to_json(r.relation_residual_max);
        Json table = Json::array();
        for (std::size_t i = 0; i < r.sample_points.size(); ++i) {
            std::vector<double> vals;
            const Form& a = r.sampled_connection[i];
            for (const TermKey& k : form_channels(a.dim(), 1, a.fiber())) {
                vals.push_back(to_double(a.coefficient(k.basis, k.row, k.col).coefficient(Monomial{})));
            }
            table.push_back({{"x", doubles(to_double(r.sample_points[i]))}, {"A", doubles(vals)}});
        }
        out["samples"] = table;
    }
    if (r.mode == RecoveryMode::Joint) {
        out["iterations"] = r.iterations;
        out["monotone"] = r.monotone;
        out["objective_history"] = doubles(r.objective_history);
    }
    return out;
}

Json to_json(const TowerSolution& s)
{
    Json levels = Json::array();
    for (const LevelReport& r : s.level_reports) {
        Json e{{"level", r.level}, {"kind", to_string(r.kind)}, {"solved", r.solved}, {"branch", r.branch},
               {"residual", real_to_json(r.residual)}, {"test_radius", real_to_json(r.test_radius)},
               {"terms_used", r.terms_used}, {"tail_norm", real_to_json(r.tail_norm)}};
        if (r.boundary_misfit) e["boundary_misfit"] = real_to_json(*r.boundary_misfit);
        if (!r.message.empty()) e["message"] = r.message;
        levels.push_back(e);
    }
    Json phis = Json::array();
    for (const Form& p : s.phis) phis.push_back(to_json(p));
    Json out{{"status", s.status == TowerStatus::Solved ? "solved" : "blocked"}};
    if (s.status == TowerStatus::Blocked) out["blocked"] = {{"level", s.blocked_level}, {"reason", s.reason}};
    out["levels"] = levels;
    out["phis"] = phis;
    out["composed_residual"] = real_to_json(s.composed_residual);
    return out;
}

Json to_json(const MaxwellResult& m)
{
    Json res = Json::object();
    for (const auto& [k, v] : m.residuals) res[k] = real_to_json(v);
    return {{"A", to_json(m.A)}, {"F", to_json(m.F)}, {"hJ", to_json(m.hJ)}, {"c1", to_json(m.c1)},
            {"residuals", res}, {"c1_freedom", m.c1_freedom}, {"boundary_rows", m.boundary_rows},
            {"constraint_rank", m.constraint_rank}, {"gauge_note", m.gauge_note}};
}

TowerSpec tower_spec_from_json(const Json& j)
{
    const Form current = form_from_json(field(j, "J"));
    const BoundaryData alpha = boundary_from_json(field(j, "alpha"));
    std::vector<LevelSpec> levels;
    for (const Json& l : field(j, "levels")) {
        const std::string kind = field(l, "kind").get<std::string>();
        std::optional<Form> aux;
        if (l.contains("aux") && !l.at("aux").is_null()) aux = form_from_json(l.at("aux"));
        if (kind == "covariant") {
            levels.push_back(LevelSpec::covariant(connection_from_json(field(l, "A")), aux));
        } else if (kind == "contravariant") {
            levels.push_back(LevelSpec::contravariant(vector_field_from_json(field(l, "X"), current.dim()), aux));
        } else {
            throw Error("unknown level kind '" + kind + "'");
        }
    }
    return decompose_operator(std::move(levels), current, alpha);
}

} // namespace covtomo
