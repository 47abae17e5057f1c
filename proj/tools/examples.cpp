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
#include "cli_common.hpp"

#include <covtomo/corpus.hpp>
#include <covtomo/errors.hpp>
#include <covtomo/parse.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

namespace covtomo::cli {

namespace {

const StarDomain& unit_interval()
{
    static const StarDomain dom = StarDomain::interval(0, 1, make_rational(1, 2));
    return dom;
}

const StarDomain& unit_ball()
{
    static const StarDomain dom = StarDomain::sphere({0, 0, 0}, 1);
    return dom;
}

BoundaryData one_two() { return BoundaryData::from_endpoints(parse_form(1, "1"), parse_form(1, "2")); }

Json ex_0form()
{
    const StarDomain& dom = unit_interval();
    const RecoveryReport cur = recover_current(one_two(), Connection::zero(1), dom);
    const Form& phi = *cur.extension.exact;
    const Form& j = *cur.current.exact;
    const Form hj = homotopy_H(j, dom);
    const Form c = *cur.c_data;

    const Connection a = Connection::scalar(parse_form(1, "(x^2) dx"));
    const Form ja = covariant_d(phi, a);

    const RecoveryReport con = recover_connection(one_two(), Form(1, 1), dom);
    bool relation_ok = con.sample_points.size() == 33 && con.relation_residual_max == 0;
    Json table = Json::array();
    for (std::size_t i = 0; i < con.sample_points.size(); ++i) {
        const Rational x = con.sample_points[i][0];
        const Rational f = con.sampled_connection[i].coefficient(1).coefficient(Monomial{});
        const Rational rel = f * (x + 1) + 1;
        relation_ok = relation_ok && rel == 0;
        table.push_back({{"x", to_json(x)}, {"f", to_json(f)}, {"f(x)*(x+1)+1", to_json(rel)}});
    }

    const bool pass = phi == parse_form(1, "x+1") && j == parse_form(1, "dx") && hj == parse_form(1, "x-1/2") &&
                      c == parse_form(1, "3/2") && ja == parse_form(1, "(1 + x^2 + x^3) dx") && relation_ok &&
                      !con.polynomial_exact;
    return {{"example", "ex-0form-1d"},
            {"Phi", phi.to_string()},
            {"J", j.to_string()},
            {"HJ", hj.to_string()},
            {"c", c.to_string()},
            {"branch", cur.branch},
            {"J_with_A=x^2dx", ja.to_string()},
            {"connection",
             {{"relation", con.relation},
              {"residual_relation", "f(x)*(x+1)+1 = 0"},
              {"relation_residual_max", to_json(con.relation_residual_max)},
              {"polynomial_exact", con.polynomial_exact},
              {"gauge_note", con.gauge_note},
              {"samples", table}}},
            {"pass", pass}};
}

Json ex_1form()
{
    const StarDomain& dom = unit_interval();
    const BoundaryData alpha = BoundaryData::from_endpoints(parse_form(1, "dx"), parse_form(1, "2 dx"));
    const ExtensionResult ext = extend_harmonic(alpha, dom);
    const Form& phi = *ext.exact;
    FormRng rng(2024);
    bool all_zero = true;
    Json trials = Json::array();
    for (int i = 0; i < 5; ++i) {
        const Connection a = Connection::scalar(rng.form(1, 1, 3));
        const Form j = covariant_d(phi, a);
        all_zero = all_zero && j.is_zero();
        trials.push_back({{"A", a.form.to_string()}, {"J", j.is_zero() ? "0" : j.to_string()}});
    }
    const bool pass = phi == parse_form(1, "(x+1) dx") && all_zero;
    return {{"example", "ex-1form-1d"},
            {"Phi", phi.to_string()},
            {"J", all_zero ? "0" : "nonzero"},
            {"note", "covariant constant for arbitrary A"},
            {"trials", trials},
            {"pass", pass}};
}

Json ex_radial()
{
    const StarDomain& dom = unit_interval();
    const ExtensionResult ext = extend_radial(one_two(), dom);
    const Polynomial f = parse_polynomial(1, "1 + x");
    const CurrentResult cur = extension_current(ext, Connection::scalar(f * parse_form(1, "dx")));
    const Distribution1D& dist = cur.distribution->channels.at(0);
    bool pass = dist.atoms().size() == 1 && dist.atoms()[0].at == make_rational(1, 2) && dist.atoms()[0].weight == 1;
    // density f (1 + theta(x - 1/2))
    Distribution1D expected = Distribution1D::step(0, 1, make_rational(1, 2), 1, 2).times(f);
    pass = pass && dist.left_limit(make_rational(1, 2)) == expected.left_limit(make_rational(1, 2)) &&
           dist.right_limit(make_rational(1, 2)) == expected.right_limit(make_rational(1, 2));
    for (const auto& piece : dist.pieces()) {
        const Rational mid = (piece.a + piece.b) / 2;
        const Polynomial want = mid < make_rational(1, 2) ? f : Rational(2) * f;
        pass = pass && piece.p == want;
    }
    return {{"example", "ex-radial-1d"},
            {"Phi", to_json(ext.distribution->channels.at(0))},
            {"regularity", to_string(ext.regularity)},
            {"A", "(1+x)dx"},
            {"J", to_json(dist)},
            {"atom", {{"at", to_json(dist.atoms().at(0).at)}, {"weight", to_json(dist.atoms().at(0).weight)}}},
            {"pass", pass}};
}

struct Manufactured {
    Form a;
    Form f;
    Form j;
};

Manufactured maxwell_data()
{
    const MetricContext ctx{3};
    Manufactured m{parse_form(3, "(x*y^2 - z^3/3) dx + (x^2*z + y) dy + (x*y*z - 2*y^3) dz"), Form(3, 2), Form(3, 1)};
    m.f = exterior_d(m.a);
    m.j = codifferential(m.f, ctx);
    return m;
}

Json ex_maxwell(bool with_boundary)
{
    const MetricContext ctx{3};
    const Manufactured m = maxwell_data();
    const bool conserved = codifferential(m.j, ctx).is_zero();
    std::optional<BoundaryData> alpha;
    if (with_boundary) alpha = BoundaryData::from_form(m.f);
    const MaxwellResult res = maxwell_reconstruct(m.j, alpha, unit_ball());
    std::string rejection;
    try {
        maxwell_reconstruct(parse_form(3, "x dx"), std::nullopt, unit_ball());
    } catch (const ConservationViolation& e) {
        rejection = e.what();
    }
    bool pass = conserved && !rejection.empty() && res.residuals.at("dF") == 0.0 &&
                res.residuals.at("deltaF_minus_J") == 0.0 && res.residuals.at("delta_dA_minus_J") == 0.0;
    if (with_boundary) pass = pass && res.F == m.f && res.residuals.at("boundary_misfit") == 0.0;
    Json out{{"example", with_boundary ? "ex-maxwell-JF" : "ex-maxwell-J"},
             {"A_star", m.a.to_string()},
             {"F_star", m.f.to_string()},
             {"J", m.j.to_string()},
             {"conservation", conserved ? "delta J = 0" : "violated"},
             {"result", to_json(res)},
             {"rejected_nonconserved", rejection},
             {"pass", pass}};
    if (with_boundary) out["F_equals_F_star"] = res.F == m.f;
    return out;
}

} // namespace

bool run_examples(const std::string& name, const std::string& out_dir)
{
    const std::vector<std::pair<std::string, std::function<Json()>>> all{
        {"ex-0form-1d", ex_0form},
        {"ex-1form-1d", ex_1form},
        {"ex-radial-1d", ex_radial},
        {"ex-maxwell-J", [] { return ex_maxwell(false); }},
        {"ex-maxwell-JF", [] { return ex_maxwell(true); }},
    };
    bool found = false, pass = true;
    Json combined = Json::array();
    for (const auto& [id, fn] : all) {
        if (name != "all" && name != id) continue;
        found = true;
        const Json r = fn();
        pass = pass && r.at("pass").get<bool>();
        std::cerr << id << ": " << (r.at("pass").get<bool>() ? "pass" : "FAIL") << "\n";
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            emit(r, (std::filesystem::path(out_dir) / (id + ".json")).string());
        } else {
            combined.push_back(r);
        }
    }
    if (!found) throw Error("unknown example '" + name + "'");
    if (out_dir.empty()) emit(combined.size() == 1 ? combined[0] : combined, "");
    return pass;
}

} // namespace covtomo::cli
