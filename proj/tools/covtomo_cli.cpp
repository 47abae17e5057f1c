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
#include <covtomo/metric_dual.hpp>
#include <covtomo/parse.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace covtomo::cli {

Json load_json(const std::string& arg)
{
    if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return Json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw Error("cannot open '" + arg + "'");
    return Json::parse(in);
}

void emit(const Json& j, const std::string& path)
{
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

StarDomain default_domain(int dim)
{
    if (dim == 1) return StarDomain::interval(0, 1, make_rational(1, 2));
    return StarDomain::sphere(Point(dim, Rational(0)), 1);
}

namespace {

StarDomain domain_for(const std::string& arg, int dim)
{
    if (arg.empty()) return default_domain(dim);
    StarDomain dom = domain_from_json(load_json(arg));
    if (dom.dim != dim) throw DimensionMismatch("domain dimension differs from the data");
    return dom;
}

SeriesConfig series_config(int max_terms, double tail_tol, double test_radius)
{
    SeriesConfig cfg;
    cfg.max_terms = max_terms;
    cfg.tail_tol = tail_tol;
    if (test_radius > 0.0) cfg.test_radius = test_radius;
    return cfg;
}

// Weight t^k instead of t^{k-1}: the harness must flag this operator.
Form corrupted_H(const Form& w, const Point& x0)
{
    if (w.grade() == 0) return Form(w.dim(), 0, w.fiber());
    Form integrated(w.dim(), w.grade(), w.fiber());
    for (const auto& [key, p] : w.terms()) {
        integrated.add(key.basis, key.row, key.col, poly_integrate_t(poly_substitute_ray(p, x0), w.grade()));
    }
    return insert_radial(integrated, x0);
}

std::vector<int> parse_dims(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw Error("empty dimension list");
    return out;
}

} // namespace

} // namespace covtomo::cli

int main(int argc, char** argv)
{
    using namespace covtomo;
    using namespace covtomo::cli;

    CLI::App app{"covariant tomography toolkit"};
    app.require_subcommand(1);
    std::string out;

    // examples
    auto* ex = app.add_subcommand("examples", "run the worked examples against golden values");
    std::string ex_name = "all";
    ex->add_option("name", ex_name, "ex-0form-1d | ex-1form-1d | ex-radial-1d | ex-maxwell-J | ex-maxwell-JF | all");

    // verify
    auto* ver = app.add_subcommand("verify", "operator identity suite on seeded random forms");
    std::uint64_t seed = 42;
    int count = 200;
    std::string dims = "1,2,3";
    int max_degree = 4;
    bool corrupt = false;
    ver->add_option("--seed", seed);
    ver->add_option("--count", count)->check(CLI::PositiveNumber);
    ver->add_option("--dims", dims, "comma separated dimensions");
    ver->add_option("--max-degree", max_degree);
    ver->add_flag("--corrupt-h", corrupt, "use a deliberately wrong homotopy operator");

    // decompose
    auto* dec = app.add_subcommand("decompose", "exact/antiexact (and dual) decomposition of a form");
    std::string form_arg, domain_arg;
    bool dual = false;
    dec->add_option("--form", form_arg, "form JSON (inline or file)")->required();
    dec->add_option("--domain", domain_arg);
    dec->add_flag("--dual", dual, "also report the coexact/anticoexact split");

    // extend
    auto* ext = app.add_subcommand("extend", "extend boundary data into the domain");
    std::string alpha_arg, mode = "harmonic", csv;
    double heat_T = 0.0, tol = 1e-10;
    int steps = 100;
    ext->add_option("--alpha", alpha_arg)->required();
    ext->add_option("--domain", domain_arg);
    ext->add_option("--mode", mode)->check(CLI::IsMember({"radial", "heat", "harmonic"}));
    ext->add_option("--T", heat_T);
    ext->add_option("--steps", steps);
    ext->add_option("--tol", tol);
    ext->add_option("--csv", csv, "write grid samples as CSV");

    // solve
    auto* sol = app.add_subcommand("solve", "solve d^A phi = J");
    std::string j_arg, a_arg, c_arg, phi3_arg;
    int max_terms = 64;
    double tail_tol = 1e-12, test_radius = 0.0;
    sol->add_option("--J", j_arg);
    sol->add_option("--A", a_arg)->required();
    sol->add_option("--c", c_arg);
    sol->add_option("--phi3", phi3_arg);
    sol->add_option("--domain", domain_arg);
    sol->add_option("--max-terms", max_terms);
    sol->add_option("--tail-tol", tail_tol);
    sol->add_option("--test-radius", test_radius);

    // recover
    auto* rec = app.add_subcommand("recover", "tomographic recovery");
    std::string rec_mode;
    std::string extension = "harmonic";
    double wa = 1.0, wb = 1.0, wg = 0.0;
    int ansatz = -1, iterations = 200, samples = 33;
    rec->add_option("mode", rec_mode)->required()->check(CLI::IsMember({"current", "connection", "joint"}));
    rec->add_option("--alpha", alpha_arg)->required();
    rec->add_option("--A", a_arg);
    rec->add_option("--J", j_arg);
    rec->add_option("--domain", domain_arg);
    rec->add_option("--extension", extension)->check(CLI::IsMember({"radial", "heat", "harmonic"}));
    rec->add_option("--T", heat_T);
    rec->add_option("--a", wa);
    rec->add_option("--b", wb);
    rec->add_option("--gamma", wg);
    rec->add_option("--ansatz-degree", ansatz);
    rec->add_option("--iterations", iterations);
    rec->add_option("--samples", samples);
    rec->add_option("--seed", seed);

    // tower
    auto* tow = app.add_subcommand("tower", "tower of first-order equations");
    auto* tow_solve = tow->add_subcommand("solve", "solve a tower spec");
    tow->require_subcommand(1);
    std::string spec_arg;
    double tower_tol = 1e-8;
    tow_solve->add_option("--spec", spec_arg)->required();
    tow_solve->add_option("--domain", domain_arg);
    tow_solve->add_option("--tol", tower_tol);

    // maxwell
    auto* mx = app.add_subcommand("maxwell", "potential reconstruction for dA = F, delta F = J");
    std::string alphaf_arg;
    int degree = 4;
    mx->add_option("--J", j_arg)->required();
    mx->add_option("--alphaF", alphaf_arg);
    mx->add_option("--degree", degree);
    mx->add_option("--domain", domain_arg);

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "flatten a result into CSV");
    std::string result_arg;
    plot->add_option("--result", result_arg)->required();

    for (CLI::App* sub : {ex, ver, dec, ext, sol, rec, tow_solve, mx, plot}) {
        sub->add_option("--out", out, sub == ex ? "directory for per-example JSON" : "output file");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ex) return run_examples(ex_name, out) ? 0 : 1;

        if (*ver) {
            const auto corpus = random_corpus(seed, count, parse_dims(dims), max_degree);
            Json failures = Json::array();
            Json checks = Json::array();
            std::size_t total = 0;
            for (std::size_t i = 0; i < corpus.size(); ++i) {
                IdentityReport r = corrupt ? verify_identities({corpus[i].form}, corpus[i].domain, corrupted_H)
                                           : verify_identities({corpus[i].form}, corpus[i].domain);
                const IdentityReport d = verify_dual_identities({corpus[i].form}, corpus[i].domain);
                r.checks.insert(r.checks.end(), d.checks.begin(), d.checks.end());
                for (IdentityCheck& c : r.checks) c.form_id = static_cast<int>(i);
                const Json js = to_json(r);
                for (const Json& c : js) {
                    checks.push_back(c);
                    if (c.at("status") != "pass") failures.push_back(c);
                }
                total += r.checks.size();
            }
            const bool pass = failures.empty();
            Json summary{{"seed", seed}, {"count", count}, {"dims", parse_dims(dims)}, {"checks", total},
                         {"failures", failures}, {"pass", pass}};
            if (!out.empty()) emit(checks, out);
            emit(summary, "");
            return pass ? 0 : 1;
        }

        if (*dec) {
            const Form w = form_from_json(load_json(form_arg));
            const StarDomain dom = domain_for(domain_arg, w.dim());
            const Decomposition d = decompose(w, dom);
            Json r{{"form", to_json(w)}, {"exact", to_json(d.exact_part)}, {"antiexact", to_json(d.antiexact_part)},
                   {"center_value", to_json(d.center_value)}};
            if (dual) {
                const CoDecomposition cd = codecompose(w, dom, MetricContext{w.dim()});
                r["coexact"] = to_json(cd.coexact);
                r["anticoexact"] = to_json(cd.anticoexact);
                r["S"] = to_json(cd.center_term);
            }
            emit(r, out);
            return 0;
        }

        if (*ext) {
            const BoundaryData alpha = boundary_from_json(load_json(alpha_arg));
            const StarDomain dom = domain_for(domain_arg, alpha.dim);
            ExtensionOptions o;
            o.T = heat_T;
            o.steps = steps;
            o.tol = tol;
            const ExtensionResult r = extend(alpha, dom, parse_extension_mode(mode), o);
            Json j = to_json(r);
            j["domain"] = to_json(dom);
            if (!csv.empty()) {
                if (!r.grid) throw Error("--csv needs a grid result");
                std::ofstream c(csv);
                write_csv(*r.grid, c);
            }
            emit(j, out);
            return 0;
        }

        if (*sol) {
            const Connection a = connection_from_json(load_json(a_arg));
            const StarDomain dom = domain_for(domain_arg, a.dim());
            const SeriesConfig cfg = series_config(max_terms, tail_tol, test_radius);
            std::optional<Form> c, phi3;
            if (!c_arg.empty()) c = form_from_json(load_json(c_arg));
            if (!phi3_arg.empty()) phi3 = form_from_json(load_json(phi3_arg));
            if (j_arg.empty()) {
                if (!c) throw Error("solve needs --J or --c");
                emit(to_json(solve_homogeneous(*c, a, dom, cfg)), out);
            } else {
                emit(to_json(solve_general(form_from_json(load_json(j_arg)), a, dom, cfg, phi3, c)), out);
            }
            return 0;
        }

        if (*rec) {
            const BoundaryData alpha = boundary_from_json(load_json(alpha_arg));
            const StarDomain dom = domain_for(domain_arg, alpha.dim);
            ExtensionOptions o;
            o.T = heat_T;
            RecoveryReport r;
            if (rec_mode == "current") {
                const Connection a = a_arg.empty() ? Connection::zero(alpha.dim, alpha.fiber.fiber_dim)
                                                   : connection_from_json(load_json(a_arg));
                r = recover_current(alpha, a, dom, parse_extension_mode(extension), o);
            } else if (rec_mode == "connection") {
                if (j_arg.empty()) throw Error("recover connection needs --J");
                r = recover_connection(alpha, form_from_json(load_json(j_arg)), dom, parse_extension_mode(extension),
                                       ansatz < 0 ? 2 : ansatz, samples, o);
            } else {
                JointOptions jo;
                jo.ansatz_degree = ansatz < 0 ? 1 : ansatz;
                jo.iterations = iterations;
                jo.seed = seed;
                r = recover_joint(alpha, dom, RegularizationWeights{wa, wb, wg}, jo);
            }
            Json j = to_json(r);
            j["domain"] = to_json(dom);
            emit(j, out);
            return 0;
        }

        if (*tow_solve) {
            const TowerSpec spec = tower_spec_from_json(load_json(spec_arg));
            const StarDomain dom = domain_for(domain_arg, spec.J.dim());
            TowerConfig cfg;
            cfg.tol = tower_tol;
            const TowerSolution s = solve_tower(spec, dom, cfg);
            emit(to_json(s), out);
            return s.status == TowerStatus::Solved ? 0 : 1;
        }

        if (*mx) {
            const Form j = form_from_json(load_json(j_arg));
            const StarDomain dom = domain_for(domain_arg, j.dim());
            std::optional<BoundaryData> alpha;
            if (!alphaf_arg.empty()) alpha = boundary_from_json(load_json(alphaf_arg));
            MaxwellOptions mo;
            mo.degree = degree;
            emit(to_json(maxwell_reconstruct(j, alpha, dom, mo)), out);
            return 0;
        }

        if (*plot) {
            const Json result = load_json(result_arg);
            if (out.empty()) {
                plotdata(result, std::cout);
            } else {
                std::ofstream o(out);
                if (!o) throw Error("cannot write '" + out + "'");
                plotdata(result, o);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        Json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
