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

// Python bindings. Structured results cross the boundary as dicts through the
// same JSON layer the CLI writes.

#include <covtomo/errors.hpp>
#include <covtomo/extension.hpp>
#include <covtomo/grid.hpp>
#include <covtomo/homotopy.hpp>
#include <covtomo/json_io.hpp>
#include <covtomo/metric_dual.hpp>
#include <covtomo/parse.hpp>
#include <covtomo/corpus.hpp>
#include <covtomo/tomography.hpp>
#include <covtomo/tower.hpp>
#include <covtomo/transport.hpp>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace covtomo;

namespace {

Json to_native(const py::object& obj)
{
    if (py::isinstance<py::str>(obj)) return Json::parse(obj.cast<std::string>());
    return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object to_python(const Json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

StarDomain domain_arg(const py::object& dom) { return domain_from_json(to_native(dom)); }

BoundaryData boundary_arg(const py::object& b)
{
    if (py::isinstance<Form>(b)) return BoundaryData::from_form(b.cast<Form>());
    return boundary_from_json(to_native(b));
}

Connection connection_arg(const py::object& a, int dim)
{
    if (a.is_none()) return Connection::zero(dim);
    if (py::isinstance<Form>(a)) return Connection(a.cast<Form>());
    return connection_from_json(to_native(a));
}

Point point_arg(const std::vector<py::object>& p)
{
    Point out;
    for (const py::object& x : p) out.push_back(parse_rational(py::str(x).cast<std::string>()));
    return out;
}

} // namespace

PYBIND11_MODULE(_covtomo, m)
{
    m.doc() = "Exact polynomial differential forms, covariant transport and boundary tomography";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
    py::register_exception<DegreeCapExceeded>(m, "DegreeCapExceeded", base.ptr());
    py::register_exception<NotExact>(m, "NotExact", base.ptr());
    py::register_exception<Infeasible>(m, "Infeasible", base.ptr());
    py::register_exception<Divergence>(m, "Divergence", base.ptr());
    py::register_exception<SolverFailure>(m, "SolverFailure", base.ptr());
    py::register_exception<ConservationViolation>(m, "ConservationViolation", base.ptr());

    py::class_<Form>(m, "Form")
        .def(py::init([](int dim, const std::string& text) { return parse_form(dim, text); }), py::arg("dim"),
             py::arg("text"))
        .def_static("from_json", [](const py::object& j) { return form_from_json(to_native(j)); })
        .def_property_readonly("dim", &Form::dim)
        .def_property_readonly("grade", &Form::grade)
        .def("is_zero", &Form::is_zero)
        .def("to_json", [](const Form& w) { return to_python(to_json(w)); })
        .def("__str__", &Form::to_string)
        .def("__repr__", [](const Form& w) { return "Form(" + std::to_string(w.dim()) + ", '" + w.to_string() + "')"; })
        .def("__eq__", [](const Form& a, const Form& b) { return a == b; })
        .def("__add__", [](const Form& a, const Form& b) { return a + b; })
        .def("__sub__", [](const Form& a, const Form& b) { return a - b; })
        .def("__neg__", [](const Form& a) { return Form(a.dim(), a.grade(), a.fiber()) - a; })
        .def("__xor__", [](const Form& a, const Form& b) { return wedge(a, b); });

    m.def("d", &exterior_d, py::arg("form"), "Exterior derivative.");
    m.def("wedge", &wedge, py::arg("a"), py::arg("b"));
    m.def(
        "covariant_d", [](const Form& w, const py::object& a) { return covariant_d(w, connection_arg(a, w.dim())); },
        py::arg("form"), py::arg("A"));
    m.def(
        "H", [](const Form& w, const std::vector<py::object>& center) { return homotopy_H(w, point_arg(center)); },
        py::arg("form"), py::arg("center"), "Homotopy operator about a center point given as rationals or strings.");
    m.def(
        "hodge_star", [](const Form& w) { return hodge_star(w, MetricContext{w.dim()}); }, py::arg("form"));
    m.def(
        "codifferential", [](const Form& w) { return codifferential(w, MetricContext{w.dim()}); }, py::arg("form"));
    m.def(
        "decompose",
        [](const Form& w, const py::object& dom) {
            const Decomposition d = decompose(w, domain_arg(dom));
            return py::make_tuple(d.exact_part, d.antiexact_part);
        },
        py::arg("form"), py::arg("domain"), "Exact and antiexact parts.");

    m.def(
        "verify",
        [](std::uint64_t seed, int count, const std::vector<int>& dims, int max_degree) {
            std::size_t checks = 0, failed = 0;
            for (const CorpusEntry& e : random_corpus(seed, count, dims, max_degree)) {
                for (const IdentityReport& r :
                     {verify_identities({e.form}, e.domain), verify_dual_identities({e.form}, e.domain)}) {
                    checks += r.checks.size();
                    failed += r.failures().size();
                }
            }
            py::dict out;
            out["checks"] = checks;
            out["failures"] = failed;
            out["pass"] = failed == 0;
            return out;
        },
        py::arg("seed") = 1, py::arg("count") = 200, py::arg("dims") = std::vector<int>{1, 2, 3},
        py::arg("max_degree") = 4);

    m.def(
        "extend",
        [](const py::object& alpha, const py::object& dom, const std::string& mode, double T) {
            ExtensionOptions o;
            o.T = T;
            return to_python(to_json(extend(boundary_arg(alpha), domain_arg(dom), parse_extension_mode(mode), o)));
        },
        py::arg("alpha"), py::arg("domain"), py::arg("mode") = "harmonic", py::arg("T") = 0.0);

    m.def(
        "sample",
        [](const Form& w, const py::object& dom) {
            const GridForm g = sample(w, domain_arg(dom));
            const GridGeometry& geom = g.geometry();
            const py::ssize_t n = geom.node_count(), c = g.channel_count(), dim = geom.dim();
            py::array_t<double> coords({n, dim}), values({n, c});
            auto xc = coords.mutable_unchecked<2>();
            auto xv = values.mutable_unchecked<2>();
            for (py::ssize_t i = 0; i < n; ++i) {
                for (py::ssize_t k = 0; k < dim; ++k) xc(i, k) = geom.coords[i][k];
                for (py::ssize_t k = 0; k < c; ++k) xv(i, k) = g.at(static_cast<int>(i), static_cast<int>(k));
            }
            std::vector<bool> active(geom.active.begin(), geom.active.end());
            std::vector<std::string> names;
            for (int k = 0; k < c; ++k) names.push_back(g.channel_name(k));
            return py::make_tuple(coords, values, py::array(py::cast(active)), names);
        },
        py::arg("form"), py::arg("domain"), "Nodal samples: (coords, values, active mask, channel names).");

    m.def(
        "solve",
        [](const py::object& j, const py::object& a, const py::object& dom, double test_radius) {
            SeriesConfig cfg;
            if (test_radius > 0) cfg.test_radius = test_radius;
            const Form jf = py::isinstance<Form>(j) ? j.cast<Form>() : form_from_json(to_native(j));
            return to_python(to_json(solve_general(jf, connection_arg(a, jf.dim()), domain_arg(dom), cfg)));
        },
        py::arg("J"), py::arg("A"), py::arg("domain"), py::arg("test_radius") = 0.0,
        "Covariant transport d^A phi = J with the algebraic split.");

    m.def(
        "recover",
        [](const std::string& mode, const py::object& alpha, const py::object& dom, const py::object& a,
           const py::object& j, const std::string& extension, double wa, double wb, double wg, int iterations,
           std::uint64_t seed) {
            const BoundaryData b = boundary_arg(alpha);
            const StarDomain d = domain_arg(dom);
            RecoveryReport r;
            if (mode == "current") {
                r = recover_current(b, connection_arg(a, b.dim), d, parse_extension_mode(extension));
            } else if (mode == "connection") {
                if (j.is_none()) throw Error("connection recovery needs J");
                const Form jf = py::isinstance<Form>(j) ? j.cast<Form>() : form_from_json(to_native(j));
                r = recover_connection(b, jf, d, parse_extension_mode(extension));
            } else if (mode == "joint") {
                JointOptions o;
                o.iterations = iterations;
                o.seed = seed;
                r = recover_joint(b, d, RegularizationWeights{wa, wb, wg}, o);
            } else {
                throw Error("unknown recovery mode '" + mode + "'");
            }
            return to_python(to_json(r));
        },
        py::arg("mode"), py::arg("alpha"), py::arg("domain"), py::arg("A") = py::none(), py::arg("J") = py::none(),
        py::arg("extension") = "harmonic", py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("gamma") = 0.0,
        py::arg("iterations") = 200, py::arg("seed") = 1);

    m.def(
        "tower_solve",
        [](const py::object& spec, const py::object& dom) {
            return to_python(to_json(solve_tower(tower_spec_from_json(to_native(spec)), domain_arg(dom))));
        },
        py::arg("spec"), py::arg("domain"));

    m.def(
        "maxwell",
        [](const py::object& j, const py::object& alpha_f, const py::object& dom) {
            const Form jf = py::isinstance<Form>(j) ? j.cast<Form>() : form_from_json(to_native(j));
            std::optional<BoundaryData> b;
            if (!alpha_f.is_none()) b = boundary_arg(alpha_f);
            return to_python(to_json(maxwell_reconstruct(jf, b, domain_arg(dom))));
        },
        py::arg("J"), py::arg("alphaF"), py::arg("domain"));
}
