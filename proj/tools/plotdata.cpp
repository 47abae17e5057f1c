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

#include <covtomo/errors.hpp>

#include <iomanip>
#include <ostream>

namespace covtomo::cli {

namespace {

const Json* find_kind(const Json& j, const std::string& kind)
{
    if (j.is_object()) {
        if (j.contains("kind") && j.at("kind") == kind) return &j;
        for (const auto& [k, v] : j.items()) {
            if (const Json* r = find_kind(v, kind)) return r;
        }
    } else if (j.is_array()) {
        for (const Json& v : j) {
            if (const Json* r = find_kind(v, kind)) return r;
        }
    }
    return nullptr;
}

std::string num(const Json& v)
{
    if (v.is_string()) return v.get<std::string>();
    std::ostringstream s;
    s << std::setprecision(17) << v.get<double>();
    return s.str();
}

void grid_csv(const Json& g, std::ostream& out)
{
    const int dim = g.at("dim").get<int>();
    static const char* axes[] = {"x", "y", "z"};
    for (int i = 0; i < dim; ++i) out << (i ? "," : "") << (dim <= 3 ? axes[i] : ("x" + std::to_string(i + 1)));
    for (const Json& c : g.at("channels")) out << "," << c.get<std::string>();
    out << "\n";
    const Json& coords = g.at("coords");
    const Json& values = g.at("values");
    for (std::size_t n = 0; n < coords.size(); ++n) {
        bool first = true;
        for (const Json& x : coords[n]) {
            out << (first ? "" : ",") << num(x);
            first = false;
        }
        for (const Json& v : values[n]) out << "," << num(v);
        out << "\n";
    }
}

void distribution_csv(const Json& d, std::ostream& out)
{
    out << "a,b,density\n";
    for (const Json& p : d.at("pieces")) {
        out << p.at("a").get<std::string>() << "," << p.at("b").get<std::string>() << ","
            << p.at("text").get<std::string>() << "\n";
    }
    out << "\nat,weight\n";
    for (const Json& a : d.at("atoms")) out << a.at("at").get<std::string>() << "," << a.at("weight").get<std::string>() << "\n";
}

} // namespace

void plotdata(const Json& result, std::ostream& out)
{
    if (const Json* g = find_kind(result, "grid_form")) return grid_csv(*g, out);
    if (const Json* d = find_kind(result, "distribution1d")) return distribution_csv(*d, out);
    const Json* phi = nullptr;
    if (result.is_object() && result.contains("Phi") && result.at("Phi").is_object()) phi = &result.at("Phi");
    if (result.is_object() && result.contains("extension") && result.at("extension").contains("Phi")) {
        phi = &result.at("extension").at("Phi");
    }
    if (!phi) {
        if (!result.is_null() && !(result.is_object() && result.empty()) && !(result.is_array() && result.empty())) {
            throw Error("unknown result schema for plotdata");
        }
        out << "x,value\n";
        return;
    }
    const Form w = form_from_json(*phi);
    if (w.dim() != 1) throw Error("exact plot data are written for 1D forms only; use a grid result");
    out << "x";
    const auto keys = form_channels(1, w.grade(), w.fiber());
    for (const TermKey& k : keys) out << "," << (w.grade() == 0 ? std::string("Phi") : "Phi_" + basis_name(1, k.basis));
    out << "\n";
    double lo = 0.0, hi = 1.0;
    if (result.contains("domain")) {
        const StarDomain dom = domain_from_json(result.at("domain"));
        lo = dom.bounding_lower()[0];
        hi = dom.bounding_upper()[0];
    }
    const int n = 33;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        out << std::setprecision(17) << x;
        for (double v : channel_values(w, {x})) out << "," << std::setprecision(17) << v;
        out << "\n";
    }
}

} // namespace covtomo::cli
