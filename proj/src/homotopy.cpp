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
#include <covtomo/homotopy.hpp>
#include <covtomo/parallel.hpp>

#include <algorithm>

namespace covtomo {

namespace {

// Compositions through the ends of the complex produce zero forms carrying a
// neighbouring grade; relabel them to the grade the identity expects.
Form at_grade(const Form& w, int grade)
{
    if (w.grade() == grade) return w;
    if (!w.is_zero()) throw Error("internal grade mismatch in homotopy identity");
    return Form(w.dim(), grade, w.fiber());
}

} // namespace

Form homotopy_H(const Form& w, const Point& x0)
{
    const int n = w.dim();
    const int k = w.grade();
    if (static_cast<int>(x0.size()) != n) throw DimensionMismatch("homotopy center length mismatch");
    if (k == 0) return Form(n, 0, w.fiber());
    // Integrate the coefficients along the ray first; i_K has x-dependent
    // coefficients only and commutes with the t-integral.
    Form integrated(n, k, w.fiber());
    for (const auto& [key, p] : w.terms()) {
        integrated.add(key.basis, key.row, key.col, poly_integrate_t(poly_substitute_ray(p, x0), k - 1));
    }
    return insert_radial(integrated, x0);
}

Form homotopy_H(const Form& w, const StarDomain& dom) { return homotopy_H(w, dom.center); }

Decomposition decompose(const Form& w, const StarDomain& dom)
{
    const Point& x0 = dom.center;
    const int k = w.grade();
    return Decomposition{at_grade(exterior_d(homotopy_H(w, x0)), k), at_grade(homotopy_H(exterior_d(w), x0), k),
                         pullback_center(w, x0)};
}

bool is_exact(const Form& w) { return w.grade() >= 1 && exterior_d(w).is_zero(); }

bool is_antiexact(const Form& w, const Point& x0)
{
    if (!homotopy_H(w, x0).is_zero()) return false;
    for (const auto& [k, p] : w.terms()) {
        if (sgn(p.eval(x0)) != 0) return false;
    }
    return true;
}

bool IdentityReport::all_pass() const
{
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

std::vector<IdentityCheck> IdentityReport::failures() const
{
    std::vector<IdentityCheck> out;
    for (const auto& c : checks) {
        if (!c.pass) out.push_back(c);
    }
    return out;
}

std::optional<Point> find_witness(const Form& difference)
{
    if (difference.is_zero()) return std::nullopt;
    const int n = difference.dim();
    // A nonzero polynomial of degree <= D cannot vanish on a grid of D+1 values per axis.
    const int d = std::max(0, difference.max_degree());
    std::vector<int> idx(n, 0);
    while (true) {
        Point p;
        for (int i = 0; i < n; ++i) p.push_back(Rational(idx[i], 2) - Rational(d, 4));
        for (const auto& [k, poly] : difference.terms()) {
            if (sgn(poly.eval(p)) != 0) return p;
        }
        int axis = 0;
        while (axis < n && ++idx[axis] > d) idx[axis++] = 0;
        if (axis == n) break;
    }
    return std::nullopt;
}

IdentityReport verify_identities(const std::vector<Form>& corpus, const StarDomain& dom, const HomotopyOperator& h_op)
{
    const Point& x0 = dom.center;
    auto H = [&](const Form& w) { return h_op ? h_op(w, x0) : homotopy_H(w, x0); };
    auto d = [](const Form& w) { return exterior_d(w); };

    std::vector<std::vector<IdentityCheck>> per_form(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        const Form& w = corpus[i];
        std::vector<IdentityCheck>& out = per_form[i];
        auto check = [&](const std::string& name, const Form& lhs, const Form& rhs) {
            IdentityCheck c;
            c.identity = name;
            c.form_id = static_cast<int>(i);
            const Form diff = at_grade(lhs, rhs.grade()) - rhs;
            c.pass = diff.is_zero();
            if (!c.pass) c.witness_point = find_witness(diff);
            out.push_back(std::move(c));
        };
        const int k = w.grade();
        const int n = w.dim();
        const Form hw = at_grade(H(w), std::max(k - 1, 0));
        const Form dw = at_grade(d(w), std::min(k + 1, n));
        const Form dhw = at_grade(d(hw), k);
        const Form hdw = at_grade(H(dw), k);
        check("dH+Hd=I-s*", dhw + hdw, w - pullback_center(w, x0));
        check("H^2=0", H(hw), Form(n, std::max(hw.grade() - 1, 0), w.fiber()));
        check("dHd=d", d(H(dw)), dw);
        check("HdH=H", H(d(hw)), hw);
        check("(dH)^2=dH", d(H(dhw)), dhw);
        check("(Hd)^2=Hd", H(d(hdw)), hdw);
    });

    IdentityReport report;
    for (auto& v : per_form) {
        for (auto& c : v) report.checks.push_back(std::move(c));
    }
    return report;
}

} // namespace covtomo
