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
#include <covtomo/metric_dual.hpp>
#include <covtomo/parallel.hpp>

#include <bit>

namespace covtomo {

namespace {

int merge_sign_masks(BasisMask a, BasisMask b)
{
    int swaps = 0;
    for (int j : basis_indices(b)) swaps += std::popcount(a >> (j + 1));
    return swaps % 2 == 0 ? 1 : -1;
}

void check_ctx(const Form& w, const MetricContext& ctx)
{
    if (w.dim() != ctx.dim) throw DimensionMismatch("metric context dimension mismatch");
}

} // namespace

Form hodge_star(const Form& w, const MetricContext& ctx)
{
    check_ctx(w, ctx);
    const int n = w.dim();
    const BasisMask full = (1u << n) - 1u;
    Form out(n, n - w.grade(), w.fiber());
    for (const auto& [k, p] : w.terms()) {
        const BasisMask comp = full & ~k.basis;
        Polynomial c = p;
        if (merge_sign_masks(k.basis, comp) < 0) c *= Rational(-1);
        out.add(comp, k.row, k.col, c);
    }
    return out;
}

Form hodge_star_inverse(const Form& w, const MetricContext& ctx)
{
    const int k = w.grade();
    const int n = w.dim();
    Form out = hodge_star(w, ctx);
    if ((k * (n - k)) % 2) out *= Rational(-1);
    return out;
}

Form grade_involution(const Form& w)
{
    Form out = w;
    if (w.grade() % 2) out *= Rational(-1);
    return out;
}

Form codifferential(const Form& w, const MetricContext& ctx)
{
    if (w.grade() == 0) return Form(w.dim(), 0, w.fiber());
    return hodge_star_inverse(exterior_d(hodge_star(grade_involution(w), ctx)), ctx);
}

Form cohomotopy_h(const Form& w, const StarDomain& dom, const MetricContext& ctx)
{
    if (w.grade() == w.dim()) return Form(w.dim(), w.dim(), w.fiber());
    return grade_involution(hodge_star_inverse(homotopy_H(hodge_star(w, ctx), dom.center), ctx));
}

Form boundary_projection_S(const Form& w, const StarDomain& dom, const MetricContext& ctx)
{
    return hodge_star_inverse(pullback_center(hodge_star(w, ctx), dom.center), ctx);
}

Form laplace_beltrami(const Form& w, const MetricContext& ctx)
{
    Form out(w.dim(), w.grade(), w.fiber());
    if (w.grade() > 0) out += exterior_d(codifferential(w, ctx));
    if (w.grade() < w.dim()) out += codifferential(exterior_d(w), ctx);
    return out;
}

CoDecomposition codecompose(const Form& w, const StarDomain& dom, const MetricContext& ctx)
{
    Form coexact(w.dim(), w.grade(), w.fiber());
    if (w.grade() < w.dim()) coexact = codifferential(cohomotopy_h(w, dom, ctx), ctx);
    Form anticoexact(w.dim(), w.grade(), w.fiber());
    if (w.grade() > 0) anticoexact = cohomotopy_h(codifferential(w, ctx), dom, ctx);
    return CoDecomposition{coexact, anticoexact, boundary_projection_S(w, dom, ctx)};
}

IdentityReport verify_dual_identities(const std::vector<Form>& corpus, const StarDomain& dom)
{
    std::vector<std::vector<IdentityCheck>> per_form(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        const Form& w = corpus[i];
        const MetricContext ctx{w.dim()};
        auto check = [&](const std::string& name, const Form& diff) {
            IdentityCheck c;
            c.identity = name;
            c.form_id = static_cast<int>(i);
            c.pass = diff.is_zero();
            if (!c.pass) c.witness_point = find_witness(diff);
            per_form[i].push_back(std::move(c));
        };
        const CoDecomposition parts = codecompose(w, dom, ctx);
        check("h delta+delta h=I-S", parts.coexact + parts.anticoexact - (w - parts.center_term));
        check("delta^2=0", codifferential(codifferential(w, ctx), ctx));
    });
    IdentityReport report;
    for (auto& v : per_form) {
        for (auto& c : v) report.checks.push_back(std::move(c));
    }
    return report;
}

Form flat(const std::vector<Polynomial>& field)
{
    if (field.empty()) throw DimensionMismatch("flat of an empty vector field");
    const int n = field.front().dim();
    Form out(n, 1);
    for (int i = 0; i < n; ++i) out.add(1u << i, field[i]);
    return out;
}

} // namespace covtomo
