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
#pragma once

#include <covtomo/domain.hpp>
#include <covtomo/form.hpp>
#include <covtomo/homotopy.hpp>

namespace covtomo {

/// Euclidean metric in standard orientation. A diagonal metric would slot in here.
struct MetricContext {
    int dim = 1;
};

Form hodge_star(const Form& w, const MetricContext& ctx);
/// Inverse star: (-1)^{k(n-k)} * on grade k.
Form hodge_star_inverse(const Form& w, const MetricContext& ctx);
/// eta w = (-1)^k w.
Form grade_involution(const Form& w);

/// delta = *^{-1} d * eta, composed literally.
Form codifferential(const Form& w, const MetricContext& ctx);
/// h = eta *^{-1} H *.
Form cohomotopy_h(const Form& w, const StarDomain& dom, const MetricContext& ctx);
/// S = *^{-1} s* *; nonzero only on top forms.
Form boundary_projection_S(const Form& w, const StarDomain& dom, const MetricContext& ctx);
/// d delta + delta d. On functions this is minus the coordinate Laplacian.
Form laplace_beltrami(const Form& w, const MetricContext& ctx);

struct CoDecomposition {
    Form coexact;     ///< delta h w
    Form anticoexact; ///< h delta w
    Form center_term; ///< S w, top grade only
};

CoDecomposition codecompose(const Form& w, const StarDomain& dom, const MetricContext& ctx);

/// h delta + delta h = I - S and delta^2 = 0, exactly, on every form.
IdentityReport verify_dual_identities(const std::vector<Form>& corpus, const StarDomain& dom);

/// Musical flat of a polynomial vector field: X^i dx^i.
Form flat(const std::vector<Polynomial>& field);

} // namespace covtomo
