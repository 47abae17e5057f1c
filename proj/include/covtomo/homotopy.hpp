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

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace covtomo {

/// Linear homotopy operator for the ray homotopy x0 + t (x - x0):
/// (H w)(x) = int_0^1 t^{k-1} i_K w|_{x0 + t(x-x0)} dt, K = (x - x0) at x.
/// Zero on grade-0 forms.
Form homotopy_H(const Form& w, const Point& x0);
Form homotopy_H(const Form& w, const StarDomain& dom);

/// w = exact_part + antiexact_part + center_value.
struct Decomposition {
    Form exact_part;     ///< d H w
    Form antiexact_part; ///< H d w
    Form center_value;   ///< s* w, nonzero only in grade 0
};

Decomposition decompose(const Form& w, const StarDomain& dom);

/// Closed grade >= 1 forms (equivalently dHw = w on a star-shaped domain).
bool is_exact(const Form& w);
/// H w = 0 and w(x0) = 0.
bool is_antiexact(const Form& w, const Point& x0);

using HomotopyOperator = std::function<Form(const Form&, const Point&)>;

struct IdentityCheck {
    std::string identity;
    int form_id = 0;
    bool pass = true;
    /// A point where the two sides differ, for failures.
    std::optional<Point> witness_point;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
    std::vector<IdentityCheck> failures() const;
};

/// Checks dH + Hd = I - s*, H^2 = 0, dHd = d, HdH = H, (dH)^2 = dH and
/// (Hd)^2 = Hd with exact equality on every form. The operator is
/// injectable so the harness itself can be mutation-tested.
IdentityReport verify_identities(const std::vector<Form>& corpus, const StarDomain& dom,
                                 const HomotopyOperator& h_op = {});

/// Small integer/half-integer point where a nonzero form has a nonzero coefficient.
std::optional<Point> find_witness(const Form& difference);

} // namespace covtomo
