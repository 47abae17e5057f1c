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

#include <covtomo/distribution.hpp>
#include <covtomo/domain.hpp>
#include <covtomo/form.hpp>
#include <covtomo/grid.hpp>

#include <optional>
#include <string>
#include <vector>

namespace covtomo {

/// Boundary data alpha. Exactly one source is populated: the trace of an
/// ambient polynomial form, 1D endpoint values (constant forms), or a
/// floating-point channel function on boundary points.
struct BoundaryData {
    int dim = 1;
    int grade = 0;
    FiberSpec fiber;
    std::optional<Form> polynomial;
    std::optional<Form> lower_value;
    std::optional<Form> upper_value;
    ChannelFunction function;

    static BoundaryData from_form(const Form& ambient);
    static BoundaryData from_endpoints(const Form& lower, const Form& upper);
    static BoundaryData from_function(int dim, int grade, FiberSpec fiber, ChannelFunction f);

    bool exact() const { return polynomial.has_value() || lower_value.has_value(); }
    bool endpoints() const { return lower_value.has_value(); }
    /// Channel values (GridForm channel order) at a boundary point.
    std::vector<double> eval(const std::vector<double>& x) const;
    /// Exact value at a rational boundary point as a constant-coefficient form.
    Form exact_value(const Point& p, const StarDomain& dom) const;
};

enum class Regularity { C0AwayFromCenter, Smooth, Distributional };
std::string to_string(Regularity r);

enum class ExtensionMode { Radial, Heat, Harmonic };
ExtensionMode parse_extension_mode(const std::string& s);
std::string to_string(ExtensionMode m);

/// Channels of a 1D form-valued distribution, in GridForm channel order.
struct DistributionForm {
    int grade = 0;
    FiberSpec fiber;
    std::vector<Distribution1D> channels;
};

struct ExtensionResult {
    ExtensionMode mode = ExtensionMode::Harmonic;
    Regularity regularity = Regularity::Smooth;
    int grade = 0;
    FiberSpec fiber;
    std::optional<Form> exact;
    std::optional<GridForm> grid;
    std::optional<DistributionForm> distribution;
    /// Radial extensions in dimension > 1 with nonconstant data.
    bool center_singularity = false;
};

struct ExtensionOptions {
    double T = 0.0; ///< heat time; required for heat mode
    int steps = 100;
    double tol = 1e-10;
    /// Exact polynomial solves (1D affine, Fischer decomposition on spheres)
    /// whenever the data allow them.
    bool prefer_exact = true;
};

/// Ray-constant extension; grade >= 1 data are pulled back along the radial
/// retraction onto the boundary.
ExtensionResult extend_radial(const BoundaryData& alpha, const StarDomain& dom);
ExtensionResult extend_heat(const BoundaryData& alpha, const StarDomain& dom, double T, int steps = 100);
ExtensionResult extend_harmonic(const BoundaryData& alpha, const StarDomain& dom, double tol = 1e-10,
                                bool prefer_exact = true);
ExtensionResult extend(const BoundaryData& alpha, const StarDomain& dom, ExtensionMode mode,
                       const ExtensionOptions& opts = {});

/// Radial retraction of a point onto the boundary along the ray from the center.
std::vector<double> radial_retraction(const StarDomain& dom, const std::vector<double>& x);
/// Pointwise value of the radial extension (channels), for any non-center x.
std::vector<double> radial_value(const BoundaryData& alpha, const StarDomain& dom, const std::vector<double>& x);

struct CurrentResult {
    std::optional<Form> exact;
    std::optional<GridForm> grid;
    std::optional<DistributionForm> distribution;
    bool center_singularity = false;
};

/// J_ext = d Phi + A ^ Phi.
CurrentResult extension_current(const ExtensionResult& phi, const Connection& a);

/// Exact harmonic polynomial with the trace of p on the sphere (coordinate Laplacian).
Polynomial harmonic_on_sphere(const Polynomial& p, const Point& center, const Rational& radius);
Polynomial coordinate_laplacian(const Polynomial& p);

} // namespace covtomo
