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
#include <covtomo/linalg.hpp>

#include <optional>
#include <string>
#include <vector>

namespace covtomo {

struct SeriesConfig {
    int max_terms = 64;
    double tail_tol = 1e-12;
    /// Test ball radius as a fraction of the convergence radius k/||A||.
    double eval_region_radius_fraction = 0.5;
    /// Overrides the fraction rule when set.
    std::optional<double> test_radius;
    int lattice_per_axis = 0; ///< 0 picks 33 / 25 / 13 points for n = 1, 2, >= 3
    /// Degree cap while summing the series (terms gain degree every step).
    int series_degree_cap = 128;
    /// Extra degree allowed in the algebraic ansatz above the datum degree.
    int algebraic_extra_degree = 0;
};

struct TransportParts {
    Form phi1;
    Form phi2;
    Form phi3;
};

struct TransportSolution {
    Form phi;
    std::optional<TransportParts> parts;
    int terms_used = 0;
    double tail_norm = 0.0;
    double radius = 0.0;
    double test_radius = 0.0;
    double residual_max = 0.0;
    std::vector<double> term_norms;
    std::string branch;
    /// Algebraic step diagnostics (general solve only).
    int algebraic_rank = 0;
    int algebraic_nullity = 0;
    double algebraic_residual = 0.0;

    explicit TransportSolution(Form p)
        : phi(std::move(p))
    {
    }
};

/// G = I + H(A ^ _).
Form apply_G(const Form& phi, const Connection& a, const StarDomain& dom);

/// Solves d^A phi = 0 with dH phi = c via the alternating series.
TransportSolution solve_homogeneous(const Form& c, const Connection& a, const StarDomain& dom,
                                    const SeriesConfig& cfg = {});

/// Solves d^A phi = J_e for exact J_e, with homogeneous datum c.
TransportSolution solve_exact_inhomogeneous(const Form& c, const Form& j_exact, const Connection& a,
                                            const StarDomain& dom, const SeriesConfig& cfg = {});

/// General right-hand side: split J, solve A ^ phi2 = J_a by exact minimum-norm
/// least squares, project phi3_choice onto ker(A ^ _), then solve the exact
/// remainder for phi1. Throws Infeasible when J_a is not in Im(A ^ _).
TransportSolution solve_general(const Form& j, const Connection& a, const StarDomain& dom,
                                const SeriesConfig& cfg = {}, const std::optional<Form>& phi3_choice = std::nullopt,
                                const std::optional<Form>& c = std::nullopt);

/// Minimum-norm w with A ^ w = target over polynomials of the given degree.
struct WedgeSolve {
    Form w;
    LinearSolveResult info;
};
WedgeSolve solve_wedge_equation(const Connection& a, const Form& target, int max_degree);

/// Orthogonal projection (coefficient inner product) of w onto ker(A ^ _).
Form project_to_kernel(const Connection& a, const Form& w);

struct ZeroDivisorEntry {
    int id = 0;
    double norm_c = 0.0;
    double norm_G_phi = 0.0;
    double defect = 0.0; ///< ||G phi - c|| on the test ball
    bool pass = true;
};

struct ZeroDivisorReport {
    std::vector<ZeroDivisorEntry> entries;
    bool all_pass() const;
};

ZeroDivisorReport check_no_zero_divisors(const std::vector<Form>& c_list, const Connection& a,
                                         const StarDomain& dom, const SeriesConfig& cfg = {},
                                         double tol = 1e-8);

/// Lattice of the series test ball used by the solvers.
std::vector<std::vector<double>> series_test_points(const StarDomain& dom, double radius, const SeriesConfig& cfg);

} // namespace covtomo
