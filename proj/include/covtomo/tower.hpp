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

#include <covtomo/extension.hpp>
#include <covtomo/metric_dual.hpp>
#include <covtomo/transport.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace covtomo {

enum class LevelKind { Covariant, Contravariant };
std::string to_string(LevelKind k);

/// One first-order operator: D_A = d + A ^ _ or the contravariant delta + i_X.
struct LevelSpec {
    LevelKind kind = LevelKind::Covariant;
    std::optional<Connection> connection;
    std::vector<Polynomial> vector_field;
    /// Exact (covariant) or coexact (contravariant) datum for this level's solve.
    std::optional<Form> aux;

    static LevelSpec covariant(Connection a, std::optional<Form> aux = std::nullopt);
    static LevelSpec contravariant(std::vector<Polynomial> x, std::optional<Form> aux = std::nullopt);
    int shift() const { return kind == LevelKind::Covariant ? 1 : -1; }
    int dim() const;
};

/// Levels run from D_1 (applied first) to D_k (the one carrying J and alpha).
struct TowerSpec {
    std::vector<LevelSpec> levels;
    BoundaryData alpha;
    Form J;
    /// Grade of the unknown phi_i of each level.
    std::vector<int> grades;
};

/// Validates the grade chain; throws DimensionMismatch naming the level.
TowerSpec decompose_operator(std::vector<LevelSpec> levels, const Form& j, const BoundaryData& alpha);

Form apply_level(const LevelSpec& level, const Form& phi);
/// delta chi + i_X chi.
Form contravariant_d(const Form& chi, const std::vector<Polynomial>& x);

/// Solves delta chi + i_X chi = rho through chi = *^{-1} psi, where psi obeys a
/// covariant equation with connection +-X^flat.
TransportSolution solve_contravariant(const Form& rho, const std::vector<Polynomial>& x, int fiber_dim,
                                      const StarDomain& dom, const SeriesConfig& cfg = {},
                                      const std::optional<Form>& aux = std::nullopt);

struct LevelReport {
    int level = 0;
    LevelKind kind = LevelKind::Covariant;
    bool solved = false;
    std::string branch;
    double residual = 0.0;
    double test_radius = 0.0;
    int terms_used = 0;
    double tail_norm = 0.0;
    std::optional<double> boundary_misfit;
    std::string message;
};

enum class TowerStatus { Solved, Blocked };

struct TowerSolution {
    std::vector<Form> phis; ///< phi_1 .. phi_k, solved levels only
    std::vector<LevelReport> level_reports;
    TowerStatus status = TowerStatus::Blocked;
    int blocked_level = 0;
    std::string reason;
    /// || D_k ... D_1 phi_1 - J || on the test lattice (solved towers).
    double composed_residual = 0.0;
};

struct TowerConfig {
    SeriesConfig series;
    double tol = 1e-8;
    ExtensionMode extension = ExtensionMode::Harmonic;
    ExtensionOptions extension_options;
    int boundary_points = 64;
};

TowerSolution solve_tower(const TowerSpec& spec, const StarDomain& dom, const TowerConfig& cfg = {});

struct MaxwellOptions {
    int degree = 4;           ///< coefficient degree of the coexact c1
    int boundary_points = 160; ///< rational sample points for j* F = alpha
    int lattice_per_axis = 13;
};

struct MaxwellResult {
    Form A;
    Form F;
    Form hJ;
    Form c1;
    std::map<std::string, double> residuals;
    int c1_freedom = 0;
    int boundary_rows = 0;
    int constraint_rank = 0;
    std::string gauge_note;
};

/// dA = F, delta F = J in R^3: F = c1 + hJ with coexact c1 fixed by dF = 0 and
/// the boundary trace, then A = HF. Throws ConservationViolation when
/// delta J != 0 and Infeasible when the constraints have no exact solution.
MaxwellResult maxwell_reconstruct(const Form& j, const std::optional<BoundaryData>& alpha_f, const StarDomain& dom,
                                  const MaxwellOptions& opts = {});

} // namespace covtomo
