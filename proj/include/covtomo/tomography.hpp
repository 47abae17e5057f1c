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
#include <covtomo/transport.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace covtomo {

enum class RecoveryMode { Current, Connection, Joint };
std::string to_string(RecoveryMode m);

struct RecoveryReport {
    RecoveryMode mode = RecoveryMode::Current;
    std::string branch;
    ExtensionResult extension;
    CurrentResult current;
    std::optional<Form> c_data;
    std::optional<GridForm> c_grid;
    std::optional<Connection> connection;
    std::map<std::string, double> residuals;
    std::string gauge_note;
    std::vector<std::string> notes;

    // connection mode
    int kernel_dimension = 0;
    bool polynomial_exact = false;
    std::string relation;
    std::vector<Point> sample_points;
    std::vector<Form> sampled_connection; ///< exact pointwise solutions (constant forms)
    Rational relation_residual_max = 0;

    // joint mode
    std::vector<double> objective_history;
    int iterations = 0;
    bool monotone = true;
};

/// J = d^A Phi for the extension Phi of alpha, with the exact datum c.
RecoveryReport recover_current(const BoundaryData& alpha, const Connection& a, const StarDomain& dom,
                               ExtensionMode extension = ExtensionMode::Harmonic, const ExtensionOptions& opts = {},
                               const SeriesConfig& cfg = {});

/// A from A ^ Phi = J - d Phi: a degree-capped polynomial ansatz solved exactly
/// by minimum-norm least squares, plus an exact pointwise solve at rational
/// sample points. Throws Infeasible when some sample point has no solution.
RecoveryReport recover_connection(const BoundaryData& alpha, const Form& j, const StarDomain& dom,
                                  ExtensionMode extension = ExtensionMode::Harmonic, int ansatz_degree = 2,
                                  int sample_count = 33, const ExtensionOptions& opts = {});

struct RegularizationWeights {
    double a = 1.0;
    double b = 1.0;
    /// Weight of the current term Q(d^A Phi); zero reproduces the bare
    /// a Q(A) + b Q(F) functional.
    double gamma = 0.0;
    void validate() const;
};

struct JointOptions {
    int ansatz_degree = 1;
    int iterations = 200;
    int lattice_per_axis = 0; ///< 0 picks 17 / 9 / 5 for n = 1, 2, >= 3
    double initial_scale = 0.5;
    std::uint64_t seed = 1;
    double gradient_tol = 1e-14;
    std::optional<std::vector<double>> initial; ///< explicit starting coefficients
};

/// Gradient descent on a Q(A) + b Q(F) + gamma Q(d^A Phi) over the ansatz
/// coefficients (finite-difference gradients, Barzilai-Borwein steps with
/// Armijo backtracking). Only decreasing steps are accepted.
RecoveryReport recover_joint(const BoundaryData& alpha, const StarDomain& dom, const RegularizationWeights& w,
                             const JointOptions& opts = {});

/// Objective evaluator for the joint mode, exposed for tests and tools.
class JointObjective
{
public:
    JointObjective(const Form& phi, const StarDomain& dom, const RegularizationWeights& w, int ansatz_degree,
                   int lattice_per_axis);
    int size() const { return static_cast<int>(m_basis.size()); }
    double operator()(const std::vector<double>& theta) const;
    Form connection_form(const std::vector<double>& theta) const;
    /// Max over the lattice of |A| and |d^A Phi| coefficients.
    double lattice_norm_A(const std::vector<double>& theta) const;
    double lattice_norm_J(const std::vector<double>& theta) const;
    std::vector<double> coordinates(const Form& a) const;

private:
    int m_dim;
    int m_fiber;
    RegularizationWeights m_w;
    std::vector<Form> m_basis;
    std::vector<std::vector<double>> m_points;
    // per point, per basis: A channels [i][r][c] and dA channels [pair][r][c] flattened
    std::vector<std::vector<std::vector<double>>> m_a;
    std::vector<std::vector<std::vector<double>>> m_da;
    std::vector<std::vector<std::vector<double>>> m_a_wedge_phi;
    std::vector<std::vector<double>> m_dphi;
    void current(std::size_t p, const std::vector<double>& theta, std::vector<double>& out) const;
    void curvature(std::size_t p, const std::vector<double>& theta, std::vector<double>& out) const;
    void connection_at(std::size_t p, const std::vector<double>& theta, std::vector<double>& out) const;
};

} // namespace covtomo
