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

#include <covtomo/rational.hpp>

#include <map>
#include <vector>

namespace covtomo {

/// Row-sparse rational matrix.
class SparseMatrix
{
public:
    using Row = std::map<int, Rational>;

    SparseMatrix(int rows, int cols);

    int rows() const { return static_cast<int>(m_rows.size()); }
    int cols() const { return m_cols; }
    const Row& row(int i) const { return m_rows[i]; }

    void add(int r, int c, const Rational& v);
    /// Appends an empty row and returns its index.
    int append_row();

    std::vector<Rational> multiply(const std::vector<Rational>& x) const;
    /// M^T M and M^T b.
    SparseMatrix normal_matrix() const;
    std::vector<Rational> transpose_multiply(const std::vector<Rational>& b) const;

private:
    int m_cols;
    std::vector<Row> m_rows;
};

struct LinearSolveResult {
    /// Minimum-norm least-squares solution.
    std::vector<Rational> x;
    /// True when M x = b holds exactly.
    bool consistent = false;
    int rank = 0;
    /// Dimension of ker(M): the unresolved freedom.
    int nullity = 0;
    /// max_i |(M x - b)_i| as a double.
    double residual_max = 0.0;
    /// Exact residual vector M x - b.
    std::vector<Rational> residual;
};

/// Exact minimum-norm least-squares solve of M x = b via the normal equations.
LinearSolveResult min_norm_least_squares(const SparseMatrix& m, const std::vector<Rational>& b);

/// Basis of ker(M) (exact).
std::vector<std::vector<Rational>> null_space(const SparseMatrix& m);

} // namespace covtomo
