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
#include <covtomo/errors.hpp>
#include <covtomo/linalg.hpp>

#include <algorithm>
#include <cmath>

namespace covtomo {

SparseMatrix::SparseMatrix(int rows, int cols)
    : m_cols(cols)
    , m_rows(rows)
{
}

void SparseMatrix::add(int r, int c, const Rational& v)
{
    if (r < 0 || r >= rows() || c < 0 || c >= m_cols) throw Error("SparseMatrix::add out of range");
    if (sgn(v) == 0) return;
    auto [it, inserted] = m_rows[r].try_emplace(c, v);
    if (!inserted) {
        it->second += v;
        if (sgn(it->second) == 0) m_rows[r].erase(it);
    }
}

int SparseMatrix::append_row()
{
    m_rows.emplace_back();
    return rows() - 1;
}

std::vector<Rational> SparseMatrix::multiply(const std::vector<Rational>& x) const
{
    std::vector<Rational> out(rows());
    for (int i = 0; i < rows(); ++i) {
        for (const auto& [c, v] : m_rows[i]) out[i] += v * x[c];
    }
    return out;
}

SparseMatrix SparseMatrix::normal_matrix() const
{
    // Column-major view first so each (j,k) product is accumulated once per row.
    SparseMatrix out(m_cols, m_cols);
    for (const auto& row : m_rows) {
        for (const auto& [j, vj] : row) {
            for (const auto& [k, vk] : row) out.add(j, k, vj * vk);
        }
    }
    return out;
}

std::vector<Rational> SparseMatrix::transpose_multiply(const std::vector<Rational>& b) const
{
    std::vector<Rational> out(m_cols);
    for (int i = 0; i < rows(); ++i) {
        if (sgn(b[i]) == 0) continue;
        for (const auto& [c, v] : m_rows[i]) out[c] += v * b[i];
    }
    return out;
}

namespace {

struct Echelon {
    // Reduced rows keyed by pivot column; each row normalized so pivot = 1 and
    // every other pivot column is eliminated.
    std::map<int, SparseMatrix::Row> rows;
    std::map<int, Rational> rhs;
    bool consistent = true;
};

void axpy(SparseMatrix::Row& target, const Rational& factor, const SparseMatrix::Row& source)
{
    for (const auto& [c, v] : source) {
        auto [it, inserted] = target.try_emplace(c, factor * v);
        if (!inserted) {
            it->second += factor * v;
            if (sgn(it->second) == 0) target.erase(it);
        }
    }
}

Echelon reduce(const SparseMatrix& m, const std::vector<Rational>* b)
{
    Echelon ech;
    std::vector<int> order(m.rows());
    for (int i = 0; i < m.rows(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int c) { return m.row(a).size() < m.row(c).size(); });

    for (int idx : order) {
        SparseMatrix::Row row = m.row(idx);
        Rational rhs = b ? (*b)[idx] : Rational(0);
        // Pivot rows carry no other pivot column, so one pass suffices.
        std::vector<std::pair<int, Rational>> hits;
        for (const auto& [c, v] : row) {
            if (ech.rows.count(c)) hits.emplace_back(c, v);
        }
        for (const auto& [c, v] : hits) {
            const Rational factor = -v;
            axpy(row, factor, ech.rows.at(c));
            rhs += factor * ech.rhs.at(c);
        }
        if (row.empty()) {
            if (sgn(rhs) != 0) ech.consistent = false;
            continue;
        }
        // Pivot on the first remaining column.
        const int pc = row.begin()->first;
        const Rational inv = 1 / row.begin()->second;
        for (auto& [c, v] : row) v *= inv;
        rhs *= inv;
        // Back-eliminate pc from existing rows.
        for (auto& [opc, orow] : ech.rows) {
            auto hit = orow.find(pc);
            if (hit == orow.end()) continue;
            const Rational factor = -hit->second;
            axpy(orow, factor, row);
            ech.rhs[opc] += factor * rhs;
        }
        ech.rows.emplace(pc, std::move(row));
        ech.rhs.emplace(pc, rhs);
    }
    return ech;
}

std::vector<std::vector<Rational>> null_basis_from(const Echelon& ech, int cols)
{
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < cols; ++f) {
        if (ech.rows.count(f)) continue;
        std::vector<Rational> z(cols);
        z[f] = 1;
        for (const auto& [pc, row] : ech.rows) {
            auto it = row.find(f);
            if (it != row.end()) z[pc] = -it->second;
        }
        basis.push_back(std::move(z));
    }
    return basis;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b)
{
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    }
    return s;
}

/// Projects x onto the orthogonal complement of span(basis) in place.
void remove_span(std::vector<Rational>& x, const std::vector<std::vector<Rational>>& basis)
{
    if (basis.empty()) return;
    const int k = static_cast<int>(basis.size());
    SparseMatrix gram(k, k);
    std::vector<Rational> rhs(k);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            Rational g = dot(basis[i], basis[j]);
            gram.add(i, j, g);
            if (i != j) gram.add(j, i, g);
        }
        rhs[i] = dot(basis[i], x);
    }
    Echelon ech = reduce(gram, &rhs);
    for (const auto& [pc, row] : ech.rows) {
        const Rational& coeff = ech.rhs.at(pc);
        if (sgn(coeff) == 0) continue;
        for (std::size_t t = 0; t < x.size(); ++t) {
            if (sgn(basis[pc][t]) != 0) x[t] -= coeff * basis[pc][t];
        }
    }
}

} // namespace

std::vector<std::vector<Rational>> null_space(const SparseMatrix& m)
{
    Echelon ech = reduce(m, nullptr);
    return null_basis_from(ech, m.cols());
}

LinearSolveResult min_norm_least_squares(const SparseMatrix& m, const std::vector<Rational>& b)
{
    if (static_cast<int>(b.size()) != m.rows()) throw DimensionMismatch("rhs length mismatch");
    LinearSolveResult result;
    const SparseMatrix normal = m.normal_matrix();
    const std::vector<Rational> mtb = m.transpose_multiply(b);
    Echelon ech = reduce(normal, &mtb);
    if (!ech.consistent) throw SolverFailure("normal equations inconsistent (internal error)");

    result.x.assign(m.cols(), Rational(0));
    for (const auto& [pc, row] : ech.rows) result.x[pc] = ech.rhs.at(pc);
    auto basis = null_basis_from(ech, m.cols());
    remove_span(result.x, basis);

    result.rank = static_cast<int>(ech.rows.size());
    result.nullity = static_cast<int>(basis.size());
    result.residual = m.multiply(result.x);
    for (int i = 0; i < m.rows(); ++i) result.residual[i] -= b[i];
    result.consistent = true;
    for (const auto& r : result.residual) {
        if (sgn(r) != 0) result.consistent = false;
        result.residual_max = std::max(result.residual_max, std::abs(r.get_d()));
    }
    return result;
}

} // namespace covtomo
