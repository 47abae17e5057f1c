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

#include <covtomo/form.hpp>
#include <covtomo/linalg.hpp>

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace covtomo {

/// Polynomial forms of a fixed grade and fiber with coefficients of degree
/// at most max_degree, coordinatized by (channel, monomial) columns.
struct UnknownSpace {
    int dim = 1;
    int grade = 0;
    FiberSpec fiber;
    int max_degree = 0;
    std::vector<std::pair<TermKey, Monomial>> columns;

    UnknownSpace(int dim, int grade, FiberSpec fiber, int max_degree);
    int size() const { return static_cast<int>(columns.size()); }
    Form basis_element(int col) const;
    Form element(const std::vector<Rational>& x) const;
    /// Coordinates of a form in this space; throws if it does not fit.
    std::vector<Rational> coordinates(const Form& w) const;
};

/// Row bookkeeping for equations stated as "linear form expression = target".
class FormEquationBuilder
{
public:
    explicit FormEquationBuilder(int unknowns);

    /// Adds the coefficient identities column_images[j] * x_j = target.
    void add_identity(const std::vector<Form>& column_images, const Form& target);
    /// Adds one scalar row sum_j row[j] x_j = rhs.
    void add_row(const std::map<int, Rational>& row, const Rational& rhs);

    const SparseMatrix& matrix() const { return m_matrix; }
    const std::vector<Rational>& rhs() const { return m_rhs; }
    LinearSolveResult solve() const { return min_norm_least_squares(m_matrix, m_rhs); }

private:
    SparseMatrix m_matrix;
    std::vector<Rational> m_rhs;
};

struct FormSolve {
    Form solution;
    LinearSolveResult info;
};

/// Minimum-norm least-squares solution u in the space of op(u) = target.
FormSolve solve_form_equation(const UnknownSpace& space, const std::function<Form(const Form&)>& op,
                              const Form& target);

} // namespace covtomo
