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
#include <covtomo/form_system.hpp>

namespace covtomo {

UnknownSpace::UnknownSpace(int dim_, int grade_, FiberSpec fiber_, int max_degree_)
    : dim(dim_)
    , grade(grade_)
    , fiber(fiber_)
    , max_degree(max_degree_)
{
    const auto monomials = monomials_up_to(dim, std::max(max_degree, 0));
    for (BasisMask b : basis_of_grade(dim, grade)) {
        for (int r = 0; r < fiber.rows(); ++r) {
            for (int c = 0; c < fiber.cols(); ++c) {
                for (const Monomial& m : monomials) columns.emplace_back(TermKey{b, r, c}, m);
            }
        }
    }
}

Form UnknownSpace::basis_element(int col) const
{
    const auto& [key, m] = columns[col];
    Form out(dim, grade, fiber);
    out.add(key.basis, key.row, key.col, Polynomial::monomial(dim, m, 1));
    return out;
}

Form UnknownSpace::element(const std::vector<Rational>& x) const
{
    Form out(dim, grade, fiber);
    for (int j = 0; j < size(); ++j) {
        if (sgn(x[j]) == 0) continue;
        const auto& [key, m] = columns[j];
        out.add(key.basis, key.row, key.col, Polynomial::monomial(dim, m, x[j]));
    }
    return out;
}

std::vector<Rational> UnknownSpace::coordinates(const Form& w) const
{
    std::map<std::pair<TermKey, Monomial>, int> index;
    for (int j = 0; j < size(); ++j) index[columns[j]] = j;
    std::vector<Rational> x(size());
    for (const auto& [key, p] : w.terms()) {
        for (const auto& [m, c] : p.terms()) {
            auto it = index.find({key, m});
            if (it == index.end()) throw Error("form does not lie in the unknown space");
            x[it->second] = c;
        }
    }
    return x;
}

FormEquationBuilder::FormEquationBuilder(int unknowns)
    : m_matrix(0, unknowns)
{
}

void FormEquationBuilder::add_identity(const std::vector<Form>& column_images, const Form& target)
{
    std::map<std::pair<TermKey, Monomial>, int> row_of;
    auto row_for = [&](const TermKey& key, const Monomial& m) {
        auto [it, inserted] = row_of.try_emplace({key, m}, 0);
        if (inserted) {
            it->second = m_matrix.append_row();
            m_rhs.emplace_back(0);
        }
        return it->second;
    };
    for (std::size_t j = 0; j < column_images.size(); ++j) {
        for (const auto& [key, p] : column_images[j].terms()) {
            for (const auto& [m, c] : p.terms()) m_matrix.add(row_for(key, m), static_cast<int>(j), c);
        }
    }
    for (const auto& [key, p] : target.terms()) {
        for (const auto& [m, c] : p.terms()) m_rhs[row_for(key, m)] += c;
    }
}

void FormEquationBuilder::add_row(const std::map<int, Rational>& row, const Rational& rhs)
{
    const int r = m_matrix.append_row();
    for (const auto& [j, v] : row) m_matrix.add(r, j, v);
    m_rhs.push_back(rhs);
}

FormSolve solve_form_equation(const UnknownSpace& space, const std::function<Form(const Form&)>& op, const Form& target)
{
    std::vector<Form> images;
    images.reserve(space.size());
    for (int j = 0; j < space.size(); ++j) images.push_back(op(space.basis_element(j)));
    FormEquationBuilder builder(space.size());
    builder.add_identity(images, target);
    LinearSolveResult info = builder.solve();
    return FormSolve{space.element(info.x), std::move(info)};
}

} // namespace covtomo
