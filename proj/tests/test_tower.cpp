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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_main.hpp"

#include <covtomo/corpus.hpp>
#include <covtomo/errors.hpp>
#include <covtomo/tower.hpp>

using namespace covtomo;
using testing::F;
using testing::P;
using testing::Q;

namespace {

const StarDomain ball = StarDomain::sphere({0, 0, 0}, 1);
const MetricContext ctx3{3};

std::vector<Polynomial> field(int dim, std::vector<const char*> comps)
{
    std::vector<Polynomial> out;
    for (const char* c : comps) out.push_back(P(dim, c));
    return out;
}

} // namespace

TEST_CASE("grade bookkeeping")
{
    const auto x = field(3, {"1", "0", "0"});
    const Connection a = Connection::zero(3);
    // D o contravariant: phi2 grade 1, phi1 grade 2
    const TowerSpec s = decompose_operator({LevelSpec::contravariant(x), LevelSpec::covariant(a)}, F(3, "dx^dy"),
                                           BoundaryData::from_form(F(3, "x dy")));
    CHECK(s.grades == std::vector<int>{2, 1});

    const TowerSpec one = decompose_operator({LevelSpec::covariant(a)}, F(3, "dx^dy"), BoundaryData::from_form(F(3, "x dy")));
    CHECK(one.grades == std::vector<int>{1});

    // d o delta o d on a 1-form unknown telescopes 1 -> 2 -> 1 -> 2
    const auto d = LevelSpec::covariant(a);
    const auto delta = LevelSpec::contravariant(field(3, {"0", "0", "0"}));
    const TowerSpec chain = decompose_operator({d, delta, d}, F(3, "dx^dy"), BoundaryData::from_form(F(3, "x dy")));
    CHECK(chain.grades == std::vector<int>{1, 2, 1});
    CHECK_THROWS_AS(decompose_operator({d, delta, d}, F(3, "dx"), BoundaryData::from_form(F(3, "x dy"))),
                    DimensionMismatch);
    // delta o delta from grade 2 is fine; d o d from a function drops below grade 0
    CHECK(decompose_operator({delta, delta}, F(3, "1"), BoundaryData::from_form(F(3, "x dy"))).grades ==
          std::vector<int>{2, 1});
    CHECK_THROWS_AS(decompose_operator({d, d}, F(3, "dx"), BoundaryData::from_form(F(3, "x"))), DimensionMismatch);
}

TEST_CASE("contravariant solves by duality")
{
    FormRng rng(11);
    DegreeCapScope cap(128);
    const auto x = field(3, {"1/4", "y/8", "0"});
    for (int g = 1; g <= 2; ++g) {
        for (int rep = 0; rep < 3; ++rep) {
            const Form chi = rng.form(3, g, 2);
            const Form rho = contravariant_d(chi, x);
            if (rho.is_zero()) continue;
            try {
                const TransportSolution s = solve_contravariant(rho, x, 1, ball);
                const auto pts = series_test_points(ball, s.test_radius, {});
                CHECK(sup_norm_points(contravariant_d(s.phi, x) - rho, pts) < 1e-8);
            } catch (const Infeasible&) {
                // antiexact part outside Im(X^flat ^ _) for this sample
            }
        }
    }
    // exact dual right-hand side always solves
    const Form chi = F(3, "(y*z) dy^dz");
    const Form rho = contravariant_d(chi, field(3, {"1/4", "0", "0"}));
    const TransportSolution s = solve_contravariant(rho, field(3, {"1/4", "0", "0"}), 1, ball);
    CHECK(s.residual_max < 1e-8);
}

TEST_CASE("two-level tower with manufactured data")
{
    const auto x = field(3, {"1/4", "0", "0"});
    const Connection a(F(3, "1/2 dz"));
    const Form phi2 = contravariant_d(F(3, "(y*z) dy^dz"), x);
    const Form j = covariant_d(phi2, a);
    const auto levels = std::vector<LevelSpec>{LevelSpec::contravariant(x), LevelSpec::covariant(a)};

    const TowerSolution sol = solve_tower(decompose_operator(levels, j, BoundaryData::from_form(phi2)), ball);
    REQUIRE(sol.status == TowerStatus::Solved);
    CHECK(sol.phis.size() == 2);
    CHECK(sol.phis[1] == phi2);
    CHECK(sol.composed_residual < 1e-8);
    for (const LevelReport& r : sol.level_reports) CHECK(r.residual < 1e-8);

    const Form broken = j + insert_radial(Form::volume(3), ball.center);
    const TowerSolution bad = solve_tower(decompose_operator(levels, broken, BoundaryData::from_form(phi2)), ball);
    CHECK(bad.status == TowerStatus::Blocked);
    CHECK(bad.blocked_level == 2);
    CHECK(bad.reason.find("Im(A^_)") != std::string::npos);
}

TEST_CASE("trace mismatch blocks the top level")
{
    const Connection a(F(3, "1/2 dz"));
    // extra compatible current D_A(x dx): solvable, but the correction moves the trace
    const Form j = covariant_d(F(3, "x dx"), a) + covariant_d(F(3, "x dy"), a);
    const TowerSolution sol =
        solve_tower(decompose_operator({LevelSpec::covariant(a)}, j, BoundaryData::from_form(F(3, "x dy"))), ball);
    REQUIRE(sol.status == TowerStatus::Blocked);
    CHECK(sol.blocked_level == 1);
    CHECK(sol.reason.find("trace") != std::string::npos);
    CHECK(sol.level_reports[0].boundary_misfit.value() > 1e-3);
}

TEST_CASE("all-zero tower")
{
    const auto x = field(3, {"1", "0", "0"});
    const TowerSolution sol = solve_tower(
        decompose_operator({LevelSpec::contravariant(x), LevelSpec::covariant(Connection::zero(3))}, Form(3, 2),
                           BoundaryData::from_form(Form(3, 1))),
        ball);
    REQUIRE(sol.status == TowerStatus::Solved);
    for (const Form& p : sol.phis) CHECK(p.is_zero());
}

TEST_CASE("Maxwell as a tower")
{
    const Form astar = F(3, "(y*z) dx + (x^2 - z^2) dy + (x*y) dz");
    const Form fstar = exterior_d(astar);
    const Form jstar = codifferential(fstar, ctx3);
    const TowerSolution sol = solve_tower(
        decompose_operator({LevelSpec::covariant(Connection::zero(3)), LevelSpec::contravariant(field(3, {"0", "0", "0"}))},
                           jstar, BoundaryData::from_form(fstar)),
        ball);
    REQUIRE(sol.status == TowerStatus::Solved);
    CHECK(sol.phis[1] == fstar);
    CHECK(exterior_d(sol.phis[0]) == fstar);
    CHECK(sol.composed_residual == 0.0);
}

TEST_CASE("Maxwell reconstruction")
{
    const Form astar = F(3, "(x*y^2 - z^3/3) dx + (x^2*z + y) dy + (x*y*z - 2*y^3) dz");
    const Form fstar = exterior_d(astar);
    const Form jstar = codifferential(fstar, ctx3);
    CHECK(codifferential(jstar, ctx3).is_zero());
    const MaxwellResult m = maxwell_reconstruct(jstar, BoundaryData::from_form(fstar), ball);
    CHECK(m.F == fstar);
    CHECK(exterior_d(m.A) == fstar);
    CHECK(m.residuals.at("delta_dA_minus_J") == 0.0);
    CHECK(m.residuals.at("dF") == 0.0);
    CHECK(m.residuals.at("boundary_misfit") == 0.0);
    CHECK(!m.gauge_note.empty());

    // h J satisfies delta h J = J - S J exactly
    CHECK(codifferential(m.hJ, ctx3) == jstar - boundary_projection_S(jstar, ball, ctx3));

    const MaxwellResult zero = maxwell_reconstruct(Form(3, 1), BoundaryData::from_form(Form(3, 2)), ball);
    CHECK(zero.F.is_zero());
    CHECK(zero.A.is_zero());

    const MaxwellResult free = maxwell_reconstruct(jstar, std::nullopt, ball);
    CHECK(free.residuals.at("dF") == 0.0);
    CHECK(free.residuals.at("deltaF_minus_J") == 0.0);
    CHECK(free.c1_freedom > 0);

    CHECK_THROWS_AS(maxwell_reconstruct(F(3, "x dx"), std::nullopt, ball), ConservationViolation);
}
