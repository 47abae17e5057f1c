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
#include <covtomo/homotopy.hpp>
#include <covtomo/transport.hpp>

using namespace covtomo;
using testing::F;
using testing::P;
using testing::Q;

namespace {

const StarDomain disk2 = StarDomain::sphere({Q(0), Q(0)}, 2);
const StarDomain ball3 = StarDomain::sphere({Q(0), Q(0), Q(0)}, 1);

SeriesConfig at_radius(double r)
{
    SeriesConfig cfg;
    cfg.test_radius = r;
    return cfg;
}

// A = N (x dy - y dx) with N nilpotent, acting on R^2-valued forms in R^3.
Connection nilpotent_connection()
{
    Form a(3, 1, FiberSpec{2, true});
    a.add(2u, 0, 1, P(3, "x"));
    a.add(1u, 0, 1, P(3, "-y"));
    return Connection(a);
}

Form vector_form(const Form& first, const Form& second)
{
    Form out = first.embedded(FiberSpec{2, false}, 0, 0);
    out += second.embedded(FiberSpec{2, false}, 1, 0);
    return out;
}

} // namespace

TEST_CASE("apply_G")
{
    const Form phi = F(2, "x*y dx + dy");
    CHECK(apply_G(phi, Connection::zero(2), disk2) == phi);
    CHECK(apply_G(Form(2, 1), Connection::scalar(F(2, "3 dx")), disk2).is_zero());
    // H(dx^dy) = (x dy - y dx)/2 at the origin
    const Form g = apply_G(F(2, "dy"), Connection::scalar(F(2, "2/3 dx")), disk2);
    CHECK(g == F(2, "dy") + Q(2, 3) * F(2, "1/2*x dy - 1/2*y dx"));
}

TEST_CASE("solve_homogeneous")
{
    const TransportSolution zero = solve_homogeneous(F(2, "dy"), Connection::zero(2), disk2);
    CHECK(zero.phi == F(2, "dy"));
    CHECK(zero.terms_used == 1);

    // c in ker(A ^ _): the gauge mode is its own solution
    const TransportSolution gauge = solve_homogeneous(F(2, "3 dx"), Connection::scalar(F(2, "1/2 dx")), disk2);
    CHECK(gauge.phi == F(2, "3 dx"));
    CHECK(gauge.branch == "gauge-mode");

    const Connection a = Connection::scalar(F(2, "1/2 dx"));
    const TransportSolution s = solve_homogeneous(F(2, "dy"), a, disk2, at_radius(1.0));
    CHECK(s.radius == doctest::Approx(2.0));
    CHECK(s.residual_max < 1e-8);
    CHECK(s.terms_used <= 40);
    for (std::size_t l = 1; l < s.term_norms.size(); ++l) {
        if (s.term_norms[l - 1] > 1e-300) CHECK(s.term_norms[l] / s.term_norms[l - 1] <= 0.5 + 0.05);
    }
    CHECK_THROWS_AS(solve_homogeneous(F(2, "y dx"), a, disk2), NotExact);
    CHECK_THROWS_AS(solve_homogeneous(F(2, "1"), a, disk2), Error);
}

TEST_CASE("gauge modes shift solutions by themselves")
{
    const Connection a = Connection::scalar(F(2, "1/2 dx"));
    const Form c = F(2, "dy + x dx");
    const Form mode = F(2, "(x^2 + 1) dx");
    REQUIRE(wedge(a.form, mode).is_zero());
    const Form phi = solve_homogeneous(c, a, disk2, at_radius(1.0)).phi;
    const Form phi_shifted = solve_homogeneous(c + mode, a, disk2, at_radius(1.0)).phi;
    CHECK(phi_shifted - phi == mode);
}

TEST_CASE("series diverges outside the radius of a growing connection")
{
    const Connection a = Connection::scalar(F(2, "8 dx"));
    SeriesConfig cfg = at_radius(2.0);
    cfg.max_terms = 6;
    CHECK_THROWS_AS(solve_homogeneous(F(2, "dy"), a, disk2, cfg), Divergence);
}

TEST_CASE("solve_exact_inhomogeneous")
{
    const TransportSolution top = solve_exact_inhomogeneous(Form(2, 1), F(2, "dx^dy"), Connection::zero(2), disk2);
    CHECK(top.phi == homotopy_H(F(2, "dx^dy"), disk2));
    CHECK(top.residual_max == 0.0);

    const Connection a = Connection::scalar(F(2, "1/2 dx"));
    const TransportSolution hom = solve_homogeneous(F(2, "dy"), a, disk2, at_radius(1.0));
    const TransportSolution same = solve_exact_inhomogeneous(F(2, "dy"), Form(2, 2), a, disk2, at_radius(1.0));
    CHECK(same.phi == hom.phi);

    const Connection ay = Connection::scalar(F(2, "1/4 dy"));
    const Form j = F(2, "(1 + x) dx^dy");
    const TransportSolution s = solve_exact_inhomogeneous(F(2, "dx"), j, ay, disk2, at_radius(1.0));
    CHECK(s.residual_max < 1e-8);
    CHECK_THROWS_AS(solve_exact_inhomogeneous(Form(3, 1), F(3, "x dy^dz + z dx^dy"), Connection::zero(3), ball3), NotExact);
}

TEST_CASE("solve_general: exact current takes the direct path")
{
    const Connection a = Connection::scalar(F(2, "1/4 dy"));
    const Form j = F(2, "(1 + x) dx^dy");
    const TransportSolution g = solve_general(j, a, disk2, at_radius(1.0), std::nullopt, F(2, "dx"));
    const TransportSolution e = solve_exact_inhomogeneous(F(2, "dx"), j, a, disk2, at_radius(1.0));
    REQUIRE(g.parts.has_value());
    CHECK(g.parts->phi2.is_zero());
    CHECK(g.phi == e.phi);
}

TEST_CASE("solve_general: manufactured antiexact current")
{
    const Connection a = nilpotent_connection();
    const Form w = F(3, "(x^2 + y^2) dz - x*z dx - y*z dy");
    const Form u = F(3, "y dx + z^2 dz - x dy");
    const Form phi_star = vector_form(u, w);
    const Form j = covariant_d(phi_star, a);
    const Decomposition split = decompose(j, ball3);
    REQUIRE_FALSE(split.antiexact_part.is_zero());
    CHECK(split.antiexact_part == wedge(a.form, vector_form(Form(3, 1), w)));

    const TransportSolution s = solve_general(j, a, ball3);
    REQUIRE(s.parts.has_value());
    CHECK(s.algebraic_residual == 0.0);
    CHECK(wedge(a.form, s.parts->phi2) == split.antiexact_part);
    CHECK(s.parts->phi2 == vector_form(Form(3, 1), w));
    CHECK(s.residual_max < 1e-10);
    CHECK(covariant_d(s.phi, a) == j);

    const Decomposition d1 = decompose(wedge(a.form, s.parts->phi1), ball3);
    CHECK(d1.antiexact_part.is_zero());
    const Decomposition d2 = decompose(wedge(a.form, s.parts->phi2), ball3);
    CHECK(d2.exact_part.is_zero());

    // an antiexact channel outside Im(A ^ _)
    const Form ik_vol = F(3, "x dy^dz - y dx^dz + z dx^dy");
    CHECK_THROWS_AS(solve_general(j + vector_form(ik_vol, Form(3, 2)), a, ball3), Infeasible);
}

TEST_CASE("solve_general: unreachable channel for A = dx")
{
    const Connection a = Connection::scalar(F(3, "1/2 dx"));
    const Form j = F(3, "(x*y*z) dy^dz");
    const Decomposition split = decompose(j, ball3);
    REQUIRE_FALSE(split.antiexact_part.is_zero());
    CHECK_THROWS_AS(solve_general(j, a, ball3), Infeasible);
}

TEST_CASE("phi3 is projected onto the kernel")
{
    const Connection a = Connection::scalar(F(2, "1/2 dx"));
    const Form k = project_to_kernel(a, F(2, "3 dx + x dy"));
    CHECK(wedge(a.form, k).is_zero());
    CHECK(k == F(2, "3 dx"));
}

TEST_CASE("check_no_zero_divisors")
{
    const Connection a = Connection::scalar(F(2, "1/2 dx"));
    const ZeroDivisorReport r = check_no_zero_divisors({F(2, "dy"), Form(2, 1)}, a, disk2, at_radius(1.0));
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].norm_c == doctest::Approx(1.0));
    CHECK(r.entries[0].norm_G_phi == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.all_pass());

    FormRng rng(4);
    std::vector<Form> exact;
    for (int i = 0; i < 10; ++i) {
        const Form f = exterior_d(rng.form(2, 0, 3));
        if (!f.is_zero()) exact.push_back(f);
    }
    CHECK(check_no_zero_divisors(exact, a, disk2, at_radius(1.0)).all_pass());
}
