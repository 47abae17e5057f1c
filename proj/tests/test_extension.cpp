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
#include <covtomo/extension.hpp>

#include <cmath>

using namespace covtomo;
using testing::F;
using testing::P;
using testing::Q;

namespace {

const StarDomain unit_half = StarDomain::interval(0, 1, Q(1, 2));

BoundaryData one_two() { return BoundaryData::from_endpoints(F(1, "1"), F(1, "2")); }

StarDomain gridded(StarDomain d, std::vector<int> nodes, bool polar = false)
{
    d.grid = GridSpec{std::move(nodes), polar};
    return d;
}

} // namespace

TEST_CASE("harmonic extension in 1D")
{
    const ExtensionResult r = extend_harmonic(one_two(), unit_half);
    REQUIRE(r.exact.has_value());
    CHECK(*r.exact == F(1, "x+1"));
    CHECK(r.regularity == Regularity::Smooth);

    const ExtensionResult r1 = extend_harmonic(BoundaryData::from_endpoints(F(1, "dx"), F(1, "2 dx")), unit_half);
    CHECK(*r1.exact == F(1, "(x+1) dx"));

    const ExtensionResult rc = extend_harmonic(BoundaryData::from_endpoints(F(1, "3"), F(1, "3")), unit_half);
    CHECK(*rc.exact == F(1, "3"));

    // the grid solve agrees with the affine solution at the nodes
    const ExtensionResult g = extend_harmonic(one_two(), gridded(unit_half, {9}), 1e-10, false);
    REQUIRE(g.grid.has_value());
    CHECK(max_abs_error(*g.grid, F(1, "x+1")) < 1e-12);
}

TEST_CASE("harmonic extension on a sphere is exact for polynomial data")
{
    const StarDomain ball = StarDomain::sphere({Q(1, 2), Q(0), Q(-1)}, 2);
    const Form alpha = F(3, "x^2*y + z^3 - x");
    const ExtensionResult r = extend_harmonic(BoundaryData::from_form(alpha), ball);
    REQUIRE(r.exact.has_value());
    const Polynomial u = r.exact->coefficient(0);
    CHECK(coordinate_laplacian(u).is_zero());
    for (const Point& p : rational_boundary_points(ball, 20)) CHECK(u.eval(p) == alpha.coefficient(0).eval(p));
}

TEST_CASE("heat extension")
{
    const StarDomain dom = gridded(unit_half, {21});
    const ExtensionResult h = extend_harmonic(one_two(), dom, 1e-10, false);
    const ExtensionResult late = extend_heat(one_two(), dom, 30.0, 100);
    CHECK(late.regularity == Regularity::Smooth);
    CHECK(max_abs_error(*late.grid, F(1, "x+1")) < 1e-6);
    CHECK(max_abs(*extend_heat(BoundaryData::from_endpoints(F(1, "0"), F(1, "0")), dom, 1.0).grid) == 0.0);

    double previous = 1e300;
    for (double T : {0.01, 0.05, 0.2, 1.0}) {
        const ExtensionResult e = extend_heat(one_two(), dom, T, 100);
        const double gap = max_abs_error(*e.grid, F(1, "x+1"));
        CHECK(gap <= previous);
        CHECK(max_abs(*e.grid) <= 2.0 + 1e-12);
        previous = gap;
    }
    CHECK_THROWS_AS(extend_heat(one_two(), dom, 0.0), Error);
}

TEST_CASE("radial extension in 1D")
{
    const ExtensionResult r = extend_radial(one_two(), unit_half);
    CHECK(r.regularity == Regularity::C0AwayFromCenter);
    REQUIRE(r.distribution.has_value());
    const Distribution1D& phi = r.distribution->channels.at(0);
    REQUIRE(phi.jumps().size() == 1);
    CHECK(phi.jumps()[0].at == Q(1, 2));
    CHECK(phi.jumps()[0].height == 1);
    CHECK(phi.left_limit(Q(1, 4)) == 1);
    CHECK(phi.right_limit(Q(3, 4)) == 2);

    const ExtensionResult c = extend_radial(BoundaryData::from_endpoints(F(1, "5"), F(1, "5")), unit_half);
    CHECK(c.distribution->channels.at(0).jumps().empty());
    REQUIRE(c.exact.has_value());
    CHECK(*c.exact == F(1, "5"));
}

TEST_CASE("extension current")
{
    const ExtensionResult h = extend_harmonic(one_two(), unit_half);
    CHECK(*extension_current(h, Connection::zero(1)).exact == F(1, "dx"));

    const Form f_dx = F(1, "(x^2 - 3*x + 1/2) dx");
    const CurrentResult j = extension_current(h, Connection::scalar(f_dx));
    CHECK(*j.exact == F(1, "(1 + (x^2 - 3*x + 1/2)*(1 + x)) dx"));

    const ExtensionResult one_form = extend_harmonic(BoundaryData::from_endpoints(F(1, "dx"), F(1, "2 dx")), unit_half);
    FormRng rng(2);
    for (int i = 0; i < 5; ++i) {
        CHECK(extension_current(one_form, Connection::scalar(rng.form(1, 1, 3))).exact->is_zero());
    }
}

TEST_CASE("radial current carries a Dirac atom")
{
    const ExtensionResult r = extend_radial(one_two(), unit_half);
    const Polynomial f = P(1, "2*x^3 - x + 1/3");
    const CurrentResult j = extension_current(r, Connection::scalar(f * F(1, "dx")));
    REQUIRE(j.distribution.has_value());
    const Distribution1D& cur = j.distribution->channels.at(0);
    REQUIRE(cur.atoms().size() == 1);
    CHECK(cur.atoms()[0].at == Q(1, 2));
    CHECK(cur.atoms()[0].weight == 1);
    // density f (1 + theta(x - 1/2)): f on the left, 2 f on the right
    for (const auto& piece : cur.pieces()) {
        const Rational mid = (piece.a + piece.b) / 2;
        CHECK(piece.p == (mid < Q(1, 2) ? f : Q(2) * f));
    }
}

TEST_CASE("distributional Stokes identity")
{
    const Distribution1D phi = extend_radial(one_two(), unit_half).distribution->channels.at(0);
    FormRng rng(17);
    const Polynomial bubble = P(1, "x*(1-x)");
    for (int i = 0; i < 20; ++i) {
        const Polynomial psi = bubble * rng.polynomial(1, 4, 4);
        CHECK(phi.stokes_defect(psi) == 0);
        // with the boundary terms included the identity holds for any psi
        CHECK(phi.stokes_defect(rng.polynomial(1, 4, 4)) == 0);
    }
    // pairing of the atom with a test function is its value at the center
    const Distribution1D d = phi.derivative();
    CHECK(d.pair(P(1, "x^2")) == Q(1, 4));
}

TEST_CASE("radial extension on a disk is ray constant")
{
    const StarDomain disk = gridded(StarDomain::sphere({Q(0), Q(0)}, 1), {21});
    const BoundaryData halves = BoundaryData::from_function(2, 0, {}, [](const std::vector<double>& x) {
        return std::vector<double>{x[0] > 0 ? 1.0 : 0.0};
    });
    const ExtensionResult r = extend_radial(halves, disk);
    CHECK(r.center_singularity);
    REQUIRE(r.grid.has_value());
    const auto& g = r.grid->geometry();
    for (int node = 0; node < g.node_count(); ++node) {
        if (!g.active[node]) continue;
        const auto& x = g.coords[node];
        if (x[0] == 0.0 && x[1] == 0.0) continue;
        const double expected = x[0] > 0 ? 1.0 : 0.0;
        CHECK(r.grid->at(node, 0) == expected);
    }
    for (int k = 0; k < 12; ++k) {
        const double th = 0.5 + k;
        const std::vector<double> xb{std::cos(th), std::sin(th)};
        const double v0 = radial_value(halves, disk, xb)[0];
        for (double t : {0.1, 0.37, 0.8}) CHECK(radial_value(halves, disk, {t * xb[0], t * xb[1]})[0] == v0);
    }
    // constant data: no singularity
    const BoundaryData c = BoundaryData::from_form(F(2, "4"));
    CHECK_FALSE(extend_radial(c, disk).center_singularity);
}

TEST_CASE("radial pullback of a 1-form is ray constant along the boundary directions")
{
    const StarDomain disk = StarDomain::sphere({Q(0), Q(0)}, 1);
    const BoundaryData alpha = BoundaryData::from_form(F(2, "x dy - y dx"));
    // x dy - y dx restricted to circles of radius t scales by t^2; its pullback
    // along the retraction is the same form divided by t^2.
    for (double t : {0.25, 0.5, 0.9}) {
        const std::vector<double> x{t * 0.6, t * 0.8};
        const auto v = radial_value(alpha, disk, x);
        CHECK(v[0] == doctest::Approx(-x[1] / (t * t)));
        CHECK(v[1] == doctest::Approx(x[0] / (t * t)));
    }
}
