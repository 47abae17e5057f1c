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

#include <covtomo/grid.hpp>
#include <covtomo/homotopy.hpp>

#include <cmath>
#include <sstream>

using namespace covtomo;
using testing::F;
using testing::Q;

namespace {

StarDomain with_grid(StarDomain d, std::vector<int> nodes, bool polar = false)
{
    d.grid = GridSpec{std::move(nodes), polar};
    return d;
}

StarDomain unit_interval(int nodes) { return with_grid(StarDomain::interval(0, 1, Q(1, 2)), {nodes}); }

StarDomain square(int nodes) { return with_grid(StarDomain::box({Q(0), Q(0)}, {Q(1), Q(1)}), {nodes}); }

StarDomain polar_disk(int rings, int angles) { return with_grid(StarDomain::sphere({Q(0), Q(0)}, 1), {rings, angles}, true); }

double disk_cos_error(int rings, int angles)
{
    const auto geom = make_geometry(polar_disk(rings, angles));
    const GridForm bc = boundary_values(geom, 0, {}, [](const std::vector<double>& x) {
        return std::vector<double>{std::cos(std::atan2(x[1], x[0]))};
    });
    return max_abs_error(solve_harmonic(bc), F(2, "x"));
}

} // namespace

TEST_CASE("sample")
{
    const GridForm s = sample(F(1, "x+1"), unit_interval(5));
    REQUIRE(s.geometry().node_count() == 5);
    const double expected[] = {1, 1.25, 1.5, 1.75, 2};
    for (int i = 0; i < 5; ++i) CHECK(s.at(i, 0) == expected[i]);
    CHECK(max_abs(sample(Form(2, 1), square(5))) == 0.0);
    const GridForm ones = sample(F(2, "dx"), square(5));
    for (int node = 0; node < ones.geometry().node_count(); ++node) {
        CHECK(ones.at(node, ones.channel_of({1u, 0, 0})) == 1.0);
        CHECK(ones.at(node, ones.channel_of({2u, 0, 0})) == 0.0);
    }
}

TEST_CASE("discrete_d accuracy")
{
    CHECK(max_abs(discrete_d(sample(F(2, "7"), square(9)))) == 0.0);
    CHECK(max_abs_error(discrete_d(sample(F(2, "3*x - y/2 + 1"), square(7))), F(2, "3 dx - 1/2 dy")) < 1e-12);
    const double e1 = max_abs_error(discrete_d(sample(F(1, "x^2"), unit_interval(11))), F(1, "2*x dx"));
    const double e2 = max_abs_error(discrete_d(sample(F(1, "x^3"), unit_interval(11))), F(1, "3*x^2 dx"));
    const double e2h = max_abs_error(discrete_d(sample(F(1, "x^3"), unit_interval(21))), F(1, "3*x^2 dx"));
    CHECK(e1 < 1e-12);
    CHECK(e2 / e2h == doctest::Approx(4.0).epsilon(0.2));
    // interior d^2 vanishes to second order
    const Form w = F(2, "(x^3*y - y^2) dx");
    const GridForm dd = discrete_d(discrete_d(sample(w, square(17))));
    double interior = 0.0;
    const auto& g = dd.geometry();
    for (int node = 0; node < g.node_count(); ++node) {
        const auto& x = g.coords[node];
        if (std::abs(x[0]) < 0.7 && std::abs(x[1]) < 0.7) interior = std::max(interior, std::abs(dd.at(node, 0)));
    }
    CHECK(interior < 1e-10);
    CHECK_THROWS_AS(make_geometry(unit_interval(2)), Error);
}

TEST_CASE("polar discrete_d")
{
    const GridForm d = discrete_d(sample(F(2, "x^2 + x*y"), polar_disk(16, 64)));
    const GridForm dh = discrete_d(sample(F(2, "x^2 + x*y"), polar_disk(32, 128)));
    const Form exact = F(2, "(2*x + y) dx + x dy");
    CHECK(max_abs_error(d, exact) / max_abs_error(dh, exact) == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("quadrature_H")
{
    const GridForm h = quadrature_H(sample(F(1, "dx"), unit_interval(9)));
    CHECK(max_abs_error(h, F(1, "x - 1/2")) < 1e-10);
    CHECK(max_abs(quadrature_H(sample(Form(2, 2), square(5)))) == 0.0);
    CHECK(max_abs(quadrature_H(sample(F(2, "x dy - y dx"), square(9)))) < 1e-12);
    // interpolation error is second order in the spacing
    const Form w = F(2, "x^2*y dx^dy");
    const Form exact = homotopy_H(w, Point{Q(0), Q(0)});
    const double e = max_abs_error(quadrature_H(sample(w, square(9))), exact);
    const double eh = max_abs_error(quadrature_H(sample(w, square(17))), exact);
    CHECK(e / eh == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("solve_harmonic")
{
    const auto geom = make_geometry(unit_interval(11));
    const GridForm bc = boundary_values(geom, 0, {}, [](const std::vector<double>& x) {
        return std::vector<double>{x[0] < 0.5 ? 1.0 : 2.0};
    });
    CHECK(max_abs_error(solve_harmonic(bc), F(1, "x+1")) < 1e-12);

    const double e = disk_cos_error(16, 64);
    const double eh = disk_cos_error(32, 128);
    CHECK(e < 1e-2);
    CHECK(e / eh >= 3.2);
    CHECK(e / eh <= 4.8);

    const auto disk = make_geometry(with_grid(StarDomain::sphere({Q(0), Q(0)}, 1), {21}));
    const GridForm constant = boundary_values(disk, 0, {}, [](const std::vector<double>&) { return std::vector<double>{3.5}; });
    CHECK(max_abs_error(solve_harmonic(constant), F(2, "7/2")) < 1e-12);
    // discrete maximum principle
    const GridForm wavy = boundary_values(disk, 0, {}, [](const std::vector<double>& x) {
        return std::vector<double>{std::sin(3 * x[0]) + x[1] * x[1]};
    });
    const GridForm u = solve_harmonic(wavy);
    double lo = 1e300, hi = -1e300;
    for (int node = 0; node < disk->node_count(); ++node) {
        if (disk->active[node] && disk->boundary[node]) {
            lo = std::min(lo, wavy.at(node, 0));
            hi = std::max(hi, wavy.at(node, 0));
        }
    }
    for (int node = 0; node < disk->node_count(); ++node) {
        if (!disk->active[node]) continue;
        CHECK(u.at(node, 0) >= lo - 1e-12);
        CHECK(u.at(node, 0) <= hi + 1e-12);
    }
}

TEST_CASE("solve_heat")
{
    const auto geom = make_geometry(unit_interval(21));
    const GridForm bc = boundary_values(geom, 0, {}, [](const std::vector<double>& x) {
        return std::vector<double>{x[0] < 0.5 ? 1.0 : 2.0};
    });
    const GridForm harmonic = solve_harmonic(bc);
    const GridForm late = solve_heat(bc, 20.0, 100);
    double diff = 0.0;
    for (int node = 0; node < geom->node_count(); ++node) diff = std::max(diff, std::abs(late.at(node, 0) - harmonic.at(node, 0)));
    CHECK(diff < 1e-6);

    const GridForm zero = boundary_values(geom, 0, {}, [](const std::vector<double>&) { return std::vector<double>{0.0}; });
    CHECK(max_abs(solve_heat(zero, 0.3)) == 0.0);

    const auto disk = make_geometry(polar_disk(8, 32));
    const GridForm c = boundary_values(disk, 0, {}, [](const std::vector<double>&) { return std::vector<double>{-2.0}; });
    double previous = 1e300;
    for (double T : {0.05, 0.2, 1.0, 5.0}) {
        const GridForm u = solve_heat(c, T, 50);
        CHECK(max_abs(u) <= 2.0 + 1e-12);
        const double gap = max_abs_error(u, F(2, "-2"));
        CHECK(gap <= previous);
        previous = gap;
    }
    CHECK(previous < 1e-6);
    CHECK_THROWS_AS(solve_heat(c, 0.0), Error);
}

TEST_CASE("csv layout")
{
    std::ostringstream out;
    write_csv(sample(F(2, "x dy"), square(3)), out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,dx,dy");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 9);
}
