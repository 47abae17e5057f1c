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
#include <covtomo/polynomial.hpp>

using namespace covtomo;
using testing::P;
using testing::Q;

TEST_CASE("rational canonical form")
{
    const Rational q = make_rational(6, -4);
    CHECK(q.get_num() == -3);
    CHECK(q.get_den() == 2);
    CHECK(parse_rational("-3/2") == q);
    CHECK(to_string(q) == "-3/2");
}

TEST_CASE("poly_add")
{
    CHECK(P(1, "x+1") + P(1, "x-1") == P(1, "2*x"));
    CHECK(Polynomial(1) + P(1, "x^3-x") == P(1, "x^3-x"));
    const Polynomial s = P(2, "x^2*y") + P(2, "x*y^2");
    CHECK(s.terms().size() == 2);
    Monomial a, b;
    a.exp[0] = 2;
    a.exp[1] = 1;
    b.exp[0] = 1;
    b.exp[1] = 2;
    CHECK(s.coefficient(a) == 1);
    CHECK(s.coefficient(b) == 1);
    CHECK((P(1, "x") - P(1, "x")).is_zero());
    CHECK_THROWS_AS(P(1, "x") + P(2, "x"), DimensionMismatch);
}

TEST_CASE("poly_mul")
{
    CHECK(P(1, "x+1") * P(1, "x-1") == P(1, "x^2-1"));
    const Polynomial p = P(2, "3*x*y - y^2 + 1/2");
    CHECK(Polynomial::constant(2, 1) * p == p);
    // expansion oracle: coefficients of (x+y)^2 via binomial count
    const Polynomial sq = P(2, "x+y") * P(2, "x+y");
    Monomial xx, xy, yy;
    xx.exp[0] = 2;
    xy.exp[0] = 1;
    xy.exp[1] = 1;
    yy.exp[1] = 2;
    CHECK(sq.coefficient(xx) == 1);
    CHECK(sq.coefficient(xy) == 2);
    CHECK(sq.coefficient(yy) == 1);
    CHECK(sq.terms().size() == 3);
    CHECK(sq.degree() == 2);
    CHECK_THROWS_AS(P(1, "x") * P(2, "y"), DimensionMismatch);
}

TEST_CASE("degree cap")
{
    DegreeCapScope cap(4);
    CHECK_NOTHROW(P(1, "x^2") * P(1, "x^2"));
    CHECK_THROWS_AS(P(1, "x^3") * P(1, "x^2"), DegreeCapExceeded);
}

TEST_CASE("poly_eval")
{
    CHECK(poly_eval(P(2, "x^2+y"), {Q(2), Q(3)}) == 7);
    CHECK(poly_eval(Polynomial::constant(3, 5), {Q(9), Q(-1, 7), Q(2)}) == 5);
    CHECK(poly_eval(P(1, "x-1/2"), {Q(1, 2)}) == 0);
    CHECK_THROWS_AS(poly_eval(P(2, "x"), {Q(1)}), DimensionMismatch);
}

TEST_CASE("poly_substitute_ray")
{
    const auto r1 = poly_substitute_ray(P(1, "x"), {Q(0)});
    CHECK(r1.by_t_power.size() == 1);
    CHECK(r1.by_t_power.at(1) == P(1, "x"));
    const auto r2 = poly_substitute_ray(P(1, "x^2"), {Q(0)});
    CHECK(r2.by_t_power.size() == 1);
    CHECK(r2.by_t_power.at(2) == P(1, "x^2"));
    const auto r3 = poly_substitute_ray(P(1, "x"), {Q(1, 2)});
    CHECK(r3.by_t_power.at(0) == P(1, "1/2"));
    CHECK(r3.by_t_power.at(1) == P(1, "x-1/2"));
    // degree in t never exceeds the degree of p
    const auto r4 = poly_substitute_ray(P(2, "x^2*y + y - 3"), {Q(1), Q(-2)});
    CHECK(r4.by_t_power.rbegin()->first <= 3);
}

TEST_CASE("poly_integrate_t")
{
    RayPolynomial one{1, {{0, P(1, "1")}}};
    CHECK(poly_integrate_t(one, 0) == P(1, "1"));
    RayPolynomial tx{1, {{1, P(1, "x")}}};
    CHECK(poly_integrate_t(tx, 0) == P(1, "x/2"));
    RayPolynomial x{1, {{0, P(1, "x")}}};
    CHECK(poly_integrate_t(x, 0) == P(1, "x"));
}

TEST_CASE("ring axioms on random polynomials")
{
    FormRng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = 1 + trial % 3;
        const Polynomial a = rng.polynomial(dim, 3, 4);
        const Polynomial b = rng.polynomial(dim, 3, 4);
        const Polynomial c = rng.polynomial(dim, 3, 4);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        Point pt;
        for (int i = 0; i < dim; ++i) pt.push_back(rng.small_rational());
        CHECK(poly_eval(a * b, pt) == poly_eval(a, pt) * poly_eval(b, pt));
    }
}

TEST_CASE("integrate_t matches Gauss-Legendre quadrature")
{
    std::vector<double> nodes, weights;
    testing::gauss_legendre01(12, nodes, weights);
    FormRng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int dim = 1 + trial % 3;
        Point x0;
        std::vector<double> xs;
        for (int i = 0; i < dim; ++i) {
            x0.push_back(rng.small_rational());
            xs.push_back(0.3 + 0.2 * i);
        }
        const Polynomial p = rng.polynomial(dim, 4, 4);
        const int w = static_cast<int>(rng.uniform(0, 3));
        const Polynomial exact = poly_integrate_t(poly_substitute_ray(p, x0), w);
        double quad = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            std::vector<double> pt(dim);
            for (int i = 0; i < dim; ++i) pt[i] = to_double(x0[i]) + nodes[q] * (xs[i] - to_double(x0[i]));
            quad += weights[q] * p.eval(std::span<const double>(pt)) * std::pow(nodes[q], w);
        }
        CHECK(exact.eval(std::span<const double>(xs)) == doctest::Approx(quad).epsilon(1e-12));
        // linearity
        const Polynomial p2 = rng.polynomial(dim, 4, 4);
        const auto lhs = poly_integrate_t(poly_substitute_ray(p + Q(3) * p2, x0), w);
        const auto rhs = exact + Q(3) * poly_integrate_t(poly_substitute_ray(p2, x0), w);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("parser")
{
    CHECK(P(3, "(x+y)^2 - z") == P(3, "x^2 + 2*x*y + y^2 - z"));
    CHECK(P(1, "3/2") == Polynomial::constant(1, Q(3, 2)));
    CHECK(P(4, "x1*x4") == Polynomial::variable(4, 0) * Polynomial::variable(4, 3));
    CHECK_THROWS_AS(P(1, "x +"), Error);
    CHECK_THROWS_AS(P(1, "y"), Error);
}
