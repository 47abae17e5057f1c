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
#include <covtomo/json_io.hpp>

using namespace covtomo;
using testing::F;
using testing::P;
using testing::Q;

TEST_CASE("polynomial and form round trips")
{
    const Polynomial p = P(2, "x^2*y - 7/3 + 123456789012345678901234567890*y");
    const Json jp = to_json(p);
    CHECK(jp["dim"] == 2);
    CHECK(polynomial_from_json(jp) == p);

    FormRng rng(5);
    for (int dim = 1; dim <= 3; ++dim) {
        for (int g = 0; g <= dim; ++g) {
            for (const FiberSpec fib : {FiberSpec{}, FiberSpec{2, false}, FiberSpec{2, true}}) {
                const Form w = rng.form(dim, g, 3, fib);
                CHECK(form_from_json(to_json(w)) == w);
                CHECK(form_from_json(Json::parse(to_json(w).dump())) == w);
            }
        }
    }
    CHECK(form_from_json(Json{{"dim", 2}, {"text", "x dy - y dx"}}) == F(2, "x dy - y dx"));
    CHECK(form_from_json(Json{{"dim", 2}, {"grade", 1}, {"text", "0"}}) == Form(2, 1));
    // unsorted basis lists pick up the permutation sign
    const Json swapped = {{"dim", 2}, {"grade", 2}, {"terms", {{{"basis", {1, 0}}, {"poly", to_json(P(2, "1"))}}}}};
    CHECK(form_from_json(swapped) == F(2, "-1 dx^dy"));
    const Json bad = {{"dim", 2}, {"grade", 1}, {"terms", {{{"basis", {3}}, {"poly", to_json(P(2, "1"))}}}}};
    CHECK_THROWS_AS(form_from_json(bad), DimensionMismatch);
}

TEST_CASE("domains")
{
    const StarDomain i = StarDomain::interval(0, 1, Q(1, 2));
    const StarDomain i2 = domain_from_json(to_json(i));
    CHECK(i2.lower == i.lower);
    CHECK(i2.center == i.center);
    const StarDomain s = domain_from_json(Json::parse(R"({"kind":"sphere","center":["0","0"],"radius":"1","grid":{"nodes":[8,32],"polar":true}})"));
    CHECK(s.dim == 2);
    CHECK(s.grid->polar);
    const StarDomain simple = domain_from_json(Json::parse(R"({"kind":"interval","lower":0,"upper":"1"})"));
    CHECK(simple.center[0] == Q(1, 2));
    CHECK_THROWS(domain_from_json(Json::parse(R"({"kind":"torus"})")));
}

TEST_CASE("reports serialize deterministically")
{
    const Distribution1D d = Distribution1D::step(0, 1, Q(1, 2), 1, 2).derivative();
    const Json jd = to_json(d);
    CHECK(jd["atoms"].size() == 1);
    CHECK(jd["atoms"][0]["at"] == "1/2");
    CHECK(jd["atoms"][0]["weight"] == "1");
    CHECK(to_json(d).dump() == jd.dump());

    TransportSolution sol(F(2, "dx"));
    sol.radius = std::numeric_limits<double>::infinity();
    CHECK(to_json(sol)["radius"] == "inf");
}

TEST_CASE("tower spec")
{
    const Json j = Json::parse(R"({
        "levels": [
            {"kind": "contravariant", "X": ["1/4", "0", "0"]},
            {"kind": "covariant", "A": {"dim": 3, "text": "1/2 dz"}}
        ],
        "J": {"dim": 3, "text": "-1/2*y dy^dz"},
        "alpha": {"form": {"dim": 3, "text": "y dy - z dz"}}
    })");
    const TowerSpec spec = tower_spec_from_json(j);
    CHECK(spec.grades == std::vector<int>{2, 1});
    CHECK(spec.levels[0].kind == LevelKind::Contravariant);
}
