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

#include <covtomo/extension.hpp>
#include <covtomo/homotopy.hpp>
#include <covtomo/tomography.hpp>
#include <covtomo/tower.hpp>
#include <covtomo/transport.hpp>

#include <json.hpp>

namespace covtomo {

/// Insertion-ordered JSON keeps every dump byte-deterministic.
using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);
/// Finite doubles as numbers, infinities as the strings "inf" / "-inf".
Json real_to_json(double v);

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json to_json(const Form& w);
/// Accepts the structured encoding or {"dim": n, "text": "x dy - y dx"}.
Form form_from_json(const Json& j);

Json to_json(const StarDomain& dom);
StarDomain domain_from_json(const Json& j);

Json to_json(const Connection& a);
/// {"A": <Form>} with optional "X": [<Polynomial>...], or a bare Form.
Connection connection_from_json(const Json& j);
std::vector<Polynomial> vector_field_from_json(const Json& j, int dim);

/// {"form": <Form>} or {"lower": <Form>, "upper": <Form>}.
BoundaryData boundary_from_json(const Json& j);
Json to_json(const BoundaryData& b);

Json to_json(const Distribution1D& d);
Json to_json(const DistributionForm& d);
Json to_json(const GridForm& g);
Json to_json(const ExtensionResult& r);
Json to_json(const CurrentResult& r);
Json to_json(const TransportSolution& s);
Json to_json(const IdentityReport& r);
Json to_json(const RecoveryReport& r);
Json to_json(const TowerSolution& s);
Json to_json(const MaxwellResult& m);

TowerSpec tower_spec_from_json(const Json& j);

} // namespace covtomo
