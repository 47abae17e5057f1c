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
#include <covtomo/polynomial.hpp>

#include <string_view>

namespace covtomo {

/// Parses expressions such as "x^2 - 3/2*x*y + (y+1)^3". Variables follow
/// variable_name(dim, i). Throws Error on malformed input.
Polynomial parse_polynomial(int dim, std::string_view text);

/// Parses a scalar form written as a sum of "coefficient basis" terms, e.g.
/// "(x+1) dx", "x dy - y dx", "dx^dy", or a bare function "x - 1/2".
Form parse_form(int dim, std::string_view text);

} // namespace covtomo
