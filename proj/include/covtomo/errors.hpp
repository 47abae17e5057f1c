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

#include <stdexcept>
#include <string>

namespace covtomo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct DegreeCapExceeded : Error {
    using Error::Error;
};

/// A datum required to be exact (dH w = w) is not.
struct NotExact : Error {
    using Error::Error;
};

/// A linear/algebraic constraint system has no solution within tolerance.
struct Infeasible : Error {
    using Error::Error;
};

/// A Neumann series failed to reach its tail tolerance.
struct Divergence : Error {
    using Error::Error;
};

struct SolverFailure : Error {
    using Error::Error;
};

/// Current conservation (codifferential of J vanishes) violated.
struct ConservationViolation : Error {
    using Error::Error;
};

} // namespace covtomo
