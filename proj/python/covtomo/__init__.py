# Copyright 2026 The covtomo Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact polynomial differential forms, covariant transport and boundary tomography."""

from ._covtomo import (
    ConservationViolation,
    DegreeCapExceeded,
    DimensionMismatch,
    Divergence,
    Error,
    Form,
    Infeasible,
    NotExact,
    SolverFailure,
    H,
    codifferential,
    covariant_d,
    d,
    decompose,
    extend,
    hodge_star,
    maxwell,
    recover,
    sample,
    solve,
    tower_solve,
    verify,
    wedge,
)

__all__ = [
    "ConservationViolation",
    "DegreeCapExceeded",
    "DimensionMismatch",
    "Divergence",
    "Error",
    "Form",
    "H",
    "Infeasible",
    "NotExact",
    "SolverFailure",
    "codifferential",
    "covariant_d",
    "d",
    "decompose",
    "extend",
    "hodge_star",
    "maxwell",
    "recover",
    "sample",
    "solve",
    "tower_solve",
    "verify",
    "wedge",
]
