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

import numpy as np
import pytest

import covtomo as ct

UNIT = {"dim": 1, "kind": "interval", "lower": 0, "upper": 1}
BALL = {"dim": 3, "kind": "sphere", "radius": 1}
DISK = {"dim": 2, "kind": "sphere", "radius": 1, "grid": {"nodes": [9]}}


def test_form_algebra():
    w = ct.Form(2, "x*y dx")
    assert w.dim == 2 and w.grade == 1
    assert ct.d(ct.d(ct.Form(2, "x^2*y"))).is_zero()
    assert str(ct.d(w)) == str(ct.Form(2, "-x dx^dy"))
    assert (w ^ w).is_zero()
    assert w - w == ct.Form(2, "0 dx")
    assert ct.Form.from_json(w.to_json()) == w


def test_homotopy_and_decomposition():
    assert ct.H(ct.Form(1, "dx"), ["1/2"]) == ct.Form(1, "x-1/2")
    w = ct.Form(2, "y dx")
    exact, anti = ct.decompose(w, {"dim": 2, "kind": "sphere", "radius": 1})
    assert exact + anti == w
    assert ct.d(exact).is_zero()
    assert ct.codifferential(ct.codifferential(ct.Form(3, "x*y dx^dy"))).is_zero()


def test_identity_suite():
    r = ct.verify(seed=3, count=12)
    assert r["pass"] and r["checks"] > 0


def test_recover_current_example():
    alpha = {"lower": {"dim": 1, "text": "1"}, "upper": {"dim": 1, "text": "2"}}
    r = ct.recover("current", alpha, UNIT)
    assert r["residuals"] is not None
    text = str(r)
    assert "x+1" in text and "3/2" in text


def test_sample_returns_arrays():
    coords, values, active, names = ct.sample(ct.Form(2, "x + y"), DISK)
    assert coords.shape[1] == 2 and values.shape == (coords.shape[0], 1)
    assert names == ["phi"]
    np.testing.assert_allclose(values[active, 0], coords[active].sum(axis=1), atol=1e-14)


def test_maxwell_and_errors():
    a = ct.Form(3, "x*y dz + z^2 dx")
    f = ct.d(a)
    j = ct.codifferential(f)
    m = ct.maxwell(j, f, BALL)
    assert ct.Form.from_json(m["F"]) == f
    with pytest.raises(ct.ConservationViolation):
        ct.maxwell(ct.Form(3, "x dx"), None, BALL)
    with pytest.raises(ct.Error):
        ct.recover("nonsense", ct.Form(1, "1"), UNIT)
