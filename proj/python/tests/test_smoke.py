# Copyright 2026 The qhedge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import qhedge

COS2 = math.cos(math.pi / 8) ** 2


def test_single_test_optimum():
    im = qhedge.build_hedging_test()
    q = im.effective_operator("1")
    s = qhedge.solve(q, 2, 2, "max")
    assert s.converged
    assert s.primal_value == pytest.approx(COS2, abs=1e-6)
    assert qhedge.certify(q, 2, 2, "max", s)["passed"]


def test_pair_min_fail_is_zero():
    im = qhedge.build_hedging_test()
    pair = qhedge.product_compose(im, im)
    q = pair.effective_operator("(0,0)")
    s = qhedge.solve(q, 4, 4, "min")
    assert s.primal_value <= 1e-6
    dist = pair.distribution(qhedge.hedging_strategy())
    assert dist["(0,1)"][0] == pytest.approx(0.5, abs=1e-9)
    assert dist["(1,0)"][0] == pytest.approx(0.5, abs=1e-9)


def test_identity_channel_probabilities():
    im = qhedge.build_hedging_test()
    p1 = im.probability(qhedge.choi_identity(2), "1")
    assert p1 == pytest.approx(COS2, abs=1e-12)


def test_channel_round_trip_through_kraus():
    rng = np.random.default_rng(7)
    u, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    j = qhedge.choi_from_unitary(u)
    assert qhedge.validate_channel(j)["trace_preserving"]
    back = qhedge.choi_from_kraus(qhedge.kraus_from_choi(j))
    np.testing.assert_allclose(back.matrix, j.matrix, atol=1e-10)


def test_json_round_trip():
    im = qhedge.build_echo_test()
    again = qhedge.InteractiveMeasurement.from_json(im.to_json())
    np.testing.assert_array_equal(again.rho, im.rho)
    assert again.is_classical()


def test_bounds():
    assert qhedge.classical_threshold_bound(2, 1, 0.8535533906) == pytest.approx(0.9785533906, abs=1e-9)
    assert qhedge.quantum_threshold_bound(2, 1, 0.8535533906) == pytest.approx(2.4356601718, abs=1e-9)
    with pytest.raises(ValueError):
        qhedge.classical_threshold_bound(2, 3, 0.5)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        qhedge.ChoiOperator(2, 2, np.eye(3))
    with pytest.raises(ValueError):
        qhedge.InteractiveMeasurement.from_json("{")
