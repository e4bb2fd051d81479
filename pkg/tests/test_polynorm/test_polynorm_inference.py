# Copyright 2026 The sandwich Authors. All Rights Reserved.
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
# ==============================================================================
import numpy as np
import pytest

from numpy.testing import assert_allclose
from sandwich.bodies import VRep, make_cross, make_cube
from sandwich.numerics import make_rng, sample_unit_sphere
from sandwich.polynorm import (
    alpha_bound,
    dual_vertices,
    exterior_angle,
    power_sum_norm,
    sandwich_ratios,
    tensor_lift
)
from tests.utils import regular_polygon


N_SAMPLES = 20000
SLACK = 3 / np.sqrt(N_SAMPLES)


def test_cross_polytope_tensor_lift():
    cross = make_cross(3)
    surrogate = tensor_lift(dual_vertices(cross), 2)
    ratios = sandwich_ratios(surrogate, cross,
                             sample_unit_sphere(3, 10000, seed=2))

    assert np.min(ratios) >= 1.0 - 1e-9
    assert np.max(ratios) <= alpha_bound(3, 2) * 1.01


def test_power_norm_of_cube():
    cube = make_cube(4)
    surrogate = power_sum_norm(4, 2)
    points = make_rng(4).uniform(-1, 1, size=(10000, 4))
    ratios = surrogate.norm(points) / cube.gauge(points)

    assert np.min(ratios) >= 1.0 - 1e-9
    assert np.max(ratios) <= 4 ** 0.25 + 1e-9

    worst = surrogate.norm(np.ones(4)) / cube.gauge(np.ones(4))
    assert worst == pytest.approx(4 ** 0.25, abs=1e-9)


@pytest.mark.parametrize('points, expected', [
    (regular_polygon(3), np.full(3, 1 / 3)),
    (regular_polygon(4, phase=np.pi / 4), np.full(4, 1 / 4)),
    (np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
     np.array([0.25, 0.375, 0.375])),
])
def test_exterior_angles(points, expected):
    measure = exterior_angle(VRep(points), N_SAMPLES, seed=9)

    assert_allclose(measure.weights, expected, atol=SLACK)
    assert measure.weights.sum() == pytest.approx(1.0, abs=1e-12)
