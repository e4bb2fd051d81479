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

from sandwich.bodies import Ball, BodyError, HRep, Projected, VRep, make_cross
from sandwich.bodies import make_cube, make_simplex
from sandwich.polyapprox import (
    LiftFamily,
    ball_net_lower_bound,
    combine,
    coordinate_slice_family,
    greedy_net,
    grid_net,
    lift_body,
    lift_member,
    pair_family,
    singleton_family,
    type2_lower
)


@pytest.fixture(scope='module')
def cross_vertices():
    return make_cross(2).points


def test_net_of_interval():
    result = greedy_net(VRep(np.array([[-1.0], [1.0]])), 0.5)

    assert result.size <= 5
    assert result.cert.alpha <= 2.0


def test_coarse_net_of_square():
    result = greedy_net(make_cube(2), 0.9)

    assert result.cert.valid
    assert result.cert.alpha <= 10.0


def test_net_of_disc():
    result = greedy_net(Ball(2), 0.25, candidates=4000)

    assert result.size <= 81
    assert result.cert.alpha <= 4.0 / 3.0 + 1e-3
    assert result.cert.mode_inner == 'exact'


def test_net_points_are_separated():
    result = greedy_net(Ball(2), 0.3)
    points = result.points
    gaps = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)

    assert np.min(gaps[~np.eye(len(points), dtype=bool)]) > 0.3


def test_net_preconditions():
    with pytest.raises(BodyError):
        greedy_net(make_simplex(2), 0.5)
    with pytest.raises(ValueError):
        greedy_net(Ball(2), 1.0)


@pytest.mark.parametrize('d, alpha, expected', [
    (2, 1.0, np.e),
    (4, 2.0, np.exp(0.5)),
    (3, 1e9, 1.0),
])
def test_ball_net_lower_bound(d, alpha, expected):
    assert ball_net_lower_bound(d, alpha) == pytest.approx(expected)


def test_ball_net_lower_bound_rejects_alpha_below_one():
    with pytest.raises(ValueError):
        ball_net_lower_bound(2, 0.5)


def test_grid_net_of_disc():
    points = grid_net(Ball(2), 0.5)

    assert points.shape == (13, 2)


def test_intersect_of_slabs_is_square():
    slab_x = HRep(np.array([[1.0, 0.0], [-1.0, 0.0]]))
    slab_y = HRep(np.array([[0.0, 1.0], [0.0, -1.0]]))
    square = combine(slab_x, slab_y, 'intersect')

    assert square.n_facets == 4
    assert square.support(np.array([1.0, 1.0])) == pytest.approx(2.0)
    assert square.contains(np.array([0.9, -0.9]))
    assert not square.contains(np.array([1.1, 0.0]))


def test_product_of_intervals_is_square():
    interval = HRep(np.array([[1.0], [-1.0]]))
    square = combine(interval, interval, 'product')

    assert square.dim == 2
    assert square.n_facets == 4
    assert square.symmetric
    assert square.gauge(np.array([0.5, -1.0])) == pytest.approx(1.0)


def test_combine_errors():
    with pytest.raises(BodyError):
        combine(HRep(np.eye(2)), HRep(np.eye(3)), 'intersect')
    with pytest.raises(ValueError):
        combine(HRep(np.eye(2)), HRep(np.eye(2)), 'union')


def test_lift_constant_function(cross_vertices):
    assert lift_member((np.zeros(2), 1.0), singleton_family(cross_vertices))


def test_lift_boundary_of_square(cross_vertices):
    family = singleton_family(cross_vertices)

    assert lift_member((np.array([1.0, 0.0]), 1.0), family)
    assert not lift_member((np.array([1.5, 0.0]), 1.0), family)


def test_lift_slice_violation_is_an_error(cross_vertices):
    with pytest.raises(ValueError):
        lift_member((np.zeros(2), 2.0), singleton_family(cross_vertices))


def test_lift_family_validation(cross_vertices):
    with pytest.raises(ValueError):
        LiftFamily(cross_vertices, ((),))
    with pytest.raises(ValueError):
        LiftFamily(cross_vertices, ((0, 7),))


def test_generators_are_indicators(cross_vertices):
    G = pair_family(cross_vertices).generators

    assert G.shape == (4 + 6, 4)
    assert set(np.unique(G)) == {0.0, 1.0}
    assert np.all(G.sum(axis=1) >= 1)


def test_coordinate_slices_of_grid():
    grid = np.array([[i, j] for i in range(3) for j in range(3)], dtype=float)

    assert len(coordinate_slice_family(grid, 0).family) == 1
    assert len(coordinate_slice_family(grid, 1).family) == 6
    assert len(coordinate_slice_family(grid, 2).family) == 9


def test_lift_body_of_singletons_is_polar(cross_vertices):
    body = lift_body(singleton_family(cross_vertices))

    assert isinstance(body, Projected)
    assert body.n_facets == 4
    assert body.gauge(np.array([1.0, 1.0])) == pytest.approx(1.0)
    assert body.support(np.array([1.0, 0.0])) == pytest.approx(1.0)


def test_type2_examples():
    d = 4
    basis = np.eye(d)

    assert type2_lower(Ball(d), basis) == pytest.approx(1.0)
    assert type2_lower(make_cross(d), basis) == pytest.approx(np.sqrt(d))
    assert type2_lower(make_cube(d), basis) == pytest.approx(1 / np.sqrt(d))


def test_type2_exact_limit():
    with pytest.raises(ValueError):
        type2_lower(Ball(2), np.ones((21, 2)))
