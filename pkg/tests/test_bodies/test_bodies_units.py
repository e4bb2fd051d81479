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
from numpy.testing import assert_array_equal
from sandwich.bodies import (
    Ball,
    BodyError,
    Ellipsoid,
    EllipsoidBody,
    HRep,
    LpBall,
    Projected,
    Sectioned,
    VRep,
    as_hrep,
    bisect_gauge,
    canonical_cycle,
    enumerate_facets,
    gauge,
    make_cross,
    make_cube,
    make_cut,
    make_cut_body,
    make_simplex,
    make_tsp,
    polar_polytope,
    scale,
    support,
    tsp_alpha
)
from sandwich.numerics import is_psd
from tests.utils import assert_inside, assert_outside, regular_polygon


@pytest.fixture(scope='module')
def cross_from_simplex():
    polytope = HRep(-np.eye(4), np.zeros(4), A_eq=np.ones((1, 4)),
                    b_eq=np.ones(1))
    T = np.array([[1, -1, 0, 0], [0, 0, 1, -1]], dtype=float)
    return Projected(polytope, T, symmetric=True)


def test_gauge_examples():
    assert gauge(make_cube(3), np.array([1.0, 0, 0])) == pytest.approx(1.0)
    assert gauge(make_cross(2), np.array([1.0, 1.0])) == pytest.approx(2.0)
    for body in (make_cube(2), Ball(2), make_simplex(2), LpBall(2, 3)):
        assert gauge(body, np.zeros(2)) == 0.0


def test_support_examples():
    assert support(Ball(3), np.array([0.0, 0.6, 0.8])) == pytest.approx(1.0)
    assert support(make_cube(2), np.array([1.0, 1.0])) == pytest.approx(2.0)
    assert support(make_cross(2), np.array([1.0, 1.0])) == pytest.approx(1.0)


def test_vrep_gauge_without_facets_uses_lp():
    body = VRep(make_cross(2).points)

    assert body.facets is None
    assert body.gauge(np.array([1.0, 1.0])) == pytest.approx(2.0)
    assert body.contains(np.array([0.5, 0.5]))
    assert not body.contains(np.array([0.6, 0.5]))


def test_hrep_closed_form_gauge_and_lp_support():
    body = HRep(np.vstack([np.eye(2), -np.eye(2)]), 2 * np.ones(4))

    assert body.symmetric
    assert body.gauge(np.array([1.0, -0.5])) == pytest.approx(0.5)
    assert body.support(np.array([1.0, 1.0])) == pytest.approx(4.0)


def test_hrep_unbounded_support_raises():
    half_plane = HRep(np.array([[1.0, 0.0]]), np.ones(1))

    with pytest.raises(BodyError):
        half_plane.support(np.array([0.0, 1.0]))


def test_ellipsoid_body_gauge_with_offset_center():
    E = Ellipsoid(np.array([0.5, 0.0]), np.eye(2))
    body = EllipsoidBody(E)

    assert not body.symmetric
    assert body.gauge(np.array([1.5, 0.0])) == pytest.approx(1.0)
    assert body.gauge(np.array([-0.5, 0.0])) == pytest.approx(1.0)
    assert body.support(np.array([1.0, 0.0])) == pytest.approx(1.5)


def test_ellipsoid_rejects_indefinite_form():
    with pytest.raises(BodyError):
        Ellipsoid(np.zeros(2), np.diag([1.0, -1.0]))


def test_lp_ball_duality():
    body = LpBall(3, 1)
    c = np.array([0.2, -3.0, 1.0])

    assert body.dual_exponent == np.inf
    assert body.support(c) == pytest.approx(3.0)
    assert LpBall(2, 3).dual_exponent == pytest.approx(1.5)


def test_projected_cross_polytope(cross_from_simplex):
    body = cross_from_simplex

    assert body.gauge(np.array([1.0, 1.0])) == pytest.approx(2.0)
    assert body.support(np.array([1.0, 1.0])) == pytest.approx(1.0)
    assert_inside(body, np.array([[0.5, 0.0], [0.25, -0.25]]))
    assert_outside(body, np.array([[1.5, 0.0], [0.6, 0.6]]))


def test_sectioned_square_diagonal():
    # The cube I₃ cut by the plane x₃ = 0 is the square I₂.
    basis = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    body = Sectioned(make_cube(3).points, basis, symmetric=True)

    assert body.gauge(np.array([1.0, 1.0])) == pytest.approx(1.0)
    assert body.support(np.array([1.0, -1.0])) == pytest.approx(2.0)
    assert body.contains(np.array([0.9, -0.9]))


def test_sectioned_rejects_rank_deficient_basis():
    with pytest.raises(BodyError):
        Sectioned(make_cube(2).points, np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_bisect_gauge_matches_closed_form():
    ball = Ball(2, 3.0)
    v = np.array([1.0, 2.0])

    assert bisect_gauge(lambda x: ball.contains(x, 0.0), v) == \
        pytest.approx(ball.gauge(v), rel=1e-9)


def test_polar_cube_is_cross():
    polar = polar_polytope(make_cube(3))

    assert isinstance(polar, HRep)
    directions = np.random.RandomState(1).randn(20, 3)
    assert_allclose(polar.gauge(directions),
                    make_cross(3).gauge(directions), rtol=1e-9)


def test_double_polar_of_cross():
    polar = polar_polytope(polar_polytope(make_cross(3)))

    assert isinstance(polar, VRep)
    assert_allclose(np.sort(polar.points, axis=0),
                    np.sort(make_cross(3).points, axis=0))


def test_polar_needs_interior_origin():
    with pytest.raises(BodyError):
        polar_polytope(VRep(np.array([[1.0, 0.0], [2.0, 1.0], [2.0, -1.0]])))


def test_enumerate_facets_of_square():
    A, b = enumerate_facets(make_cube(2).points)

    assert A.shape == (4, 2)
    assert_allclose(np.sort(np.abs(A).sum(axis=1)), np.ones(4))
    assert_array_equal(b, np.ones(4))


def test_as_hrep_of_pentagon():
    pentagon = VRep(regular_polygon(5))
    body = as_hrep(pentagon)

    assert body.n_facets == 5
    v = np.array([0.3, -0.7])
    assert body.gauge(v) == pytest.approx(pentagon.gauge(v))


def test_scale_doubles_support():
    c = np.array([1.0, 2.0])

    assert scale(make_simplex(2), 2.0).support(c) == \
        pytest.approx(2 * make_simplex(2).support(c))
    with pytest.raises(BodyError):
        scale(Ball(2), 0.0)


def test_dimension_mismatch():
    with pytest.raises(BodyError):
        make_cube(2).gauge(np.ones(3))


@pytest.mark.parametrize('n, vertices, dim', [(4, 3, 2), (5, 12, 5)])
def test_tsp_counts(n, vertices, dim):
    tsp = make_tsp(n)

    assert tsp.body.n_vertices == vertices
    assert tsp.body.dim == dim
    assert not tsp.body.symmetric


def test_tsp_vertices_are_two_regular():
    tsp = make_tsp(5)
    for y in tsp.body.points:
        X = tsp.to_matrix(y)
        assert_allclose(X.sum(axis=1), 2.0, atol=1e-12)
        assert_allclose(np.diag(X), 0.0, atol=1e-12)
        assert_allclose(np.sort(np.unique(np.round(X, 9))), [0.0, 1.0])


def test_tsp_center_is_origin():
    tsp = make_tsp(6)

    assert_allclose(tsp.body.points.mean(axis=0), 0.0, atol=1e-12)
    assert_allclose(tsp.to_coords(tsp.center), 0.0, atol=1e-12)


def test_tsp_rejects_small_and_large_n():
    with pytest.raises(BodyError):
        make_tsp(3)
    with pytest.raises(BodyError):
        make_tsp(9)


def test_canonical_cycle_identifies_rotations_and_reflections():
    assert canonical_cycle((2, 0, 1, 3)) == canonical_cycle((3, 1, 0, 2))
    assert canonical_cycle((0, 1, 2, 3)) != canonical_cycle((0, 2, 1, 3))


def test_tsp_alpha_values():
    assert tsp_alpha(5) == pytest.approx(2.2360680, abs=1e-7)
    assert tsp_alpha(6) == pytest.approx(3.6742346, abs=1e-7)


def test_cut_n2():
    vertices = make_cut(2)
    expected = {((1.0, 1.0), (1.0, 1.0)), ((1.0, -1.0), (-1.0, 1.0))}

    assert {tuple(map(tuple, v)) for v in vertices} == expected


def test_cut_counts_and_psd():
    vertices = make_cut(3)

    assert len(vertices) == 4
    assert len(make_cut(3, asymmetric=True)) == 32
    for X in vertices:
        assert is_psd(X)
        assert_allclose(np.diag(X), 1.0)


def test_cut_body_contains_origin():
    body = make_cut_body(3)

    assert body.dim == 3
    assert not body.symmetric
    assert body.contains(np.zeros(3))


def test_cut_rejects_out_of_range():
    with pytest.raises(BodyError):
        make_cut(1)
