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
from sandwich.bodies import Ellipsoid, VRep, make_cross, make_cube, make_simplex
from sandwich.ellipsoid import (
    DegenerateSpanError,
    MVEE_EPS,
    facet_tangency,
    john_inner_polytope,
    john_inner_symmetric,
    loewner_mvee,
    polar_ellipsoid
)
from tests.utils import regular_polygon


def test_cross_vertices_give_unit_disc():
    result = loewner_mvee(make_cross(2).points)

    assert result.symmetric
    assert_allclose(result.ellipsoid.form, np.eye(2), atol=1e-6)
    assert_allclose(result.ellipsoid.center, 0.0)


def test_square_vertices_give_disc_of_radius_sqrt2():
    result = loewner_mvee(make_cube(2).points)

    assert_allclose(result.ellipsoid.form, np.eye(2) / 2, atol=1e-6)


def test_rank_deficient_points_name_the_direction():
    with pytest.raises(DegenerateSpanError) as info:
        loewner_mvee(np.array([[1.0, 0.0], [-1.0, 0.0]]))

    assert_allclose(np.abs(info.value.direction), [0.0, 1.0], atol=1e-12)


def test_affinely_degenerate_points():
    with pytest.raises(DegenerateSpanError):
        loewner_mvee(np.array([[0.0, 1.0], [1.0, 1.0], [2.0, 1.0]]),
                     symmetric=False)


def test_triangle_gives_circumcircle():
    result = loewner_mvee(regular_polygon(3), symmetric=False)

    assert not result.symmetric
    assert_allclose(result.ellipsoid.center, 0.0, atol=1e-6)
    assert_allclose(result.ellipsoid.form, np.eye(2), atol=1e-6)


def test_every_point_inside_and_gap_below_eps():
    np.random.seed(1234)
    points = np.random.randn(40, 3)
    result = loewner_mvee(points, symmetric=False)

    assert result.gap <= MVEE_EPS
    assert np.all(result.ellipsoid.value(points) <= 1.0 + 1e-12)
    assert_allclose(result.weights.sum(), 1.0)
    assert np.all(result.weights >= 0)


def test_moment_matrix_reproduces_form():
    np.random.seed(1234)
    points = np.random.randn(25, 4)
    points = np.vstack([points, -points])
    result = loewner_mvee(points)

    assert_allclose(np.linalg.inv(result.moment_matrix()) / 4,
                    result.ellipsoid.form, rtol=1e-6)


def test_interval_is_its_own_ellipsoid():
    interval = VRep(np.array([[-1.0], [1.0], [0.5], [-0.5]]))
    inner = john_inner_symmetric(interval)

    assert_allclose(inner.form, [[1.0]])


def test_john_inner_of_square_is_unit_disc():
    inner = john_inner_symmetric(make_cube(2))

    assert_allclose(inner.form, np.eye(2), atol=1e-6)


@pytest.mark.parametrize('d', [2, 3, 5])
def test_john_inner_of_cross_polytope(d):
    inner = john_inner_symmetric(make_cross(d))

    assert_allclose(inner.form, d * np.eye(d), atol=1e-6)


def test_john_inner_symmetric_rejects_simplex():
    with pytest.raises(ValueError):
        john_inner_symmetric(make_simplex(2))


def test_polar_of_centered_ellipsoid_inverts_form():
    E = Ellipsoid(np.zeros(2), np.diag([4.0, 0.25]))

    assert_allclose(polar_ellipsoid(E).form, np.diag([0.25, 4.0]))


def test_polar_is_an_involution():
    E = Ellipsoid(np.array([0.2, -0.1]), np.array([[2.0, 0.3], [0.3, 1.0]]))
    twice = polar_ellipsoid(polar_ellipsoid(E))

    assert_allclose(twice.center, E.center, atol=1e-12)
    assert_allclose(twice.form, E.form, atol=1e-12)


def test_polar_support_is_one_on_boundary():
    E = Ellipsoid(np.array([0.3, 0.1]), np.array([[1.5, -0.2], [-0.2, 0.8]]))
    polar = polar_ellipsoid(E)
    directions = regular_polygon(12)
    boundary = polar.boundary_points(directions)

    assert_allclose(E.support(boundary), 1.0, atol=1e-10)


def test_polar_needs_interior_origin():
    with pytest.raises(ValueError):
        polar_ellipsoid(Ellipsoid(np.array([2.0, 0.0]), np.eye(2)))


def test_simplex_inner_ellipsoid_is_insphere():
    simplex = make_simplex(2)
    inner = john_inner_polytope(simplex)
    normals, _ = simplex.facets

    slack, tangent = facet_tangency(inner, normals)

    assert_allclose(inner.center, 0.0, atol=1e-6)
    assert_allclose(inner.form, inner.form[0, 0] * np.eye(2), atol=1e-5)
    assert np.all(tangent)
    assert np.all(slack >= -1e-9)


def test_many_coplanar_points_name_the_normal():
    points = np.random.RandomState(8).randn(100000, 3)
    points[:, 2] = 0.0

    with pytest.raises(DegenerateSpanError) as info:
        loewner_mvee(points, symmetric=False)

    assert_allclose(np.abs(info.value.direction), [0.0, 0.0, 1.0], atol=1e-9)
