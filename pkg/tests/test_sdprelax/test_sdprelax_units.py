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
import json

import numpy as np
import pytest

from numpy.testing import assert_allclose, assert_array_equal
from sandwich.bodies import make_cross, make_cut
from sandwich.ellipsoid import DegenerateSpanError
from sandwich.polynorm import EmpiricalMeasure
from sandwich.sdprelax import (
    FEASIBLE,
    INFEASIBLE,
    RelaxationPoint,
    acut_vertices,
    build_qv_form,
    cut_brute_member,
    cut_relax_member,
    q_member,
    qv_certify,
    sample_relaxation_point,
    witness_to_json
)


@pytest.fixture(scope='module')
def non_psd():
    return np.array([[1.0, 1.0, -1.0], [1.0, 1.0, 1.0], [-1.0, 1.0, 1.0]])


@pytest.fixture(scope='module')
def square_atoms():
    return EmpiricalMeasure.uniform(make_cross(2).points)


def test_relaxation_membership(non_psd):
    assert cut_relax_member(np.eye(4))
    for vertex in make_cut(4):
        assert cut_relax_member(vertex)
    assert not cut_relax_member(non_psd)


def test_relaxation_needs_unit_diagonal():
    with pytest.raises(ValueError):
        cut_relax_member(2 * np.eye(3))


def test_brute_membership(non_psd):
    assert cut_brute_member(np.eye(3), 3)
    assert cut_brute_member(make_cut(3)[2], 3)
    assert not cut_brute_member(non_psd, 3)


def test_relaxation_point_sample():
    point = sample_relaxation_point(4, seed=3)

    assert_array_equal(np.diag(point.matrix), np.ones(4))
    assert point.psd_margin == pytest.approx(0.0, abs=1e-9)
    assert np.all(np.abs(point.matrix) <= 1.0 + 1e-9)


def test_relaxation_point_from_matrix():
    point = RelaxationPoint.from_matrix(np.array([[3.0, 0.5], [0.5, 7.0]]))

    assert_array_equal(point.matrix, [[1.0, 0.5], [0.5, 1.0]])
    assert point.psd_margin == pytest.approx(0.5)


def test_acut_vertices():
    vertices = acut_vertices(3)

    assert vertices.shape == (4 * 8, 9)
    assert np.all(np.abs(vertices) == 1.0)


def test_corner_of_sign_product():
    x = np.array([1.0, -1.0, 1.0])
    y = np.array([-1.0, -1.0, 1.0])
    membership = q_member(np.outer(x, y))

    z = np.concatenate([x, y])
    assert membership.status == FEASIBLE
    assert_allclose(membership.witness, np.outer(z, z), atol=1e-12)


def test_zero_corner():
    membership = q_member(np.zeros((3, 3)))

    assert membership.feasible
    assert_allclose(membership.witness, np.eye(6), atol=1e-12)


def test_large_entry_has_no_completion():
    X = np.array([[2.0, 0.0], [0.0, 0.0]])

    assert q_member(X).status == INFEASIBLE


def test_q_member_size_limit():
    with pytest.raises(ValueError):
        q_member(np.zeros((21, 21)))


def test_witness_json():
    document = json.loads(json.dumps(witness_to_json(q_member(np.zeros((2, 2))))))

    assert document['status'] == 'feasible'
    assert np.array(document['matrix']).shape == (4, 4)
    assert document['certificate'] is None


def test_qv_form_at_origin(square_atoms):
    form = build_qv_form(square_atoms, 2, np.zeros(2))

    assert form.n_monomials == 6
    assert form.is_psd()
    values = np.array([[1, a, b, a * a, a * b, b * b]
                       for a, b in square_atoms.atoms], dtype=float)
    assert_allclose(form.gram, values.T @ values / 4, atol=1e-12)


def test_qv_rejects_far_point(square_atoms):
    form = build_qv_form(square_atoms, 1, np.array([3.0, 0.0]))

    assert_allclose(form.gram, [[1.0, -1.5, 0.0], [-1.5, 0.5, 0.0],
                                [0.0, 0.0, 0.5]], atol=1e-12)
    assert np.min(np.linalg.eigvalsh(form.gram)) < 0
    assert not qv_certify(square_atoms, 1, np.array([3.0, 0.0]))


@pytest.mark.parametrize('k', [1, 2])
def test_qv_accepts_vertex(square_atoms, k):
    assert qv_certify(square_atoms, k, np.array([1.0, 1.0]))
    assert qv_certify(square_atoms, k, np.array([-1.0, 1.0]))


def test_qv_needs_spanning_atoms():
    atoms = EmpiricalMeasure.uniform(np.array([[1.0, 0.0], [-1.0, 0.0]]))

    with pytest.raises(DegenerateSpanError):
        build_qv_form(atoms, 1, np.zeros(2))


def test_qv_over_many_collinear_atoms():
    line = np.random.RandomState(4).randn(100000)
    atoms = EmpiricalMeasure.uniform(np.column_stack([line, 2 * line]))

    with pytest.raises(DegenerateSpanError) as info:
        build_qv_form(atoms, 1, np.zeros(2))

    assert_allclose(np.abs(info.value.direction),
                    np.array([2.0, 1.0]) / np.sqrt(5), atol=1e-9)
