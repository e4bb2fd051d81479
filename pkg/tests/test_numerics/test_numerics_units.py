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
from sandwich.numerics import (
    NumericalError,
    is_psd,
    make_rng,
    min_eigenvalue,
    psd_threshold,
    row_space,
    sample_signs,
    sample_unit_sphere,
    sym_eigen,
    sym_matrix
)
from tests.utils import assert_symmetric


def test_sym_matrix_mirrors_upper_triangle():
    m = sym_matrix([[1, 2, 3],
                    [9, 4, 5],
                    [9, 9, 6]])

    assert_symmetric(m)
    assert_array_equal(m, [[1, 2, 3], [2, 4, 5], [3, 5, 6]])


@pytest.mark.parametrize('matrix, expected', [
    (np.eye(3), [1, 1, 1]),
    ([[1, 1], [1, 1]], [2, 0]),
    (np.diag([5, -2]), [5, -2]),
])
def test_sym_eigen_examples(matrix, expected):
    eigenvalues, eigenvectors = sym_eigen(np.asarray(matrix, dtype=float))

    assert_allclose(eigenvalues, expected, atol=1e-12)
    assert_allclose(eigenvectors.T @ eigenvectors, np.eye(len(expected)),
                    atol=1e-12)


def test_sym_eigen_descending_and_reconstructs():
    np.random.seed(1234)
    G = np.random.randn(8, 8)
    m = sym_matrix(G + G.T)

    eigenvalues, eigenvectors = sym_eigen(m)

    assert np.all(np.diff(eigenvalues) <= 0)
    assert_allclose((eigenvectors * eigenvalues) @ eigenvectors.T, m,
                    atol=1e-10)


def test_sym_eigen_rejects_non_finite():
    with pytest.raises(NumericalError):
        sym_eigen(np.array([[np.nan, 0], [0, 1]]))


def test_sym_eigen_rejects_oversized():
    with pytest.raises(ValueError):
        sym_eigen(np.zeros((2001, 2001)))


@pytest.mark.parametrize('method', ['eigen', 'cholesky'])
def test_is_psd_examples(method):
    x = np.array([1.0, -1.0, 1.0])

    assert is_psd(np.eye(3), method=method)
    assert not is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]), method=method)
    assert is_psd(np.outer(x, x), method=method)


def test_is_psd_threshold_is_relative():
    m = 1e6 * np.diag([1.0, -1e-16])

    assert psd_threshold(m) == pytest.approx(1e-9 * (1 + 1e6))
    assert is_psd(m)
    assert min_eigenvalue(m) < 0


def test_is_psd_unknown_method():
    with pytest.raises(ValueError):
        is_psd(np.eye(2), method='sylvester')


def test_make_rng_streams_are_reproducible():
    a = make_rng(7, 3).standard_normal(5)
    b = make_rng(7, 3).standard_normal(5)
    c = make_rng(7, 4).standard_normal(5)

    assert_array_equal(a, b)
    assert not np.allclose(a, c)


def test_sphere_d1_is_signs():
    samples = sample_unit_sphere(1, 50, seed=3)

    assert set(np.unique(samples)) <= {-1.0, 1.0}


def test_sphere_unit_norm():
    samples = sample_unit_sphere(5, 2000, seed=11)

    assert_allclose(np.linalg.norm(samples, axis=1), 1.0, atol=1e-12)


def test_sphere_partitioned_indices_match():
    whole = sample_unit_sphere(4, 3000, seed=5)
    parts = np.vstack([sample_unit_sphere(4, 1000, seed=5, start=s)
                       for s in (0, 1000, 2000)])

    assert_array_equal(whole, parts)


def test_sphere_rejects_zero_dimension():
    with pytest.raises(ValueError):
        sample_unit_sphere(0, 3, seed=0)


def test_sample_signs():
    signs = sample_signs(6, 100, seed=2)

    assert signs.shape == (100, 6)
    assert set(np.unique(signs)) == {-1.0, 1.0}
    assert_array_equal(signs, sample_signs(6, 100, seed=2))


def test_row_space_of_tall_point_set():
    points = np.random.RandomState(3).randn(300000, 3)
    points[:, 2] = points[:, 0] - points[:, 1]

    rank, vt = row_space(points, 1e-10)

    assert rank == 2
    assert vt.shape == (3, 3)
    assert_allclose(np.abs(vt[2]), np.array([1.0, 1.0, 1.0]) / np.sqrt(3),
                    atol=1e-9)


def test_row_space_of_wide_point_set():
    rank, vt = row_space(np.array([[1.0, 0.0, 0.0, 0.0]]), 1e-10)

    assert rank == 1
    assert_allclose(vt @ vt.T, np.eye(4), atol=1e-12)
    assert_allclose(np.abs(vt[0]), [1.0, 0.0, 0.0, 0.0], atol=1e-12)
