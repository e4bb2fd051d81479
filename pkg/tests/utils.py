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

from numpy.testing import assert_allclose
from scipy.stats import linregress


def assert_symmetric(matrix, atol=0.0):
    assert len(matrix.shape) == 2
    assert matrix.shape[0] == matrix.shape[1]

    assert_allclose(matrix, matrix.T, rtol=0, atol=atol)


def assert_inside(body, points, tol=1e-9):
    inside = np.atleast_1d(body.contains(points, tol))

    assert np.all(inside), f'{int(np.sum(~inside))} points fall outside'


def assert_outside(body, points, tol=1e-9):
    inside = np.atleast_1d(body.contains(points, tol))

    assert not np.any(inside)


def assert_homogeneous(gauge_function, vectors, scales=(0.5, 2.0, 7.0),
                       rtol=1e-9):
    base = np.asarray([gauge_function(v) for v in vectors])
    for t in scales:
        scaled = np.asarray([gauge_function(t * v) for v in vectors])
        assert_allclose(scaled, t * base, rtol=rtol, atol=1e-12)


def assert_error_falls(errors):
    """Errors listed in order of increasing effort trend downward."""
    errors = np.asarray(errors, dtype=float)
    assert errors.shape[0] > 1

    X = np.arange(errors.shape[0])
    slope_of_error = linregress(X, errors)[0]

    assert slope_of_error < 0


def assert_nonincreasing(values, slack=1e-9):
    values = np.asarray(values, dtype=float)

    assert np.all(np.diff(values) <= slack)


def brute_hull_support(points, directions):
    """Support values of conv(points), used as an oracle."""
    return np.max(np.atleast_2d(directions) @ np.atleast_2d(points).T, axis=1)


def regular_polygon(k, radius=1.0, phase=0.0):
    angles = phase + 2 * np.pi * np.arange(k) / k
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])
