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
from scipy.linalg import LinAlgError, cholesky, eigh


PSD_TOL = 1e-9
EIGEN_TOL = 1e-9
MAX_EIGEN_DIM = 2000

# Samples are drawn in blocks; block b always comes from substream (seed, b).
SAMPLE_BLOCK = 1024


class NumericalError(RuntimeError):
    """A dense factorization failed or missed its accuracy target."""


def sym_matrix(entries):
    """Symmetric copy of `entries`, with the upper triangle mirrored."""
    m = np.array(entries, dtype=float)
    assert len(m.shape) == 2
    assert m.shape[0] == m.shape[1]

    upper = np.triu(m)

    return upper + np.triu(m, 1).T


def max_abs(m):
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def row_space(points, rtol):
    """Numerical rank of the rows of `points` and an orthonormal d×d basis
    whose first `rank` rows span them.

    Tall inputs are reduced to their R factor first, so memory stays O(N·d)
     for N points in R^d.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    N, d = points.shape

    reduced = np.linalg.qr(points, mode='r') if N > d else points
    square = np.zeros((d, d))
    square[:reduced.shape[0]] = reduced

    _, singular_values, vt = np.linalg.svd(square)
    top = singular_values[0] if singular_values.size else 0.0
    rank = int(np.sum(singular_values > rtol * max(top, 1.0)))

    return rank, vt


def sym_eigen(m, tol=EIGEN_TOL):
    """Eigendecomposition of a symmetric matrix.

    DESCRIPTION
     Wraps scipy.linalg.eigh and checks the reconstruction
      ‖m − VΛVᵀ‖_max ≤ tol·(1 + ‖m‖_max).

    ARGUMENTS
     m  (numpy.ndarray), shape=(d, d)
       - Exactly symmetric matrix, d ≤ 2000.

     tol  (float)
       - Relative reconstruction tolerance.

    RETURNS
     eigenvalues  (numpy.ndarray), shape=(d,)
       - Sorted in descending order.

     eigenvectors  (numpy.ndarray), shape=(d, d)
       - Orthonormal columns matching `eigenvalues`.
    """
    m = np.asarray(m, dtype=float)
    assert len(m.shape) == 2
    assert m.shape[0] == m.shape[1]

    if m.shape[0] > MAX_EIGEN_DIM:
        raise ValueError(f'Matrix too large: {m.shape[0]=} > {MAX_EIGEN_DIM}.')
    if not np.all(np.isfinite(m)):
        raise NumericalError('Matrix has non-finite entries.')

    try:
        eigenvalues, eigenvectors = eigh(m)
    except LinAlgError as error:
        raise NumericalError(f'Eigensolver did not converge: {error}') from error

    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    residual = m - (eigenvectors * eigenvalues) @ eigenvectors.T
    if max_abs(residual) > tol * (1 + max_abs(m)):
        raise NumericalError(
            f'Eigen reconstruction error {max_abs(residual):.3e} exceeds '
            f'{tol * (1 + max_abs(m)):.3e}.'
        )

    return eigenvalues, eigenvectors


def min_eigenvalue(m):
    eigenvalues, _ = sym_eigen(m)

    return eigenvalues[-1]


def psd_threshold(m, tol=PSD_TOL):
    return tol * (1 + max_abs(m))


def is_psd(m, tol=PSD_TOL, method='eigen'):
    """True iff the smallest eigenvalue is ≥ −tol·(1 + ‖m‖_max).

    The 'cholesky' method factors m + τI, which succeeds exactly when the
     smallest eigenvalue exceeds −τ.
    """
    m = np.asarray(m, dtype=float)
    threshold = psd_threshold(m, tol)

    if method == 'eigen':
        return bool(min_eigenvalue(m) >= -threshold)

    elif method == 'cholesky':
        shifted = m + threshold * np.eye(m.shape[0])
        try:
            cholesky(shifted, lower=True, check_finite=True)
        except LinAlgError:
            return False
        return True

    else:
        raise ValueError(f'Unknown PSD test: {method=}')


def make_rng(seed, *index):
    """Counter-based generator for the substream keyed by (seed, *index)."""
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(i) for i in index))

    return np.random.Generator(np.random.Philox(sequence))


def _standard_normal_rows(d, n, seed, start=0, stream=0):
    """Rows start..start+n−1 of the blockwise Gaussian stream."""
    if n == 0:
        return np.zeros((0, d))

    first_block = start // SAMPLE_BLOCK
    last_block = (start + n - 1) // SAMPLE_BLOCK

    blocks = [make_rng(seed, stream, b).standard_normal((SAMPLE_BLOCK, d))
              for b in range(first_block, last_block + 1)]
    rows = np.concatenate(blocks, axis=0)

    offset = start - first_block * SAMPLE_BLOCK

    return rows[offset:offset + n]


def sample_unit_sphere(d, n, seed, start=0):
    """n points of the Haar measure on S^{d−1} by normalizing Gaussians.

    Row i of the result equals row start+i of any other call with the same
     seed, so callers may partition sample indices freely.
    """
    if d < 1:
        raise ValueError(f'Sphere dimension must be positive: {d=}')

    gaussians = _standard_normal_rows(d, n, seed, start)
    norms = np.linalg.norm(gaussians, axis=1)

    # Zero rows have probability zero; redraw from a side stream if one appears.
    zero = norms == 0
    while np.any(zero):
        gaussians[zero] = make_rng(seed, 1, int(np.flatnonzero(zero)[0])
                                   ).standard_normal((int(zero.sum()), d))
        norms = np.linalg.norm(gaussians, axis=1)
        zero = norms == 0

    return gaussians / norms[:, None]


def sample_signs(m, n, seed):
    """n rows of independent ±1 signs."""
    bits = make_rng(seed, 2).integers(0, 2, size=(n, m))

    return 2.0 * bits - 1.0
