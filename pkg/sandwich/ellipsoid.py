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
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .bodies import (
    BodyError,
    Ellipsoid,
    HRep,
    VRep,
    _closed_under_negation,
    make_tsp,
)
from .numerics import NumericalError, row_space, sample_unit_sphere


MVEE_EPS = 1e-7
MVEE_ITER_CAP = 10 ** 6
SPAN_RTOL = 1e-10

# Boundary samples used to double-check inscribed ellipsoids.
INNER_CHECK_SAMPLES = 256


class DegenerateSpanError(BodyError):
    """The points lie in a proper (affine) subspace."""

    def __init__(self, direction):
        self.direction = np.asarray(direction, dtype=float)
        super().__init__('Points do not span the space; deficient direction '
                         f'{np.round(self.direction, 6).tolist()}.')


@dataclass(frozen=True)
class MveeResult:
    ellipsoid: Ellipsoid
    iterations: int
    gap: float
    weights: np.ndarray
    points: np.ndarray
    symmetric: bool

    def moment_matrix(self):
        """Σ uᵢ pᵢ pᵢᵀ (centered by Σ uᵢ pᵢ in the general case)."""
        moment = (self.points * self.weights[:, None]).T @ self.points
        if self.symmetric:
            return moment
        center = self.weights @ self.points
        return moment - np.outer(center, center)


def _check_span(points, symmetric):
    shifted = points if symmetric else points - points.mean(axis=0)
    d = points.shape[1]

    rank, vt = row_space(shifted, SPAN_RTOL)

    if rank < d:
        raise DegenerateSpanError(vt[rank])


def _lifted(points, symmetric):
    """Columns q_i: p_i itself, or (p_i, 1) for a free center."""
    if symmetric:
        return points.T
    return np.vstack([points.T, np.ones(points.shape[0])])


def _leverages(Q, weights):
    moment = (Q * weights) @ Q.T
    try:
        factor = cho_factor(moment)
    except LinAlgError as error:
        raise NumericalError(f'Moment matrix lost definiteness: {error}') \
            from error

    return np.einsum('ij,ij->j', Q, cho_solve(factor, Q))


def loewner_mvee(points, eps=MVEE_EPS, symmetric=None, iter_cap=MVEE_ITER_CAP):
    """Minimum-volume enclosing ellipsoid by coordinate ascent.

    DESCRIPTION
     Barycentric weights u are moved one coordinate at a time, toward the
      point of largest leverage g_i = q_iᵀ(Σ u q qᵀ)⁻¹ q_i or away from the
      supported point of smallest leverage, with the exact line-search step.
      The iteration stops once max g ≤ n(1 + eps) and min over the support
      of g ≥ n(1 − eps), where n = d (symmetric) or d + 1 (free center).

     The returned ellipsoid is rescaled so every input point lies inside
      it exactly; the rescaling factor is at most 1 + gap.

    ARGUMENTS
     points  (numpy.ndarray), shape=(N, d)
       - Must affinely span R^d (linearly, in symmetric mode).

     eps  (float)
       - Relative gap at termination.

     symmetric  (bool or None)
       - Force the center to 0. Detected from closure under negation when
          None.

     iter_cap  (int)

    RETURNS
     result  (MveeResult)
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    N, d = points.shape

    if N == 0:
        raise BodyError('No points to enclose.')
    if symmetric is None:
        symmetric = _closed_under_negation(points)

    _check_span(points, symmetric)

    Q = _lifted(points, symmetric)
    n = Q.shape[0]
    weights = np.full(N, 1.0 / N)
    gap = np.inf
    iteration = 0

    if n == 1:
        # A symmetric interval; the extreme points carry all the weight.
        magnitude = np.abs(points[:, 0])
        weights = (magnitude == magnitude.max()).astype(float)
        weights /= weights.sum()
        gap = 0.0

    while n > 1:
        g = _leverages(Q, weights)

        j = int(np.argmax(g))
        support = np.flatnonzero(weights > 0)
        i = int(support[np.argmin(g[support])])

        eps_plus = g[j] / n - 1.0
        eps_minus = 1.0 - g[i] / n
        gap = max(eps_plus, eps_minus)

        if gap <= eps:
            break
        if iteration >= iter_cap:
            raise NumericalError(f'MVEE did not reach {eps=} within '
                                 f'{iter_cap} iterations (gap {gap:.3e}).')

        if eps_plus >= eps_minus:
            k = j
            step = (g[j] - n) / ((n - 1) * g[j])
        else:
            k = i
            step = max((g[i] - n) / ((n - 1) * g[i]), -weights[i])

        weights = weights / (1.0 + step)
        weights[k] += step / (1.0 + step)
        weights[k] = max(weights[k], 0.0)
        iteration += 1

    if symmetric:
        center = np.zeros(d)
        moment = (points * weights[:, None]).T @ points
        form = np.linalg.inv(moment) / d
    else:
        center = weights @ points
        moment = (points * weights[:, None]).T @ points - np.outer(center,
                                                                    center)
        form = np.linalg.inv(moment) / d

    diffs = points - center
    worst = float(np.max(np.einsum('ij,jk,ik->i', diffs, form, diffs)))
    form = form / worst

    logging.info(f'MVEE of {N} points in R^{d}: {iteration} iterations, '
                 f'gap {gap:.2e}, rescale {worst:.6f}.')

    return MveeResult(Ellipsoid(center, form), iteration, float(max(gap, 0.0)),
                      weights, points, bool(symmetric))


def john_inner_symmetric(b, eps=MVEE_EPS):
    """Ellipsoid E with E ⊂ b ⊂ √d·(1 + eps)·E for a symmetric V-polytope.

    E = {x : xᵀ(Σ uᵢ pᵢ pᵢᵀ)⁻¹x ≤ 1} for the optimal weights u, which is the
     enclosing ellipsoid shrunk by its largest leverage, √d up to eps.
    """
    if not isinstance(b, VRep) or not b.symmetric:
        raise BodyError('john_inner_symmetric needs a symmetric V-polytope.')

    result = loewner_mvee(b.points, eps, symmetric=True)
    inner = Ellipsoid(np.zeros(b.dim), np.linalg.inv(result.moment_matrix()))

    directions = sample_unit_sphere(b.dim, INNER_CHECK_SAMPLES, seed=0)
    gauges = b.gauge(inner.boundary_points(directions))
    if np.max(gauges) > 1.0 + eps:
        raise NumericalError(f'Inscribed ellipsoid leaves the body: gauge '
                             f'{np.max(gauges):.9f}.')

    return inner


def polar_ellipsoid(E):
    """The polar {y : y·x ≤ 1 for all x ∈ E}, itself an ellipsoid."""
    c = E.center
    shape = E.inverse_form()
    kernel = shape - np.outer(c, c)

    try:
        factor = cho_factor(kernel)
    except LinAlgError as error:
        raise BodyError('Origin is not interior to the ellipsoid; its polar '
                        'is unbounded.') from error

    shift = cho_solve(factor, c)
    return Ellipsoid(-shift, kernel / (1.0 + c @ shift))


def john_inner_polytope(b, eps=MVEE_EPS):
    """Inscribed ellipsoid of a polytope as the polar of the Löwner
    ellipsoid of its polar.

    The origin must be interior. Facets are enumerated for V-polytopes, so
     the dimension is limited to that of the facet enumerator.
    """
    if isinstance(b, VRep):
        if b.facets is None:
            b.with_facets()
        A, rhs = b.facets
        normals = A / rhs[:, None]
    elif isinstance(b, HRep):
        normals, _ = b.normalized()
    else:
        raise BodyError(f'Not a polytope: {b.kind=}')

    result = loewner_mvee(normals, eps)

    return polar_ellipsoid(result.ellipsoid)


def facet_tangency(E, normals, tol=1e-6):
    """Slack 1 − h_E(a) per facet a·x ≤ 1 and a mask of tangent facets."""
    slack = 1.0 - E.support(np.atleast_2d(normals))
    return slack, np.abs(slack) <= tol


def tsp_inscribed_ellipsoid(n, eps=MVEE_EPS):
    """Inscribed ellipsoid of TSP_n in intrinsic coordinates.

    RETURNS
     ellipsoid  (Ellipsoid)
     tsp  (TspPolytope)
       - body carries its enumerated facets.
    """
    tsp = make_tsp(n)
    tsp.body.with_facets()
    ellipsoid = john_inner_polytope(tsp.body, eps)

    logging.info(f'TSP_{n}: {tsp.body.facets[0].shape[0]} facets, inscribed '
                 f'ellipsoid center norm {np.linalg.norm(ellipsoid.center):.2e}.')

    return ellipsoid, tsp


def nonnegativity_facets(tsp):
    """Facets x_ij ≥ 0 of TSP_n in intrinsic coordinates, normalized to ≤ 1."""
    n = tsp.n
    rows, cols = np.triu_indices(n, 1)
    normals = []
    for i, j in zip(rows, cols):
        # x_ij = center_ij + (basis y)_ij ≥ 0  ⇔  −(basis row)·y ≤ center_ij.
        row = (tsp.basis[i * n + j] + tsp.basis[j * n + i]) / 2.0
        normals.append(-row / tsp.center[i, j])

    return np.array(normals)
