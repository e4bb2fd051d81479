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
import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve, null_space
from scipy.spatial import ConvexHull, QhullError

from .lp import (
    FEASTOL,
    LinearProgram,
    lp_feasible,
    lp_solve,
    member_projection,
    member_vrep,
)
from .numerics import make_rng, min_eigenvalue, sample_unit_sphere, sym_matrix


MAX_FACET_DIM = 10
AUTO_FACET_DIM = 6
BISECTION_RTOL = 1e-12


class BodyError(ValueError):
    """A body cannot answer a query (origin not interior, unbounded, ...)."""


def _rows(x):
    x = np.asarray(x, dtype=float)
    return x[None, :] if x.ndim == 1 else x


def _closed_under_negation(rows, decimals=9):
    keys = {tuple(np.round(row, decimals) + 0.0) for row in rows}
    return all(tuple(np.round(-row, decimals) + 0.0) in keys for row in rows)


@dataclass(frozen=True)
class Ellipsoid:
    """The set {v : (v − center)ᵀ form (v − center) ≤ 1}."""
    center: np.ndarray
    form: np.ndarray

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        form = sym_matrix(self.form)
        if form.shape != (center.shape[0], center.shape[0]):
            raise BodyError(f'Form and center disagree: {form.shape=}, '
                            f'{center.shape=}')
        if not min_eigenvalue(form) > 0:
            raise BodyError('Ellipsoid form must be positive definite.')

        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'form', form)

    @property
    def dim(self):
        return self.center.shape[0]

    def value(self, x):
        """q(x − v₀) for one point or each row."""
        diff = _rows(x) - self.center
        values = np.einsum('ij,jk,ik->i', diff, self.form, diff)
        return values if np.ndim(x) == 2 else float(values[0])

    def inverse_form(self):
        return cho_solve(cho_factor(self.form), np.eye(self.dim))

    def support(self, c):
        c = _rows(c)
        inverse = self.inverse_form()
        widths = np.sqrt(np.maximum(np.einsum('ij,jk,ik->i', c, inverse, c), 0))
        values = c @ self.center + widths
        return values

    def boundary_points(self, directions):
        """center + L⁻ᵀu for unit u, where form = L Lᵀ."""
        lower = np.linalg.cholesky(self.form)
        offsets = np.linalg.solve(lower.T, _rows(directions).T).T
        return self.center + offsets

    def scaled(self, t):
        return Ellipsoid(t * self.center, self.form / t ** 2)


class Body:
    """A convex body with membership, gauge and support oracles.

    Subclasses answer row-batched queries through _contains_rows,
     _gauge_rows and _support_rows. The default gauge bisects over
     membership.
    """
    kind = 'body'
    closed_support = False

    def __init__(self, dim, symmetric=False):
        self.dim = int(dim)
        self.symmetric = bool(symmetric)
        self.center = np.zeros(self.dim)

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise BodyError(f'Expected vectors of dimension {self.dim}, '
                            f'got shape {x.shape}.')
        return x

    def contains(self, x, tol=FEASTOL):
        x = self._check(x)
        result = self._contains_rows(_rows(x), tol)
        return result if x.ndim == 2 else bool(result[0])

    def gauge(self, v):
        v = self._check(v)
        result = self._gauge_rows(_rows(v))
        return result if v.ndim == 2 else float(result[0])

    def support(self, c):
        c = self._check(c)
        result = self._support_rows(_rows(c))
        return result if c.ndim == 2 else float(result[0])

    def _contains_rows(self, X, tol):
        raise NotImplementedError

    def _support_rows(self, C):
        raise NotImplementedError

    def _gauge_rows(self, V):
        return np.array([bisect_gauge(lambda x: self.contains(x, 0.0), v)
                         for v in V])

    def scaled(self, t):
        raise NotImplementedError

    def describe(self):
        return {'kind': self.kind, 'dim': self.dim,
                'symmetric': self.symmetric}


def bisect_gauge(inside, v, rtol=BISECTION_RTOL, max_doublings=200):
    """inf{λ > 0 : v ∈ λB} from a membership predicate alone."""
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return 0.0

    hi = 1.0
    for _ in range(max_doublings):
        if inside(v / hi):
            break
        hi *= 2.0
    else:
        raise BodyError('Gauge search diverged; origin not interior.')

    lo = hi / 2.0
    for _ in range(max_doublings):
        if not inside(v / lo):
            break
        hi, lo = lo, lo / 2.0
    else:
        return 0.0

    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if inside(v / mid):
            hi = mid
        else:
            lo = mid

    return hi


def enumerate_facets(points, tol=1e-9):
    """Facets a·x ≤ 1 of conv(points) by qhull (dimension ≤ 10).

    Duplicate rows from qhull's triangulated facets are merged.
    """
    points = np.asarray(points, dtype=float)
    d = points.shape[1]

    if d > MAX_FACET_DIM:
        raise BodyError(f'Facet enumeration limited to dim ≤ {MAX_FACET_DIM}: '
                        f'{d=}')

    if d == 1:
        hi, lo = points.max(), points.min()
        if not lo < -tol < tol < hi:
            raise BodyError('Origin is not interior to the interval.')
        return np.array([[1.0 / hi], [1.0 / lo]]), np.ones(2)

    try:
        hull = ConvexHull(points)
    except QhullError as error:
        raise BodyError(f'Points do not span a body: {error}') from error

    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]
    if np.any(offsets <= tol):
        raise BodyError('Origin is not interior to the hull.')

    rows = normals / offsets[:, None]
    rows = np.unique(np.round(rows, 10), axis=0)

    return rows, np.ones(rows.shape[0])


class VRep(Body):
    """conv(points), optionally with a known facet list A x ≤ b."""
    kind = 'vrep'
    closed_support = True

    def __init__(self, points, facets=None, symmetric=None):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.size == 0:
            raise BodyError('A V-polytope needs at least one point.')

        if symmetric is None:
            symmetric = _closed_under_negation(points)
        super().__init__(points.shape[1], symmetric)

        self.points = points
        self.facets = None
        if facets is not None:
            A, b = facets
            self.facets = (np.atleast_2d(np.asarray(A, dtype=float)),
                           np.asarray(b, dtype=float))

    @property
    def n_vertices(self):
        return self.points.shape[0]

    def with_facets(self):
        if self.facets is None:
            self.facets = enumerate_facets(self.points)
        return self

    def _contains_rows(self, X, tol):
        if self.facets is not None:
            A, b = self.facets
            return np.all(X @ A.T <= b + tol, axis=1)
        return np.array([member_vrep(x, self.points, max(tol, FEASTOL))
                         for x in X])

    def _gauge_rows(self, V):
        if self.facets is not None:
            A, b = self.facets
            return np.maximum(np.max((V @ A.T) / b, axis=1), 0.0)
        return np.array([_vrep_gauge(self.points, v) for v in V])

    def _support_rows(self, C):
        return np.max(C @ self.points.T, axis=1)

    def scaled(self, t):
        facets = None
        if self.facets is not None:
            facets = (self.facets[0], self.facets[1] * t)
        return VRep(t * self.points, facets, self.symmetric)

    def describe(self):
        info = super().describe()
        info['vertices'] = self.n_vertices
        if self.facets is not None:
            info['facets'] = int(self.facets[0].shape[0])
        return info


def _vrep_gauge(points, v):
    if not np.any(v):
        return 0.0
    N = points.shape[0]
    p = LinearProgram(-np.ones(N), A_eq=points.T, b_eq=v,
                      nonneg=np.ones(N, dtype=bool))
    result = lp_solve(p)
    if not result.optimal:
        raise BodyError(f'Gauge undefined ({result.status}); '
                        'origin not interior.')
    return -result.value


class HRep(Body):
    """{x : A x ≤ b, A_eq x = b_eq}; b defaults to all ones."""
    kind = 'hrep'

    def __init__(self, A, b=None, A_eq=None, b_eq=None, symmetric=None):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.ones(A.shape[0]) if b is None else np.asarray(b, dtype=float)
        if b.shape != (A.shape[0],):
            raise BodyError(f'Right-hand side does not match rows: {A.shape=}, '
                            f'{b.shape=}')

        n = A.shape[1]
        self.A_eq = (np.zeros((0, n)) if A_eq is None
                     else np.atleast_2d(np.asarray(A_eq, dtype=float)))
        self.b_eq = (np.zeros(0) if b_eq is None
                     else np.asarray(b_eq, dtype=float))

        if symmetric is None:
            symmetric = (self.A_eq.shape[0] == 0 and np.all(b > 0)
                         and _closed_under_negation(A / b[:, None]))
        super().__init__(n, symmetric)

        self.A = A
        self.b = b

    @property
    def n_facets(self):
        return self.A.shape[0]

    @property
    def n_rows(self):
        return self.A.shape[0] + self.A_eq.shape[0]

    def normalized(self):
        """Rows scaled to a·x ≤ 1; needs the origin strictly inside."""
        if self.A_eq.shape[0] or np.any(self.b <= 0):
            raise BodyError('Origin is not interior to the H-polytope.')
        return self.A / self.b[:, None], np.ones(self.n_facets)

    def _contains_rows(self, X, tol):
        inside = np.all(X @ self.A.T <= self.b + tol, axis=1)
        if self.A_eq.shape[0]:
            inside &= np.all(np.abs(X @ self.A_eq.T - self.b_eq) <= tol, axis=1)
        return inside

    def _gauge_rows(self, V):
        A, b = self.normalized()
        return np.maximum(np.max(V @ A.T, axis=1), 0.0)

    def _support_rows(self, C):
        return np.array([_lp_support(c, self.A, self.b, self.A_eq, self.b_eq)
                         for c in C])

    def scaled(self, t):
        return HRep(self.A, t * self.b, self.A_eq, t * self.b_eq,
                    self.symmetric)

    def describe(self):
        info = super().describe()
        info['facets'] = self.n_facets
        info['equalities'] = int(self.A_eq.shape[0])
        return info


def _lp_support(c, A, b, A_eq, b_eq, T=None):
    objective = c if T is None else T.T @ c
    result = lp_solve(LinearProgram(objective, A, b, A_eq, b_eq))
    if result.status == 'unbounded':
        raise BodyError('Support is unbounded; the representation is not a '
                        'body.')
    if not result.optimal:
        raise BodyError(f'Support LP ended with status {result.status!r}.')
    return result.value


class Ball(Body):
    kind = 'ball'
    closed_support = True

    def __init__(self, d, radius=1.0):
        if radius <= 0:
            raise BodyError(f'Radius must be positive: {radius=}')
        super().__init__(d, symmetric=True)
        self.radius = float(radius)

    def _contains_rows(self, X, tol):
        return np.linalg.norm(X, axis=1) <= self.radius + tol

    def _gauge_rows(self, V):
        return np.linalg.norm(V, axis=1) / self.radius

    def _support_rows(self, C):
        return self.radius * np.linalg.norm(C, axis=1)

    def scaled(self, t):
        return Ball(self.dim, t * self.radius)

    def describe(self):
        info = super().describe()
        info['radius'] = self.radius
        return info


class EllipsoidBody(Body):
    kind = 'ellipsoid'
    closed_support = True

    def __init__(self, ellipsoid):
        super().__init__(ellipsoid.dim,
                         symmetric=not np.any(ellipsoid.center))
        self.ellipsoid = ellipsoid

    def _contains_rows(self, X, tol):
        return self.ellipsoid.value(X) <= 1.0 + tol

    def _gauge_rows(self, V):
        # Largest root t of q(t·v − v₀) = 1; the gauge is 1/t.
        Q, v0 = self.ellipsoid.form, self.ellipsoid.center
        offset = float(v0 @ Q @ v0)
        if offset >= 1.0:
            raise BodyError('Origin is not interior to the ellipsoid.')

        a = np.einsum('ij,jk,ik->i', V, Q, V)
        half_b = V @ (Q @ v0)
        root = (half_b + np.sqrt(half_b ** 2 + a * (1.0 - offset)))
        gauges = np.zeros(V.shape[0])
        nonzero = a > 0
        gauges[nonzero] = a[nonzero] / root[nonzero]
        return gauges

    def _support_rows(self, C):
        return self.ellipsoid.support(C)

    def scaled(self, t):
        return EllipsoidBody(self.ellipsoid.scaled(t))

    def describe(self):
        info = super().describe()
        info['center'] = self.ellipsoid.center.tolist()
        return info


class LpBall(Body):
    """{x : ‖x‖_p ≤ radius} for 1 ≤ p ≤ ∞."""
    kind = 'lpball'
    closed_support = True

    def __init__(self, d, p, radius=1.0):
        p = float(p)
        if p < 1:
            raise BodyError(f'ℓp balls need p ≥ 1: {p=}')
        super().__init__(d, symmetric=True)
        self.p = p
        self.radius = float(radius)

    @property
    def dual_exponent(self):
        if self.p == 1:
            return np.inf
        if np.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    def _gauge_rows(self, V):
        return np.linalg.norm(V, ord=self.p, axis=1) / self.radius

    def _contains_rows(self, X, tol):
        return self._gauge_rows(X) <= 1.0 + tol

    def _support_rows(self, C):
        return self.radius * np.linalg.norm(C, ord=self.dual_exponent, axis=1)

    def scaled(self, t):
        return LpBall(self.dim, self.p, t * self.radius)

    def describe(self):
        info = super().describe()
        info['p'] = self.p
        return info


class Projected(Body):
    """T(P) for an H-polytope P in W and a linear map T: W → V."""
    kind = 'projected'

    def __init__(self, polytope, T, symmetric=False):
        T = np.atleast_2d(np.asarray(T, dtype=float))
        if T.shape[1] != polytope.dim:
            raise BodyError(f'Map columns must match the lifted space: '
                            f'{T.shape=}, {polytope.dim=}')
        super().__init__(T.shape[0], symmetric)
        self.polytope = polytope
        self.T = T

    @property
    def n_facets(self):
        return self.polytope.n_facets

    @property
    def n_rows(self):
        return self.polytope.n_rows

    def _contains_rows(self, X, tol):
        P = self.polytope
        return np.array([
            member_projection(x, P.A, P.b, self.T, max(tol, FEASTOL),
                              P.A_eq if P.A_eq.shape[0] else None,
                              P.b_eq if P.A_eq.shape[0] else None)
            for x in X
        ])

    def _gauge_rows(self, V):
        return np.array([self._gauge_one(v) for v in V])

    def _gauge_one(self, v):
        if not np.any(v):
            return 0.0
        P = self.polytope
        D = P.dim
        # Variables (w, λ): T w = v, A w ≤ λ b, A_eq w = λ b_eq, minimize λ.
        objective = np.zeros(D + 1)
        objective[-1] = -1.0
        A_ub = np.hstack([P.A, -P.b[:, None]])
        A_eq = np.vstack([np.hstack([self.T, np.zeros((self.dim, 1))]),
                          np.hstack([P.A_eq, -P.b_eq[:, None]])])
        b_eq = np.concatenate([v, np.zeros(P.A_eq.shape[0])])
        nonneg = np.zeros(D + 1, dtype=bool)
        nonneg[-1] = True

        result = lp_solve(LinearProgram(objective, A_ub, np.zeros(P.n_facets),
                                        A_eq, b_eq, nonneg))
        if not result.optimal:
            raise BodyError(f'Gauge undefined ({result.status}); '
                            'origin not interior.')
        return -result.value

    def _support_rows(self, C):
        P = self.polytope
        return np.array([_lp_support(c, P.A, P.b, P.A_eq, P.b_eq, self.T)
                         for c in C])

    def scaled(self, t):
        return Projected(self.polytope, t * self.T, self.symmetric)

    def describe(self):
        info = super().describe()
        info['lifted_dim'] = self.polytope.dim
        info['facets'] = self.n_facets
        info['rows'] = self.n_rows
        return info


class Sectioned(Body):
    """{x : U x ∈ conv(points)} for an injective U: V → W."""
    kind = 'sectioned'

    def __init__(self, points, basis, symmetric=False):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if basis.shape[0] != points.shape[1]:
            raise BodyError(f'Basis rows must match the point dimension: '
                            f'{basis.shape=}, {points.shape=}')
        if np.linalg.matrix_rank(basis) < basis.shape[1]:
            raise BodyError('Section basis is not injective.')
        super().__init__(basis.shape[1], symmetric)
        self.points = points
        self.basis = basis

    @property
    def n_vertices(self):
        return self.points.shape[0]

    def _contains_rows(self, X, tol):
        N = self.n_vertices
        A_eq = np.vstack([self.points.T, np.ones((1, N))])
        results = []
        for x in X:
            b_eq = np.concatenate([self.basis @ x, [1.0]])
            feasible, _ = lp_feasible(A_eq=A_eq, b_eq=b_eq,
                                      nonneg=np.ones(N, dtype=bool),
                                      feastol=max(tol, FEASTOL))
            results.append(feasible)
        return np.array(results)

    def _gauge_rows(self, V):
        N = self.n_vertices
        gauges = []
        for v in V:
            if not np.any(v):
                gauges.append(0.0)
                continue
            result = lp_solve(LinearProgram(
                -np.ones(N), A_eq=self.points.T, b_eq=self.basis @ v,
                nonneg=np.ones(N, dtype=bool)))
            if not result.optimal:
                raise BodyError(f'Gauge undefined ({result.status}); '
                                'origin not interior.')
            gauges.append(-result.value)
        return np.array(gauges)

    def _support_rows(self, C):
        # Variables (x, μ): U x = Pᵀμ, Σμ = 1, μ ≥ 0.
        N, d = self.n_vertices, self.dim
        A_eq = np.vstack([
            np.hstack([self.basis, -self.points.T]),
            np.hstack([np.zeros((1, d)), np.ones((1, N))]),
        ])
        b_eq = np.zeros(A_eq.shape[0])
        b_eq[-1] = 1.0
        nonneg = np.concatenate([np.zeros(d, dtype=bool), np.ones(N, dtype=bool)])

        values = []
        for c in C:
            result = lp_solve(LinearProgram(np.concatenate([c, np.zeros(N)]),
                                            A_eq=A_eq, b_eq=b_eq, nonneg=nonneg))
            if result.status == 'unbounded':
                raise BodyError('Section is unbounded.')
            if not result.optimal:
                raise BodyError(f'Support LP ended with status '
                                f'{result.status!r}.')
            values.append(result.value)
        return np.array(values)

    def scaled(self, t):
        return Sectioned(t * self.points, self.basis, self.symmetric)

    def describe(self):
        info = super().describe()
        info['lifted_dim'] = int(self.points.shape[1])
        info['vertices'] = self.n_vertices
        return info


def gauge(b, v):
    return b.gauge(v)


def support(b, c):
    return b.support(c)


def contains(b, x, tol=FEASTOL):
    return b.contains(x, tol)


def scale(b, t):
    if t <= 0:
        raise BodyError(f'Scale factor must be positive: {t=}')
    return b.scaled(t)


def origin_interior_vrep(points, tol=1e-9):
    """True iff 0 is a strictly positive convex combination spanning R^d."""
    points = np.atleast_2d(points)
    N, d = points.shape
    if np.linalg.matrix_rank(points, tol=1e-10) < d:
        return False

    # Variables (μ, t): Σμ p = 0, Σμ = 1, μ_i ≥ t; maximize t.
    objective = np.zeros(N + 1)
    objective[-1] = 1.0
    A_ub = np.hstack([-np.eye(N), np.ones((N, 1))])
    A_eq = np.vstack([np.hstack([points.T, np.zeros((d, 1))]),
                      np.hstack([np.ones((1, N)), np.zeros((1, 1))])])
    b_eq = np.zeros(d + 1)
    b_eq[-1] = 1.0
    result = lp_solve(LinearProgram(objective, A_ub, np.zeros(N), A_eq, b_eq))

    return result.optimal and result.value > tol


def polar_polytope(b):
    """VRep(pᵢ) ↦ HRep(pᵢ·x ≤ 1) and HRep(aⱼ·x ≤ 1) ↦ VRep(aⱼ)."""
    if isinstance(b, VRep):
        if b.facets is None and not origin_interior_vrep(b.points):
            raise BodyError('Origin is not interior; the polar is unbounded.')
        polar = HRep(b.points, np.ones(b.n_vertices), symmetric=b.symmetric)
        return polar

    if isinstance(b, HRep):
        A, _ = b.normalized()
        if np.linalg.matrix_rank(A) < b.dim:
            raise BodyError('H-polytope is unbounded; the polar has no '
                            'interior.')
        return VRep(A, symmetric=b.symmetric)

    raise BodyError(f'Polar is only defined here for polytopes: {b.kind=}')


def facets_of(b, auto_dim=AUTO_FACET_DIM):
    """Facets a·x ≤ 1 when known or cheap to enumerate, else None."""
    if isinstance(b, HRep):
        if b.A_eq.shape[0] == 0 and np.all(b.b > 0):
            return b.normalized()
        return None

    if isinstance(b, VRep):
        if b.facets is None and b.dim <= auto_dim:
            b.with_facets()
        if b.facets is not None:
            A, rhs = b.facets
            return A / rhs[:, None], np.ones(A.shape[0])

    return None


def as_hrep(b):
    """H-representation A x ≤ 1 of a polytope containing the origin."""
    if isinstance(b, HRep):
        A, rhs = b.normalized()
        return HRep(A, rhs, symmetric=b.symmetric)
    if isinstance(b, VRep):
        A, rhs = facets_of(b, auto_dim=MAX_FACET_DIM)
        return HRep(A, rhs, symmetric=b.symmetric)
    raise BodyError(f'Not a polytope: {b.kind=}')


def sample_body_points(b, n, seed, start=0):
    """Radial sample of b: direction u, radius r^{1/d}, point r·u/‖u‖_B."""
    directions = sample_unit_sphere(b.dim, n, seed, start)
    radii = make_rng(seed, 3).random(start + n)[start:] ** (1.0 / b.dim)
    gauges = b.gauge(directions)

    return directions * (radii / gauges)[:, None]


# The body zoo.


def make_cube(d):
    vertices = np.array(list(itertools.product([-1.0, 1.0], repeat=d)))
    A = np.vstack([np.eye(d), -np.eye(d)])
    return VRep(vertices, facets=(A, np.ones(2 * d)), symmetric=True)


def make_cross(d):
    vertices = np.vstack([np.eye(d), -np.eye(d)])
    A = np.array(list(itertools.product([-1.0, 1.0], repeat=d)))
    return VRep(vertices, facets=(A, np.ones(A.shape[0])), symmetric=True)


def make_simplex(d):
    """Standard simplex in intrinsic coordinates about its barycenter."""
    basis = null_space(np.ones((1, d + 1)))
    vertices = (np.eye(d + 1) - 1.0 / (d + 1)) @ basis
    simplex = VRep(vertices, symmetric=False)
    return simplex.with_facets() if d <= MAX_FACET_DIM else simplex


def make_ball(d, radius=1.0):
    return Ball(d, radius)


def make_lpball(d, p, radius=1.0):
    return LpBall(d, p, radius)


def canonical_cycle(sequence):
    """Lexicographically smallest rotation or reflection of a cycle."""
    sequence = tuple(sequence)
    n = len(sequence)
    variants = []
    for seq in (sequence, sequence[::-1]):
        for shift in range(n):
            variants.append(seq[shift:] + seq[:shift])
    return min(variants)


def hamiltonian_cycles(n):
    cycles = {canonical_cycle((0,) + perm)
              for perm in itertools.permutations(range(1, n))}
    return sorted(cycles)


def cycle_matrix(cycle, n):
    X = np.zeros((n, n))
    for i, j in zip(cycle, cycle[1:] + cycle[:1]):
        X[i, j] = X[j, i] = 1.0
    return X


def tsp_linear_basis(n):
    """Orthonormal (Frobenius) basis of symmetric zero-diagonal n×n
    matrices with zero row sums, as columns of an (n², dim) array."""
    constraints = []
    for i in range(n):
        for j in range(n):
            row = np.zeros((n, n))
            if i < j:
                row[i, j], row[j, i] = 1.0, -1.0
            elif i == j:
                row[i, i] = 1.0
            else:
                continue
            constraints.append(row.ravel())
    for i in range(n):
        row = np.zeros((n, n))
        row[i, :] = 1.0
        constraints.append(row.ravel())

    return null_space(np.array(constraints))


@dataclass
class TspPolytope:
    n: int
    body: VRep
    center: np.ndarray
    basis: np.ndarray
    cycles: list

    def to_coords(self, X):
        return (np.asarray(X, dtype=float).reshape(-1) - self.center.ravel()) \
            @ self.basis

    def to_matrix(self, y):
        return self.center + (self.basis @ y).reshape(self.n, self.n)


def make_tsp(n):
    """TSP_n in intrinsic coordinates of its affine hull V_n.

    Vertices are adjacency matrices of Hamiltonian cycles; the origin of
     the coordinates is the barycenter, with off-diagonal entries 2/(n − 1).
    """
    if n < 4:
        raise BodyError(f'TSP_n needs n ≥ 4: {n=}')
    if n > 8:
        raise BodyError(f'TSP_n is limited to n ≤ 8 at desk scale: {n=}')

    cycles = hamiltonian_cycles(n)
    center = np.full((n, n), 2.0 / (n - 1))
    np.fill_diagonal(center, 0.0)
    basis = tsp_linear_basis(n)
    assert basis.shape[1] == n * (n - 3) // 2

    matrices = np.array([cycle_matrix(c, n).ravel() for c in cycles])
    coords = (matrices - center.ravel()) @ basis

    logging.info(f'Built TSP_{n}: {len(cycles)} vertices, dim {basis.shape[1]}.')

    return TspPolytope(n, VRep(coords, symmetric=False), center, basis, cycles)


def tsp_alpha(n):
    """Factor (n − 3)·√n / 2 of TSP_n over its inscribed ball at the center."""
    return float((n - 3) * np.sqrt(n) / 2)


def make_cut(n, asymmetric=False):
    """Vertices x⊗x of CUT_n (x mod ±1), or x⊗y of ACUT_n."""
    if not 2 <= n <= 10:
        raise BodyError(f'CUT_n is limited to 2 ≤ n ≤ 10: {n=}')

    signs = np.array(list(itertools.product([1.0, -1.0], repeat=n)))
    first_positive = signs[signs[:, 0] > 0]

    if not asymmetric:
        return np.einsum('ki,kj->kij', first_positive, first_positive)

    return np.array([np.outer(x, y) for x in first_positive for y in signs])


def upper_coords(X):
    """Strictly-upper-triangular entries, row by row."""
    X = np.asarray(X, dtype=float)
    n = X.shape[-1]
    rows, cols = np.triu_indices(n, 1)
    return X[..., rows, cols]


def from_upper_coords(y, n):
    X = np.eye(n)
    rows, cols = np.triu_indices(n, 1)
    X[rows, cols] = y
    X[cols, rows] = y
    return X


def make_cut_body(n):
    """CUT_n about the identity, in off-diagonal coordinates."""
    return VRep(upper_coords(make_cut(n)))


@dataclass(frozen=True)
class SandwichCertificate:
    """Proof data for X ⊂ B ⊂ alpha·X about a common origin."""
    alpha: float
    inner_witnesses: np.ndarray
    outer_witnesses: np.ndarray
    tol: float
    valid: bool
    mode_inner: str
    mode_outer: str
    sampled_alpha: float
    violation: Optional[np.ndarray] = None

    def as_dict(self):
        return {
            'alpha': self.alpha,
            'sampled_alpha': self.sampled_alpha,
            'valid': self.valid,
            'mode_inner': self.mode_inner,
            'mode_outer': self.mode_outer,
            'tol': self.tol,
            'worst_direction': self.outer_witnesses[0].tolist(),
            'violation': (None if self.violation is None
                          else self.violation.tolist()),
        }


def certify_sandwich(X, B, n_dirs=1000, seed=0, tol=1e-9):
    """Certifies X ⊂ B ⊂ alpha·X.

    DESCRIPTION
     Inner containment is exact when X is a V-polytope (its vertices lie in
      B) or when B has facets and X a closed-form support function (every
      facet's support on X is ≤ 1). Otherwise boundary points of X in
      n_dirs sampled directions are checked.

     The outer factor is exact when B is a V-polytope (largest gauge of X
      over B's vertices) or X has facets (largest support of B on them).
      Sampled support ratios are always folded in, so alpha is at least
      every sampled ratio.

    RETURNS
     certificate  (SandwichCertificate)
    """
    if X.dim != B.dim:
        raise BodyError(f'Bodies live in different spaces: {X.dim=}, {B.dim=}')

    directions = sample_unit_sphere(X.dim, n_dirs, seed)
    violation = None
    B_facets = facets_of(B)

    if isinstance(X, VRep):
        mode_inner = 'exact'
        inner_witnesses = X.points
    else:
        mode_inner = 'sampled'
        inner_witnesses = directions / X.gauge(directions)[:, None]

    if mode_inner == 'sampled' and B_facets is not None and X.closed_support:
        mode_inner = 'exact'
        A, _ = B_facets
        facet_support = X.support(A)
        if np.any(facet_support > 1.0 + tol):
            violation = A[int(np.argmax(facet_support))]

    inside = np.atleast_1d(B.contains(inner_witnesses, tol))
    if violation is None and not np.all(inside):
        violation = inner_witnesses[int(np.argmin(inside))]

    ratios = B.support(directions) / X.support(directions)
    worst = int(np.argmax(ratios))
    sampled_alpha = float(ratios[worst])
    alpha = sampled_alpha
    outer_witnesses = directions[[worst]]
    mode_outer = 'sampled'

    X_facets = facets_of(X)
    if isinstance(B, VRep):
        mode_outer = 'exact'
        gauges = X.gauge(B.points)
        exact = float(np.max(gauges))
        if exact >= alpha:
            top = B.points[int(np.argmax(gauges))]
            outer_witnesses = (top / np.linalg.norm(top))[None, :]
        alpha = max(alpha, exact)
    elif X_facets is not None:
        mode_outer = 'exact'
        A, _ = X_facets
        values = B.support(A)
        exact = float(np.max(values))
        if exact >= alpha:
            top = A[int(np.argmax(values))]
            outer_witnesses = (top / np.linalg.norm(top))[None, :]
        alpha = max(alpha, exact)

    valid = violation is None
    if not valid:
        logging.warning(f'Inner containment failed at {violation}.')

    return SandwichCertificate(alpha, inner_witnesses, outer_witnesses, tol,
                               valid, mode_inner, mode_outer, sampled_alpha,
                               violation)
