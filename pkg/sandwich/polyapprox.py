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

import numpy as np
from scipy.linalg import block_diag, null_space

from .bodies import (
    BodyError,
    HRep,
    Projected,
    Sectioned,
    SandwichCertificate,
    VRep,
    certify_sandwich,
)
from .lp import FEASTOL, LinearProgram, lp_feasible, lp_solve
from .numerics import sample_signs, sample_unit_sphere


NET_RETRIES = 3
MAX_SIGN_VECTORS = 20
MAX_GRID_POINTS = 10 ** 6


class NetError(RuntimeError):
    """The greedy net missed its outer factor after every retry."""

    def __init__(self, factor, target):
        self.factor = factor
        self.target = target
        super().__init__(f'Net reached outer factor {factor:.6f}, '
                         f'target {target:.6f}.')


@dataclass(frozen=True)
class NetResult:
    points: np.ndarray
    eps: float
    cert: SandwichCertificate
    candidates: int
    attempts: int

    @property
    def size(self):
        return self.points.shape[0]


def _net_candidates(b, n, seed, start):
    """Vertices of a V-polytope first, then boundary points along sphere
    samples."""
    directions = sample_unit_sphere(b.dim, n, seed, start)
    boundary = directions / b.gauge(directions)[:, None]

    if isinstance(b, VRep) and start == 0:
        return np.vstack([b.points, boundary])
    return boundary


def _greedy_insert(b, candidates, eps, stall_cap, net=None):
    net = [] if net is None else list(net)
    stall = 0

    for x in candidates:
        if net and np.min(b.gauge(x - np.asarray(net))) <= eps:
            stall += 1
            if stall >= stall_cap:
                break
            continue
        net.append(x)
        stall = 0

    return net


def greedy_net(b, eps, candidates=2000, stall_cap=500, seed=0, n_dirs=1000,
               tol=1e-9):
    """ε-separated subset X of the boundary of a symmetric body with
    conv(X) ⊂ b ⊂ (1/(1 − eps))·conv(X).

    DESCRIPTION
     Candidates are inserted greedily when their b-distance to every point
      already in the net exceeds eps; a run stops after stall_cap
      consecutive rejections. The outer factor is certified afterwards. If
      it misses 1/(1 − eps), the run resumes with twice as many fresh
      candidates, up to NET_RETRIES times.

    RETURNS
     result  (NetResult)
    """
    if not b.symmetric:
        raise BodyError('greedy_net needs a centrally symmetric body.')
    if not 0 < eps < 1:
        raise ValueError(f'Net spacing must lie in (0, 1): {eps=}')

    target = 1.0 / (1.0 - eps)
    bound = (1.0 + 2.0 / eps) ** b.dim
    net = None
    start = 0
    count = candidates

    for attempt in range(1, NET_RETRIES + 2):
        pool = _net_candidates(b, count, seed, start)
        net = _greedy_insert(b, pool, eps, stall_cap, net)
        start += count

        assert len(net) <= bound, f'{len(net)=} exceeds {bound=}'

        points = np.asarray(net)
        try:
            cert = certify_sandwich(VRep(points), b, n_dirs, seed, tol)
            factor = cert.alpha
        except BodyError:
            # The hull of a small net can miss the origin.
            cert, factor = None, np.inf

        logging.info(f'Net attempt {attempt}: {len(net)} points, factor '
                     f'{factor:.6f} (target {target:.6f}).')

        if cert is not None and cert.valid and factor <= target + tol:
            return NetResult(points, eps, cert, start, attempt)

        count *= 2

    raise NetError(factor, target)


def ball_net_lower_bound(d, alpha):
    """Smallest net size exp(d / 2α²) compatible with factor alpha on the
    unit ball."""
    if alpha < 1:
        raise ValueError(f'Sandwich factors are at least 1: {alpha=}')
    return float(np.exp(d / (2.0 * alpha ** 2)))


def grid_net(b, eps):
    """Points of the lattice eps·Z^d lying in b."""
    if eps <= 0:
        raise ValueError(f'Grid spacing must be positive: {eps=}')

    axes = np.eye(b.dim)
    upper = np.floor(b.support(axes) / eps + 1e-12).astype(int)
    lower = np.ceil(-b.support(-axes) / eps - 1e-12).astype(int)

    total = np.prod((upper - lower + 1).astype(float))
    if total > MAX_GRID_POINTS:
        raise ValueError(f'Grid too large: {total:.0f} points.')

    ranges = [np.arange(lo, hi + 1) for lo, hi in zip(lower, upper)]
    lattice = eps * np.array(list(itertools.product(*ranges)), dtype=float)

    return lattice[np.atleast_1d(b.contains(lattice))]


# Sections and projections.


def _section_to_projection(q):
    """{x : Ux ∈ conv(P)} = U⁺Pᵀ(Λ) with Λ = {λ ∈ Δ : Pᵀλ ∈ range U}."""
    P, U = q.points, q.basis
    N = P.shape[0]

    complement = null_space(U.T).T
    A_eq = np.vstack([np.ones((1, N)), complement @ P.T])
    b_eq = np.zeros(A_eq.shape[0])
    b_eq[0] = 1.0

    polytope = HRep(-np.eye(N), np.zeros(N), A_eq, b_eq, symmetric=False)
    T = np.linalg.pinv(U) @ P.T

    return Projected(polytope, T, q.symmetric)


def _relative_interior(A_ub, b_ub, A_eq, b_eq, n_vars, tol=1e-9):
    """A point with every non-implicit inequality strictly slack, and the
    mask of implicit equalities."""
    maximizers = []
    implicit = np.zeros(A_ub.shape[0], dtype=bool)

    for i, row in enumerate(A_ub):
        result = lp_solve(LinearProgram(-row, A_ub, b_ub, A_eq, b_eq))
        if result.status == 'infeasible':
            raise BodyError('Origin is not interior to the body.')
        if not result.optimal:
            raise BodyError(f'Slack LP ended with status {result.status!r}.')
        if b_ub[i] - row @ result.point <= tol * (1 + abs(b_ub[i])):
            implicit[i] = True
        maximizers.append(result.point)

    if not maximizers:
        feasible, point = lp_feasible(A_eq=A_eq, b_eq=b_eq, n_vars=n_vars)
        if not feasible:
            raise BodyError('Origin is not interior to the body.')
        return point, implicit

    return np.mean(maximizers, axis=0), implicit


def _projection_to_section(q):
    """Polarity: Q° is a section of P°, Q = (Q°)° a section of a polar."""
    P, T = q.polytope, q.T
    d, D = T.shape

    # Recenter P at a relative-interior point of the fiber over 0.
    A_eq = np.vstack([P.A_eq, T])
    b_eq = np.concatenate([P.b_eq, np.zeros(d)])
    w0, implicit = _relative_interior(P.A, P.b, A_eq, b_eq, D)

    flat = np.vstack([P.A_eq, P.A[implicit]])
    F = null_space(flat) if flat.shape[0] else np.eye(D)
    A = P.A[~implicit] @ F
    rhs = P.b[~implicit] - P.A[~implicit] @ w0
    T_flat = T @ F

    if np.linalg.matrix_rank(T_flat) < d:
        raise BodyError('Projection is not full-dimensional; origin is not '
                        'interior.')

    # Q° = {y : T̃ᵀy ∈ conv(aⱼ)}, the projection S(Λ) of the simplex slice Λ.
    normals = A / rhs[:, None]
    U = T_flat.T
    N = normals.shape[0]
    complement = null_space(U.T).T
    S = np.linalg.pinv(U) @ normals.T

    A_eq = np.vstack([np.ones((1, N)), complement @ normals.T, S])
    b_eq = np.zeros(A_eq.shape[0])
    b_eq[0] = 1.0
    center, zero = _relative_interior(-np.eye(N), np.zeros(N), A_eq, b_eq, N)

    keep = ~zero
    slice_rows = np.vstack([np.ones((1, int(keep.sum()))),
                            (complement @ normals.T)[:, keep]])
    directions = null_space(slice_rows)

    # Λ − λ̄ = {ζ : cⱼ·ζ ≤ 1} with cⱼ = −(Bζ)ⱼ / λ̄ⱼ; Q is a section of conv(cⱼ).
    vertices = -directions / center[keep][:, None]
    basis = (S[:, keep] @ directions).T

    return Sectioned(vertices, basis, q.symmetric)


def convert_rep(q):
    """Sectioned ↔ Projected, preserving the body."""
    if isinstance(q, Sectioned):
        return _section_to_projection(q)
    if isinstance(q, Projected):
        return _projection_to_section(q)
    raise BodyError(f'convert_rep takes sections or projections: {q.kind=}')


def _as_projected(q):
    if isinstance(q, HRep):
        return Projected(q, np.eye(q.dim), q.symmetric)
    if isinstance(q, Projected):
        return q
    raise BodyError(f'Expected a projected polytope: {q.kind=}')


def combine(q1, q2, mode='intersect'):
    """Q₁ ∩ Q₂ or Q₁ × Q₂ as one projection with N₁ + N₂ facets."""
    q1, q2 = _as_projected(q1), _as_projected(q2)
    P1, P2 = q1.polytope, q2.polytope

    A = block_diag(P1.A, P2.A)
    b = np.concatenate([P1.b, P2.b])
    A_eq = block_diag(P1.A_eq, P2.A_eq)
    b_eq = np.concatenate([P1.b_eq, P2.b_eq])

    if mode == 'intersect':
        if q1.dim != q2.dim:
            raise BodyError(f'Intersection needs a common space: {q1.dim=}, '
                            f'{q2.dim=}')
        A_eq = np.vstack([A_eq, np.hstack([q1.T, -q2.T])])
        b_eq = np.concatenate([b_eq, np.zeros(q1.dim)])
        T = np.hstack([q1.T, np.zeros((q1.dim, P2.dim))])
    elif mode == 'product':
        T = block_diag(q1.T, q2.T)
    else:
        raise ValueError(f'Unknown combination: {mode=}')

    polytope = HRep(A, b, A_eq, b_eq, symmetric=False)
    return Projected(polytope, T, q1.symmetric and q2.symmetric)


# Indicator lifts.


@dataclass(frozen=True)
class LiftFamily:
    """A base set X and a family of subsets of X, given by indices."""
    base_points: np.ndarray
    family: tuple

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.base_points, dtype=float))
        family = tuple(tuple(sorted(set(int(i) for i in F)))
                       for F in self.family)
        M = points.shape[0]
        for F in family:
            if not F:
                raise ValueError('Family members must be nonempty.')
            if F[0] < 0 or F[-1] >= M:
                raise ValueError(f'Index out of range in {F=} ({M=}).')

        object.__setattr__(self, 'base_points', points)
        object.__setattr__(self, 'family', family)

    @property
    def generators(self):
        """Indicator vectors δ_F as rows."""
        G = np.zeros((len(self.family), self.base_points.shape[0]))
        for row, F in enumerate(self.family):
            G[row, list(F)] = 1.0
        return G


def singleton_family(points):
    return LiftFamily(points, tuple((i,) for i in range(len(points))))


def pair_family(points):
    M = len(points)
    pairs = tuple(itertools.combinations(range(M), 2))
    return LiftFamily(points, tuple((i,) for i in range(M)) + pairs)


def coordinate_slice_family(points, k, decimals=9):
    """Sets of points sharing k fixed coordinates."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    M, d = points.shape
    if not 0 <= k <= d:
        raise ValueError(f'Slice codimension must lie in [0, d]: {k=}, {d=}')

    rounded = np.round(points, decimals)
    family = set()
    for axes in itertools.combinations(range(d), k):
        groups = {}
        for i in range(M):
            groups.setdefault(tuple(rounded[i, list(axes)]), []).append(i)
        family.update(tuple(g) for g in groups.values())

    return LiftFamily(points, tuple(sorted(family)))


def lift_member(f_params, lf, feastol=FEASTOL):
    """Whether f(x) = ⟨c, x⟩ + α₀ restricted to X lies in co(δ_F : F ∈ 𝓕)."""
    c, alpha0 = f_params
    values = lf.base_points @ np.asarray(c, dtype=float) + alpha0

    if abs(values.mean() - 1.0) > feastol:
        raise ValueError(f'Average of f over X must be 1: {values.mean()=}')

    G = lf.generators
    feasible, _ = lp_feasible(A_eq=G.T, b_eq=values,
                              nonneg=np.ones(G.shape[0], dtype=bool),
                              feastol=feastol)
    return feasible


def lift_body(lf):
    """B_𝓕 in the space of linear parts c, as a projection.

    Variables (c, μ): 1 − (x − x̄)·c = Σ μ_F δ_F(x) on X, μ ≥ 0. With
     singletons this is the polar of X − x̄.
    """
    X = lf.base_points
    M, d = X.shape
    G = lf.generators
    K = G.shape[0]

    A = np.hstack([np.zeros((K, d)), -np.eye(K)])
    A_eq = np.hstack([X.mean(axis=0) - X, -G.T])
    b_eq = -np.ones(M)
    T = np.hstack([np.eye(d), np.zeros((d, K))])

    return Projected(HRep(A, np.zeros(K), A_eq, b_eq, symmetric=False), T)


def type2_lower(b, vectors, mode='exact', samples=4096, seed=0):
    """sqrt(E‖Σ εᵢxᵢ‖²_b / Σ‖xᵢ‖²_b) over random signs ε."""
    X = np.atleast_2d(np.asarray(vectors, dtype=float))
    m = X.shape[0]

    if mode == 'exact':
        if m > MAX_SIGN_VECTORS:
            raise ValueError(f'Exact mode enumerates 2^m signs; {m=} > '
                             f'{MAX_SIGN_VECTORS}.')
        signs = np.array(list(itertools.product([1.0, -1.0], repeat=m)))
    elif mode == 'mc':
        signs = sample_signs(m, samples, seed)
    else:
        raise ValueError(f'Unknown estimator: {mode=}')

    numerator = np.mean(b.gauge(signs @ X) ** 2)
    denominator = np.sum(b.gauge(X) ** 2)

    return float(np.sqrt(numerator / denominator))
