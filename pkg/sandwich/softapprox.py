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
from scipy.linalg import lu_factor, lu_solve, null_space
from scipy.special import comb, factorial

from .bodies import BodyError, HRep, sample_body_points
from .lp import FEASTOL, lp_feasible, lp_maximize
from .numerics import NumericalError, make_rng, sample_unit_sphere


GAMMA = 1.0
MAX_GENERATORS = 10 ** 5
BOUND_CHECK_SAMPLES = 1000
FW_GAP = 1e-6
FW_MAX_ITER = 5000

ACCEPT = 'accept'
REJECT = 'reject'


def default_degree(d):
    """Smallest integer strictly greater than 2√d."""
    return int(np.floor(2 * np.sqrt(d))) + 1


def multisets(N, k):
    """Multisets of {0..N−1} of size ≤ k, the empty one first."""
    result = []
    for size in range(k + 1):
        result.extend(itertools.combinations_with_replacement(range(N), size))
    return result


@dataclass(frozen=True)
class SoftPolytope:
    """conv(0, h_I) for h_I(x) = g_I(T⁻¹x), g_I = 1 − Π_{i∈I}(1 − gᵢ).

    The base rows are scaled to gᵢ(w) = aᵢ·w ≤ 1 on P. In 'fiber' mode T is
     onto but not invertible and h_I(x) averages g_I over P ∩ T⁻¹(x) by
     hit-and-run; its values are approximate.
    """
    base: HRep
    T: np.ndarray
    k: int
    generators: tuple
    mode: str = 'exact'
    fiber_samples: int = 200
    seed: int = 0

    @property
    def n_base(self):
        return self.base.n_facets

    @property
    def n_generators(self):
        return len(self.generators)

    @property
    def approximate(self):
        return self.mode != 'exact'

    def base_values(self, W):
        """gᵢ(w) for each row w of the lifted space."""
        return np.atleast_2d(W) @ self.base.A.T

    def lift(self, X):
        assert self.mode == 'exact'
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return lu_solve(lu_factor(self.T), X.T).T

    def generator_values_lifted(self, W):
        complements = 1.0 - self.base_values(W)
        values = np.empty((complements.shape[0], self.n_generators))
        for j, I in enumerate(self.generators):
            values[:, j] = 1.0 - np.prod(complements[:, list(I)], axis=1)
        return values

    def generator_values(self, X):
        """h_I(x) for each row x (rows) and generator I (columns)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.mode == 'exact':
            return self.generator_values_lifted(self.lift(X))

        return np.array([fiber_average(self, x, self.fiber_samples,
                                       self.seed + i)
                         for i, x in enumerate(X)])


def build_soft(P, T, k, mode='exact', n_check=BOUND_CHECK_SAMPLES, seed=0,
               fiber_samples=200):
    """Generators g_I for all multisets |I| ≤ k of the facets of P.

    DESCRIPTION
     There are C(N + k, k) of them, the empty multiset giving the origin
      h_∅ ≡ 0. Each g_I is ≤ 1 on P because every 1 − gᵢ is ≥ 0 there; this
      is checked on n_check sampled points of P.

    ARGUMENTS
     P  (HRep)
       - Bounded with the origin in its interior.

     T  (numpy.ndarray), shape=(d, D)
       - Square and invertible in 'exact' mode, onto in 'fiber' mode.

     k  (int)

    RETURNS
     soft  (SoftPolytope)
    """
    if k < 1:
        raise ValueError(f'Degree cap must be positive: {k=}')
    if mode not in ('exact', 'fiber'):
        raise ValueError(f'Unknown evaluation mode: {mode=}')

    A, rhs = P.normalized()
    base = HRep(A, rhs, symmetric=P.symmetric)
    N = base.n_facets

    count = int(comb(N + k, k, exact=True))
    if count > MAX_GENERATORS:
        raise ValueError(f'Too many generators: {count} > {MAX_GENERATORS}')

    T = np.atleast_2d(np.asarray(T, dtype=float))
    if T.shape[1] != base.dim:
        raise BodyError(f'Map must act on the lifted space: {T.shape=}, '
                        f'{base.dim=}')
    rank = np.linalg.matrix_rank(T)
    if mode == 'exact' and (T.shape[0] != T.shape[1] or rank < T.shape[0]):
        raise BodyError('T must be invertible in exact mode.')
    if mode == 'fiber' and rank < T.shape[0]:
        raise BodyError('T must be onto in fiber mode.')

    soft = SoftPolytope(base, T, k, tuple(multisets(N, k)), mode,
                        fiber_samples, seed)
    assert soft.n_generators == count

    W = sample_body_points(base, n_check, seed)
    highest = float(np.max(soft.generator_values_lifted(W)))
    if highest > 1.0 + 1e-9:
        raise NumericalError(f'Generator exceeds 1 on P: {highest:.12f}')

    logging.info(f'Soft polytope: {N} base functionals, k={k}, '
                 f'{count} generators ({mode}).')

    return soft


def _fiber_center(A, T, x):
    """Chebyshev center of {w : T w = x, A w ≤ 1} inside the fiber."""
    w0 = np.linalg.lstsq(T, x, rcond=None)[0]
    F = null_space(T)
    if F.shape[1] == 0:
        return w0, F

    AF = A @ F
    norms = np.linalg.norm(AF, axis=1)
    r = F.shape[1]

    # Variables (z, ρ): A(w0 + F z) + ρ‖(A F)ᵢ‖ ≤ 1, maximize ρ.
    objective = np.zeros(r + 1)
    objective[-1] = 1.0
    A_ub = np.hstack([AF, norms[:, None]])
    b_ub = 1.0 - A @ w0
    nonneg = np.zeros(r + 1, dtype=bool)
    nonneg[-1] = True
    radius, point = lp_maximize(objective, A_ub, b_ub, nonneg=nonneg)
    if radius <= 0:
        raise BodyError('Point lies outside T(P) or on its boundary.')

    return w0 + F @ point[:r], F


def fiber_points(P, T, x, n_samples, seed, burn_in=20):
    """Hit-and-run samples of P ∩ T⁻¹(x), approximately uniform."""
    A, _ = P.normalized()
    w, F = _fiber_center(A, T, np.asarray(x, dtype=float))
    if F.shape[1] == 0:
        return np.tile(w, (n_samples, 1))

    rng = make_rng(seed, 7)
    directions = sample_unit_sphere(F.shape[1], burn_in + n_samples, seed)
    samples = []
    for step, u in enumerate(directions):
        move = A @ (F @ u)
        slack = 1.0 - A @ w
        with np.errstate(divide='ignore', invalid='ignore'):
            bounds = slack / move
        upper = np.min(bounds[move > 0], initial=np.inf)
        lower = np.max(bounds[move < 0], initial=-np.inf)
        w = w + rng.uniform(lower, upper) * (F @ u)
        if step >= burn_in:
            samples.append(w)

    return np.array(samples)


def fiber_average(soft, x, n_samples=200, seed=0):
    """Mean of every g_I over the fiber of x."""
    W = fiber_points(soft.base, soft.T, x, n_samples, seed)
    return soft.generator_values_lifted(W).mean(axis=0)


@dataclass(frozen=True)
class SoftApproximant:
    """h = Σ β_I h_I = F∘f for f = ℓ∘T and F(t) = 1 − (1 − t/k)^k."""
    soft: SoftPolytope
    ell: np.ndarray
    lambdas: np.ndarray
    weights: np.ndarray
    sup_error: float
    sup_ratio: float

    def __call__(self, X):
        return self.soft.generator_values(X) @ self.weights


def truncated_exponential(t, k):
    return 1.0 - (1.0 - np.asarray(t) / k) ** k


def multinomial_weights(lambdas, generators, k):
    """β_I from expanding (λ₀ + Σλᵢ(1 − gᵢ))^k, λ₀ = 1 − Σλᵢ."""
    lambda0 = max(1.0 - float(np.sum(lambdas)), 0.0)
    weights = np.empty(len(generators))
    for j, I in enumerate(generators):
        counts = np.zeros(len(lambdas), dtype=int)
        for i in I:
            counts[i] += 1
        rest = k - len(I)
        coefficient = factorial(k) / (factorial(rest) *
                                      np.prod(factorial(counts)))
        weights[j] = coefficient * lambda0 ** rest * np.prod(lambdas ** counts)
    return weights


def _functional_weights(soft, functional, feastol):
    """λ ≥ 0 with Σλ ≤ 1 and Σλᵢaᵢ = functional, or None."""
    A = soft.base.A
    N = A.shape[0]
    feasible, point = lp_feasible(np.ones((1, N)), np.ones(1), A.T,
                                  functional, np.ones(N, dtype=bool), N,
                                  feastol)
    if not feasible:
        return None
    return np.maximum(point, 0.0)


def approximant(soft, ell, body, n_check=BOUND_CHECK_SAMPLES, seed=0,
                feastol=FEASTOL):
    """The element of conv(0, h_I) approximating the functional ℓ on body.

    f = ℓ∘T must be ≤ k on P, which holds for ℓ ∈ B° once T(P) ⊂ 2√d·B.
     k⁻¹f is written as Σλᵢgᵢ with λ ≥ 0, Σλ ≤ 1 by an LP and
     F = 1 − (1 − k⁻¹f)^k is expanded into convex weights over the g_I.
     The sup of |ℓ − h| / ℓ² over n_check samples of body is measured and
     compared with GAMMA.
    """
    ell = np.asarray(ell, dtype=float)
    k = soft.k
    functional = soft.T.T @ ell

    if np.any(functional):
        top, _ = lp_maximize(functional, soft.base.A, soft.base.b)
        if top > k + feastol:
            raise BodyError(f'ℓ∘T reaches {top:.6f} > k = {k} on P; ℓ is '
                            'not in the polar.')

    lambdas = _functional_weights(soft, functional / k, feastol)
    if lambdas is None:
        raise BodyError('k⁻¹ℓ∘T is not in the hull of 0 and the base '
                        'functionals.')
    weights = multinomial_weights(lambdas, soft.generators, k)

    X = sample_body_points(body, n_check, seed)
    linear = X @ ell
    h = soft.generator_values(X) @ weights
    errors = np.abs(linear - h)
    sup_error = float(np.max(errors)) if errors.size else 0.0

    nonzero = np.abs(linear) > 1e-12
    ratios = errors[nonzero] / linear[nonzero] ** 2
    sup_ratio = float(np.max(ratios)) if ratios.size else 0.0

    if sup_ratio > GAMMA + 1e-9:
        message = f'Approximation ratio {sup_ratio:.6f} exceeds {GAMMA=}.'
        if not soft.approximate:
            raise NumericalError(message)
        logging.warning(message)

    return SoftApproximant(soft, ell, lambdas, weights, sup_error, sup_ratio)


@dataclass(frozen=True)
class AcceptDecision:
    verdict: str
    distance: float
    threshold: float
    weights: np.ndarray
    iterations: int
    residuals: tuple

    @property
    def witness(self):
        """Weights of the nonzero generators; they sum to at most 1."""
        return self.weights[1:]

    @property
    def accepted(self):
        return self.verdict == ACCEPT


def _frank_wolfe(G, y, weights, gap_tol, max_iter):
    """min ‖y − Gβ‖² over the simplex by Frank–Wolfe with exact line search."""
    residual = y - G @ weights
    history = [float(residual @ residual)]
    scale = max(float(y @ y), 1e-300)

    for iteration in range(1, max_iter + 1):
        gradient = -2.0 * G.T @ residual
        s = int(np.argmin(gradient))
        direction = G[:, s] - G @ weights
        gap = float(weights @ gradient - gradient[s])
        if gap <= gap_tol * scale:
            return weights, history, iteration - 1

        curvature = float(direction @ direction)
        step = 1.0 if curvature == 0 else min(
            max(float(residual @ direction) / curvature, 0.0), 1.0)

        weights = (1.0 - step) * weights
        weights[s] += step
        residual = y - G @ weights
        history.append(float(residual @ residual))

    return weights, history, max_iter


def accept_test(soft, ell, eps, body, mu_samples=BOUND_CHECK_SAMPLES, seed=0,
                gap=FW_GAP, max_iter=FW_MAX_ITER):
    """Accepts ℓ iff some h ∈ conv(0, h_I) has ‖ℓ − h‖₂ ≤ γ·eps·‖ℓ‖₂.

    The L² norm is over the uniform measure on mu_samples points of body.
     Frank–Wolfe starts from the approximant when ℓ qualifies for one, so
     every ℓ with sup_body |ℓ| ≤ eps is accepted.
    """
    if not 0 < eps < 1:
        raise ValueError(f'eps must lie in (0, 1): {eps=}')

    ell = np.asarray(ell, dtype=float)
    X = sample_body_points(body, mu_samples, seed)
    y = X @ ell / np.sqrt(mu_samples)
    G = soft.generator_values(X) / np.sqrt(mu_samples)

    weights = np.zeros(soft.n_generators)
    weights[0] = 1.0
    try:
        start = approximant(soft, ell, body, n_check=mu_samples, seed=seed)
        weights = start.weights / np.sum(start.weights)
    except (BodyError, NumericalError):
        pass

    weights, history, iterations = _frank_wolfe(G, y, weights, gap, max_iter)

    distance = float(np.sqrt(history[-1]))
    threshold = GAMMA * eps * float(np.linalg.norm(y))
    verdict = ACCEPT if distance <= threshold else REJECT

    return AcceptDecision(verdict, distance, threshold, weights, iterations,
                          tuple(np.sqrt(history)))
