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
from typing import Optional

import numpy as np
from scipy.special import comb

from .bodies import BodyError, VRep, make_cut, make_cut_body, upper_coords
from .ellipsoid import DegenerateSpanError
from .lp import FEASTOL, member_vrep
from .numerics import (
    PSD_TOL,
    is_psd,
    make_rng,
    max_abs,
    min_eigenvalue,
    psd_threshold,
    row_space,
    sym_eigen,
    sym_matrix,
)
from .polynorm import EmpiricalMeasure, monomial_exponents


GROTHENDIECK_BOUND = np.pi / (2 * np.log(1 + np.sqrt(2)))
MAX_CUT_N = 10
MAX_Q_N = 20
MAX_QV_MONOMIALS = 200

# q_member outcomes.
FEASIBLE = 'feasible'
INFEASIBLE = 'infeasible'
UNDETERMINED = 'undetermined'


@dataclass(frozen=True)
class RelaxationPoint:
    """A unit-diagonal symmetric matrix and its smallest eigenvalue."""
    matrix: np.ndarray
    psd_margin: float

    @classmethod
    def from_matrix(cls, X):
        X = sym_matrix(X)
        np.fill_diagonal(X, 1.0)
        return cls(X, float(min_eigenvalue(X)))


def _check_unit_diagonal(X, tol):
    X = np.asarray(X, dtype=float)
    if len(X.shape) != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f'Expected a square matrix: {X.shape=}')
    if max_abs(X - X.T) > tol:
        raise ValueError('Matrix is not symmetric.')
    if max_abs(np.diag(X) - 1.0) > tol:
        raise ValueError('Relaxation points need a unit diagonal.')
    return sym_matrix(X)


def cut_relax_member(X, tol=PSD_TOL):
    """X ∈ {unit diagonal} ∩ S₊."""
    X = _check_unit_diagonal(X, tol)
    return is_psd(X, tol)


def cut_brute_member(X, n, feastol=FEASTOL):
    """X ∈ conv(x⊗x : x ∈ {±1}ⁿ) by an LP over the 2^{n−1} vertices."""
    if not 2 <= n <= MAX_CUT_N:
        raise ValueError(f'Brute-force CUT_n needs 2 ≤ n ≤ {MAX_CUT_N}: {n=}')

    X = np.asarray(X, dtype=float)
    assert X.shape == (n, n)
    if max_abs(np.diag(X) - 1.0) > feastol:
        return False

    return member_vrep(upper_coords(X), upper_coords(make_cut(n)), feastol)


def sample_relaxation_point(n, seed, index=0):
    """Boundary point of the relaxation: I + sD for a random zero-diagonal
    direction D, with s the largest step keeping I + sD PSD."""
    rng = make_rng(seed, 5, index)
    upper = np.triu(rng.standard_normal((n, n)), 1)
    D = upper + upper.T

    lowest = min_eigenvalue(D)
    if lowest >= 0:
        # Only the zero direction has a nonnegative smallest eigenvalue.
        return RelaxationPoint(np.eye(n), 1.0)

    return RelaxationPoint.from_matrix(np.eye(n) - D / lowest)


def cut_ratio(n, n_samples=200, seed=0, feastol=FEASTOL):
    """Lower bound on the dilation of CUT_n about I that covers the
    relaxation.

    For each sampled boundary point R, the smallest t ≥ 1 with
     I + (R − I)/t ∈ CUT_n is the gauge of R − I in CUT_n − I, solved
     exactly as an LP. The maximum over samples is returned; sample i is
     the same for every n_samples > i.
    """
    if not 2 <= n <= 6:
        raise ValueError(f'cut_ratio needs 2 ≤ n ≤ 6: {n=}')

    cut = make_cut_body(n)
    worst = 1.0
    for i in range(n_samples):
        R = sample_relaxation_point(n, seed, i)
        t = cut.gauge(upper_coords(R.matrix))
        worst = max(worst, t)

    logging.info(f'CUT_{n}: sampled dilation {worst:.6f} over {n_samples} '
                 'relaxation boundary points.')

    return float(worst)


# Grothendieck: ACUT_n and the corners of unit-diagonal PSD matrices.


def acut_vertices(n):
    """Vertices x⊗y of ACUT_n, flattened row by row."""
    return make_cut(n, asymmetric=True).reshape(-1, n * n)


def acut_brute_member(X, feastol=FEASTOL):
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    return member_vrep(X.reshape(-1), acut_vertices(n), feastol)


def acut_gauge(X):
    """Smallest t with X ∈ t·ACUT_n."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]

    return VRep(acut_vertices(n), symmetric=True).gauge(X.reshape(-1))


@dataclass(frozen=True)
class QMembership:
    """Outcome of the corner-completion test.

    A feasible outcome carries the completed 2n×2n matrix, an infeasible one
     a matrix C supported on the fixed entries with −C PSD and ⟨C, Z⟩ > 0 on
     every completion Z.
    """
    status: str
    witness: Optional[np.ndarray]
    residual: float
    iterations: int
    certificate: Optional[np.ndarray] = None

    @property
    def feasible(self):
        return self.status == FEASIBLE


def _psd_part(Z):
    eigenvalues, eigenvectors = sym_eigen(Z)
    positive = np.maximum(eigenvalues, 0.0)
    return sym_matrix((eigenvectors * positive) @ eigenvectors.T)


def _completion_template(X):
    n = X.shape[0]
    Z = np.zeros((2 * n, 2 * n))
    Z[:n, n:] = X
    Z[n:, :n] = X.T
    np.fill_diagonal(Z, 1.0)

    fixed = np.zeros((2 * n, 2 * n), dtype=bool)
    fixed[:n, n:] = fixed[n:, :n] = True
    np.fill_diagonal(fixed, True)
    return Z, fixed


def _factored_completion(X, template, fixed, tol):
    """[U; V]Σ[U; V]ᵀ with its diagonal raised to 1, when no diagonal entry
    exceeds 1."""
    U, sigma, Vt = np.linalg.svd(X)
    stacked = np.vstack([U, Vt.T]) * np.sqrt(sigma)
    Z = stacked @ stacked.T
    if np.any(np.diag(Z) > 1.0 + 1e-12):
        return None

    Z = np.where(fixed, template, sym_matrix(Z))
    return Z if is_psd(Z, tol) else None


def _separating_certificate(gap, fixed, template):
    """C on the fixed entries with ⟨C, M⟩ < ⟨C, Z⟩ for every PSD M of unit
    diagonal and every completion Z, or None."""
    C = sym_matrix(np.where(fixed, gap, 0.0))
    if not np.any(C):
        return None

    # ⟨C, M⟩ ≤ max(λ_max(C), 0)·trace(M) for unit-diagonal PSD M.
    slack = max(-min_eigenvalue(-C), 0.0) * template.shape[0]
    if np.sum(C * template) <= slack + psd_threshold(template):
        return None
    return C


def q_member(X, tol=1e-7, iter_cap=20000):
    """Is X the upper right n×n corner of a unit-diagonal PSD matrix?

    DESCRIPTION
     A factored completion is tried first; it settles every x⊗y and every
      X of spectral norm at most 1. Otherwise Dykstra's alternating
      projections run between the PSD cone and the affine set of 2n×2n
      matrices with unit diagonal and corner X.

     Feasible means the affine iterate Z has smallest eigenvalue
      ≥ −tol·(1 + ‖Z‖_max). Infeasible means an entry exceeds 1 in
      magnitude or a separating certificate was found. Running out of
      iterations is undetermined, never infeasible.

    ARGUMENTS
     X  (numpy.ndarray), shape=(n, n), n ≤ 20

     tol  (float)

     iter_cap  (int)

    RETURNS
     membership  (QMembership)
    """
    X = np.asarray(X, dtype=float)
    assert len(X.shape) == 2 and X.shape[0] == X.shape[1]
    n = X.shape[0]
    if n > MAX_Q_N:
        raise ValueError(f'q_member is limited to n ≤ {MAX_Q_N}: {n=}')

    template, fixed = _completion_template(X)

    if max_abs(X) > 1.0 + tol:
        return QMembership(INFEASIBLE, None, float(max_abs(X) - 1.0), 0)

    start = _factored_completion(X, template, fixed, tol)
    if start is not None:
        return QMembership(FEASIBLE, start, 0.0, 0)

    Z = template.copy()
    psd_correction = np.zeros_like(Z)
    residual = np.inf

    for iteration in range(1, iter_cap + 1):
        Y = _psd_part(Z + psd_correction)
        psd_correction = Z + psd_correction - Y
        Z = np.where(fixed, template, Y)

        residual = float(np.linalg.norm(Z - Y))
        if min_eigenvalue(Z) >= -psd_threshold(Z, tol):
            logging.info(f'Corner completion found after {iteration} '
                         f'iterations.')
            return QMembership(FEASIBLE, Z, residual, iteration)

        if iteration % 100 == 0:
            C = _separating_certificate(Z - Y, fixed, template)
            if C is not None:
                return QMembership(INFEASIBLE, None, residual, iteration, C)

    logging.warning(f'Corner completion undetermined after {iter_cap} '
                    f'iterations (residual {residual:.3e}).')

    return QMembership(UNDETERMINED, None, residual, iter_cap)


def sample_q_point(n, rank=None, seed=0, index=0):
    """Corner of the Gram matrix of 2n random unit vectors in R^rank."""
    rank = 2 * n if rank is None else rank
    vectors = make_rng(seed, 6, index).standard_normal((2 * n, rank))
    vectors /= np.linalg.norm(vectors, axis=1)[:, None]

    return (vectors @ vectors.T)[:n, n:]


def q_containment_report(n, n_samples=50, seed=0, tol=1e-7):
    """Measures both containments printed for ACUT_n and Q_n.

    'acut_in_q' is the fraction of ACUT vertices with a corner completion;
     'max_q_gauge' is the largest ACUT gauge over sampled corners, so
     Q_n ⊂ ACUT_n needs it ≤ 1 and Q_n ⊂ κ·ACUT_n needs it ≤ κ.
    """
    vertices = make_cut(n, asymmetric=True)
    completed = sum(q_member(V, tol).feasible for V in vertices)

    gauges = [acut_gauge(sample_q_point(n, seed=seed, index=i))
              for i in range(n_samples)]
    max_gauge = float(np.max(gauges))

    return {
        'n': n,
        'acut_vertices': len(vertices),
        'acut_in_q': completed / len(vertices),
        'max_q_gauge': max_gauge,
        'q_in_acut': bool(max_gauge <= 1.0 + tol),
        'q_in_kappa_acut': bool(max_gauge <= GROTHENDIECK_BOUND + tol),
    }


def witness_to_json(membership):
    return {
        'type': 'psd_completion',
        'status': membership.status,
        'residual': membership.residual,
        'iterations': membership.iterations,
        'matrix': (None if membership.witness is None
                   else membership.witness.tolist()),
        'certificate': (None if membership.certificate is None
                        else membership.certificate.tolist()),
    }


# Forms q_v over a measure on B°.


def polynomial_exponents(d, k):
    """Exponents of all monomials of degree ≤ k in d variables, by degree."""
    rows = [np.zeros(d, dtype=int)]
    for degree in range(1, k + 1):
        rows.extend(monomial_exponents(d, degree))
    return np.array(rows, dtype=int)


@dataclass(frozen=True)
class QvForm:
    """q_v(p) = Σ wᵢ(1 − ℓᵢ(v)) p(ℓᵢ)² in the monomial basis."""
    v: np.ndarray
    k: int
    exponents: np.ndarray
    gram: np.ndarray

    @property
    def n_monomials(self):
        return self.exponents.shape[0]

    def is_psd(self, tol=PSD_TOL):
        return is_psd(self.gram, tol)


def _evaluate_monomials(points, exponents):
    return np.prod(points[:, None, :] ** exponents[None, :, :], axis=2)


def build_qv_form(mu, k, v):
    if not isinstance(mu, EmpiricalMeasure):
        raise BodyError('q_v forms are built over an EmpiricalMeasure.')

    v = np.asarray(v, dtype=float)
    d = mu.dim
    if v.shape != (d,):
        raise BodyError(f'Point and atoms disagree: {v.shape=}, {d=}')

    count = int(comb(d + k, k, exact=True))
    if count > MAX_QV_MONOMIALS:
        raise ValueError(f'Too many monomials: {count} > {MAX_QV_MONOMIALS}')

    support = mu.atoms[mu.weights > 0]
    rank, vt = row_space(support, 1e-10)
    if rank < d:
        raise DegenerateSpanError(vt[-1])

    exponents = polynomial_exponents(d, k)
    assert exponents.shape[0] == count

    values = _evaluate_monomials(mu.atoms, exponents)
    scale = mu.weights * (1.0 - mu.atoms @ v)
    gram = sym_matrix((values * scale[:, None]).T @ values)

    return QvForm(v, k, exponents, gram)


def qv_certify(bpolar_atoms, k, v, tol=PSD_TOL):
    """True iff q_v is positive semidefinite, i.e. v ∈ X_k."""
    return build_qv_form(bpolar_atoms, k, v).is_psd(tol)


def qv_region(bpolar_atoms, k, points, tol=PSD_TOL):
    return np.array([qv_certify(bpolar_atoms, k, v, tol)
                     for v in np.atleast_2d(points)])
