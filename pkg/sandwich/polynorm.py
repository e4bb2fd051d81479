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
from scipy.special import comb, factorial

from .bodies import BodyError, VRep, facets_of
from .ellipsoid import MVEE_EPS, DegenerateSpanError, loewner_mvee
from .numerics import is_psd, row_space, sample_unit_sphere, sym_matrix


MAX_SYM_DIM = 500
SPAN_RTOL = 1e-10


def alpha_bound(d, k):
    """C(d+k−1, k)^{1/2k}, the factor of the degree-2k tensor lift."""
    if d < 1 or k < 1:
        raise ValueError(f'Dimension and power must be positive: {d=}, {k=}')

    return float(comb(d + k - 1, k, exact=True)) ** (1.0 / (2 * k))


def monomial_exponents(d, k):
    """Exponent vectors of the degree-k monomials in d variables,
    lexicographically decreasing."""
    rows = []
    for multiset in itertools.combinations_with_replacement(range(d), k):
        rows.append(np.bincount(multiset, minlength=d))

    return np.array(rows, dtype=int).reshape(-1, d)


def multinomial_weights(exponents):
    k = int(exponents[0].sum())
    denominators = np.prod(factorial(exponents), axis=1)

    return np.sqrt(factorial(k) / denominators)


def symmetric_embedding(v, k, exponents=None):
    """s(v) with ⟨s(u), s(v)⟩ = ⟨u, v⟩^k, for one vector or each row."""
    V = np.atleast_2d(np.asarray(v, dtype=float))
    if exponents is None:
        exponents = monomial_exponents(V.shape[1], k)

    weights = multinomial_weights(exponents)
    monomials = np.prod(V[:, None, :] ** exponents[None, :, :], axis=2)
    embedded = monomials * weights

    return embedded if np.ndim(v) == 2 else embedded[0]


def _span_basis(points):
    rank, vt = row_space(points, SPAN_RTOL)

    return vt[:rank].T, vt[rank:].T


@dataclass(frozen=True)
class TensorNormSurrogate:
    """p(v) = s(v)ᵀ A s(v), a form of degree 2k in v.

    `bound` is the guaranteed ratio gauge/p^{1/2k} when known, `rank` the
     dimension of the tensor span that carries the form.
    """
    d: int
    k: int
    form: np.ndarray
    kind: str = 'tensor'
    bound: float = np.inf
    rank: int = 0

    def __post_init__(self):
        form = sym_matrix(self.form)
        if form.shape != (self.sym_dim, self.sym_dim):
            raise ValueError(f'Form must act on the symmetric power: '
                             f'{form.shape=}, sym_dim={self.sym_dim}')
        object.__setattr__(self, 'form', form)

    @property
    def sym_dim(self):
        return int(comb(self.d + self.k - 1, self.k, exact=True))

    @property
    def exponents(self):
        return monomial_exponents(self.d, self.k)

    def value(self, v):
        embedded = symmetric_embedding(np.atleast_2d(v), self.k,
                                       self.exponents)
        values = np.einsum('ij,jk,ik->i', embedded, self.form, embedded)
        values = np.maximum(values, 0.0)
        return values if np.ndim(v) == 2 else float(values[0])

    def norm(self, v):
        return self.value(v) ** (1.0 / (2 * self.k))

    def is_sos(self):
        return is_psd(self.form)


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Finitely many weighted atoms; weights are nonnegative with sum 1."""
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        weights = np.asarray(self.weights, dtype=float)
        if weights.shape != (atoms.shape[0],):
            raise ValueError(f'One weight per atom: {atoms.shape=}, '
                             f'{weights.shape=}')
        if np.any(weights < 0):
            raise ValueError('Weights must be nonnegative.')
        if abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError(f'Weights must sum to 1: {weights.sum()=}')
        weights = weights / weights.sum()

        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'weights', weights)

    @property
    def dim(self):
        return self.atoms.shape[1]

    @classmethod
    def uniform(cls, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(points, np.full(points.shape[0], 1.0 / points.shape[0]))

    def support_size(self):
        return int(np.count_nonzero(self.weights))


def dual_vertices(b):
    """Vertices of the polar of a polytope: its facet normals a with
     a·x ≤ 1."""
    facets = facets_of(b)
    if facets is None:
        raise BodyError(f'Facets of the body are not available: {b.kind=}')
    return facets[0]


def tensor_lift(bpolar_vertices, k, eps=MVEE_EPS):
    """Degree-2k surrogate p with p^{1/2k} ≤ ‖·‖_B ≤ bound·p^{1/2k}.

    DESCRIPTION
     The vertices ℓ of B° are embedded as symmetric tensors s(ℓ); their
      symmetric Löwner ellipsoid is computed inside the span of the
      tensors. With the optimal weights u, the inscribed ellipsoid is
      {y : yᵀ(Σ u s(ℓ)s(ℓ)ᵀ)⁻¹y ≤ 1}, whose squared support function at
      s(v) is p(v) = Σ u ℓ(v)^{2k}.

     The bound is g^{1/2k} for the largest leverage g of the tensors, at
      most (rank·(1 + eps))^{1/2k} ≤ alpha_bound(d, k)·(1 + eps).

    ARGUMENTS
     bpolar_vertices  (numpy.ndarray), shape=(N, d)
       - Vertices of B° for a symmetric polytope B; sign pairs may be
          given once.

     k  (int)

     eps  (float)
       - MVEE gap.

    RETURNS
     surrogate  (TensorNormSurrogate)
    """
    L = np.atleast_2d(np.asarray(bpolar_vertices, dtype=float))
    d = L.shape[1]
    if k < 1:
        raise ValueError(f'Power must be positive: {k=}')

    sym_dim = int(comb(d + k - 1, k, exact=True))
    if sym_dim > MAX_SYM_DIM:
        raise ValueError(f'Symmetric power too large: {sym_dim=} > '
                         f'{MAX_SYM_DIM}')

    _, deficient = _span_basis(L)
    if deficient.shape[1]:
        raise DegenerateSpanError(deficient[:, 0])

    exponents = monomial_exponents(d, k)
    S = symmetric_embedding(L, k, exponents)
    span, _ = _span_basis(S)
    rank = span.shape[1]
    if rank < sym_dim:
        logging.info(f'Tensors span {rank} of {sym_dim} dimensions; '
                     'working in their span.')

    coords = S @ span
    weights = loewner_mvee(coords, eps, symmetric=True).weights

    moment = (coords * weights[:, None]).T @ coords
    leverages = np.einsum('ij,ij->i', coords, np.linalg.solve(moment,
                                                              coords.T).T)

    form = (S * weights[:, None]).T @ S
    bound = float(np.max(leverages)) ** (1.0 / (2 * k))

    return TensorNormSurrogate(d, k, form, 'tensor', bound, rank)


def power_sum_norm(d, k):
    """p(x) = Σ ξᵢ^{2k}, within d^{1/2k} of the cube gauge."""
    if d < 1 or k < 1:
        raise ValueError(f'Dimension and power must be positive: {d=}, {k=}')

    exponents = monomial_exponents(d, k)
    pure = np.max(exponents, axis=1) == k
    form = np.diag(pure.astype(float))

    return TensorNormSurrogate(d, k, form, 'power', d ** (1.0 / (2 * k)), d)


def exterior_angle(K, n_samples=10000, seed=0):
    """Normalized exterior angles of a polytope's vertices by sampling.

    Each sampled unit c credits the vertex maximizing ⟨c, x⟩, the lowest
     index winning ties.
    """
    if not isinstance(K, VRep):
        raise BodyError(f'Exterior angles need a V-polytope: {K.kind=}')

    directions = sample_unit_sphere(K.dim, n_samples, seed)
    winners = np.argmax(directions @ K.points.T, axis=1)
    counts = np.bincount(winners, minlength=K.n_vertices)

    return EmpiricalMeasure(K.points, counts / n_samples)


def moment_norm(mu, k):
    """p(v) = Σ wᵢ⟨ℓᵢ, v⟩^{2k}; p^{1/2k} is an L^{2k} average of linear
    functionals and therefore a norm."""
    if k < 1:
        raise ValueError(f'Power must be positive: {k=}')

    support = mu.atoms[mu.weights > 0]
    _, deficient = _span_basis(support)
    if deficient.shape[1]:
        raise DegenerateSpanError(deficient[:, 0])

    S = symmetric_embedding(mu.atoms, k)
    form = (S * mu.weights[:, None]).T @ S

    return TensorNormSurrogate(mu.dim, k, form, 'moment')


def sandwich_ratios(surrogate, body, directions):
    """‖v‖_B / p^{1/2k}(v) for each row v."""
    directions = np.atleast_2d(directions)
    return body.gauge(directions) / surrogate.norm(directions)


def surrogate_to_json(s):
    return {
        'type': 'polynomial_norm',
        'kind': s.kind,
        'd': s.d,
        'k': s.k,
        'sym_dim': s.sym_dim,
        'exponents': s.exponents.tolist(),
        'form': s.form.tolist(),
        'bound': None if np.isinf(s.bound) else s.bound,
        'rank': s.rank,
    }


def surrogate_from_json(document):
    if document.get('type') != 'polynomial_norm':
        raise BodyError(f'Not a polynomial norm: {document.get("type")=}')

    surrogate = TensorNormSurrogate(
        int(document['d']), int(document['k']), np.array(document['form']),
        document.get('kind', 'tensor'),
        np.inf if document.get('bound') is None else document['bound'],
        int(document.get('rank', 0)),
    )
    if surrogate.sym_dim != document.get('sym_dim', surrogate.sym_dim):
        raise BodyError('Stored sym_dim does not match d and k.')

    return surrogate
