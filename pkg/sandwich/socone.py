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

from .bodies import HRep, Projected
from .lp import FEASTOL, LinearProgram, lp_solve, member_projection
from .numerics import sample_unit_sphere
from .polyapprox import combine


MAX_STAGES = 30
ARC_VERTEX_CAP = 1 << 16


def _xi(k):
    return 2 * (k - 1)


def _eta(k):
    return 2 * (k - 1) + 1


def _stage_rows(m, n_vars):
    """Rows of stages k = 2..m over variables (ξ₁, η₁, …, ξ_m, η_m, …).

    ξ_k = ξ_{k−1} cos θ + η_{k−1} sin θ  and
    η_k ≥ |−ξ_{k−1} sin θ + η_{k−1} cos θ|,  θ = π/2^k.
    """
    ineq, eq = [], []
    for k in range(2, m + 1):
        c, s = np.cos(np.pi / 2 ** k), np.sin(np.pi / 2 ** k)

        row = np.zeros(n_vars)
        row[[_xi(k), _xi(k - 1), _eta(k - 1)]] = [1.0, -c, -s]
        eq.append(row)

        for sign in (1.0, -1.0):
            row = np.zeros(n_vars)
            row[[_xi(k - 1), _eta(k - 1), _eta(k)]] = [-sign * s, sign * c,
                                                       -1.0]
            ineq.append(row)

    return ineq, eq


@dataclass(frozen=True)
class GadgetSpec:
    """Polyhedron in (ξ₁, η₁, …, ξ_m, η_m) projecting onto the quarter
    disc."""
    m: int
    variables: tuple
    A_ub: np.ndarray
    b_ub: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    projection: np.ndarray

    @property
    def n_rows(self):
        return self.A_ub.shape[0] + self.A_eq.shape[0]

    @property
    def polytope(self):
        return HRep(self.A_ub, self.b_ub, self.A_eq, self.b_eq,
                    symmetric=False)

    @property
    def body(self):
        return Projected(self.polytope, self.projection)

    def contains(self, x, feastol=FEASTOL):
        return member_projection(x, self.A_ub, self.b_ub, self.projection,
                                 feastol, self.A_eq, self.b_eq)


def quarter_gadget(m):
    if not 2 <= m <= MAX_STAGES:
        raise ValueError(f'Stage count must lie in [2, {MAX_STAGES}]: {m=}')

    n_vars = 2 * m
    ineq, eq = _stage_rows(m, n_vars)
    rhs = [0.0] * len(ineq)

    bounds = [(_xi(1), -1.0, 0.0), (_eta(1), -1.0, 0.0),
              (_xi(m), 1.0, 1.0), (_eta(m), 1.0, np.pi / 2 ** m)]
    for index, coefficient, bound in bounds:
        row = np.zeros(n_vars)
        row[index] = coefficient
        ineq.append(row)
        rhs.append(bound)

    projection = np.zeros((2, n_vars))
    projection[0, _xi(1)] = projection[1, _eta(1)] = 1.0
    variables = tuple(f'{name}_{k}' for k in range(1, m + 1)
                      for name in ('xi', 'eta'))

    gadget = GadgetSpec(m, variables, np.array(ineq), np.array(rhs),
                        np.array(eq), np.zeros(len(eq)), projection)
    assert gadget.n_rows == 3 * (m - 1) + 4

    return gadget


def quarter_cone(m):
    """{(ρ, β, τ) : ρ² + β² ≤ τ²} approximated by the gadget scaled by τ.

    Nonnegativity of ρ and β is left to the caller.
    """
    if not 2 <= m <= MAX_STAGES:
        raise ValueError(f'Stage count must lie in [2, {MAX_STAGES}]: {m=}')

    n_vars = 2 * m + 1
    tau = n_vars - 1
    ineq, eq = _stage_rows(m, n_vars)

    for index, scale in ((_xi(m), 1.0), (_eta(m), np.pi / 2 ** m)):
        row = np.zeros(n_vars)
        row[index], row[tau] = 1.0, -scale
        ineq.append(row)

    T = np.zeros((3, n_vars))
    T[0, _xi(1)] = T[1, _eta(1)] = T[2, tau] = 1.0

    polytope = HRep(np.array(ineq), np.zeros(len(ineq)), np.array(eq),
                    np.zeros(len(eq)), symmetric=False)
    return Projected(polytope, T)


def _free(k):
    return Projected(HRep(np.zeros((0, k))), np.eye(k))


def _remap(q, M):
    return Projected(q.polytope, M @ q.T, q.symmetric)


def _tower_cone(d, m):
    """Approximation of {(x, τ) : ‖x‖ ≤ τ} with x ∈ R^d."""
    if d == 1:
        A = np.array([[1.0, -1.0], [-1.0, -1.0]])
        return Projected(HRep(A, np.zeros(2)), np.eye(2))

    r, b = (d + 1) // 2, d // 2
    outer = combine(combine(_tower_cone(r, m), _tower_cone(b, m), 'product'),
                    _free(1), 'product')

    # (x_r, ρ, x_b, β, τ) ↦ (x_r, x_b, ρ, β, τ)
    order = list(range(r)) + list(range(r + 1, r + 1 + b)) + [r, d + 1, d + 2]
    outer = _remap(outer, np.eye(d + 3)[order])

    inner = combine(_free(d), quarter_cone(m), 'product')
    both = combine(outer, inner, 'intersect')

    keep = list(range(d)) + [d + 2]
    return _remap(both, np.eye(d + 3)[keep])


def bn_facet_count(d, m):
    return 2 * d + 2 * m * (d - 1)


def ball_bn(d, m):
    """Projection of a polytope with O(d·m) facets approximating the unit
    ball B_d, the cone tower cut at τ = 1."""
    if d < 1:
        raise ValueError(f'Dimension must be positive: {d=}')

    cone = _tower_cone(d, m)
    P = cone.polytope

    A_eq = np.vstack([P.A_eq, cone.T[d]])
    b_eq = np.concatenate([P.b_eq, [1.0]])
    body = Projected(HRep(P.A, P.b, A_eq, b_eq, symmetric=False),
                     cone.T[:d], symmetric=True)

    assert body.n_facets == bn_facet_count(d, m)
    assert body.n_facets <= 3 * d * m

    logging.info(f'B({d}, m={m}): {body.n_facets} facets, '
                 f'{body.n_rows - body.n_facets} equalities, '
                 f'{P.dim} lifted variables.')

    return body


def gadget_to_json(g):
    return {
        'type': 'projected',
        'm': g.m,
        'variables': list(g.variables),
        'normals': g.A_ub.tolist(),
        'rhs': g.b_ub.tolist(),
        'eq_normals': g.A_eq.tolist(),
        'eq_rhs': g.b_eq.tolist(),
        'map': g.projection.tolist(),
    }


def outer_factor(b, n_dirs=720, seed=0):
    """Largest support of b over sampled unit directions.

    For bodies containing the unit ball this is the sampled outer factor
     against B_d. In the plane the directions are evenly spaced angles.
    """
    if b.dim == 2:
        angles = 2 * np.pi * np.arange(n_dirs) / n_dirs
        directions = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        directions = sample_unit_sphere(b.dim, n_dirs, seed)

    return float(np.max(b.support(directions)))


def _support_point(g, c):
    result = lp_solve(LinearProgram(g.projection.T @ c, g.A_ub, g.b_ub,
                                    g.A_eq, g.b_eq))
    if not result.optimal:
        raise ValueError(f'Support LP ended with status {result.status!r}.')
    return g.projection @ result.point


def arc_vertices(g, tol=1e-12):
    """Vertices of the projected gadget on its outer arc, counterclockwise
    from the ξ-axis to the η-axis."""
    first = _support_point(g, np.array([1.0, 0.0]))
    last = _support_point(g, np.array([0.0, 1.0]))

    vertices = [first]
    pending = [(first, last)]
    while pending:
        a, b = pending.pop()
        edge = b - a
        if np.linalg.norm(edge) <= tol:
            continue

        normal = np.array([edge[1], -edge[0]])
        v = _support_point(g, normal)
        if normal @ v <= normal @ a + tol * np.linalg.norm(normal):
            vertices.append(b)
            continue

        if len(vertices) + len(pending) > ARC_VERTEX_CAP:
            raise RuntimeError('Arc tracing exceeded its vertex cap.')
        pending.extend([(v, b), (a, v)])

    vertices = np.array(vertices)
    angles = np.arctan2(vertices[:, 1], vertices[:, 0])
    return vertices[np.argsort(angles, kind='stable')]


def quarter_outer_factor(g):
    """Exact max ‖x‖₂ over the projected gadget."""
    return float(np.max(np.linalg.norm(arc_vertices(g), axis=1)))
