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
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve


FEASTOL = 1e-9
# Relative to the largest entry of the pivot column.
PIVOT_TOL = 1e-9
# Relative to 1 + |c_j| + ‖a_j‖_∞·‖y‖_∞.
REDUCED_COST_TOL = 1e-10
# Smallest |U_ii| / max |U_ii| accepted for a basis factorization.
SINGULAR_TOL = 1e-12
# Slack on basic bounds in the two-pass ratio test.
RATIO_TOL = 1e-12
DEGENERATE_CAP = 50

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'
ITERATION_LIMIT = 'iteration_limit'
NUMERICAL_FAILURE = 'numerical_failure'


class LpError(RuntimeError):
    """The simplex solver stopped without a definite answer."""


def _as_rows(A, n):
    if A is None:
        return np.zeros((0, n))
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A[None, :]
    return A


def _as_rhs(b, m):
    if b is None:
        return np.zeros(m)
    return np.atleast_1d(np.asarray(b, dtype=float))


@dataclass(frozen=True)
class LinearProgram:
    """maximize c·x  s.t.  A_ub x ≤ b_ub,  A_eq x = b_eq.

    Variables are free unless flagged in `nonneg`.
    """
    objective: np.ndarray
    A_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    nonneg: Optional[np.ndarray] = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        n = c.shape[0]
        A_ub = _as_rows(self.A_ub, n)
        A_eq = _as_rows(self.A_eq, n)
        b_ub = _as_rhs(self.b_ub, A_ub.shape[0])
        b_eq = _as_rhs(self.b_eq, A_eq.shape[0])

        if A_ub.shape[1] != n or A_eq.shape[1] != n:
            raise ValueError(
                f'Constraint rows must have {n} columns: '
                f'{A_ub.shape=}, {A_eq.shape=}'
            )
        if b_ub.shape[0] != A_ub.shape[0] or b_eq.shape[0] != A_eq.shape[0]:
            raise ValueError(f'Right-hand sides do not match rows: '
                             f'{b_ub.shape=}, {b_eq.shape=}')

        nonneg = (np.zeros(n, dtype=bool) if self.nonneg is None
                  else np.asarray(self.nonneg, dtype=bool))
        assert nonneg.shape == (n,)

        object.__setattr__(self, 'objective', c)
        object.__setattr__(self, 'A_ub', A_ub)
        object.__setattr__(self, 'b_ub', b_ub)
        object.__setattr__(self, 'A_eq', A_eq)
        object.__setattr__(self, 'b_eq', b_eq)
        object.__setattr__(self, 'nonneg', nonneg)

    @classmethod
    def from_rows(cls, objective, ineq=(), eq=(), nonneg=None):
        """Builds a program from lists of (row, rhs) pairs."""
        n = len(objective)
        A_ub = np.array([row for row, _ in ineq], dtype=float).reshape(-1, n)
        b_ub = np.array([rhs for _, rhs in ineq], dtype=float)
        A_eq = np.array([row for row, _ in eq], dtype=float).reshape(-1, n)
        b_eq = np.array([rhs for _, rhs in eq], dtype=float)

        return cls(objective, A_ub, b_ub, A_eq, b_eq, nonneg)

    @property
    def n_vars(self):
        return self.objective.shape[0]


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Optional[float] = None
    point: Optional[np.ndarray] = None
    certificate: Optional[dict] = None
    iterations: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def optimal(self):
        return self.status == OPTIMAL


def _factor(B):
    """LU factors of a basis matrix, or None when it is numerically singular."""
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, piv = lu_factor(B, check_finite=False)

    diag = np.abs(np.diag(lu))
    if not np.all(np.isfinite(lu)):
        return None
    if diag.size and diag.min() <= SINGULAR_TOL * max(diag.max(), 1.0):
        return None

    return lu, piv


def _ratio_test(x_B, direction, positive, basis, bland):
    """Leaving position for a pivot column.

    Bland mode takes minimum ratios and breaks ties on the smallest basic
     index. Otherwise a two-pass test relaxes every bound by RATIO_TOL and
     picks the largest pivot among rows inside the relaxed step.
    """
    rows = np.flatnonzero(positive)
    ratios = np.maximum(x_B[rows], 0.0) / direction[rows]

    if bland:
        theta = ratios.min()
        ties = rows[ratios <= theta + RATIO_TOL]
        return int(ties[np.argmin(np.asarray(basis)[ties])])

    theta_max = ((x_B[rows] + RATIO_TOL) / direction[rows]).min()
    eligible = rows[ratios <= max(theta_max, 0.0)]
    if eligible.size == 0:
        eligible = rows[ratios <= ratios.min()]
    return int(eligible[np.argmax(direction[eligible])])


def _revised_simplex(A, b, c, basis, max_iter, iterations=0, partner=None,
                     bounded=False, bland=False, feastol=FEASTOL):
    """Minimizes c·z over {Az = b, z ≥ 0} from a feasible basis.

    DESCRIPTION
     - Dantzig pricing until DEGENERATE_CAP consecutive degenerate pivots,
        then Bland's rule for the rest of the call.
     - The basis is refactored after every pivot. A pivot that would make
        it singular is undone and its entering column is skipped until the
        next successful pivot.
     - partner[j] is the negated twin of a split free column (or -1); the
        twin of a basic column never enters.
     - bounded marks an objective known to be bounded below (Phase I):
        columns whose pivot column has no positive entry are skipped
        instead of reported as rays.

    RETURNS
     (status, basis, x_B, y, iterations, ray)
    """
    m, n = A.shape
    basis = list(basis)
    degenerate = 0
    banned = []
    col_norms = np.abs(A).max(axis=0, initial=0.0)

    factors = _factor(A[:, basis])
    if factors is None:
        logging.warning('Starting basis is numerically singular.')
        return NUMERICAL_FAILURE, basis, None, None, iterations, None

    while iterations < max_iter:
        x_B = lu_solve(factors, b)
        y = lu_solve(factors, c[basis], trans=1)

        reduced = c - A.T @ y
        reduced[basis] = 0.0
        if partner is not None:
            twins = partner[basis]
            reduced[twins[twins >= 0]] = 0.0
        reduced[banned] = 0.0

        tol = REDUCED_COST_TOL * (1.0 + np.abs(c)
                                  + col_norms * np.max(np.abs(y), initial=0.0))
        candidates = np.flatnonzero(reduced < -tol)
        if not bland:
            candidates = candidates[np.argsort(reduced[candidates],
                                               kind='stable')]

        entering = None
        for j in candidates:
            direction = lu_solve(factors, A[:, j])
            pivot_tol = PIVOT_TOL * max(1.0, np.abs(direction).max())
            positive = direction > pivot_tol
            if positive.any():
                entering = j
                break
            if not bounded:
                ray = np.zeros(n)
                ray[j] = 1.0
                ray[basis] = -direction
                return UNBOUNDED, basis, x_B, y, iterations, ray

        if entering is None:
            if banned:
                logging.warning(f'No pivot keeps the basis nonsingular '
                                f'({len(banned)} columns skipped).')
                return NUMERICAL_FAILURE, basis, x_B, y, iterations, None
            return OPTIMAL, basis, x_B, y, iterations, None

        leave = _ratio_test(x_B, direction, positive, basis, bland)
        trial = list(basis)
        trial[leave] = entering
        iterations += 1

        trial_factors = _factor(A[:, trial])
        if trial_factors is None:
            logging.info(f'Pivot on column {entering} gives a singular '
                         'basis; skipping it.')
            banned.append(int(entering))
            continue

        theta = max(x_B[leave], 0.0) / direction[leave]
        degenerate = degenerate + 1 if theta <= feastol else 0
        if degenerate > DEGENERATE_CAP and not bland:
            logging.info(f'Switching to Bland pricing after {degenerate} '
                         'degenerate pivots.')
            bland = True

        basis, factors = trial, trial_factors
        banned = []

    return ITERATION_LIMIT, basis, None, None, iterations, None


def _standard_form(p):
    """Rewrites p as min c·z, Az = b ≥ 0, z ≥ 0.

    Returns the data plus `expand` with x = expand @ z[:n_struct], the
     row signs used to make b nonnegative, and the twin of each split
     free column (-1 elsewhere).
    """
    n = p.n_vars
    columns = []
    for j in range(n):
        columns.append((j, 1.0))
        if not p.nonneg[j]:
            columns.append((j, -1.0))

    expand = np.zeros((n, len(columns)))
    for col, (j, sign) in enumerate(columns):
        expand[j, col] = sign

    m_ub = p.A_ub.shape[0]
    m_eq = p.A_eq.shape[0]
    n_struct = expand.shape[1]

    partner = np.full(n_struct + m_ub, -1)
    for col, (j, sign) in enumerate(columns):
        if sign < 0:
            partner[col] = col - 1
            partner[col - 1] = col

    A = np.zeros((m_ub + m_eq, n_struct + m_ub))
    A[:m_ub, :n_struct] = p.A_ub @ expand
    A[m_ub:, :n_struct] = p.A_eq @ expand
    A[:m_ub, n_struct:] = np.eye(m_ub)

    b = np.concatenate([p.b_ub, p.b_eq])
    c = np.zeros(n_struct + m_ub)
    c[:n_struct] = -(p.objective @ expand)

    signs = np.where(b < 0, -1.0, 1.0)

    return A * signs[:, None], b * signs, c, expand, signs, m_ub, partner


def _split_rows(u, m_ub):
    return {'ineq': u[:m_ub], 'eq': u[m_ub:]}


def lp_solve(p, feastol=FEASTOL, max_iter=None):
    """Solves a LinearProgram with the two-phase revised simplex.

    DESCRIPTION
     - Optimal results carry dual multipliers (ineq ≥ 0, eq free) with
        A_ubᵀ·ineq + A_eqᵀ·eq = c on free variables.
     - Infeasible results carry Farkas multipliers y (ineq part ≥ 0) with
        yᵀA = 0 on free variables and yᵀb < 0, checked by verify_farkas
        before they are returned.
     - Unbounded results carry an improving ray in x-space.
     - A Phase I that ends without a feasible point or a checked
        certificate is rerun from the crash basis under Bland pricing;
        if that also fails the status is NUMERICAL_FAILURE.

    ARGUMENTS
     p  (LinearProgram)

     feastol  (float)
       - Phase I objective at or below this value counts as feasible.

     max_iter  (int or None)
       - Pivot cap shared by both phases.

    RETURNS
     result  (LpResult)
    """
    A, b, c, expand, signs, m_ub, partner = _standard_form(p)
    m, n_std = A.shape
    n_struct = expand.shape[1]

    if max_iter is None:
        max_iter = 50 * (m + n_std) + 1000

    if m == 0:
        improving = np.flatnonzero(c < -REDUCED_COST_TOL)
        if improving.size:
            ray = expand[:, improving[0]].copy()
            return LpResult(UNBOUNDED, certificate={'ray': ray})
        point = np.zeros(p.n_vars)
        return LpResult(OPTIMAL, 0.0, point,
                        {'ineq': np.zeros(0), 'eq': np.zeros(0)})

    # Phase I: slack columns start basic where their row kept its sign.
    crash = []
    artificial_rows = []
    for row in range(m):
        if row < m_ub and signs[row] > 0:
            crash.append(n_struct + row)
        else:
            crash.append(n_std + len(artificial_rows))
            artificial_rows.append(row)

    n_art = len(artificial_rows)
    A1 = np.hstack([A, np.zeros((m, n_art))])
    for i, row in enumerate(artificial_rows):
        A1[row, n_std + i] = 1.0
    c1 = np.zeros(n_std + n_art)
    c1[n_std:] = 1.0
    partner1 = np.concatenate([partner, np.full(n_art, -1)])

    iterations = 0
    rows = np.arange(m)
    basis = crash

    if n_art:
        infeasibility = None
        for bland in (False, True):
            status, basis, x_B, y, iterations, _ = _revised_simplex(
                A1, b, c1, crash, max_iter, iterations, partner1,
                bounded=True, bland=bland, feastol=feastol)

            if status == ITERATION_LIMIT:
                logging.warning(f'Phase I hit the pivot cap ({max_iter=}).')
                return LpResult(ITERATION_LIMIT, iterations=iterations,
                                diagnostics={'phase': 1, 'rows': m,
                                             'cols': n_std})

            if status == OPTIMAL:
                infeasibility = float(c1[basis] @ x_B)
                if infeasibility <= feastol:
                    break

                certificate = _split_rows(-(signs * y), m_ub)
                if verify_farkas(p, certificate, feastol):
                    return LpResult(INFEASIBLE, certificate=certificate,
                                    iterations=iterations,
                                    diagnostics={'phase1_value': infeasibility})

            logging.warning(f'Phase I ended with {status=} and '
                            f'{infeasibility=} but no checked certificate '
                            f'({bland=}).')
        else:
            return LpResult(NUMERICAL_FAILURE, iterations=iterations,
                            diagnostics={'phase': 1, 'rows': m, 'cols': n_std,
                                         'phase1_value': infeasibility})

        driven = _drive_out_artificials(A1, basis, n_std)
        if driven is None:
            return LpResult(NUMERICAL_FAILURE, iterations=iterations,
                            diagnostics={'phase': 1, 'rows': m, 'cols': n_std})
        basis, rows = driven
        A1 = A1[rows]

    A2 = A1[:, :n_std]
    status, basis, x_B, y, iterations, ray = _revised_simplex(
        A2, b[rows], c, basis, max_iter, iterations, partner, feastol=feastol)

    if status in (ITERATION_LIMIT, NUMERICAL_FAILURE):
        logging.warning(f'Phase II ended with {status=} ({max_iter=}).')
        return LpResult(status, iterations=iterations,
                        diagnostics={'phase': 2, 'rows': m, 'cols': n_std})

    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, certificate={'ray': expand @ ray[:n_struct]},
                        iterations=iterations)

    z = np.zeros(n_std)
    z[basis] = x_B
    point = expand @ z[:n_struct]

    u = np.zeros(m)
    u[rows] = signs[rows] * y

    return LpResult(OPTIMAL, float(p.objective @ point), point,
                    _split_rows(-u, m_ub), iterations)


def _drive_out_artificials(A1, basis, n_std):
    """Pivots zero-valued artificials out of the basis after Phase I.

    An artificial whose tableau row vanishes on every real column marks a
     redundant constraint; that row and basis position are dropped.
     Returns None if a reduced basis cannot be factored.
    """
    m = A1.shape[0]
    basis = list(basis)
    rows = list(range(m))

    for pos in range(m):
        if basis[pos] is None or basis[pos] < n_std:
            continue

        positions = [q for q in range(m) if basis[q] is not None]
        sub_basis = [basis[q] for q in positions]
        factors = _factor(A1[np.ix_(rows, sub_basis)])
        if factors is None:
            logging.warning('Basis became singular while removing '
                            'artificial columns.')
            return None

        unit = np.zeros(len(positions))
        unit[positions.index(pos)] = 1.0
        inverse_row = lu_solve(factors, unit, trans=1)
        tableau_row = inverse_row @ A1[rows, :n_std]
        tableau_row[[j for j in sub_basis if j < n_std]] = 0.0

        j = int(np.argmax(np.abs(tableau_row)))
        pivot_tol = PIVOT_TOL * max(1.0, np.abs(inverse_row).max())
        if abs(tableau_row[j]) > pivot_tol:
            basis[pos] = j
        else:
            # Each artificial column is the unit vector of its own row.
            rows.remove(int(np.flatnonzero(A1[:, basis[pos]])[0]))
            basis[pos] = None

    kept_basis = [column for column in basis if column is not None]
    assert len(kept_basis) == len(rows)

    return kept_basis, np.asarray(rows)


def verify_farkas(p, certificate, feastol=FEASTOL):
    """Checks that Farkas multipliers prove p infeasible."""
    y_ub = np.asarray(certificate['ineq'], dtype=float)
    y_eq = np.asarray(certificate['eq'], dtype=float)

    scale = max(np.max(np.abs(y_ub), initial=0.0),
                np.max(np.abs(y_eq), initial=0.0))
    if scale == 0:
        return False
    y_ub = y_ub / scale
    y_eq = y_eq / scale

    combined = y_ub @ p.A_ub + y_eq @ p.A_eq
    rhs = float(y_ub @ p.b_ub + y_eq @ p.b_eq)

    free = ~p.nonneg
    return bool(
        np.all(y_ub >= -feastol)
        and np.all(np.abs(combined[free]) <= feastol)
        and np.all(combined[p.nonneg] >= -feastol)
        and rhs < -feastol
    )


def lp_feasible(A_ub=None, b_ub=None, A_eq=None, b_eq=None, nonneg=None,
                n_vars=None, feastol=FEASTOL):
    """Feasibility of a constraint system; returns (feasible, point)."""
    if n_vars is None:
        source = A_ub if A_ub is not None else A_eq
        n_vars = np.atleast_2d(source).shape[1]

    p = LinearProgram(np.zeros(n_vars), A_ub, b_ub, A_eq, b_eq, nonneg)
    result = lp_solve(p, feastol)

    if result.status in (ITERATION_LIMIT, NUMERICAL_FAILURE):
        raise LpError(f'Feasibility LP ended with status {result.status!r}: '
                      f'{result.diagnostics}')

    return result.optimal, result.point


def lp_maximize(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, nonneg=None,
                feastol=FEASTOL):
    """Optimal value and point, raising on anything but optimality."""
    p = LinearProgram(c, A_ub, b_ub, A_eq, b_eq, nonneg)
    result = lp_solve(p, feastol)

    if not result.optimal:
        raise LpError(f'LP ended with status {result.status!r}.')

    return result.value, result.point


def member_vrep(x, points, feastol=FEASTOL):
    """True iff x ∈ conv(points) within feastol."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))

    if points.shape[0] == 0 or points.size == 0:
        raise ValueError('member_vrep needs a nonempty point list.')
    if points.shape[1] != x.shape[0]:
        raise ValueError(f'Dimension mismatch: {points.shape=}, {x.shape=}')

    N = points.shape[0]
    A_eq = np.vstack([points.T, np.ones((1, N))])
    b_eq = np.concatenate([x, [1.0]])

    feasible, _ = lp_feasible(A_eq=A_eq, b_eq=b_eq,
                              nonneg=np.ones(N, dtype=bool), feastol=feastol)

    return feasible


def member_projection(x, A, b, T, feastol=FEASTOL, A_eq=None, b_eq=None):
    """True iff some w with A w ≤ b (and A_eq w = b_eq) has T w = x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    T = np.atleast_2d(np.asarray(T, dtype=float))

    if T.shape[0] != x.shape[0]:
        raise ValueError(f'Map rows must match the point: {T.shape=}, {x.shape=}')

    A_eq_all = T if A_eq is None else np.vstack([T, A_eq])
    b_eq_all = x if b_eq is None else np.concatenate([x, b_eq])

    feasible, _ = lp_feasible(A, b, A_eq_all, b_eq_all, n_vars=T.shape[1],
                              feastol=feastol)

    return feasible
