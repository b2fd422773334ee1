"""Dense two-phase primal simplex and the basis-pursuit reduction.

Standard form only: minimize c.x subject to A x = b, x >= 0.  Bland's rule is
used for both the entering and leaving choice, which rules out cycling on the
heavily degenerate programs produced by the null-space oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .matrix import as_matrix

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
OPT_TOL = 1e-8
MAX_PIVOTS = 100_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LpError(RuntimeError):
    pass


class InfeasibleError(LpError):
    pass


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=np.float64).ravel()
        A = np.asarray(self.eq_matrix, dtype=np.float64)
        b = np.asarray(self.eq_rhs, dtype=np.float64).ravel()
        if A.ndim != 2:
            raise ValueError("eq_matrix must be 2-D")
        if A.shape[1] != c.size:
            raise ValueError(f"objective has {c.size} entries, eq_matrix has {A.shape[1]} columns")
        if A.shape[0] != b.size:
            raise ValueError(f"eq_rhs has {b.size} entries, eq_matrix has {A.shape[0]} rows")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "eq_matrix", A)
        object.__setattr__(self, "eq_rhs", b)


@dataclass(frozen=True)
class LpOutcome:
    status: str
    solution: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factor = T[:, col].copy()
    factor[row] = 0.0
    T -= np.multiply.outer(factor, T[row])
    T[:-1, -1] = np.maximum(T[:-1, -1], 0.0)  # rhs >= 0; only roundoff is clipped
    basis[row] = col


def _simplex(T: np.ndarray, basis: np.ndarray, ncols: int, budget: list) -> str:
    """Bland-rule iterations on tableau ``T`` (last row = reduced costs, last col = rhs)."""
    while True:
        d = T[-1, :ncols]
        entering = np.flatnonzero(d < -PIVOT_TOL)
        if entering.size == 0:
            return OPTIMAL
        j = int(entering[0])
        col = T[:-1, j]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return UNBOUNDED
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        i = int(ties[np.argmin(basis[ties])])
        _pivot(T, basis, i, j)
        budget[0] += 1
        if budget[0] > MAX_PIVOTS:
            raise LpError("simplex pivot limit exceeded")


def solve(lp: LinearProgram) -> LpOutcome:
    c, A, b = lp.objective, lp.eq_matrix.copy(), lp.eq_rhs.copy()
    r, k = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    pivots = [0]

    # phase 1: artificial identity basis, minimize the sum of artificials
    T = np.zeros((r + 1, k + r + 1))
    T[:r, :k] = A
    T[:r, k:k + r] = np.eye(r)
    T[:r, -1] = b
    T[-1, :k] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = np.arange(k, k + r)
    _simplex(T, basis, k + r, pivots)
    if -T[-1, -1] > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
        return LpOutcome(INFEASIBLE, pivots=pivots[0])

    # drive zero-level artificials out of the basis; drop rows that are redundant
    keep = []
    for i in range(r):
        if basis[i] >= k:
            cand = np.flatnonzero(np.abs(T[i, :k]) > PIVOT_TOL)
            if cand.size == 0:
                continue
            _pivot(T, basis, i, int(cand[0]))
        keep.append(i)
    rows = np.array(keep, dtype=int)
    T2 = np.zeros((rows.size + 1, k + 1))
    T2[:-1, :k] = T[rows, :k]
    T2[:-1, -1] = T[rows, -1]
    basis = basis[rows].copy()

    # phase 2
    T2[-1, :k] = c
    T2[-1, -1] = 0.0
    for i, j in enumerate(basis):
        T2[-1] -= c[j] * T2[i]
    status = _simplex(T2, basis, k, pivots)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED, pivots=pivots[0])

    x = np.zeros(k)
    x[basis] = T2[:-1, -1]
    if basis.size:
        # re-solve the final basis against the original data for tighter feasibility
        B = A[rows][:, basis]
        refined, *_ = np.linalg.lstsq(B, b[rows], rcond=None)
        if np.all(refined >= -FEAS_TOL):
            x[basis] = refined
    x[(x < 0) & (x >= -FEAS_TOL)] = 0.0
    x.setflags(write=False)
    return LpOutcome(OPTIMAL, x, float(c @ x), pivots[0])


def solve_lp(c, A_eq, b_eq) -> LpOutcome:
    return solve(LinearProgram(c, A_eq, b_eq))


def basis_pursuit(A, y) -> LpOutcome:
    """Minimize ||x||_1 subject to A x = y via the split x = p - q, p, q >= 0.

    The returned outcome carries the length-m minimizer and its l1 norm.
    Raises InfeasibleError when y is not in the range of A.
    """
    A = as_matrix(A)
    y = np.asarray(y, dtype=np.float64).ravel()
    n, m = A.shape
    if y.size != n:
        raise ValueError(f"y has {y.size} entries, A has {n} rows")
    out = solve(LinearProgram(np.ones(2 * m), np.hstack([A, -A]), y))
    if out.status == INFEASIBLE:
        raise InfeasibleError("measurement vector is outside the range of A")
    if out.status != OPTIMAL:
        raise LpError(f"basis pursuit LP ended {out.status}")
    x = out.solution[:m] - out.solution[m:]
    x.setflags(write=False)
    return LpOutcome(OPTIMAL, x, float(np.abs(x).sum()), out.pivots)
