"""Brute-force ground truth for small sensing matrices.

Everything here enumerates supports, so cost grows combinatorially; each
enumerating function takes an explicit budget and raises BudgetExceeded
instead of silently truncating.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import asf, lp
from .matrix import as_matrix, gram

NSP_BAND = 1e-9
JACOBI_TOL = 1e-12
RECOVERY_TOL = 1e-6
DEFAULT_LP_BUDGET = 200_000
DEFAULT_SUPPORT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int, what: str):
        super().__init__(f"{what} needs {needed} evaluations, budget is {budget}")
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class NspMargin:
    support: tuple[int, ...]
    margin: float

    @property
    def passes(self) -> bool:
        return self.margin < 0.5 - NSP_BAND

    @property
    def boundary(self) -> bool:
        return abs(self.margin - 0.5) <= NSP_BAND


def _support(S: Sequence[int], m: int) -> tuple[int, ...]:
    S = tuple(sorted(int(i) for i in S))
    if not S:
        raise ValueError("support must be non-empty")
    if len(set(S)) != len(S) or S[0] < 0 or S[-1] >= m:
        raise ValueError(f"invalid support {S} for m={m}")
    return S


def nsp_support_margin(A, S: Sequence[int]) -> NspMargin:
    """max sum_{i in S} |v_i| over v in ker A with ||v||_1 <= 1.

    One LP per sign pattern on S; patterns sigma and -sigma give the same
    value (v -> -v stays in the kernel) so the first sign is pinned to +1.
    Variables are [p, q, slack] with v = p - q.
    """
    A = as_matrix(A)
    n, m = A.shape
    S = _support(S, m)
    eq = np.zeros((n + 1, 2 * m + 1))
    eq[:n, :m] = A
    eq[:n, m:2 * m] = -A
    eq[n, :] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0

    best = 0.0
    for tail in itertools.product((1.0, -1.0), repeat=len(S) - 1):
        sigma = (1.0,) + tail
        c = np.zeros(2 * m + 1)
        for i, sg in zip(S, sigma):
            c[i] = -sg
            c[m + i] = sg
        out = lp.solve(lp.LinearProgram(c, eq, rhs))
        if not out.optimal:
            raise lp.LpError(f"NSP LP for support {S} ended {out.status}")
        best = max(best, -out.objective_value)
    return NspMargin(S, min(max(best, 0.0), 1.0))


def nsp_lp_count(m: int, s_max: int) -> int:
    return sum(math.comb(m, s) * 2 ** (s - 1) for s in range(1, min(s_max, m) + 1))


@dataclass
class LevelResult:
    s: int
    worst: NspMargin
    passes: bool
    boundary: bool


@dataclass
class SparsityProfile:
    """Outcome of the exhaustive null-space check up to ``s_max``.

    ``level`` is the exact sparsity level when ``capped`` is False; otherwise
    every level up to s_max passed and the true level is at least s_max.
    ``boundary`` flags that the decisive level failed only inside the
    rounding band around 1/2, so the answer was resolved conservatively.
    """

    level: int
    s_max: int
    capped: bool
    boundary: bool
    levels: list[LevelResult] = field(default_factory=list)


def nsp_profile(A, s_max: int, budget: int = DEFAULT_LP_BUDGET) -> SparsityProfile:
    A = as_matrix(A)
    m = A.shape[1]
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    needed = nsp_lp_count(m, s_max)
    if needed > budget:
        raise BudgetExceeded(needed, budget, "null space property check")
    levels = []
    for s in range(1, min(s_max, m) + 1):
        worst = None
        for S in itertools.combinations(range(m), s):
            res = nsp_support_margin(A, S)
            if worst is None or res.margin > worst.margin:
                worst = res
            if res.margin > 0.5 + NSP_BAND:
                break  # clear failure; the level's exact worst margin is not needed
        level = LevelResult(s, worst, worst.passes, worst.boundary)
        levels.append(level)
        if not level.passes:
            return SparsityProfile(s - 1, s_max, False, level.boundary, levels)
    return SparsityProfile(s_max, s_max, True, False, levels)


def exact_sparsity_level(A, s_max: int, budget: int = DEFAULT_LP_BUDGET) -> int:
    """Largest s <= s_max for which every size-s support satisfies the NSP strictly."""
    return nsp_profile(A, s_max, budget).level


# ---------------------------------------------------------------- eigenvalues


def jacobi_eigenvalues(M, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = np.array(M, dtype=np.float64)
    k = a.shape[0]
    scale = max(1.0, float(np.sqrt((a * a).sum())))
    offdiag = ~np.eye(k, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt((a[offdiag] ** 2).sum())
        if off <= tol * scale:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < abs(diff) * 1e-36:
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p].copy()
                rq = a[q].copy()
                a[p] = c * rp - s * rq
                a[q] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diagonal(a).copy())


@dataclass(frozen=True)
class RestrictedExtremes:
    s: int
    k_max: float
    k_min: float
    argmax_support: tuple[int, ...]
    argmin_support: tuple[int, ...]


def restricted_extremes(A, s: int, budget: int = DEFAULT_SUPPORT_BUDGET) -> RestrictedExtremes:
    """Largest and smallest eigenvalue of A_T^T A_T over all column subsets |T| = s.

    Ties keep the lexicographically first support.
    """
    A = as_matrix(A)
    m = A.shape[1]
    if not 1 <= s <= m:
        raise ValueError(f"s={s} out of range [1, {m}]")
    needed = math.comb(m, s)
    if needed > budget:
        raise BudgetExceeded(needed, budget, "restricted eigenvalue enumeration")
    C = gram(A)
    k_max, k_min = -math.inf, math.inf
    arg_max = arg_min = ()
    for T in itertools.combinations(range(m), s):
        ev = jacobi_eigenvalues(C[np.ix_(T, T)])
        if ev[-1] > k_max:
            k_max, arg_max = float(ev[-1]), T
        if ev[0] < k_min:
            k_min, arg_min = float(ev[0]), T
    # Gram submatrices are PSD; a tiny negative is rounding
    return RestrictedExtremes(s, k_max, max(k_min, 0.0), arg_max, arg_min)


@dataclass(frozen=True)
class Theorem2Check:
    s: int
    lhs: float
    rhs: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


def theorem2_check(A, s: int, budget: int = DEFAULT_SUPPORT_BUDGET) -> Theorem2Check:
    """Check k_min / k_max >= r - 2 (s - 1) max nu on the exhaustive extremes."""
    A = as_matrix(A)
    C = gram(A)
    ext = restricted_extremes(A, s, budget)
    if ext.k_max <= 0.0:
        raise ValueError("k_max must be positive")
    d = np.diagonal(C)
    r = float(d.min() / d.max())
    max_nu = float(asf.scores(C).nu.max())
    lhs = ext.k_min / ext.k_max
    rhs = r - 2 * (s - 1) * max_nu
    return Theorem2Check(s, lhs, rhs, lhs >= rhs - 1e-12)


# ---------------------------------------------------------------- recovery


@dataclass
class RecoveryStats:
    trials: int
    successes: int
    max_error: float
    seed: int
    failures: list[dict] = field(default_factory=list)

    @property
    def all_succeeded(self) -> bool:
        return self.successes == self.trials


def recovery_trials(A, s: int, trials: int, seed: int = 0,
                    support: Optional[Sequence[int]] = None) -> RecoveryStats:
    """Plant random s-sparse vectors, recover them by basis pursuit, count exact hits.

    Each trial draws a uniform support (unless ``support`` pins it) and
    standard-normal values from a PCG64 stream seeded with ``seed``.  Success
    means ||x_hat - x0||_inf <= 1e-6.
    """
    A = as_matrix(A)
    m = A.shape[1]
    if not 0 <= s <= m:
        raise ValueError(f"s={s} out of range [0, {m}]")
    if support is not None:
        support = _support(support, m)
        if len(support) != s:
            raise ValueError("pinned support size must equal s")
    rng = np.random.Generator(np.random.PCG64(seed))
    successes, max_error, failures = 0, 0.0, []
    for t in range(trials):
        S = np.array(support if support is not None else
                     np.sort(rng.choice(m, size=s, replace=False)), dtype=int)
        x0 = np.zeros(m)
        x0[S] = rng.standard_normal(s)
        try:
            x_hat = lp.basis_pursuit(A, A @ x0).solution
        except lp.LpError as exc:
            failures.append({"trial": t, "support": S.tolist(), "error": str(exc)})
            continue
        err = float(np.abs(x_hat - x0).max(initial=0.0))
        if err <= RECOVERY_TOL:
            successes += 1
            max_error = max(max_error, err)
        else:
            failures.append({"trial": t, "support": S.tolist(), "error": err})
    return RecoveryStats(trials, successes, max_error, seed, failures)
