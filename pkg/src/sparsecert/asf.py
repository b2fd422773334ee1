"""Per-column scores and the accumulative score bound on the l1 sparsity level.

For a Gram matrix C with positive diagonal, column i gets

    nu(i)  = max_{j != i} |c_ij| / c_ii
    rho(i) = nu(i) / (1 + nu(i))

Any support S with sum_{i in S} rho(i) < 1/2 is recovered exactly by l1
minimization.  Sorting rho in non-increasing order and accumulating until the
running sum reaches 1/2 gives a sparsity level that every support of that size
satisfies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

THRESHOLD = 0.5
_BLOCK = 64


class ScoreError(ValueError):
    pass


@dataclass(frozen=True)
class ScoreVector:
    nu: np.ndarray
    rho: np.ndarray
    order: np.ndarray  # rho[order] is non-increasing, ties by ascending index

    @property
    def m(self) -> int:
        return len(self.rho)

    def sorted_rho(self) -> np.ndarray:
        return self.rho[self.order]


def _readonly(x: np.ndarray) -> np.ndarray:
    x.setflags(write=False)
    return x


def scores(C) -> ScoreVector:
    """Score every column of the Gram matrix ``C``.

    Raises ScoreError when m < 2 (no off-diagonal to maximize over) or when a
    diagonal entry is zero (zero column in the sensing matrix).
    """
    C = np.asarray(C, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ScoreError(f"Gram matrix must be square, got shape {C.shape}")
    m = C.shape[0]
    if m < 2:
        raise ScoreError("scores need at least two columns")
    diag = np.diagonal(C).copy()
    zero = np.flatnonzero(diag <= 0.0)
    if zero.size:
        raise ScoreError(f"column {int(zero[0])} has zero norm")

    # row blocks keep the |C| temporary small; the pass stays O(m^2)
    row_max = np.empty(m)
    for start in range(0, m, _BLOCK):
        stop = min(start + _BLOCK, m)
        block = np.abs(C[start:stop])
        rows = np.arange(stop - start)
        block[rows, rows + start] = -np.inf
        row_max[start:stop] = block.max(axis=1)
    nu = row_max / diag
    rho = nu / (nu + 1.0)
    order = np.argsort(-rho, kind="stable")
    return ScoreVector(_readonly(nu), _readonly(rho), _readonly(order))


def _check_support(sv: ScoreVector, support: Iterable[int]) -> list[int]:
    idx = [int(i) for i in support]
    if len(set(idx)) != len(idx):
        raise ValueError(f"support has duplicate indices: {idx}")
    for i in idx:
        if not 0 <= i < sv.m:
            raise IndexError(f"support index {i} out of range for m={sv.m}")
    return idx


def support_score(sv: ScoreVector, support: Sequence[int]) -> float:
    """rho(S): correctly rounded sum of the scores over ``support``."""
    idx = _check_support(sv, support)
    return math.fsum(sv.rho[idx])


def asf_max(sv: ScoreVector, s: int) -> float:
    """Largest rho(S) over supports of size ``s``: the sum of the s largest scores."""
    if not 0 <= s <= sv.m:
        raise ValueError(f"s={s} out of range [0, {sv.m}]")
    return math.fsum(sv.rho[sv.order[:s]])


def sparsity_lower_bound(sv: ScoreVector, margin: float = 0.0) -> int:
    """Largest l such that the l largest scores sum to less than 1/2.

    The first prefix length whose sum reaches ``1/2 - margin`` is found and one
    is subtracted.  If the full sum stays below the threshold every support is
    certified and m is returned.  With ``margin=0`` the comparison is a plain
    floating-point ``>=`` against 0.5.
    """
    if margin < 0:
        raise ValueError("margin must be non-negative")
    threshold = THRESHOLD - margin
    if threshold <= 0.0:
        return 0
    if asf_max(sv, sv.m) < threshold:
        return sv.m
    # prefix sums are monotone (rho >= 0, fsum is correctly rounded): bisect
    lo, hi = 0, sv.m  # prefix(lo) < threshold <= prefix(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if asf_max(sv, mid) >= threshold:
            hi = mid
        else:
            lo = mid
    return hi - 1


def prefix_sums(sv: ScoreVector, count: int | None = None) -> list[float]:
    """Running sums of the sorted scores, first ``count`` of them (all by default)."""
    count = sv.m if count is None else min(count, sv.m)
    return [asf_max(sv, k) for k in range(1, count + 1)]
