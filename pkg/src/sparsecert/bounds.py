"""Coherence and restricted-isometry style sparsity bounds, plus the combined report.

Real-valued bounds are turned into integers with exact rational arithmetic on
the float inputs, so a value sitting exactly on an integer is never rounded up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import asf
from .matrix import as_matrix, gram

UNIT_NORM_TOL = 1e-9
# sharp restricted isometry threshold for l1 recovery
RIC_THRESHOLD = Fraction(1, 3)


def _check_gram(C) -> np.ndarray:
    C = np.asarray(C, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise asf.ScoreError(f"Gram matrix must be square, got shape {C.shape}")
    if C.shape[0] < 2:
        raise asf.ScoreError("need at least two columns")
    d = np.diagonal(C)
    zero = np.flatnonzero(d <= 0.0)
    if zero.size:
        raise asf.ScoreError(f"column {int(zero[0])} has zero norm")
    return C


def coherence(C) -> float:
    """max_{i != j} |c_ij| / sqrt(c_ii c_jj); invariant to column rescaling."""
    C = _check_gram(C)
    d = np.sqrt(np.diagonal(C))
    N = np.abs(C) / np.multiply.outer(d, d)
    np.fill_diagonal(N, 0.0)
    # Cauchy-Schwarz caps it at 1; rounding on parallel columns can overshoot
    return min(float(N.max()), 1.0)


def coherence_bound(mu: float, m: Optional[int] = None) -> Optional[int]:
    """Largest integer s with s < (1 + 1/mu) / 2.

    ``mu == 0`` (mutually orthogonal columns) has no finite bound; ``m`` is
    returned in that case, or None when ``m`` is not given.  With ``m`` the
    result is also capped at m.
    """
    if not 0.0 <= mu <= 1.0 or math.isnan(mu):
        raise ValueError(f"coherence must lie in [0, 1], got {mu}")
    if mu == 0.0:
        return m
    x = (1 + 1 / Fraction(mu)) / 2
    bound = math.ceil(x) - 1
    return bound if m is None else min(bound, m)


def min_diag_ratio(C) -> float:
    """min over ordered pairs i != j of c_ii / c_jj, i.e. smallest over largest diagonal."""
    d = np.diagonal(_check_gram(C))
    return float(Fraction(float(d.min())) / Fraction(float(d.max())))


def _ric_inputs(C) -> tuple[Fraction, float]:
    C = _check_gram(C)
    d = np.diagonal(C)
    r = Fraction(float(d.min())) / Fraction(float(d.max()))
    max_nu = float(asf.scores(C).nu.max())
    return r, max_nu


def ric_based_bound(C) -> tuple[int, bool]:
    """floor((r - 1/2) / (2 max nu)) clamped to [0, m], and whether it is non-vacuous.

    r is the smallest diagonal ratio.  Orthogonal columns (max nu = 0) give (m, True).
    """
    C = _check_gram(C)
    m = C.shape[0]
    r, max_nu = _ric_inputs(C)
    if max_nu == 0.0:
        return m, True
    t = RIC_THRESHOLD
    floor_ratio = (1 - t) / (1 + t)  # = 1/2
    value = (r - floor_ratio) / (2 * Fraction(max_nu))
    valid = r > floor_ratio
    return min(max(math.floor(value), 0), m), valid


def ric_constant_estimate(C, s: int) -> Optional[float]:
    """Upper estimate (1 - q) / (1 + q) of the order-s RIC, q = r - 2 (s - 1) max nu.

    Returns None when q <= 0, where the estimate does not apply.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    r, max_nu = _ric_inputs(C)
    q = r - 2 * (s - 1) * Fraction(max_nu)
    if q <= 0:
        return None
    return float((1 - q) / (1 + q))


def sigma_threshold_sparsity(C, t: float) -> float:
    """Real-valued s below which the RIC estimate guarantees sigma_s < t."""
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    r, max_nu = _ric_inputs(C)
    if max_nu == 0.0:
        return math.inf
    t = Fraction(t)
    return float((r - (1 - t) / (1 + t)) / (2 * Fraction(max_nu)) + 1)


@dataclass(frozen=True)
class BoundsReport:
    m: int
    n: int
    asf_bound: int
    coherence: float
    coherence_bound: int
    coherence_applies_as_given: bool
    ric_bound: int
    ric_bound_valid: bool
    min_diag_ratio: float
    max_nu: float
    total_score: float
    scores: asf.ScoreVector = field(repr=False, compare=False)

    FIELDS = (
        "m", "n", "asf_bound", "coherence", "coherence_bound",
        "coherence_applies_as_given", "ric_bound", "ric_bound_valid",
        "min_diag_ratio", "max_nu", "total_score",
    )

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}


def analyze(A, margin: float = 0.0) -> BoundsReport:
    """All sparsity lower bounds for the sensing matrix ``A`` from one Gram computation."""
    A = as_matrix(A)
    n, m = A.shape
    C = gram(A)
    sv = asf.scores(C)
    mu = coherence(C)
    ric, ric_valid = ric_based_bound(C)
    unit = bool(np.all(np.abs(np.sqrt(np.diagonal(C)) - 1.0) <= UNIT_NORM_TOL))
    return BoundsReport(
        m=m,
        n=n,
        asf_bound=asf.sparsity_lower_bound(sv, margin),
        coherence=mu,
        coherence_bound=coherence_bound(mu, m),
        coherence_applies_as_given=unit,
        ric_bound=ric,
        ric_bound_valid=ric_valid,
        min_diag_ratio=min_diag_ratio(C),
        max_nu=float(sv.nu.max()),
        total_score=asf.asf_max(sv, m),
        scores=sv,
    )
