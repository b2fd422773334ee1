"""Independent brute-force references used only by the tests.

None of these share code paths with the package under test beyond numpy.
"""

import itertools
import math

import numpy as np


def naive_gram(A):
    A = np.asarray(A, dtype=float)
    n, m = A.shape
    C = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            s = 0.0
            for k in range(n):
                s += A[k, i] * A[k, j]
            C[i, j] = s
    return C


def naive_scores(C):
    m = len(C)
    nu = []
    for i in range(m):
        nu.append(max(abs(C[i][j]) for j in range(m) if j != i) / C[i][i])
    rho = [v / (v + 1.0) for v in nu]
    return nu, rho


def brute_asf_max(rho, s):
    return max(math.fsum(rho[i] for i in S) for S in itertools.combinations(range(len(rho)), s))


def _basic_solutions(A, b, tol):
    """Every basic solution of A x = b, x >= 0 found by trying each column subset."""
    r, k = A.shape
    out = []
    for size in range(0, min(r, k) + 1):
        for cols in itertools.combinations(range(k), size):
            x = np.zeros(k)
            if size:
                B = A[:, cols]
                if np.linalg.matrix_rank(B) < size:
                    continue
                xb = np.linalg.lstsq(B, b, rcond=None)[0]
                x[list(cols)] = xb
            if np.abs(A @ x - b).max(initial=0.0) > tol:
                continue
            if x.min(initial=0.0) < -tol:
                continue
            out.append(x)
    return out


def brute_force_lp(c, A, b, tol=1e-9):
    """(status, value) of min c.x, A x = b, x >= 0 by vertex and extreme-ray enumeration."""
    c, A, b = (np.asarray(v, dtype=float) for v in (c, A, b))
    verts = _basic_solutions(A, b, tol)
    if not verts:
        return "infeasible", None
    r, k = A.shape
    # recession cone {d >= 0, A d = 0} sliced by sum d = 1: its vertices are the extreme rays
    rays = _basic_solutions(np.vstack([A, np.ones(k)]), np.append(np.zeros(r), 1.0), tol)
    if any(c @ d < -tol for d in rays):
        return "unbounded", None
    return "optimal", min(float(c @ x) for x in verts)


def circuits(A, tol=1e-10):
    """Minimal-support kernel vectors of A, each scaled to unit l1 norm (one sign)."""
    A = np.asarray(A, dtype=float)
    n, m = A.shape
    found = []
    for size in range(1, min(n + 1, m) + 1):
        for T in itertools.combinations(range(m), size):
            sub = A[:, T]
            _, sv, vt = np.linalg.svd(sub)
            rank = int((sv > tol * max(1.0, sv.max(initial=0.0))).sum())
            if size - rank != 1:
                continue
            u = vt[-1]
            if np.abs(u).min() <= tol:
                continue  # not minimal: a smaller support already carries it
            v = np.zeros(m)
            v[list(T)] = u / np.abs(u).sum()
            found.append(v)
    return found


def circuit_margin(A, S):
    """max over ker A, ||v||_1 <= 1 of sum_S |v_i|, via circuit enumeration."""
    return max((float(np.abs(v[list(S)]).sum()) for v in circuits(A)), default=0.0)


def circuit_sparsity_level(A, s_max, band=1e-9):
    """Exact level from circuits: largest s where every circuit's top-s mass < 1/2."""
    cs = circuits(A)
    for s in range(1, s_max + 1):
        worst = max((np.sort(np.abs(v))[::-1][:s].sum() for v in cs), default=0.0)
        if not worst < 0.5 - band:
            return s - 1
    return s_max
