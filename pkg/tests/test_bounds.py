import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsecert import asf
from sparsecert.bounds import (
    analyze,
    coherence,
    coherence_bound,
    min_diag_ratio,
    ric_based_bound,
    ric_constant_estimate,
    sigma_threshold_sparsity,
)
from sparsecert.matrix import GeneratorSpec, generate, gram, normalize_columns

H = math.sqrt(2) / 2


def test_coherence_examples(example2, a2):
    assert coherence(np.eye(3)) == 0.0
    assert coherence(gram(example2)) == pytest.approx(H, abs=1e-15)
    assert coherence(gram(a2)) == pytest.approx(2 / math.sqrt(8), abs=1e-15)


@pytest.mark.parametrize("mu, expected", [
    (0.70711, 1),
    (H, 1),
    (1.0, 0),   # (1 + 1) / 2 = 1 exactly, strict inequality
    (0.2, 2),   # (1 + 5) / 2 = 3 exactly
    (1 / 3, 2),  # float 1/3 is just below 1/3, so (1 + 1/mu)/2 sits just above 2
    (0.1, 5),
])
def test_coherence_bound(mu, expected):
    assert coherence_bound(mu) == expected


def test_coherence_bound_edges():
    assert coherence_bound(0.0, m=7) == 7
    assert coherence_bound(0.0) is None
    assert coherence_bound(1e-6, m=7) == 7
    for bad in (-0.1, 1.5, float("nan")):
        with pytest.raises(ValueError):
            coherence_bound(bad)


def test_ric_bound_examples(example2, a2):
    assert ric_based_bound(gram(example2)) == (0, True)
    assert ric_based_bound(np.eye(4)) == (4, True)
    assert ric_based_bound(gram(a2)) == (0, False)


def test_ric_bound_unit_diagonal_reduces_to_quarter_over_mu():
    rng = np.random.default_rng(5)
    for _ in range(200):
        m = int(rng.integers(2, 7))
        mu = float(rng.uniform(0.001, 0.99))
        C = np.eye(m)
        C[0, 1] = C[1, 0] = mu
        expected = min(math.floor(1 / (4 * mu)), m)
        assert ric_based_bound(C)[0] == expected


def test_min_diag_ratio(a2):
    assert min_diag_ratio(gram(a2)) == 0.5
    assert min_diag_ratio(np.diag([2.0, 8.0, 4.0])) == 0.25


def test_ric_constant_estimate(example2):
    C = gram(example2)
    assert ric_constant_estimate(C, 1) == pytest.approx(0.0, abs=1e-15)
    assert ric_constant_estimate(C, 2) is None
    for s in (1, 2, 5):
        assert ric_constant_estimate(np.eye(3), s) == 0.0
    with pytest.raises(ValueError):
        ric_constant_estimate(C, 0)


def test_sigma_threshold_matches_ric_bound():
    # with t = 1/3 the strict form s < X + 1 contains the floor(X) reported bound
    A = normalize_columns(generate(GeneratorSpec("gaussian", 30, 40, seed=1)))
    C = gram(A)
    x_plus_one = sigma_threshold_sparsity(C, 1 / 3)
    bound, _ = ric_based_bound(C)
    assert bound < x_plus_one
    assert sigma_threshold_sparsity(np.eye(3), 0.5) == math.inf


def test_analyze_example2(example2):
    r = analyze(example2)
    assert r.asf_bound == 1
    assert r.coherence == pytest.approx(H, abs=1e-15)
    assert r.coherence_bound == 1
    assert r.ric_bound == 0 and r.ric_bound_valid
    assert r.coherence_applies_as_given
    assert (r.m, r.n) == (3, 2)


def test_analyze_identity():
    r = analyze(np.eye(5))
    assert (r.asf_bound, r.coherence, r.coherence_bound, r.ric_bound) == (5, 0.0, 5, 5)
    assert r.total_score == 0.0 and r.max_nu == 0.0


def test_analyze_a2(a2):
    r = analyze(a2)
    assert r.asf_bound == 0
    assert r.coherence_bound == 1
    assert not r.coherence_applies_as_given
    assert not r.ric_bound_valid


def test_report_fields_and_json(example2):
    d = analyze(example2).to_dict()
    assert list(d) == [
        "m", "n", "asf_bound", "coherence", "coherence_bound",
        "coherence_applies_as_given", "ric_bound", "ric_bound_valid",
        "min_diag_ratio", "max_nu", "total_score",
    ]
    json.dumps(d)


def test_analyze_rejects_zero_column():
    with pytest.raises(asf.ScoreError):
        analyze([[1.0, 0.0, 2.0], [1.0, 0.0, 1.0]])


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 8), st.integers(3, 30), st.integers(0, 2**32))
def test_dominance_over_coherence(n, m, seed):
    A = generate(GeneratorSpec("gaussian", n, m, seed=seed, normalize_columns=True))
    r = analyze(A)
    assert r.coherence_applies_as_given
    assert r.asf_bound >= r.coherence_bound
    assert 0 <= r.ric_bound <= m and 0 <= r.coherence_bound <= m
    assert 0 < r.min_diag_ratio <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.lists(st.floats(0.01, 100), min_size=6, max_size=6))
def test_coherence_scale_invariance(seed, scales):
    A = generate(GeneratorSpec("gaussian", 4, 6, seed=seed))
    assert coherence(gram(A * np.array(scales))) == pytest.approx(coherence(gram(A)), abs=1e-12)


def test_analyze_deterministic():
    A = generate(GeneratorSpec("gaussian", 10, 50, seed=2))
    assert analyze(A) == analyze(A)
