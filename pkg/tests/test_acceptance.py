"""Acceptance criteria 1-11. Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or as a script.
"""

import random
import time
from math import comb

import numpy as np
import pytest

from approxcover import (IntSet, covering_number, dilate, hfold, is_approximate_group,
                         translate)
from approxcover.covering import DEFAULT_BUDGET
from approxcover.verify import Bounds, normal_form_family, run_suite

from oracles import covers

LINES = []


@pytest.fixture
def emit(capsys):
    def _emit(num, ok, text, elapsed, limit):
        status = "PASS" if ok else "FAIL"
        line = f"[criterion {num:>2}] {status}  {text}  ({elapsed:.2f} s, limit {limit} s)"
        LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
    return _emit


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile (or load from cache) every jitted kernel before anything is timed
    elapsed = _clock()
    hfold(IntSet([0, 1, 100]), 64)
    covering_number(IntSet([0, 1, 3]), 2)
    covering_number(IntSet([0, 1, 3]), 2, lex=False)
    LINES.append(f"kernel warm-up {elapsed():.2f} s")


def _clock():
    t0 = time.perf_counter()
    return lambda: time.perf_counter() - t0


def test_c01_ap_closed_form(emit):
    elapsed = _clock()
    bad = []
    for m in range(2, 9):
        for r in range(2, 7):
            got = covering_number(IntSet(range(m)), r).covering_number
            if got != -(-(r * m - r + 1) // m):
                bad.append((m, r, got))
    t = elapsed()
    ok = not bad and t < 10
    emit(1, ok, f"AP closed form, m 2..8 x r 2..6: {len(bad)} mismatches", t, 10)
    assert ok, bad


def test_c02_two_element_sets(emit):
    elapsed = _clock()
    bad = []
    for k in (1, 3, 10):
        for r in range(2, 13):
            got = covering_number(IntSet([0, k]), r).covering_number
            if got != -(-(r + 1) // 2):
                bad.append((k, r, got))
    t = elapsed()
    ok = not bad and t < 5
    emit(2, ok, f"pairs {{0,k}}, k in 1,3,10, r 2..12: {len(bad)} mismatches", t, 5)
    assert ok, bad


def test_c03_half_bound_and_equality_cases(emit):
    elapsed = _clock()
    s = run_suite("half-bound", Bounds(max_elem=10, max_size=4, r=(2, 5)))
    t = elapsed()
    eq = {(len(a.split(",")), r) for a, r in s.notes.get("equality_cases", [])}
    # pairs at every r, APs at r = 2 (sizes 3, 4), size-3 APs at r = 4
    expected = {(2, r) for r in range(2, 6)} | {(3, 2), (4, 2), (3, 4)}
    ok = s.passed and not s.budget_exceeded and eq == expected and t < 600
    emit(3, ok, f"half bound over {s.instances_checked} sets: {len(s.failures)} counterexamples, "
                f"equality (size, r) classes {sorted(eq)}", t, 600)
    assert ok, s.failures[:5]


def test_c04_growth_law(emit):
    elapsed = _clock()
    s = run_suite("growth-law", Bounds(max_elem=10, max_size=4, h=(1, 6)))
    t = elapsed()
    ok = s.passed and t < 60
    emit(4, ok, f"growth law over {s.instances_checked} sets, h 1..6: "
                f"{len(s.failures)} counterexamples", t, 60)
    assert ok, s.failures[:5]


def test_c05_spread_sets(emit):
    elapsed = _clock()
    bad = []
    for m in range(2, 5):
        for r in range(2, 5):
            a = [1]
            for _ in range(m - 1):
                a.append(r * a[-1] + 1)
            A = IntSet(a)
            size = len(hfold(A, r))
            want = comb(m + r - 1, r)
            got = covering_number(A, r).covering_number
            if size != want or got < -(-want // m):
                bad.append((m, r, size, got))
    t = elapsed()
    ok = not bad and t < 10
    emit(5, ok, f"spread sets m 2..4, r 2..4: {len(bad)} mismatches", t, 10)
    assert ok, bad


def test_c06_eventual_ap(emit):
    elapsed = _clock()
    s = run_suite("eventual-ap", Bounds(max_elem=12, max_size=5))
    t = elapsed()
    ok = s.passed and t < 120
    emit(6, ok, f"eventual AP over {s.instances_checked} sets: "
                f"{len(s.failures)} counterexamples", t, 120)
    assert ok, s.failures[:5]


def test_c07_asymptotic_covering_tail(emit):
    elapsed = _clock()
    s = run_suite("asymptotic-covering", Bounds(max_elem=8, max_size=4, r=(2, 3)))
    t = elapsed()
    ok = s.passed and not s.budget_exceeded and t < 900
    emit(7, ok, f"tail agreement over {s.instances_checked} sets, r 2..3, tail >= 6: "
                f"{len(s.failures)} counterexamples, {len(s.budget_exceeded)} over budget", t, 900)
    assert ok, s.failures[:5]


def test_c08_asymptotic_lower_bound(emit):
    elapsed = _clock()
    s = run_suite("asymptotic-lower-bound", Bounds(max_elem=8, max_size=4, r=(2, 4), h=(1, 8)))
    t = elapsed()
    ok = s.passed and not s.budget_exceeded
    emit(8, ok, f"C_r(hA) >= r for h(m-1) > r-2 over {s.instances_checked} sets, r 2..4, "
                f"h 1..8: {len(s.failures)} counterexamples", t, "-")
    assert ok, s.failures[:5]


def test_c09_affine_invariance(emit):
    elapsed = _clock()
    rng = random.Random(2024)
    family = list(normal_form_family(10, 4))
    bad = []
    for _ in range(500):
        A = rng.choice(family)
        d, t0, r = rng.randint(1, 7), rng.randint(-50, 50), rng.choice((2, 3))
        C = translate(dilate(A, d), t0)
        if covering_number(C, r).covering_number != covering_number(A, r).covering_number:
            bad.append((A, d, t0, r))
    t = elapsed()
    ok = not bad and t < 60
    emit(9, ok, f"500 random (A, d, t) triples: {len(bad)} mismatches", t, 60)
    assert ok, bad[:5]


def test_c10_certificate_soundness(emit):
    elapsed = _clock()
    rng = random.Random(10)
    bad = []
    for _ in range(1000):
        # desk-scale sets, moved by a random affine map
        base = rng.sample(range(0, 13), rng.randint(1, 5))
        d, shift = rng.choice((-3, -2, -1, 1, 2, 3, 5)), rng.randint(-40, 40)
        A = IntSet([d * x + shift for x in base])
        r = rng.randint(1, 3)
        res = covering_number(A, r)
        X = res.witness
        ok1 = len(X) == res.covering_number and is_approximate_group(A, r, X)
        if not (ok1 and covers(A.tolist(), r, X.tolist())):
            bad.append((A, r))
    t = elapsed()
    ok = not bad
    emit(10, ok, f"1000 fuzzed witnesses checked twice: {len(bad)} failures", t, "-")
    assert ok, bad[:5]


def test_c11_performance_smoke(emit):
    rng = np.random.default_rng(11)
    inner = rng.choice(np.arange(1, 100), 8, replace=False)
    A = IntSet(np.concatenate([[0, 100], inner]))
    elapsed = _clock()
    H = hfold(A, 10_000)
    t_fold = elapsed()
    fold_ok = t_fold < 1 and H.min == 0 and H.max == 1_000_000
    # large universes: |rA| just under 5,000
    worst, sizes = 0, []
    elapsed = _clock()
    for base, h, r in (((0, 7, 8), 208, 3), ((0, 1, 3), 416, 4), ((0, 2, 3), 555, 3),
                       ((0, 3, 4, 9, 10), 249, 2)):
        B = hfold(IntSet(base), h)
        res = covering_number(B, r)
        sizes.append(len(hfold(B, r)))
        worst = max(worst, res.nodes_explored)
        assert is_approximate_group(B, r, res.witness)
    t_cover = elapsed()
    cover_ok = max(sizes) <= 5000 and worst <= DEFAULT_BUDGET
    ok = fold_ok and cover_ok
    emit(11, ok, f"covers of |rA| = {sizes} used at most {worst} nodes (budget "
                 f"{DEFAULT_BUDGET}) in {t_cover:.2f} s; hfold h=10000", t_fold, 1)
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
