from math import comb, gcd

import pytest

from approxcover.intset import IntSet
from approxcover.verify import (SUITES, Bounds, get_suite, normal_form_family, run_suite,
                                spread_set, tail_window)

from oracles import naive_hfold


def test_family_is_ordered_and_complete():
    fam = [A.tolist() for A in normal_form_family(6, 4)]
    assert fam[:4] == [[0, 1], [0, 1, 2], [0, 1, 3], [0, 2, 3]]
    keys = [(A[-1], len(A), A) for A in fam]
    assert keys == sorted(keys)
    brute = []
    for b in range(1, 7):
        for mask in range(1 << (b - 1)):
            inner = [i for i in range(1, b) if mask >> (i - 1) & 1]
            A = [0, *inner, b]
            g = 0
            for x in A:
                g = gcd(g, x)
            if g == 1 and len(A) <= 4:
                brute.append(A)
    assert sorted(fam) == sorted(brute) and len(set(map(tuple, fam))) == len(fam)


def test_spread_sets_have_distinct_sums():
    for m in range(2, 5):
        for r in range(2, 5):
            A = spread_set(m, r)
            assert len(naive_hfold(A.tolist(), r)) == comb(m + r - 1, r)
    assert spread_set(3, 2) == IntSet([1, 3, 7])


def test_suite_lookup():
    assert get_suite("theorem-2.4").name == "half-bound"
    assert get_suite("corollary-1.3") is get_suite("asymptotic-covering")
    with pytest.raises(KeyError):
        get_suite("nope")


def test_tail_window_grows_with_max():
    assert tail_window(IntSet([0, 1, 3])) == (1, 15)
    assert tail_window(IntSet([0, 7, 8])) == (1, 30)


@pytest.mark.parametrize("suite", [s.name for s in SUITES])
def test_every_suite_passes_on_small_bounds(suite):
    bounds = Bounds(max_elem=5, max_size=3, r=(2, 3), h=(1, 4), samples=2)
    summary = run_suite(suite, bounds)
    assert summary.instances_checked > 0
    assert summary.passed, summary.failures
    assert summary.to_dict()["failures"] == []


def test_skip_limit_and_jobs():
    bounds = Bounds(max_elem=6, max_size=3, r=(2, 3))
    full = run_suite("covering-lower-bound", bounds)
    part = run_suite("covering-lower-bound", bounds, skip=3, limit=4, jobs=2)
    assert part.instances_checked == 4 and full.instances_checked > 7


def test_budget_exhaustion_is_recorded_not_fatal():
    summary = run_suite("half-bound", Bounds(max_elem=6, max_size=4, r=(3, 4), budget=3))
    assert summary.budget_exceeded and summary.passed
    assert all("nodes" in rec for rec in summary.budget_exceeded)
