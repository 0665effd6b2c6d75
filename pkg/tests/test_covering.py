import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from approxcover.covering import (ap_covering_number, build_instance, covering_number,
                                  is_approximate_group, lower_bound)
from approxcover.errors import BudgetExceeded, EmptySetError, InvalidFold, InvalidSize
from approxcover.intset import IntSet, dilate, translate
from approxcover.sumsets import detect_ap, hfold
from approxcover.verify import normal_form_family

from oracles import covers, dfs_cover_size, naive_cover

small_sets = st.sets(st.integers(-12, 12), min_size=1, max_size=5).map(IntSet)


def S(*xs):
    return IntSet(xs)


@pytest.mark.parametrize("A,r,want,witness", [
    ((0, 1), 3, 2, (0, 2)),
    ((0, 1, 2), 4, 3, None),
    # lexicographically smallest optimal witness; {0,1,3} is another optimum
    ((0, 1, 3), 2, 3, (-3, 1, 3)),
])
def test_cover_examples(A, r, want, witness):
    A = IntSet(A)
    res = covering_number(A, r)
    assert res.covering_number == want and res.optimal
    assert len(res.witness) == want
    assert is_approximate_group(A, r, res.witness)
    if witness is not None:
        assert res.witness == IntSet(witness)


def test_other_optimum_is_also_a_certificate():
    assert is_approximate_group(S(0, 1, 3), 2, S(0, 1, 3))


def test_degenerate_inputs_skip_the_solver():
    res = covering_number(S(4, 9), 1)
    assert (res.covering_number, res.witness, res.nodes_explored) == (1, S(0), 0)
    res = covering_number(S(5), 3)
    assert (res.covering_number, res.witness) == (1, S(10))
    assert is_approximate_group(S(5), 3, res.witness)
    with pytest.raises(InvalidFold):
        covering_number(S(0, 1), 0)
    with pytest.raises(EmptySetError):
        covering_number(IntSet(), 2)


@pytest.mark.parametrize("A,r,X,want", [
    ((0, 1), 2, (0, 2), True),
    ((0, 1, 3), 2, (0, 3), False),
    ((0, 1, 3), 1, (0,), True),
    ((-4, 9, 11), 1, (0,), True),
])
def test_certificate_examples(A, r, X, want):
    assert is_approximate_group(IntSet(A), r, IntSet(X)) is want


@pytest.mark.parametrize("A,r,want", [
    ((0, 1, 2, 3), 3, 3),
    ((0, 1, 3), 5, 5),
    ((0, 1), 2, 2),
])
def test_lower_bound_examples(A, r, want):
    assert lower_bound(IntSet(A), r) == want


@pytest.mark.parametrize("m,r,want", [(2, 7, 4), (3, 4, 3), (100, 2, 2)])
def test_ap_formula_examples(m, r, want):
    assert ap_covering_number(m, r) == want


def test_ap_formula_rejects_small_m():
    with pytest.raises(InvalidSize):
        ap_covering_number(1, 3)


def test_instance_shape():
    A = S(0, 1, 3)
    inst = build_instance(A, 2)
    assert inst.universe == hfold(A, 2)
    cands = sorted({u - a for u in inst.universe for a in A})
    assert inst.candidates.tolist() == cands
    for e, u in enumerate(inst.universe):
        offs = inst.candidates[inst.elem_cands[e]]
        assert sorted(offs.tolist()) == sorted(u - a for a in A)


def test_dominated_candidates_are_covered_by_their_dominator():
    inst = build_instance(S(0, 7, 8), 3)
    for j, i in enumerate(inst.dominator):
        if i >= 0:
            assert i != j
            assert not np.any(inst.masks[j] & ~inst.masks[i])


def _family_cases(max_elem, max_size, rs):
    return [(A, r) for A in normal_form_family(max_elem, max_size) for r in rs]


@pytest.mark.parametrize("A,r", _family_cases(7, 4, (2, 3)) + _family_cases(5, 4, (4,)),
                         ids=lambda v: str(v))
def test_matches_naive_oracle(A, r):
    res = covering_number(A, r)
    k, X = naive_cover(A.tolist(), r)
    assert res.covering_number == k
    assert res.witness.tolist() == X


def test_optimal_on_full_family():
    # every normal-form set with max <= 10, size <= 4, r <= 4
    for A in normal_form_family(10, 4):
        for r in (2, 3, 4):
            res = covering_number(A, r, lex=False)
            assert res.covering_number == dfs_cover_size(A.tolist(), r), (A, r)
            assert len(res.witness) == res.covering_number
            assert covers(A.tolist(), r, res.witness.tolist())


@pytest.mark.parametrize("A,r", [((0, 1, 3), 2), ((0, 2, 7), 3), ((0, 1, 5, 7), 3)])
def test_lex_flag_only_changes_the_witness(A, r):
    A = IntSet(A)
    full, fast = covering_number(A, r), covering_number(A, r, lex=False)
    assert fast.covering_number == full.covering_number
    assert covers(A.tolist(), r, fast.witness.tolist())
    assert full.witness.tolist() <= fast.witness.tolist()


@settings(max_examples=30)
@given(st.sets(st.integers(-4, 4), min_size=1, max_size=4).map(IntSet), st.integers(1, 3))
def test_random_sets_against_oracle(A, r):
    res = covering_number(A, r)
    assert covers(A.tolist(), r, res.witness.tolist())
    k, _ = naive_cover(A.tolist(), r, max_k=res.covering_number)
    assert k == res.covering_number
    assert lower_bound(A, r) <= res.covering_number if len(A) > 1 else True


@given(small_sets, st.integers(1, 5))
def test_ap_closed_form(A, r):
    if len(A) > 1 and detect_ap(A) is not None:
        assert covering_number(A, r).covering_number == ap_covering_number(len(A), r) \
            == lower_bound(A, r)


@given(st.sets(st.integers(0, 9), min_size=2, max_size=4).map(IntSet), st.integers(2, 3),
       st.integers(1, 7), st.integers(-50, 50))
def test_affine_invariance(A, r, d, t):
    C = translate(dilate(A, d), t)
    assert covering_number(C, r).covering_number == covering_number(A, r).covering_number
    C = translate(dilate(A, -d), t)
    assert covering_number(C, r).covering_number == covering_number(A, r).covering_number


@given(st.sets(st.integers(0, 12), min_size=3, max_size=5).map(IntSet))
def test_non_ap_needs_three_translates_at_r2(A):
    if detect_ap(A) is None:
        assert covering_number(A, 2).covering_number >= 3


def test_budget_guard():
    A = S(0, 7, 8)
    H = hfold(A, 9)
    with pytest.raises(BudgetExceeded) as info:
        covering_number(H, 3, budget=50)
    assert info.value.nodes > 50 and info.value.budget == 50


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("APPROXCOVER_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        covering_number(hfold(S(0, 7, 8), 9), 3)
