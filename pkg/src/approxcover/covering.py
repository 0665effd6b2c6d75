"""Exact r-covering numbers: the fewest translates of A whose union contains rA."""

from __future__ import annotations

import operator
import os
from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from .errors import BudgetExceeded, InvalidSize
from .intset import IntSet
from .sumsets import _check_fold, detect_ap, hfold

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    return int(os.environ.get("APPROXCOVER_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class CoverInstance:
    """Set-cover view of ``rA``: universe elements vs. translates of ``A``.

    ``masks[i]`` is the packed bitset (over universe indices) covered by the
    translate ``A + candidates[i]``; ``elem_cands[e]`` lists the |A|
    candidates covering universe element ``e``. ``dominator[j]`` is the
    largest index whose translate covers everything ``j`` covers (-1 if
    none), so a search over candidates ``>= s`` may drop ``j`` whenever
    ``dominator[j] >= s``.
    """

    base: IntSet
    r: int
    universe: IntSet
    candidates: np.ndarray
    masks: np.ndarray
    elem_cands: np.ndarray
    dominator: np.ndarray

    def useful(self, start: int = 0) -> np.ndarray:
        """Candidates ``>= start`` not dominated by another candidate ``>= start``."""
        ok = self.dominator < start
        ok[:start] = False
        return ok

    @property
    def n_words(self) -> int:
        return self.masks.shape[1]

    def full_mask(self) -> np.ndarray:
        return _pack_indices(np.arange(len(self.universe)), self.n_words)


@dataclass(frozen=True)
class CoverResult:
    covering_number: int
    witness: IntSet
    nodes_explored: int
    optimal: bool = True


def _pack_indices(idx: np.ndarray, n_words: int) -> np.ndarray:
    words = np.zeros(n_words, dtype=np.uint64)
    np.bitwise_or.at(words, idx >> 6, np.left_shift(np.uint64(1), (idx & 63).astype(np.uint64)))
    return words


def build_instance(A: IntSet, r: int) -> CoverInstance:
    """Universe ``rA`` and every translate offset that covers part of it."""
    U = hfold(A, r)
    u, a = U.elements, A.elements
    offsets = np.subtract.outer(u, a)
    lo, hi = int(u[0] - a[-1]), int(u[-1] - a[0])
    if hi - lo < 4 * offsets.size + 64:
        # dense lookup table instead of a sort
        present = np.zeros(hi - lo + 1, dtype=np.bool_)
        present[(offsets - lo).ravel()] = True
        slot = np.cumsum(present, dtype=np.int64) - 1
        cands = np.flatnonzero(present).astype(np.int64) + lo
        inv = slot[offsets - lo]
    else:
        cands, inv = np.unique(offsets, return_inverse=True)
        inv = inv.reshape(offsets.shape).astype(np.int64)
    masks = kernels.build_masks(inv, len(cands))
    # first universe element covered by each candidate
    first = np.full(len(cands), len(u), dtype=np.int64)
    np.minimum.at(first, inv.ravel(), np.repeat(np.arange(len(u), dtype=np.int64), len(a)))
    dom = kernels.dominators(masks, inv, first)
    return CoverInstance(A, r, U, cands, masks, inv, dom)


def lower_bound(A: IntSet, r: int) -> int:
    """Size-counting lower bound on the covering number.

    ``ceil((rm - r + 1)/m)`` always, and at least ``r`` when ``A`` is not an
    arithmetic progression.
    """
    r = _check_fold(r)
    m = len(A)
    if m < 2:
        A.min
        return 1
    bound = -(-(r * m - r + 1) // m)
    if detect_ap(A) is None:
        bound = max(bound, r)
    return bound


def ap_covering_number(m: int, r: int) -> int:
    """Covering number of any arithmetic progression with ``m`` terms."""
    m = operator.index(m)
    r = _check_fold(r)
    if m < 2:
        raise InvalidSize(f"progression size must be at least 2, got {m}")
    return -(-(r * m - r + 1) // m)


def is_approximate_group(A: IntSet, r: int, X: IntSet) -> bool:
    """Whether ``rA`` is contained in ``A + X`` (checked by direct membership)."""
    r = _check_fold(r)
    X.min
    target = hfold(A, r).elements
    cover = np.unique(np.add.outer(X.elements, A.elements))
    return bool(np.isin(target, cover, assume_unique=True).all())


def _greedy(inst: CoverInstance) -> list[int]:
    unc = inst.full_mask()
    chosen = []
    while np.any(unc):
        cov = kernels.coverage_counts(inst.masks, unc)
        c = int(np.argmax(cov))
        chosen.append(c)
        unc = unc & ~inst.masks[c]
    return chosen


class _Search:
    def __init__(self, inst: CoverInstance, budget: int):
        self.inst = inst
        self.budget = budget
        self.nodes = 0

    def solve(self, uncovered, allowed, k) -> list[int] | None:
        """Indices of some cover of ``uncovered`` with at most ``k`` rows, or None."""
        status, nodes, chosen = kernels.cover_search(
            self.inst.masks, self.inst.elem_cands, uncovered, allowed, k,
            self.budget - self.nodes)
        self.nodes += int(nodes)
        if status < 0:
            raise BudgetExceeded(self.nodes, self.budget)
        if status == 0:
            return None
        return sorted(int(c) for c in chosen if c >= 0)


def _first_feasible(search: _Search, unc, cands: list[int], left: int):
    """First ``c`` in ``cands`` whose remainder is coverable by ``left`` larger offsets.

    Blocks of candidates are refuted together: if the residual minus the
    union of the block's rows has no cover from offsets above the block's
    first member, no member of the block works either. Block size doubles
    after each refutation and halves when a block is inconclusive.
    """
    inst = search.inst
    i, size = 0, 1
    while i < len(cands):
        block = cands[i:i + size]
        if len(block) == 1:
            c = block[0]
            rest = unc & ~inst.masks[c]
        else:
            rest = unc & ~np.bitwise_or.reduce(inst.masks[block], axis=0)
        sol = search.solve(rest, inst.useful(block[0] + 1), left)
        if sol is None:
            i += len(block)
            size *= 2
        elif len(block) == 1:
            return c, sol
        else:
            size = len(block) // 2
    return None, None


def _lex_smallest(search: _Search, cover: list[int]) -> list[int]:
    """Lexicographically smallest cover of the same size as ``cover``.

    Offsets are fixed left to right. At each position the smallest offset
    of the best completion found so far is always acceptable, so only
    smaller offsets need a feasibility proof.
    """
    inst = search.inst
    k = len(cover)
    m = len(inst.base)
    a_min = inst.base.min
    u = inst.universe.elements
    unc = inst.full_mask()
    chosen: list[int] = []
    known = sorted(cover)
    prev = -1
    for pos in range(k):
        left = k - pos - 1
        limit = known[0]
        total = int(np.bitwise_count(unc).sum())
        first_unc = int(np.flatnonzero(np.unpackbits(unc.view(np.uint8), bitorder="little"))[0])
        # the smallest uncovered element must be covered by an offset >= this one
        hi = int(np.searchsorted(inst.candidates, u[first_unc] - a_min, side="right"))
        hi = min(hi, limit)
        cov = kernels.coverage_counts(inst.masks[prev + 1:hi], unc)
        ok = (cov > 0) & (total - cov <= left * m)
        cands = [prev + 1 + int(j) for j in np.flatnonzero(ok)]
        pick = None
        if left == 0:
            pick = next((c for c in cands if not np.any(unc & ~inst.masks[c])), None)
        elif cands:
            pick, sol = _first_feasible(search, unc, cands, left)
            if pick is not None:
                known = [pick] + sol
        if pick is None:
            pick = limit
        chosen.append(pick)
        known = known[1:] if known[0] == pick else known
        unc = unc & ~inst.masks[pick]
        prev = pick
    return chosen


def covering_number(A: IntSet, r: int, budget: int | None = None,
                    lex: bool = True) -> CoverResult:
    """Exact ``C_r(A)`` with the lexicographically smallest optimal witness.

    With ``lex=False`` the witness is whatever optimal cover the search found
    first. That skips the left-to-right reconstruction, which on some
    instances costs far more than the optimality proof itself.

    Raises BudgetExceeded once more than ``budget`` search nodes are used.
    """
    r = _check_fold(r)
    a_min = A.min
    if r == 1 or len(A) == 1:
        return CoverResult(1, IntSet([(r - 1) * a_min]), 0)
    if budget is None:
        budget = default_budget()
    inst = build_instance(A, r)
    search = _Search(inst, budget)
    m = len(A)
    lb = max(lower_bound(A, r), -(-len(inst.universe) // m))
    full = inst.full_mask()
    everything = inst.useful(0)
    cover = _greedy(inst)
    for k in range(lb, len(cover)):
        sol = search.solve(full, everything, k)
        if sol is not None:
            cover = sol
            break
    if lex:
        cover = _lex_smallest(search, cover)
    witness = inst.candidates[sorted(cover)]
    return CoverResult(len(cover), IntSet._wrap(witness.astype(np.int64)), search.nodes)
