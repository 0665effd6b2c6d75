"""Normal forms, asymptotic progressions and asymptotic covering numbers."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .covering import covering_number
from .errors import InvalidSize, NoStabilization
from .intset import IntSet, dilate, translate
from .sumsets import _check_fold, affine_reduce, detect_ap, eventual_structure, hfold


@dataclass(frozen=True)
class NormalForm:
    """``original = scale * normalized + offset`` with ``min(normalized) = 0``."""

    normalized: IntSet
    offset: int
    scale: int

    def restore(self) -> IntSet:
        return translate(dilate(self.normalized, self.scale), self.offset)


def normalize(A: IntSet) -> NormalForm:
    B, a1, d = affine_reduce(A)
    return NormalForm(IntSet._wrap(B), a1, d)


def is_normal_form(A: IntSet) -> bool:
    _, a1, d = affine_reduce(A)
    return a1 == 0 and d == 1


def _require_pair(A: IntSet) -> None:
    if len(A) < 2:
        A.min
        raise InvalidSize("needs a set of at least two integers")


def endpoint_gap_condition(A: IntSet) -> bool:
    """True iff both extreme gaps of ``A`` equal the gcd of its differences."""
    _require_pair(A)
    B = normalize(A).normalized.elements
    return int(B[1]) == 1 and int(B[-1] - B[-2]) == 1


def default_window(b: int) -> tuple[int, int]:
    return 1, max(b + 4, 8)


@dataclass(frozen=True)
class AsymptoticReport:
    condition_holds: bool
    b: int
    theoretical_threshold: int
    empirical_threshold: int | None
    window_checked: tuple[int, int]
    window_consistent: bool

    def asymptotic_covering_number(self, r: int) -> int:
        r = _check_fold(r)
        if r == 1:
            return 1
        return r if self.condition_holds else r + 1


def is_asymptotic_ap(A: IntSet, window: tuple[int, int] | None = None) -> AsymptoticReport:
    """Decide whether ``hA`` is eventually an arithmetic progression.

    The decision is the endpoint-gap test. The window scan records where
    ``hA`` first becomes (and stays) a progression and whether the scan
    agrees with the test: condition sets must give ``hB = [0, h*b]`` from
    ``max(1, b - 2)`` on, the others must never give a progression.
    """
    _require_pair(A)
    B = normalize(A).normalized
    b = B.max
    cond = endpoint_gap_condition(A)
    lo, hi = window or default_window(b)
    lo = max(lo, 1)
    start = max(1, b - 2)
    is_ap = {}
    consistent = True
    for h in range(lo, hi + 1):
        hB = hfold(B, h)
        is_ap[h] = detect_ap(hB) is not None
        if cond and h >= start and not (hB.is_interval() and hB.max == h * b):
            consistent = False
        if not cond and is_ap[h]:
            consistent = False
    empirical = None
    for h in range(hi, lo - 1, -1):
        if not is_ap[h]:
            break
        empirical = h
    return AsymptoticReport(cond, b, start, empirical, (lo, hi), consistent)


def asymptotic_covering_number(A: IntSet, r: int) -> int:
    """``r`` when the endpoint-gap condition holds, else ``r + 1``."""
    r = _check_fold(r)
    _require_pair(A)
    if r == 1:
        return 1
    return r if endpoint_gap_condition(A) else r + 1


@dataclass(frozen=True)
class StabilizationReport:
    base: IntSet
    r: int
    rows: list[tuple[int, int]]
    expected: int
    tail_start: int | None
    tail_value: int
    tail_agrees: bool
    lower_bound_violations: list[int] = field(default_factory=list)

    @property
    def tail_length(self) -> int:
        if self.tail_start is None:
            return 0
        return self.rows[-1][0] - self.tail_start


def _cover_hfold(args):
    A, h, r, budget = args
    return covering_number(hfold(A, h), r, budget=budget, lex=False).covering_number


def covering_sequence(A: IntSet, r: int, hs, jobs: int = 1, budget: int | None = None) -> list[int]:
    """``C_r(hA)`` for each ``h`` in ``hs``, in input order."""
    tasks = [(A, h, r, budget) for h in hs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_cover_hfold, tasks))
    return [_cover_hfold(t) for t in tasks]


def stabilization_check(A: IntSet, r: int, window: tuple[int, int] | None = None,
                        jobs: int = 1, budget: int | None = None) -> StabilizationReport:
    """Exact ``C_r(hA)`` across a window of ``h``, compared with the closed form.

    For sets meeting the endpoint-gap condition the tail starts where ``hA``
    is an interval with at least ``r`` elements, ``max(1, b - 2,
    ceil((r - 1)/b))``; otherwise at the first ``h`` after which the value no longer
    changes inside the window.
    """
    r = _check_fold(r)
    _require_pair(A)
    b = normalize(A).normalized.max
    m = len(A)
    lo, hi = window or default_window(b)
    lo = max(lo, 1)
    hs = list(range(lo, hi + 1))
    values = covering_sequence(A, r, hs, jobs=jobs, budget=budget)
    rows = list(zip(hs, values))
    expected = asymptotic_covering_number(A, r)
    if endpoint_gap_condition(A):
        start = max(1, b - 2, -(-(r - 1) // b), lo)
        tail_start = start if start <= hi else None
    else:
        tail_start = hi
        while tail_start > lo and values[tail_start - 1 - lo] == values[-1]:
            tail_start -= 1
    tail = [v for h, v in rows if tail_start is not None and h >= tail_start]
    agrees = bool(tail) and all(v == expected for v in tail)
    # no cover by r - 1 translates once h(m - 1) > r - 2
    violations = [h for h, v in rows if h * (m - 1) > r - 2 and v < r]
    return StabilizationReport(A, r, rows, expected, tail_start, values[-1], agrees, violations)


@dataclass(frozen=True)
class StructureConstants:
    """``[c, h*max - dprime]`` is inside ``hA`` for every tested ``h >= h0``."""

    h0: int
    c: int
    dprime: int


def structure_constants(A: IntSet, window: tuple[int, int] | None = None) -> StructureConstants:
    """Smallest ``h0``, then smallest ``c``, then smallest ``dprime`` valid on the window.

    ``A`` must already be in normal form. Containment is checked on every
    ``h`` of the window by direct enumeration of ``hA``. A short window can
    only certify a degenerate triple (at worst ``h0`` = window end and
    ``c = h0*max``), so widen it before trusting small values of ``h0``.
    """
    _require_pair(A)
    if not is_normal_form(A):
        raise ValueError("structure_constants expects a normal-form set; call normalize() first")
    b = A.max
    lo, hi = window or default_window(b)
    lo = max(lo, 1)
    if lo > hi:
        raise NoStabilization(f"empty window [{lo}, {hi}]")
    # run_end[h][x]: largest e with [x, e] inside hA, or -1 when x is absent
    run_end = {}
    for h in range(lo, hi + 1):
        mask = np.zeros(h * b + 2, dtype=np.bool_)
        mask[hfold(A, h).elements] = True
        ends = np.full(h * b + 2, -1, dtype=np.int64)
        cur = -1
        for x in range(h * b, -1, -1):
            if mask[x]:
                if cur < 0:
                    cur = x
                ends[x] = cur
            else:
                cur = -1
        run_end[h] = ends
    for h0 in range(lo, hi + 1):
        for c in range(h0 * b + 1):
            dprime = 0
            ok = True
            for h in range(h0, hi + 1):
                e = run_end[h][c]
                if e < 0:
                    ok = False
                    break
                dprime = max(dprime, h * b - int(e))
            if ok and c <= h0 * b - dprime:
                return StructureConstants(h0, c, dprime)
    raise NoStabilization(f"no structure constants inside window [{lo}, {hi}]")


def eventual_constants(A: IntSet) -> StructureConstants:
    """Exact limiting constants of a normal-form set.

    ``c`` and ``dprime`` are the conductors of the additive semigroups
    generated by ``A`` and ``max(A) - A``; ``h0`` is an ``h`` from which the
    decomposition is proved to hold.
    """
    es = eventual_structure(A)
    return StructureConstants(es.threshold, es.c, es.dprime)
