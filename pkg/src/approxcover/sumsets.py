"""Iterated sumsets, their growth law, and arithmetic-progression detection."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from ._accel import kernels
from .errors import InvalidFold, InvalidSize
from .intset import IntSet, check_int64, pairwise_sumset

# below this h*max the plain doubling is already cheap
_STRUCT_MIN = 1 << 12
_STRUCT_MIN_FOLD = 64
# largest truncation window tried when locating the eventual structure
_PROFILE_MAX = 1 << 20
_MAX_MASK = 1 << 27


@dataclass(frozen=True)
class APShape:
    """The progression ``first + diff * [0, size - 1]``."""

    first: int
    diff: int
    size: int

    @property
    def last(self) -> int:
        return self.first + self.diff * (self.size - 1)

    def to_intset(self) -> IntSet:
        return IntSet._wrap(self.first + self.diff * np.arange(self.size, dtype=np.int64))


def detect_ap(A: IntSet) -> APShape | None:
    """The progression shape of ``A``, or None if its gaps are not constant."""
    a = A.elements
    if len(a) == 0:
        A.min  # raises EmptySetError
    if len(a) == 1:
        return APShape(int(a[0]), 1, 1)
    gaps = np.diff(a)
    if np.all(gaps == gaps[0]):
        return APShape(int(a[0]), int(gaps[0]), len(a))
    return None


def hfold_size_bound(A: IntSet, h: int) -> tuple[int, bool]:
    """Lower bound on ``|hA|`` and whether it is exact (``A`` an AP)."""
    h = _check_fold(h)
    m = len(A)
    if detect_ap(A) is not None:
        return h * m - h + 1, True
    return h * m, False


def _check_fold(h) -> int:
    try:
        h = operator.index(h)
    except TypeError:
        raise InvalidFold(f"fold count must be an integer, got {h!r}") from None
    if h < 1:
        raise InvalidFold(f"fold count must be positive, got {h}")
    return h


def affine_reduce(A: IntSet) -> tuple[np.ndarray, int, int]:
    """``(B, a1, d)`` with ``A = d*B + a1``, ``min B = 0`` and ``gcd(B) = 1``."""
    a = A.elements
    a1 = A.min
    if len(a) == 1:
        return np.zeros(1, dtype=np.int64), a1, 1
    diffs = [int(x) - a1 for x in a[1:]]
    d = 0
    for x in diffs:
        d = gcd(d, x)
    return np.array([0] + [x // d for x in diffs], dtype=np.int64), a1, d


def hfold(A: IntSet, h: int) -> IntSet:
    """The h-fold sumset ``hA``.

    Works on the affine normal form and maps back. Uses binary doubling of
    bitset sumsets, with two exact shortcuts: once some partial sum ``jB``
    (``j <= h``) is a full interval, ``hB = [0, h*b]``; and for large ``h``
    the set is assembled from its eventual structure.
    """
    h = _check_fold(h)
    lo, hi = A.min, A.max
    check_int64(h * lo, h * hi)
    if len(A) == 1:
        return IntSet._wrap(np.array([h * lo], dtype=np.int64))
    B, a1, d = affine_reduce(A)
    hB = _hfold_normal(B, h)
    if d != 1:
        hB = hB * np.int64(d)
    if a1:
        hB = hB + np.int64(h * a1)
    return IntSet._wrap(hB)


def _hfold_normal(B: np.ndarray, h: int) -> np.ndarray:
    b = int(B[-1])
    if len(B) == b + 1:
        return np.arange(h * b + 1, dtype=np.int64)
    if h == 1:
        return B.copy()
    if h >= _STRUCT_MIN_FOLD and h * b >= _STRUCT_MIN:
        es = _eventual(tuple(B.tolist()))
        if es is not None and h >= es.threshold:
            return es.materialize(h)
    if h * b + 1 > _MAX_MASK:
        return _doubling_sparse(IntSet._wrap(B.copy()), h).elements
    base = np.zeros(b + 1, dtype=np.bool_)
    base[B] = True
    full = np.arange(h * b + 1, dtype=np.int64)
    power, acc, k = base, None, h
    while True:
        if k & 1:
            acc = power if acc is None else kernels.sumset_mask(acc, power)
            if acc.all():
                return full
        k >>= 1
        if not k:
            return np.flatnonzero(acc).astype(np.int64)
        power = kernels.sumset_mask(power, power)
        if power.all():
            return full


def _doubling_sparse(A: IntSet, h: int) -> IntSet:
    power, acc, k = A, None, h
    while True:
        if k & 1:
            acc = power if acc is None else pairwise_sumset(acc, power)
        k >>= 1
        if not k:
            return acc
        power = pairwise_sumset(power, power)


@dataclass(frozen=True)
class EventualStructure:
    """Exact shape of ``hB`` for every ``h >= threshold`` (``B`` in normal form).

    ``hB = low  U  [c, h*b - dprime]  U  (h*b - high)`` where ``low`` and
    ``high`` are the parts below the conductors of the additive semigroups
    generated by ``B`` and ``b - B``.
    """

    b: int
    c: int
    dprime: int
    low: np.ndarray
    high: np.ndarray
    h_low: int
    h_high: int
    threshold: int

    def materialize(self, h: int) -> np.ndarray:
        hb = h * self.b
        return np.concatenate([
            self.low,
            np.arange(self.c, hb - self.dprime + 1, dtype=np.int64),
            hb - self.high[::-1],
        ])


def _profile(B: np.ndarray) -> tuple[int, np.ndarray, int] | None:
    """Conductor, semigroup elements below it, and steps to stabilize."""
    b = int(B[-1])
    base = np.zeros(b + 1, dtype=np.bool_)
    base[B] = True
    limit = 4 * b + 1
    while limit <= _PROFILE_MAX:
        S, steps = kernels.semigroup_profile(base, limit)
        holes = np.flatnonzero(~S)
        c = int(holes[-1]) + 1 if holes.size else 0
        # a run of length > b makes every larger integer reachable
        if limit - c > b:
            return c, np.flatnonzero(S[:c]).astype(np.int64), int(steps)
        limit = 2 * limit - 1
    return None


@lru_cache(maxsize=256)
def _eventual(B: tuple) -> EventualStructure | None:
    arr = np.array(B, dtype=np.int64)
    b = B[-1]
    lo = _profile(arr)
    hi = _profile((b - arr)[::-1].copy())
    if lo is None or hi is None:
        return None
    c, low, h_low = lo
    dp, high, h_high = hi
    # the two runs grown from the truncation windows overlap once
    # h >= h_low + h_high; the three pieces are disjoint once h*b >= c + dp
    threshold = max(h_low + h_high, -(-(c + dp) // b), 1)
    return EventualStructure(b, c, dp, low, high, h_low, h_high, threshold)


def eventual_structure(B: IntSet) -> EventualStructure:
    """Eventual structure of a normal-form set with at least two elements."""
    arr = B.elements
    if len(arr) < 2:
        raise InvalidSize("eventual structure needs at least two elements")
    red, a1, d = affine_reduce(B)
    if a1 != 0 or d != 1:
        raise ValueError("set is not in normal form")
    es = _eventual(tuple(arr.tolist()))
    if es is None:
        raise ValueError(f"max element {B.max} too large for the profile window")
    return es
