"""Canonical finite integer sets and their elementary algebra."""

from __future__ import annotations

import operator
import re
from typing import Iterable

import numpy as np

from ._accel import kernels
from .errors import EmptySetError, IntegerOverflow, SetParseError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

# span/size at or below which a set is stored-for-arithmetic as a bitset
DENSE_RATIO = 64
# dense masks longer than this fall back to the sparse path
_MAX_MASK = 1 << 28


def check_int64(*values: int) -> None:
    for v in values:
        if v < INT64_MIN or v > INT64_MAX:
            raise IntegerOverflow(f"value {v} outside the signed 64-bit range")


class IntSet:
    """Immutable sorted set of 64-bit integers.

    Equality and hashing are extensional. The empty set can be built but is
    rejected by every algebraic operation.
    """

    __slots__ = ("_a", "_hash")

    def __init__(self, elements: Iterable[int] = ()):
        if isinstance(elements, IntSet):
            self._a = elements._a
        elif isinstance(elements, np.ndarray) and elements.dtype.kind in "iu":
            if elements.size and (int(elements.min()) < INT64_MIN or int(elements.max()) > INT64_MAX):
                raise IntegerOverflow("element outside the signed 64-bit range")
            self._a = np.unique(elements.astype(np.int64, copy=False))
        else:
            try:
                vals = sorted({operator.index(x) for x in elements})
            except TypeError as exc:
                raise TypeError(f"IntSet elements must be integers: {exc}") from None
            if vals:
                check_int64(vals[0], vals[-1])
            self._a = np.array(vals, dtype=np.int64)
        self._a.setflags(write=False)
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> IntSet:
        # caller guarantees a strictly increasing int64 array
        obj = cls.__new__(cls)
        obj._a = arr
        obj._a.setflags(write=False)
        obj._hash = None
        return obj

    @classmethod
    def interval(cls, lo: int, hi: int) -> IntSet:
        """The set ``[lo, hi]`` of consecutive integers."""
        if hi < lo:
            raise EmptySetError(f"empty interval [{lo}, {hi}]")
        check_int64(lo, hi)
        return cls._wrap(np.arange(lo, hi + 1, dtype=np.int64))

    @classmethod
    def from_mask(cls, offset: int, mask: np.ndarray) -> IntSet:
        """Set of ``offset + i`` for every true entry ``mask[i]``."""
        idx = np.flatnonzero(mask)
        if idx.size:
            check_int64(offset + int(idx[0]), offset + int(idx[-1]))
        return cls._wrap(idx.astype(np.int64) + np.int64(offset))

    @property
    def elements(self) -> np.ndarray:
        """Read-only sorted ``int64`` array of the elements."""
        return self._a

    def _nonempty(self) -> None:
        if not self._a.size:
            raise EmptySetError("operation requires a nonempty set")

    @property
    def min(self) -> int:
        self._nonempty()
        return int(self._a[0])

    @property
    def max(self) -> int:
        self._nonempty()
        return int(self._a[-1])

    @property
    def span(self) -> int:
        return self.max - self.min

    @property
    def is_dense(self) -> bool:
        """True when a bitset over ``[min, max]`` is the better representation."""
        return bool(self._a.size) and self.span <= DENSE_RATIO * len(self)

    def is_interval(self) -> bool:
        return bool(self._a.size) and self.span + 1 == len(self)

    def to_mask(self) -> tuple[int, np.ndarray]:
        """``(offset, mask)`` with ``mask[i]`` true iff ``offset + i`` is in the set."""
        lo = self.min
        if self.span + 1 > _MAX_MASK:
            raise MemoryError(f"span {self.span} too large for a dense mask")
        mask = np.zeros(self.span + 1, dtype=np.bool_)
        mask[self._a - lo] = True
        return lo, mask

    def tolist(self) -> list[int]:
        return self._a.tolist()

    def __len__(self) -> int:
        return int(self._a.size)

    def __iter__(self):
        return iter(self._a.tolist())

    def __contains__(self, x) -> bool:
        try:
            x = operator.index(x)
        except TypeError:
            return False
        if not self._a.size or x < self._a[0] or x > self._a[-1]:
            return False
        i = int(np.searchsorted(self._a, x))
        return bool(self._a[i] == x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntSet):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._a.tobytes())
        return self._hash

    def __repr__(self) -> str:
        if len(self) > 20:
            head = ", ".join(map(str, self._a[:8].tolist()))
            return f"IntSet({{{head}, ...}}, size={len(self)}, max={self.max})"
        return f"IntSet({{{', '.join(map(str, self.tolist()))}}})"

    def __str__(self) -> str:
        return format_set(self)


def translate(A: IntSet, x: int) -> IntSet:
    """``A + x``."""
    A._nonempty()
    x = operator.index(x)
    check_int64(A.min + x, A.max + x)
    return IntSet._wrap(A.elements + np.int64(x))


def dilate(A: IntSet, c: int) -> IntSet:
    """``c * A`` (elementwise scaling, not the c-fold sumset)."""
    A._nonempty()
    c = operator.index(c)
    if c == 0:
        return IntSet._wrap(np.zeros(1, dtype=np.int64))
    check_int64(c * A.min, c * A.max)
    out = A.elements * np.int64(c)
    if c < 0:
        out = out[::-1].copy()
    return IntSet._wrap(out)


def union(A: IntSet, B: IntSet) -> IntSet:
    A._nonempty()
    B._nonempty()
    return IntSet._wrap(np.union1d(A.elements, B.elements))


def _sumset_dense(A: IntSet, B: IntSet) -> IntSet:
    oa, ma = A.to_mask()
    ob, mb = B.to_mask()
    return IntSet.from_mask(oa + ob, kernels.sumset_mask(ma, mb))


def _sumset_sparse(A: IntSet, B: IntSet) -> IntSet:
    a, b = A.elements, B.elements
    if len(a) < len(b):
        a, b = b, a
    # chunk rows to bound the outer-product footprint
    step = max(1, (1 << 22) // max(1, len(a)))
    parts = [np.add.outer(b[i:i + step], a).ravel() for i in range(0, len(b), step)]
    return IntSet._wrap(np.unique(np.concatenate(parts)))


def pairwise_sumset(A: IntSet, B: IntSet) -> IntSet:
    """``A + B = {a + b}``; shift-OR on bitsets when both operands are dense."""
    A._nonempty()
    B._nonempty()
    check_int64(A.min + B.min, A.max + B.max)
    if A.is_dense and B.is_dense and A.span + B.span < _MAX_MASK:
        return _sumset_dense(A, B)
    return _sumset_sparse(A, B)


_TOKEN = re.compile(r"^[+-]?\d+$")


def parse_set(text: str) -> IntSet:
    """Parse a literal such as ``"0, 1, 3"``; sorts and deduplicates."""
    parts = [p.strip() for p in text.strip().strip("{}").split(",")]
    if parts == [""]:
        raise SetParseError("empty set literal")
    vals = []
    for p in parts:
        if not _TOKEN.match(p):
            raise SetParseError(f"not an integer: {p!r}")
        vals.append(int(p))
    try:
        return IntSet(vals)
    except IntegerOverflow as exc:
        raise SetParseError(str(exc)) from None


def format_set(A: IntSet) -> str:
    return ",".join(map(str, A.tolist()))
