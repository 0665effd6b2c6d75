"""Pure-numpy kernels.

Reference path used when numba is disabled or unavailable. Every function
here has a twin in ``_kernels_numba`` with the same signature and the same
deterministic tie-breaking, so the two backends return identical results
(including node counts of the cover search).
"""

import sys

import numpy as np

NAME = "numpy"


def sumset_mask(a, b):
    """Indicator of ``{i + j : a[i], b[j]}`` for boolean indicator arrays."""
    if np.count_nonzero(a) < np.count_nonzero(b):
        a, b = b, a
    la = len(a)
    out = np.zeros(la + len(b) - 1, dtype=np.bool_)
    for j in np.flatnonzero(b):
        out[j:j + la] |= a
    return out


def semigroup_profile(b, limit):
    """Iterate ``S <- (S + B) & [0, limit)`` from ``S = {0}`` to its fixed point.

    ``b`` is the indicator of a set containing 0. Returns ``(S, steps)`` where
    ``steps`` is the first t with ``tB & [0, limit) == S``.
    """
    gens = [int(j) for j in np.flatnonzero(b) if 0 < j < limit]
    cur = np.zeros(limit, dtype=np.bool_)
    cur[0] = True
    steps = 0
    while True:
        nxt = cur.copy()
        for j in gens:
            nxt[j:] |= cur[:limit - j]
        if np.array_equal(nxt, cur):
            return cur, steps
        cur = nxt
        steps += 1


def coverage_counts(masks, uncovered):
    """Number of uncovered universe elements hit by each candidate row."""
    return np.bitwise_count(masks & uncovered).sum(axis=1, dtype=np.int64)


def _set_bits(words):
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return np.flatnonzero(bits)


class _OutOfBudget(Exception):
    pass


def cover_search(masks, elem_cands, uncovered, allowed, k, budget):
    """Decide whether ``uncovered`` is covered by at most ``k`` allowed rows.

    Depth-first branch and bound. At every node: prune on the sum of the
    ``k`` largest residual coverages and on ``sum_e 1/maxcov(e)``, branch on
    the uncovered element with the fewest allowed candidates (ties: smallest
    best coverage, then smallest index), try its candidates by decreasing
    residual coverage, and ban each tried candidate for its later siblings.

    Returns ``(status, nodes, chosen)`` with status 1 (feasible), 0
    (infeasible) or -1 (budget exhausted). ``chosen`` holds the selected row
    indices padded with -1.
    """
    allowed = allowed.copy()
    m = elem_cands.shape[1]
    chosen = np.full(k, -1, dtype=np.int64)
    nodes = 0
    limit = sys.getrecursionlimit()
    if k + 50 > limit:
        sys.setrecursionlimit(k + 100)

    def visit(unc, depth):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        count = int(np.bitwise_count(unc).sum())
        if count == 0:
            return True
        left = k - depth
        if left == 0 or count > left * m:
            return False
        cov = coverage_counts(masks, unc)
        cov[~allowed] = 0
        if left < len(cov):
            best = np.partition(cov, len(cov) - left)[len(cov) - left:]
        else:
            best = cov
        if int(best.sum()) < count:
            return False
        idx = _set_bits(unc)
        rows = elem_cands[idx]
        counts = allowed[rows].sum(axis=1)
        if counts.min() == 0:
            return False
        # disallowed rows carry zero coverage, so this is the allowed maximum
        mc = cov[rows].max(axis=1)
        hist = np.bincount(mc, minlength=m + 1)
        need = 0.0
        for v in np.flatnonzero(hist[1:]) + 1:
            need += int(hist[v]) / int(v)
        if need > left + 1e-9:
            return False
        pos = int(np.lexsort((mc, counts))[0])
        row = elem_cands[idx[pos]]
        cands = row[allowed[row]]
        order = np.lexsort((cands, -cov[cands]))
        banned = []
        for c in cands[order]:
            chosen[depth] = c
            if visit(unc & ~masks[c], depth + 1):
                return True
            chosen[depth] = -1
            allowed[c] = False
            banned.append(c)
        allowed[banned] = True
        return False

    try:
        found = visit(uncovered.copy(), 0)
    except _OutOfBudget:
        return -1, nodes, chosen
    finally:
        sys.setrecursionlimit(limit)
    return (1 if found else 0), nodes, chosen


def build_masks(inv, n_cand):
    """Packed coverage rows: bit ``i`` of row ``inv[i, j]`` for every (i, j)."""
    n_elem, m = inv.shape
    masks = np.zeros((n_cand, (n_elem + 63) // 64), dtype=np.uint64)
    cols = np.arange(n_elem, dtype=np.int64)
    word = cols >> 6
    bit = np.left_shift(np.uint64(1), (cols & 63).astype(np.uint64))
    for j in range(m):
        # a fixed column never repeats a row, so the scatter has no collisions
        masks[inv[:, j], word] |= bit
    return masks


def dominators(masks, elem_cands, first):
    """Largest index ``i`` whose row contains row ``j`` (ties: larger index wins), else -1."""
    n_cand = masks.shape[0]
    out = np.full(n_cand, -1, dtype=np.int64)
    for j in range(n_cand):
        rows = elem_cands[first[j]]
        rows = rows[rows != j]
        sub = ~np.any(masks[j] & ~masks[rows], axis=1)
        same = np.all(masks[rows] == masks[j], axis=1)
        hit = rows[sub & (~same | (rows > j))]
        if hit.size:
            out[j] = hit.max()
    return out
