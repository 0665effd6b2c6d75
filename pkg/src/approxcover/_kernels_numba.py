"""numba-compiled kernels; twins of ``_kernels_numpy``.

Bitsets are packed little-endian into ``uint64`` words. All shift amounts
and constants are kept in ``uint64`` so numba never promotes to float.
"""

import numpy as np
from numba import njit

NAME = "numba"

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True)
def _pack(mask):
    n = len(mask)
    words = np.zeros((n + 63) // 64, dtype=np.uint64)
    for i in range(n):
        if mask[i]:
            words[i >> 6] |= _ONE << np.uint64(i & 63)
    return words


@njit(cache=True)
def sumset_mask(a, b):
    na = 0
    nb = 0
    for i in range(len(a)):
        if a[i]:
            na += 1
    for j in range(len(b)):
        if b[j]:
            nb += 1
    if na < nb:
        a, b = b, a
    la = len(a)
    n = la + len(b) - 1
    aw = _pack(a)
    out = np.zeros((n + 63) // 64 + 1, dtype=np.uint64)
    for j in range(len(b)):
        if not b[j]:
            continue
        ws = j >> 6
        bs = np.uint64(j & 63)
        if bs == 0:
            for w in range(len(aw)):
                out[ws + w] |= aw[w]
        else:
            back = np.uint64(64) - bs
            for w in range(len(aw)):
                v = aw[w]
                if v:
                    out[ws + w] |= v << bs
                    out[ws + w + 1] |= v >> back
    res = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        res[i] = (out[i >> 6] >> np.uint64(i & 63)) & _ONE
    return res


@njit(cache=True)
def semigroup_profile(b, limit):
    gens = np.zeros(len(b), dtype=np.int64)
    ng = 0
    for j in range(1, min(len(b), limit)):
        if b[j]:
            gens[ng] = j
            ng += 1
    cur = np.zeros(limit, dtype=np.bool_)
    cur[0] = True
    nxt = cur.copy()
    steps = 0
    while True:
        changed = False
        for i in range(limit):
            nxt[i] = cur[i]
        for g in range(ng):
            j = gens[g]
            for i in range(j, limit):
                if cur[i - j] and not nxt[i]:
                    nxt[i] = True
                    changed = True
        if not changed:
            return cur, steps
        for i in range(limit):
            cur[i] = nxt[i]
        steps += 1


@njit(cache=True)
def coverage_counts(masks, uncovered):
    n_cand, n_words = masks.shape
    out = np.zeros(n_cand, dtype=np.int64)
    for c in range(n_cand):
        s = 0
        for w in range(n_words):
            s += _popcount(masks[c, w] & uncovered[w])
        out[c] = s
    return out


@njit(cache=True)
def _evaluate(masks, elem_cands, unc, allowed, left, cov, top, hist, branch_row):
    """Score one search node.

    Returns 1 when nothing is uncovered, 0 when the node is pruned, and
    otherwise the number of branch candidates written to ``branch_row``
    plus one (so 2 means one branch).
    """
    n_cand, n_words = masks.shape
    m = elem_cands.shape[1]
    count = 0
    for w in range(n_words):
        count += _popcount(unc[w])
    if count == 0:
        return 1
    if left == 0 or count > left * m:
        return 0
    # sum of the `left` largest residual coverages
    for t in range(left):
        top[t] = 0
    for c in range(n_cand):
        if not allowed[c]:
            cov[c] = 0
            continue
        s = 0
        for w in range(n_words):
            s += _popcount(masks[c, w] & unc[w])
        cov[c] = s
        if s > top[left - 1]:
            t = left - 1
            while t > 0 and top[t - 1] < s:
                top[t] = top[t - 1]
                t -= 1
            top[t] = s
    bound = 0
    for t in range(left):
        bound += top[t]
    if bound < count:
        return 0
    # every chosen row covers cov <= maxcov(e) of its elements, so
    # sum_e 1/maxcov(e) lower-bounds the rows still needed
    for v in range(m + 1):
        hist[v] = 0
    best_e = -1
    best_n = m + 1
    best_mc = 0
    for w in range(n_words):
        v = unc[w]
        while v:
            low = v & (~v + _ONE)
            e = w * 64 + _popcount(low - _ONE)
            v ^= low
            n = 0
            mc = 0
            for j in range(m):
                c = elem_cands[e, j]
                if allowed[c]:
                    n += 1
                    if cov[c] > mc:
                        mc = cov[c]
            if n == 0:
                return 0
            hist[mc] += 1
            if n < best_n or (n == best_n and mc < best_mc):
                best_n = n
                best_mc = mc
                best_e = e
    need = 0.0
    for v in range(1, m + 1):
        if hist[v]:
            need += hist[v] / v
    if need > left + 1e-9:
        return 0
    # candidates of best_e ordered by coverage desc, index asc
    nb = 0
    for j in range(m):
        c = elem_cands[best_e, j]
        if not allowed[c]:
            continue
        t = nb
        while t > 0 and (cov[branch_row[t - 1]] < cov[c] or (
                cov[branch_row[t - 1]] == cov[c] and branch_row[t - 1] > c)):
            branch_row[t] = branch_row[t - 1]
            t -= 1
        branch_row[t] = c
        nb += 1
    return nb + 1


@njit(cache=True)
def cover_search(masks, elem_cands, uncovered, allowed, k, budget):
    n_cand, n_words = masks.shape
    m = elem_cands.shape[1]
    allowed = allowed.copy()
    unc = np.zeros((k + 1, n_words), dtype=np.uint64)
    unc[0, :] = uncovered
    branch = np.full((k + 1, m), -1, dtype=np.int64)
    n_branch = np.zeros(k + 1, dtype=np.int64)
    nxt = np.zeros(k + 1, dtype=np.int64)
    chosen = np.full(k, -1, dtype=np.int64)
    cov = np.zeros(n_cand, dtype=np.int64)
    top = np.zeros(k + 1, dtype=np.int64)
    hist = np.zeros(m + 1, dtype=np.int64)
    nodes = 0
    depth = 0
    fresh = True
    while True:
        if fresh:
            fresh = False
            nodes += 1
            if nodes > budget:
                return -1, nodes, chosen
            code = _evaluate(masks, elem_cands, unc[depth], allowed,
                             k - depth, cov, top, hist, branch[depth])
            if code == 1:
                for t in range(depth, k):
                    chosen[t] = -1
                return 1, nodes, chosen
            if code == 0:
                if depth == 0:
                    return 0, nodes, chosen
                depth -= 1
                continue
            n_branch[depth] = code - 1
            nxt[depth] = 0
        i = nxt[depth]
        if i > 0:
            allowed[branch[depth, i - 1]] = False
        if i == n_branch[depth]:
            for t in range(n_branch[depth]):
                allowed[branch[depth, t]] = True
            if depth == 0:
                for t in range(k):
                    chosen[t] = -1
                return 0, nodes, chosen
            depth -= 1
            continue
        c = branch[depth, i]
        nxt[depth] = i + 1
        chosen[depth] = c
        for w in range(n_words):
            unc[depth + 1, w] = unc[depth, w] & ~masks[c, w]
        depth += 1
        fresh = True


@njit(cache=True)
def build_masks(inv, n_cand):
    n_elem, m = inv.shape
    masks = np.zeros((n_cand, (n_elem + 63) // 64), dtype=np.uint64)
    for i in range(n_elem):
        w = i >> 6
        bit = _ONE << np.uint64(i & 63)
        for j in range(m):
            masks[inv[i, j], w] |= bit
    return masks


@njit(cache=True)
def dominators(masks, elem_cands, first):
    """Largest index ``i`` whose row contains row ``j`` (ties: larger index wins), else -1."""
    n_cand, n_words = masks.shape
    m = elem_cands.shape[1]
    out = np.full(n_cand, -1, dtype=np.int64)
    for j in range(n_cand):
        for t in range(m):
            i = elem_cands[first[j], t]
            if i == j or i <= out[j]:
                continue
            sub = True
            same = True
            for w in range(n_words):
                if masks[j, w] & ~masks[i, w]:
                    sub = False
                    break
                if masks[j, w] != masks[i, w]:
                    same = False
            if sub and (not same or i > j):
                out[j] = i
    return out
