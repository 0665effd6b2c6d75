"""Brute-force reference implementations. Deliberately naive: plain Python
sets and itertools, no code shared with the package."""

from itertools import combinations, combinations_with_replacement


def naive_hfold(elems, h):
    return sorted({sum(c) for c in combinations_with_replacement(sorted(set(elems)), h)})


def naive_sumset(a, b):
    return sorted({x + y for x in a for y in b})


def is_ap(elems):
    s = sorted(set(elems))
    return len(s) <= 2 or len({y - x for x, y in zip(s, s[1:])}) == 1


def naive_cover(elems, r, max_k=None):
    """(size, lexicographically smallest X) by trying every candidate subset
    in order of size, each size in lexicographic order."""
    a = sorted(set(elems))
    U = naive_hfold(a, r)
    cands = sorted({u - x for u in U for x in a})
    pos = {u: i for i, u in enumerate(U)}
    full = (1 << len(U)) - 1
    mask = {}
    for c in cands:
        m = 0
        for x in a:
            if c + x in pos:
                m |= 1 << pos[c + x]
        mask[c] = m
    for k in range(1, (max_k or len(cands)) + 1):
        for X in combinations(cands, k):
            acc = 0
            for c in X:
                acc |= mask[c]
            if acc == full:
                return k, list(X)
    return None


def covers(elems, r, X):
    have = {x + a for x in X for a in elems}
    return all(u in have for u in naive_hfold(elems, r))


def dfs_cover_size(elems, r):
    """Covering number by iterative deepening: some translate must cover the
    smallest uncovered element, and only |A| translates do."""
    a = sorted(set(elems))
    U = frozenset(naive_hfold(a, r))

    def go(unc, k):
        if not unc:
            return True
        if k == 0:
            return False
        u = min(unc)
        return any(go(unc - {u - x + y for y in a}, k - 1) for x in a)

    k = 1
    while not go(U, k):
        k += 1
    return k
