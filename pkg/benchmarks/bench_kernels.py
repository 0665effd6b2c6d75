"""Compare the numba kernels with the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--json out.json]

Each row times one kernel call on both backends (best of N, after a warm-up
call so numba compilation is excluded) and checks the outputs are identical.
"""

import argparse
import json
import time

import numpy as np

from approxcover._accel import get_kernels
from approxcover.covering import build_instance
from approxcover.intset import IntSet
from approxcover.sumsets import hfold


def best_of(fn, repeat):
    fn()  # warm-up / compile
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return x == y


def cases():
    rng = np.random.default_rng(0)
    dense = np.zeros(20_001, dtype=np.bool_)
    dense[rng.choice(20_001, 4_000, replace=False)] = True
    dense[[0, -1]] = True
    small = np.zeros(101, dtype=np.bool_)
    small[[0, 3, 7, 40, 41, 99, 100]] = True
    yield "sumset_mask 20k x 20k", "sumset_mask", (dense, dense)
    yield "sumset_mask 20k x 101", "sumset_mask", (dense, small)

    gens = np.zeros(98, dtype=np.bool_)
    gens[[0, 61, 97]] = True
    yield "semigroup_profile {0,61,97}", "semigroup_profile", (gens, 4 * 97 + 1)

    # k is one below the optimum for the small cases, so the search must exhaust the tree
    for label, A, h, r, k in (("{0,7,8}", (0, 7, 8), 4, 3, 6), ("{0,1,5,7}", (0, 1, 5, 7), 2, 3, 5),
                              ("{0,7,8}", (0, 7, 8), 200, 3, 4)):
        inst = build_instance(hfold(IntSet(A), h), r)
        full = inst.full_mask()
        n = len(inst.candidates)
        tag = f"{label} h={h} r={r} |U|={len(inst.universe)}"
        yield f"build_masks {tag}", "build_masks", (inst.elem_cands, n)
        yield f"coverage_counts {tag}", "coverage_counts", (inst.masks, full)
        yield (f"cover_search k={k} {tag}", "cover_search",
               (inst.masks, inst.elem_cands, full, inst.useful(0), k, 10**8))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None, help="also write the rows to this file")
    args = ap.parse_args()
    nb, npk = get_kernels("numba"), get_kernels("numpy")
    rows = []
    print(f"{'case':<58} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}  same")
    for label, name, fargs in cases():
        t_nb, out_nb = best_of(lambda: getattr(nb, name)(*fargs), args.repeat)
        t_np, out_np = best_of(lambda: getattr(npk, name)(*fargs), args.repeat)
        same = _same(out_nb, out_np)
        rows.append({"case": label, "numba_ms": t_nb * 1e3, "numpy_ms": t_np * 1e3,
                     "speedup": t_np / t_nb if t_nb else float("inf"), "identical": bool(same)})
        print(f"{label:<58} {t_nb * 1e3:>10.2f} {t_np * 1e3:>10.2f} {t_np / t_nb:>8.1f}  {same}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
