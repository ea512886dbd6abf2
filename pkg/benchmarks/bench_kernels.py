"""Compiled kernels versus their pure-Python/numpy fallbacks.

Two workloads:

* modp: rank over F_p of the full relation matrix of A_g at (g, L) = (2, 2)
  (about 13k sparse rows on 1440 columns).
* foxchain: Fox chains of a batch of random words at (2, 3).

Both backends must agree on every result; the script exits nonzero if not.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--words 20000]
"""
from __future__ import annotations

import argparse
import random
import sys
import time

import numpy as np

from homlab.fox import chains
from homlab.fox.words import letters_array, random_word
from homlab.lattice import LatticeParams
from homlab.linalg import modular
from homlab.presentation import Presentation


def _best(fn, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def modp_workload(engine_cls, rows, ncols: int, p: int) -> int:
    ech = engine_cls(ncols, p)
    for r in rows:
        cols = sorted(r)
        ech.add_row(cols, [r[c] % p for c in cols])
    return ech.rank


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--words", type=int, default=20000)
    args = ap.parse_args(argv)

    results = []
    ok = True

    pres = Presentation(LatticeParams(2, 2))
    rows = [row for _, row in pres.relation_rows()]
    p = modular.choose_primes(1)[0]
    engines = [("python", modular.PyModpEchelon)]
    if modular.BACKEND == "compiled":
        engines.insert(0, ("compiled", modular.ModpEchelon))
    ranks = {}
    for name, cls in engines:
        t, ranks[name] = _best(lambda: modp_workload(cls, rows, pres.n_generators, p), args.repeat)
        results.append(("modp rank (2,2)", name, t, f"rank {ranks[name]}"))
    ok &= len(set(ranks.values())) == 1

    params = LatticeParams(2, 3)
    rng = random.Random(0)
    arr = letters_array([random_word(params, rng, 24) for _ in range(args.words)])
    kernels = [("numpy", chains.fox_chains_numpy)]
    if chains.BACKEND == "compiled":
        kernels.insert(0, ("compiled", chains.fox_chains))
    outs = {}
    for name, fn in kernels:
        t, outs[name] = _best(lambda: fn(arr, params.g, params.L), args.repeat)
        results.append((f"foxchain {args.words} words (2,3)", name, t, f"nnz {int(np.count_nonzero(outs[name][0]))}"))
    first = next(iter(outs.values()))
    ok &= all(np.array_equal(o[0], first[0]) and np.array_equal(o[1], first[1]) for o in outs.values())

    print(f"{'workload':32s} {'backend':10s} {'seconds':>9s}  result")
    for w, b, t, r in results:
        print(f"{w:32s} {b:10s} {t:9.4f}  {r}")
    for w in dict.fromkeys(r[0] for r in results):
        times = {b: t for ww, b, t, _ in results if ww == w}
        if "compiled" in times and len(times) == 2:
            other = next(t for b, t in times.items() if b != "compiled")
            print(f"speedup {w}: {other / times['compiled']:.1f}x")
    print("backends agree" if ok else "BACKENDS DISAGREE")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
