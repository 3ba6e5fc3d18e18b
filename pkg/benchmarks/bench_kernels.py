#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-python fallback.

Both backends are imported directly, so this works regardless of which one
the package itself picked at import time.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from spirallab import _core_py
from spirallab.families import UnivalentMap

try:
    from spirallab import _core
except ImportError:
    _core = None


def sample_disk(n, seed=0):
    rng = np.random.default_rng(seed)
    return np.sqrt(rng.uniform(0, 0.9**2, n)) * np.exp(
        2j * np.pi * rng.uniform(size=n))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    zs = sample_disk(args.n)
    maps = {
        "mobius (closed forms)": UnivalentMap.mobius_spiral(0.3j),
        "rational (Newton path)": UnivalentMap.rational([0, 1, 0.1], [1, -1]),
    }

    print(f"n = {args.n}, best of {args.repeat}")
    for label, h in maps.items():
        ws = _core_py.eval_map(h.code, h.params, h.num, h.den, zs)
        guess = np.zeros_like(ws)
        cases = {}
        if h.code != 5:
            # the rational family has no closed-form log-derivative kernel
            cases["log_deriv"] = lambda mod: mod.log_deriv(
                h.code, h.params, h.num, h.den, zs)
        cases |= {
            "eval_map": lambda mod: mod.eval_map(h.code, h.params, h.num, h.den, zs),
            "eval_deriv": lambda mod: mod.eval_deriv(h.code, h.params, h.num, h.den, zs),
            "invert": lambda mod: mod.invert(h.code, h.params, h.num, h.den, ws, guess),
            "covered_min_distance": lambda mod: mod.covered_min_distance(
                h.code, h.params, h.num, h.den, 0.3, 0j, 400, 400, 1e-3),
        }
        print(f"\n-- {label}")
        print(f"{'kernel':<22}{'python':>12}{'cython':>12}{'speedup':>10}")
        for name, call in cases.items():
            tp = best_of(lambda: call(_core_py), args.repeat)
            if _core is None:
                print(f"{name:<22}{tp * 1e3:>10.2f}ms{'n/a':>12}{'n/a':>10}")
                continue
            tc = best_of(lambda: call(_core), args.repeat)
            print(f"{name:<22}{tp * 1e3:>10.2f}ms{tc * 1e3:>10.2f}ms"
                  f"{tp / tc:>9.1f}x")
            # sanity: both backends compute the same thing
            a, b = call(_core_py), call(_core)
            if isinstance(a, tuple):
                assert abs(a[0] - b[0]) < 1e-9
            else:
                assert np.max(np.abs(a - b)) < 1e-9


if __name__ == "__main__":
    main()
