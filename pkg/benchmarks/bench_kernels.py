#!/usr/bin/env python3
"""Compare the compiled and pure-numpy operator-embedding backends.

The embedding kernel places a k-site operator into an N-site tensor product
and dominates Hamiltonian assembly. The backend is chosen at import time via
the CHARGEHAM_BACKEND environment variable, so each side runs in its own
subprocess with the flag pinned; this script aggregates the timings.

Usage: python3 benchmarks/bench_kernels.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CASES = [
    # (sites, n_sites, local_dim, repeats of the embed call per timing)
    ((1,), 8, 2, 200),
    ((3, 4), 10, 2, 50),
    ((1, 10), 10, 2, 50),
    ((2, 3), 6, 3, 50),
    ((5, 2), 12, 2, 10),
    ((2, 3, 4), 12, 2, 10),
]

WORKER = r"""
import json, sys, time
import numpy as np
from chargeham._backend import active_backend
from chargeham import embed_sites

cases = json.loads(sys.argv[1])
rng = np.random.default_rng(0)
results = []
for sites, n_sites, local_dim, calls in cases:
    sites = tuple(sites)
    k = len(sites)
    op = rng.normal(size=(local_dim ** k,) * 2) \
        + 1j * rng.normal(size=(local_dim ** k,) * 2)
    embed_sites(op, sites, n_sites, local_dim)  # warm-up (JIT, caches)
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(calls):
            embed_sites(op, sites, n_sites, local_dim)
        best = min(best, (time.perf_counter() - t0) / calls)
    results.append(best)
print(json.dumps({"backend": active_backend(), "times": results}))
"""


def run_backend(name: str) -> dict:
    env = dict(os.environ, CHARGEHAM_BACKEND=name)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(CASES)],
        capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.parse_args()
    sides = {}
    for name in ("numba", "numpy"):
        try:
            sides[name] = run_backend(name)
        except subprocess.CalledProcessError as exc:
            print(f"{name} backend unavailable:\n{exc.stderr}",
                  file=sys.stderr)
    if len(sides) < 2:
        print("need both backends to compare", file=sys.stderr)
        return 1
    assert sides["numba"]["backend"] == "numba"
    assert sides["numpy"]["backend"] == "numpy"

    print(f"{'case':<28} {'numba':>12} {'numpy':>12} {'speedup':>8}")
    for (sites, n, d, _), tb, tp in zip(CASES, sides["numba"]["times"],
                                        sides["numpy"]["times"]):
        label = f"sites={sites} N={n} D={d}"
        print(f"{label:<28} {tb * 1e3:>10.3f}ms {tp * 1e3:>10.3f}ms "
              f"{tp / tb:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
