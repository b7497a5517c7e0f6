#!/usr/bin/env python3
"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--qubits 12 16 20] [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from qtradeoff import kernels
from qtradeoff.knuth_yao import build_ddg


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[10, 14, 18, 20])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=200_000)
    args = ap.parse_args()

    impls = kernels.backends()
    rng = np.random.default_rng(0)
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
    print(f"backends: {', '.join(impls)}")
    print(f"{'kernel':<16}{'size':>10}" + "".join(f"{name:>14}" for name in impls) + f"{'speedup':>10}")

    for n in args.qubits:
        dim = 1 << n
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        cond = (rng.random(dim) < 0.5).astype(np.uint8)
        perm = rng.permutation(dim).astype(np.int64)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, dim))
        cases = {
            "apply_1q": lambda k: k.apply_1q(psi.copy(), 1 << (n // 2), h, None),
            "apply_1q+cond": lambda k: k.apply_1q(psi.copy(), 1 << (n // 2), h, cond),
            "permute_phase": lambda k: k.permute_phase(psi, perm, phases),
        }
        for name, case in cases.items():
            row = {b: best_of(lambda: case(mod), args.repeat) for b, mod in impls.items()}
            _print_row(name, dim, row)

    tree = build_ddg(rng.dirichlet(np.ones(50)), 32)
    counts, offsets, outcomes = tree._arrays()
    bits = rng.integers(0, 2, size=args.samples * 40, dtype=np.uint8)
    row = {
        b: best_of(lambda: mod.ddg_walk(bits, counts, offsets, outcomes, args.samples), max(1, args.repeat // 2))
        for b, mod in impls.items()
    }
    _print_row("ddg_walk", args.samples, row)


def _print_row(name, size, row):
    cells = "".join(f"{t * 1e3:>12.3f}ms" for t in row.values())
    speed = row["python"] / row["cython"] if "cython" in row else float("nan")
    print(f"{name:<16}{size:>10}{cells}{speed:>9.1f}x")


if __name__ == "__main__":
    main()
