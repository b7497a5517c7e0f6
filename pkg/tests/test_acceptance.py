"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import json
import math
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_gate  # noqa: E402
from oracles import entropy_bits, grid_min_entropy, vertex_min_entropy  # noqa: E402

from qtradeoff import entropy as en  # noqa: E402
from qtradeoff import grover as gv  # noqa: E402
from qtradeoff import knuth_yao as ky  # noqa: E402
from qtradeoff import state as st  # noqa: E402
from qtradeoff import stateprep as sp  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def record(num, ok, detail):
    RESULTS[num] = (bool(ok), detail)
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    return ok


def _random_target(rng, n):
    N = 1 << n
    p = rng.dirichlet(np.ones(N))
    return sp.TargetState(p, rng.uniform(0, 2 * math.pi, N))


def _phi_delta(delta, K):
    return np.r_[(1 - delta) ** 2, np.full(K, (2 * delta - delta**2) / K)]


def check_1():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    fails = 0
    for _ in range(100):
        target = _random_target(rng, int(rng.integers(1, 9)))
        for eps in (0.3, 0.1, 0.03):
            _, rep = sp.synthesize(target, eps)
            worst = max(worst, rep.achieved_distance / eps)
            fails += rep.achieved_distance > eps
    elapsed = time.perf_counter() - t0
    ok = fails == 0 and elapsed < 60
    return record(1, ok, f"300 syntheses, {fails} over budget, worst distance/eps {worst:.3f}, {elapsed:.1f}s")


def check_2():
    rng = np.random.default_rng(102)
    bad = 0
    runs = 0
    for _ in range(100):
        target = _random_target(rng, int(rng.integers(1, 9)))
        for eps in (0.3, 0.1, 0.03):
            _, rep = sp.synthesize(target, eps)
            want = rep.k * math.ceil(math.log2(2 * math.pi * rep.k / eps)) if rep.k else 0
            bad += rep.nominal_count != want or rep.basis_changing_count > rep.nominal_count
            runs += 1
    uniform_worst = 0.0
    for n in range(1, 9):
        t = sp.TargetState(np.full(1 << n, 2.0**-n), np.zeros(1 << n))
        for eps in (0.3, 0.1, 0.03, 0.001):
            uniform_worst = max(uniform_worst, sp.synthesize(t, eps)[1].achieved_distance)
    ok = bad == 0 and uniform_worst < 1e-9
    return record(2, ok, f"count law broken in {bad}/{runs} runs; uniform targets worst distance {uniform_worst:.1e}")


def check_3():
    rng = np.random.default_rng(103)
    worst_slack = -np.inf
    inc_bad = 0
    ins_bad = 0
    ins_worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        length = int(rng.integers(1, 51))
        gates = [random_gate(rng, n) for _ in range(length)]
        tr = en.entropy_trace(st.Circuit(n, gates))
        inc = tr.increments()
        if inc.size:
            slack = inc - 2 * tr.gate_arities
            worst_slack = max(worst_slack, float(slack.max()))
            inc_bad += bool(np.any(slack > 1e-9))
        pos = int(rng.integers(0, length + 1))
        spliced = gates[:pos] + [random_gate(rng, n, preserving_only=True)] + gates[pos:]
        tr2 = en.entropy_trace(st.Circuit(n, spliced))
        gap = float(np.max(np.abs(tr2.values - tr.values)))
        ins_worst = max(ins_worst, gap)
        ins_bad += gap > 1e-9
    ok = inc_bad == 0 and ins_bad == 0
    return record(
        3,
        ok,
        f"increment bound violated in {inc_bad}/1000 (max slack {worst_slack:.3f}); "
        f"preserving insertion moved the trace in {ins_bad}/1000 (max {ins_worst:.3f} bits)",
    )


def check_4():
    rng = np.random.default_rng(104)
    worst = 0.0
    cases = 0
    for m in range(2, 7):
        for _ in range(8):
            d = np.round(rng.dirichlet(np.ones(m)), 3)
            d[-1] = 1 - d[:-1].sum()
            if d[-1] < 0:
                continue
            for eps in (0.0, 0.02, 0.1, 0.3, 0.6):
                g = en.smoothed_entropy_lb(d, eps)
                worst = max(worst, abs(g - vertex_min_entropy(d, eps)))
                if m == 3:
                    worst = max(worst, g - grid_min_entropy(d, eps))
                cases += 1
    p = _phi_delta(0.01, 1024)
    h = en.shannon_entropy(p)
    lb = en.smoothed_entropy_lb(p, 0.02)
    sep_ok = abs(h - 0.34) < 0.005 and lb <= 0.1
    ok = worst <= 1e-2 and sep_ok
    return record(
        4,
        ok,
        f"greedy vs exhaustive worst gap {worst:.1e} over {cases} cases; "
        f"phi_delta entropy {h:.4f}, smoothed at eps=0.02 {lb:.4f} (needs <= 0.1)",
    )


def check_5():
    rng = np.random.default_rng(105)
    bad = 0
    lo = hi = 0.0
    for _ in range(200):
        p = rng.dirichlet(np.ones(int(rng.integers(1, 65))) * rng.choice([0.1, 1.0, 5.0]))
        e = ky.expected_flips(ky.build_ddg(p, 32))
        h = en.shannon_entropy(p)
        bad += not (h - 1e-3 <= e <= h + 2)
        lo, hi = min(lo, e - h), max(hi, e - h)
    dy_worst = 0.0
    for _ in range(100):
        depths = [0]
        for _ in range(int(rng.integers(0, 30))):
            j = int(rng.integers(len(depths)))
            if depths[j] < 20:
                d = depths.pop(j)
                depths += [d + 1, d + 1]
        p = 2.0 ** -np.array(depths)
        dy_worst = max(dy_worst, abs(ky.expected_flips(ky.build_ddg(p, 32)) - entropy_bits(p)))
    ok = bad == 0 and dy_worst <= 1e-12
    return record(5, ok, f"sandwich violated {bad}/200 (gap range [{lo:.4f}, {hi:.4f}]); dyadic worst {dy_worst:.1e}")


def check_6():
    s4 = gv.grover_standard(4).success_probability
    s16 = gv.grover_standard(16).success_probability
    cf16 = math.sin(7 * math.asin(0.25)) ** 2
    ok = abs(s4 - 1) <= 1e-9 and abs(s16 - 0.9613) <= 1e-3 and abs(s16 - cf16) <= 1e-9
    return record(6, ok, f"n=4 success {s4:.12f}; n=16 success {s16:.6f} (closed form {cf16:.6f})")


def check_7():
    bad = []
    for n in (64, 256):
        for r in gv.tradeoff_sweep(n, gv.valid_targets(n)):
            if r.success_probability < 2 / 3 or (r.layers and not 0.1 <= r.product_over_n <= 10):
                bad.append((n, r.T_target))
    r = gv.hybrid_block(64, 16)
    ok = not bad and (r.queries, r.layers) == (16, 7)
    return record(7, ok, f"out-of-band sweep points {bad or 'none'}; n=64,T=16 -> queries {r.queries}, layers {r.layers}")


def check_8():
    worst = -np.inf
    bad = 0
    traces = 0
    for n in (16, 32):
        for t in gv.valid_targets(n):
            tr = gv.progress_trace(n, t)
            ch = tr.changes()
            worst = max(worst, float(np.max(ch - tr.bounds[: ch.size])))
            bad += abs(tr.p[0] - 1) > 1e-9 or np.any(ch > tr.bounds[: ch.size] + 1e-9)
            bad += tr.success_probability >= 2 / 3 and tr.p[-1] > 0.95
            traces += 1
    return record(8, bad == 0, f"{traces} traces, {bad} violations, max (change - bound) {worst:.3f}")


def check_9():
    got = {n: gv.relation_params(gv.grover_relation(n)).bound for n in (4, 16, 64)}
    ok = all(got[n] == math.sqrt(n) for n in got)
    return record(9, ok, "bounds " + ", ".join(f"n={n}: {b}" for n, b in got.items()))


def check_10():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "d.json").write_text("[0.1, 0.2, 0.3, 0.4]")
        rng = np.random.default_rng(110)
        a = rng.normal(size=16) + 1j * rng.normal(size=16)
        a /= np.linalg.norm(a)
        (tmp / "s.json").write_text(json.dumps([[x.real, x.imag] for x in a]))
        invocations = [
            ["prep", "--state", "s.json", "--eps", "0.1", "--dump-state", "dump.json"],
            ["entropy", "--state", "s.json", "--eps", "0.1"],
            ["ky", "--dist", "d.json", "--samples", "20000", "--seed", "7", "--dump-tree"],
            ["grover", "--n", "64", "--mode", "hybrid", "--T", "16"],
            ["sweep", "--n", "64"],
            ["adversary", "--n", "16", "--T", "8"],
            ["bound", "--relation", "hamming", "--n", "4", "--k", "2", "--format", "structured"],
        ]
        differ = []
        for args in invocations:
            outs = []
            for _ in range(2):
                res = subprocess.run([sys.executable, "-m", "qtradeoff", *args], capture_output=True, cwd=tmp)
                extra = (tmp / "dump.json").read_bytes() if args[0] == "prep" else b""
                outs.append((res.returncode, res.stdout, extra))
            if outs[0] != outs[1] or outs[0][0] != 0:
                differ.append(args[0])
    return record(10, not differ, f"{len(invocations)} subcommands run twice; differing: {differ or 'none'}")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i + 1}" for i in range(len(CHECKS))])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CHECKS]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
