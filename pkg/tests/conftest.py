import math
import sys

import numpy as np
import pytest

from qtradeoff import state as st


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return st.Statevector(n, v / np.linalg.norm(v))


def random_gate(rng, n, preserving_only=False):
    """A random gate of any built-in kind on an n-qubit register."""
    kinds = ["x", "cnot", "toffoli", "perm", "phase"]
    if not preserving_only:
        kinds += ["h", "rot", "crot", "mux"]
    kinds = [k for k in kinds if not (k in ("cnot", "crot") and n < 2) and not (k == "toffoli" and n < 3)]
    kind = kinds[rng.integers(len(kinds))]
    qs = [int(q) for q in rng.permutation(n)]
    if kind == "x":
        return st.pauli_x(qs[0])
    if kind == "h":
        return st.hadamard(qs[0])
    if kind == "rot":
        return st.rotation(qs[0], rng.uniform(-math.pi, math.pi))
    if kind == "cnot":
        return st.cnot(qs[0], qs[1])
    if kind == "toffoli":
        return st.toffoli(qs[0], qs[1], qs[2])
    if kind == "crot":
        return st.controlled_rotation([qs[0]], qs[1], rng.uniform(-math.pi, math.pi))
    if kind == "mux":
        nc = int(rng.integers(0, min(n - 1, 3) + 1))
        return st.controlled_rotation(qs[:nc], qs[nc], rng.uniform(0, math.pi), rng.random(1 << nc) < 0.5)
    width = int(rng.integers(1, min(n, 3) + 1))
    sub = qs[:width]
    if kind == "perm":
        return st.basis_permutation(sub, rng.permutation(1 << width), np.exp(1j * rng.uniform(0, 6.3, 1 << width)))
    return st.phase_gate(sub, np.exp(1j * rng.uniform(0, 6.3, 1 << width)))


def dense_unitary(gate, n):
    """Full 2**n matrix of ``gate`` built by brute force from its local matrix."""
    m = gate.matrix()
    qs = list(gate.qubits)
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        local = 0
        for q in qs:
            local = (local << 1) | bits[q]
        for out_local in range(m.shape[0]):
            amp = m[out_local, local]
            if amp == 0:
                continue
            ob = list(bits)
            for pos, q in enumerate(qs):
                ob[q] = (out_local >> (len(qs) - 1 - pos)) & 1
            row = sum(b << (n - 1 - q) for q, b in enumerate(ob))
            full[row, col] += amp
    return full


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
