import math

import numpy as np
import pytest

from qtradeoff import entropy as en
from qtradeoff import state as st
from conftest import random_gate
from oracles import entropy_bits, grid_min_entropy, vertex_min_entropy


def phi_delta_probs(delta, K):
    return np.r_[(1 - delta) ** 2, np.full(K, (2 * delta - delta**2) / K)]


def test_shannon_examples():
    assert en.shannon_entropy(np.full(16, 1 / 16)) == pytest.approx(4.0)
    assert en.shannon_entropy([0, 1, 0]) == 0.0
    assert en.shannon_entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5)


def test_shannon_errors():
    with pytest.raises(ValueError):
        en.shannon_entropy([0.5, -0.1, 0.6])
    with pytest.raises(ValueError):
        en.shannon_entropy([0.5, 0.6])


def test_state_entropy():
    assert en.state_entropy(st.Statevector.zero(3)) == 0
    s = st.run_circuit(st.Circuit(3, [st.hadamard(q) for q in range(3)]))
    assert en.state_entropy(s) == pytest.approx(3.0)


def test_phi_delta_entropy():
    p = phi_delta_probs(0.25, 1024)
    # direct summation of -p log p over the two probability levels
    want = -(0.5625 * math.log2(0.5625)) - 0.4375 * math.log2(0.4375 / 1024)
    assert en.shannon_entropy(p) == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(5.37, abs=0.01)


def test_smoothed_examples():
    d = [0.5, 0.25, 0.25]
    assert en.smoothed_entropy_lb(d, 0) == pytest.approx(1.5)
    assert en.smoothed_entropy_lb(d, 1.0) == pytest.approx(0.0, abs=1e-12)
    # tail fully removable once eps >= 4 (1 - max p)
    assert en.smoothed_entropy_lb([0.8, 0.1, 0.1], 4 * 0.2) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        en.smoothed_entropy_lb(d, 2.0)
    with pytest.raises(ValueError):
        en.smoothed_entropy_lb(d, -0.1)


def test_smoothed_phi_delta_value():
    delta, K = 0.01, 1024
    p = phi_delta_probs(delta, K)
    # closed form: moving 0.01 removes whole tail entries then a partial one
    e = (2 * delta - delta**2) / K
    whole = int(0.01 // e)
    part = e - (0.01 - whole * e)
    rest = np.r_[(1 - delta) ** 2 + 0.01, np.full(K - whole - 1, e), part]
    assert en.smoothed_entropy_lb(p, 0.02) == pytest.approx(entropy_bits(rest), abs=1e-9)


@pytest.mark.parametrize(
    "d", [(0.5, 0.3, 0.2), (0.6, 0.25, 0.15), (0.334, 0.333, 0.333), (0.9, 0.07, 0.03)]
)
@pytest.mark.parametrize("eps", [0.0, 0.02, 0.1, 0.3, 0.6])
def test_greedy_matches_grid(d, eps):
    assert en.smoothed_entropy_lb(d, eps) == pytest.approx(grid_min_entropy(d, eps), abs=1e-9)


def test_greedy_matches_vertex_enumeration(rng):
    for _ in range(12):
        n = int(rng.integers(2, 7))
        d = rng.dirichlet(np.ones(n))
        for eps in (0.05, 0.2, 0.7):
            assert en.smoothed_entropy_lb(d, eps) == pytest.approx(vertex_min_entropy(d, eps), abs=1e-9)


def test_smoothed_monotone_in_eps(rng):
    for _ in range(20):
        d = rng.dirichlet(np.ones(int(rng.integers(2, 40))) * 0.5)
        vals = [en.smoothed_entropy_lb(d, e) for e in np.linspace(0, 1.99, 60)]
        assert np.all(np.diff(vals) <= 1e-12)
        assert en.smoothed_entropy_lb(d, 1e-9) == pytest.approx(en.shannon_entropy(d), abs=1e-6)


def test_drain_keeps_mass(rng):
    d = rng.dirichlet(np.ones(10))
    q = en.drain_smallest(d, 0.2)
    assert q.sum() == pytest.approx(1)
    assert np.all(q >= 0)
    assert 0.5 * np.abs(q - d).sum() == pytest.approx(0.2)


def test_trace_examples():
    tr = en.entropy_trace(st.Circuit(3, [st.toffoli(0, 1, 2)] * 4))
    assert tr.values.tolist() == [0.0] and tr.gate_arities.size == 0
    tr = en.entropy_trace(st.Circuit(1, [st.hadamard(0)]))
    np.testing.assert_allclose(tr.values, [0, 1])
    assert tr.gate_arities.tolist() == [1]


def _random_circuit(rng, n, length):
    return st.Circuit(n, [random_gate(rng, n) for _ in range(length)])


def test_trace_increment_bound(rng):
    for _ in range(40):
        tr = en.entropy_trace(_random_circuit(rng, 8, 50))
        assert tr.values[0] == 0
        assert np.all(tr.increments() <= 2 * tr.gate_arities + 1e-9)


def test_preserving_gate_keeps_entropy_at_insertion(rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        c = _random_circuit(rng, n, 10)
        s = st.run_circuit(c)
        out = st.apply_gate(s, random_gate(rng, n, preserving_only=True))
        assert en.state_entropy(out) == pytest.approx(en.state_entropy(s), abs=1e-9)


def test_appended_preserving_gates_leave_trace(rng):
    for _ in range(30):
        n = int(rng.integers(2, 7))
        c = _random_circuit(rng, n, 20)
        tail = [random_gate(rng, n, preserving_only=True) for _ in range(5)]
        a = en.entropy_trace(c)
        b = en.entropy_trace(st.Circuit(n, list(c.gates) + tail))
        np.testing.assert_allclose(a.values, b.values, atol=1e-9)


def test_interior_insertion_can_change_later_values():
    base = st.Circuit(2, [st.hadamard(0), st.hadamard(0)])
    spliced = st.Circuit(2, [st.hadamard(0), st.cnot(0, 1), st.hadamard(0)])
    np.testing.assert_allclose(en.entropy_trace(base).values, [0, 1, 0], atol=1e-12)
    np.testing.assert_allclose(en.entropy_trace(spliced).values, [0, 1, 2], atol=1e-12)
