"""Shannon entropy of measurement statistics and its smoothed lower bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import Circuit, Statevector, apply_gate, is_basis_changing, measurement_distribution

SUM_TOL = 1e-6


def check_distribution(probs, tol: float = SUM_TOL) -> np.ndarray:
    """Validate ``probs`` as a probability vector and return it as an array."""
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("distribution must be a non-empty 1-d array")
    if np.any(p < 0):
        raise ValueError(f"negative probability {p.min()!r}")
    total = p.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    return p


def _entropy(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def shannon_entropy(probs) -> float:
    """Entropy in bits, with 0 log 0 = 0."""
    return _entropy(check_distribution(probs))


def state_entropy(state: Statevector) -> float:
    return _entropy(measurement_distribution(state))


def smoothed_entropy_lb(probs, eps: float) -> float:
    """Lower bound on the eps-smoothed entropy of any state measuring to ``probs``.

    A density matrix within trace distance ``eps`` has a diagonal within
    total variation ``eps / 2``, so the minimum Shannon entropy over that
    total-variation ball bounds the smoothed entropy from below. The
    minimizer drains the smallest entries onto the largest one.
    """
    if not 0 <= eps < 2:
        raise ValueError(f"eps must lie in [0, 2), got {eps!r}")
    return _entropy(drain_smallest(check_distribution(probs), eps / 2))


def drain_smallest(p: np.ndarray, budget: float) -> np.ndarray:
    """Move up to ``budget`` mass from the smallest entries onto the largest."""
    q = np.array(p, dtype=float)
    top = int(np.argmax(q))
    order = np.argsort(q, kind="stable")
    order = order[order != top]
    before = np.concatenate([[0.0], np.cumsum(q[order])[:-1]]) if order.size else order
    take = np.clip(budget - before, 0.0, q[order])
    q[order] -= take
    q[top] += take.sum()
    return q


@dataclass(frozen=True)
class EntropyTrace:
    """Entropy after each basis-changing gate; ``values[0]`` is the start state."""

    values: np.ndarray
    gate_arities: np.ndarray

    def increments(self) -> np.ndarray:
        return np.diff(self.values)


def entropy_trace(circuit: Circuit, state: Statevector | None = None) -> EntropyTrace:
    if state is None:
        state = Statevector.zero(circuit.num_qubits)
    values = [state_entropy(state)]
    arities = []
    for g in circuit.gates:
        state = apply_gate(state, g)
        if is_basis_changing(g):
            values.append(state_entropy(state))
            arities.append(g.arity)
    return EntropyTrace(np.array(values), np.array(arities, dtype=np.int64))
