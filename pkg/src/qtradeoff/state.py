"""Dense statevector simulation with basis-changing gate accounting.

Qubit ``q`` of an ``n``-qubit register is bit ``n - 1 - q`` of the basis
index, so qubit 0 is the most significant and ``|y>|z>`` has index
``y * 2**len(z) + z``.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels

ATOL = 1e-10


class GateKind(enum.Enum):
    PAULI_X = "PauliX"
    CNOT = "CNot"
    TOFFOLI = "Toffoli"
    BASIS_PERMUTATION = "BasisPermutation"
    HADAMARD = "Hadamard"
    ROTATION = "Rotation"
    CONTROLLED_ROTATION = "ControlledRotation"
    ORACLE = "Oracle"


_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def rotation_matrix(theta: float) -> np.ndarray:
    """R(theta)|0> = cos(theta)|0> + sin(theta)|1>."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


@dataclass(frozen=True)
class Statevector:
    """Normalized amplitude vector over ``num_qubits`` qubits."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != 1 << self.num_qubits:
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, num_qubits: int) -> "Statevector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "Statevector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "Statevector":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        n = int(round(math.log2(amps.shape[0]))) if amps.shape[0] else -1
        if n < 0 or 1 << n != amps.shape[0]:
            raise ValueError(f"length {amps.shape[0]} is not a power of two")
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits


@dataclass(frozen=True, eq=False)
class Gate:
    """A gate on named qubits.

    ``controls`` condition ``targets``; for CNot/Toffoli/ControlledRotation
    ``active`` lists, over the control register value (first control most
    significant), whether the target operation fires. For BasisPermutation
    and Oracle, ``targets`` is the whole register the gate acts on.
    """

    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    theta: float = 0.0
    active: np.ndarray | None = field(default=None, repr=False)
    table: np.ndarray | None = field(default=None, repr=False)
    phases: np.ndarray | None = field(default=None, repr=False)
    oracle: object | None = field(default=None, repr=False)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def matrix(self) -> np.ndarray:
        """Local unitary over ``self.qubits`` (first qubit most significant)."""
        k = self.kind
        if k is GateKind.HADAMARD:
            return _H.copy()
        if k is GateKind.PAULI_X:
            return _X.copy()
        if k is GateKind.ROTATION:
            return rotation_matrix(self.theta)
        if k in (GateKind.CNOT, GateKind.TOFFOLI, GateKind.CONTROLLED_ROTATION):
            u = _X if k is not GateKind.CONTROLLED_ROTATION else rotation_matrix(self.theta)
            nc = len(self.controls)
            m = np.zeros((1 << (nc + 1), 1 << (nc + 1)), dtype=np.complex128)
            for c in range(1 << nc):
                blk = u if self.active[c] else np.eye(2)
                m[2 * c : 2 * c + 2, 2 * c : 2 * c + 2] = blk
            return m
        table, phases = self.local_permutation()
        m = np.zeros((len(table), len(table)), dtype=np.complex128)
        m[table, np.arange(len(table))] = phases
        return m

    def local_permutation(self) -> tuple[np.ndarray, np.ndarray]:
        """(table, phases) with |j> -> phases[j] |table[j]> on ``self.targets``."""
        if self.kind is GateKind.BASIS_PERMUTATION:
            return self.table, self.phases
        if self.kind is GateKind.ORACLE:
            return self.oracle.local_table(len(self.targets) - 1), np.ones(
                1 << len(self.targets), dtype=np.complex128
            )
        raise TypeError(f"{self.kind.value} is not a permutation gate")


def _check_qubits(qubits: Sequence[int]) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    if len(set(qs)) != len(qs):
        raise ValueError(f"duplicate qubit indices {qs}")
    if any(q < 0 for q in qs):
        raise ValueError(f"negative qubit index in {qs}")
    return qs


def hadamard(q: int) -> Gate:
    return Gate(GateKind.HADAMARD, _check_qubits([q]))


def pauli_x(q: int) -> Gate:
    return Gate(GateKind.PAULI_X, _check_qubits([q]))


def rotation(q: int, theta: float) -> Gate:
    return Gate(GateKind.ROTATION, _check_qubits([q]), theta=float(theta))


def _all_ones(nc: int) -> np.ndarray:
    active = np.zeros(1 << nc, dtype=bool)
    active[-1] = True
    return active


def cnot(control: int, target: int) -> Gate:
    qs = _check_qubits([control, target])
    return Gate(GateKind.CNOT, qs[1:], controls=qs[:1], active=_all_ones(1))


def toffoli(c1: int, c2: int, target: int) -> Gate:
    qs = _check_qubits([c1, c2, target])
    return Gate(GateKind.TOFFOLI, qs[2:], controls=qs[:2], active=_all_ones(2))


def controlled_rotation(
    controls: Sequence[int], target: int, theta: float, active: Iterable[bool] | None = None
) -> Gate:
    """R(theta) on ``target`` when the control register value is active.

    By default only the all-ones control value is active. Passing a table
    gives a multiplexed rotation that fires on any chosen control values.
    """
    qs = _check_qubits(list(controls) + [target])
    nc = len(qs) - 1
    act = _all_ones(nc) if active is None else np.asarray(list(active), dtype=bool)
    if act.shape != (1 << nc,):
        raise ValueError(f"active table needs {1 << nc} entries, got {act.shape}")
    return Gate(
        GateKind.CONTROLLED_ROTATION, qs[nc:], controls=qs[:nc], theta=float(theta), active=act
    )


def basis_permutation(
    qubits: Sequence[int], table: Sequence[int], phases: Sequence[complex] | None = None
) -> Gate:
    """|j> -> phases[j] |table[j]> on the register ``qubits``."""
    qs = _check_qubits(qubits)
    tab = np.asarray(table, dtype=np.int64)
    if tab.shape != (1 << len(qs),):
        raise ValueError(f"table needs {1 << len(qs)} entries, got {tab.shape}")
    if not np.array_equal(np.sort(tab), np.arange(len(tab))):
        raise ValueError("table is not a permutation")
    if phases is None:
        ph = np.ones(len(tab), dtype=np.complex128)
    else:
        ph = np.asarray(phases, dtype=np.complex128)
        if ph.shape != tab.shape or np.any(np.abs(np.abs(ph) - 1) > ATOL):
            raise ValueError("phases must be unit-modulus, one per basis state")
    return Gate(GateKind.BASIS_PERMUTATION, qs, table=tab, phases=ph)


def phase_gate(qubits: Sequence[int], phases: Sequence[complex]) -> Gate:
    """Diagonal gate sum_i phases[i] |i><i|."""
    return basis_permutation(qubits, np.arange(1 << len(qubits)), phases)


def scan_is_basis_changing(matrix: np.ndarray, tol: float = ATOL) -> bool:
    """Brute-force column scan: does any column have two nonzero entries?"""
    nonzero = np.abs(matrix) > tol
    return bool(np.any(nonzero.sum(axis=0) > 1))


def is_basis_changing(gate: Gate) -> bool:
    k = gate.kind
    if k in (
        GateKind.PAULI_X,
        GateKind.CNOT,
        GateKind.TOFFOLI,
        GateKind.BASIS_PERMUTATION,
        GateKind.ORACLE,
    ):
        return False
    if k is GateKind.HADAMARD:
        return True
    # rotations: off-diagonal weight |sin(theta)|
    if k is GateKind.CONTROLLED_ROTATION and not np.any(gate.active):
        return False
    return abs(math.sin(gate.theta)) > ATOL


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q >= self.num_qubits for q in g.qubits):
                raise ValueError(
                    f"{g.kind.value} on qubits {g.qubits} exceeds register of {self.num_qubits}"
                )

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(max(self.num_qubits, other.num_qubits), self.gates + other.gates)

    def layer_boundaries(self) -> list[tuple[int, int]]:
        """[start, stop) gate-index spans of each basis-changing layer."""
        spans: list[tuple[int, int]] = []
        busy: set[int] | None = None
        for idx, g in enumerate(self.gates):
            if not is_basis_changing(g):
                busy = None
                continue
            qs = set(g.qubits)
            if busy is not None and not (busy & qs):
                busy |= qs
                spans[-1] = (spans[-1][0], idx + 1)
            else:
                busy = qs
                spans.append((idx, idx + 1))
        return spans


def count_basis_changing(circuit: Circuit) -> int:
    return sum(1 for g in circuit.gates if is_basis_changing(g))


def count_layers(circuit: Circuit) -> int:
    """Number of maximal groups of disjoint basis-changing gates.

    A basis-preserving gate always closes the current group.
    """
    return len(circuit.layer_boundaries())


def _bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def _local_values(n: int, qubits: Sequence[int]) -> np.ndarray:
    """Value of the sub-register ``qubits`` for every full basis index."""
    idx = np.arange(1 << n, dtype=np.int64)
    val = np.zeros_like(idx)
    for q in qubits:
        val = (val << 1) | ((idx >> (n - 1 - q)) & 1)
    return val


def full_permutation(n: int, qubits: Sequence[int], table: np.ndarray) -> np.ndarray:
    """Lift a local permutation on ``qubits`` to one over all 2**n indices."""
    idx = np.arange(1 << n, dtype=np.int64)
    local = _local_values(n, qubits)
    new_local = table[local]
    out = idx.copy()
    for pos, q in enumerate(qubits):
        shift = len(qubits) - 1 - pos
        b = _bit(n, q)
        out = (out & ~b) | (((new_local >> shift) & 1) * b)
    return out


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    n = state.num_qubits
    if any(q >= n for q in gate.qubits):
        raise ValueError(f"{gate.kind.value} on qubits {gate.qubits} exceeds {n} qubits")
    _check_qubits(gate.qubits)
    psi = state.amplitudes.copy()
    k = gate.kind
    if k in (GateKind.BASIS_PERMUTATION, GateKind.ORACLE):
        table, phases = gate.local_permutation()
        perm = full_permutation(n, gate.targets, table)
        local = _local_values(n, gate.targets)
        psi = kernels.permute_phase(psi, perm, np.ascontiguousarray(phases[local]))
    else:
        if k is GateKind.HADAMARD:
            u = _H
        elif k is GateKind.ROTATION or k is GateKind.CONTROLLED_ROTATION:
            u = rotation_matrix(gate.theta)
        else:
            u = _X
        cond = None
        if gate.active is not None and not gate.controls:
            if not gate.active[0]:
                return _trusted(n, psi)
        elif gate.controls:
            cond = np.ascontiguousarray(
                gate.active[_local_values(n, gate.controls)], dtype=np.uint8
            )
        kernels.apply_1q(psi, _bit(n, gate.targets[0]), u, cond)
    return _trusted(n, psi)


def _trusted(n: int, psi: np.ndarray) -> Statevector:
    sv = object.__new__(Statevector)
    psi.setflags(write=False)
    object.__setattr__(sv, "num_qubits", n)
    object.__setattr__(sv, "amplitudes", psi)
    return sv


def run_circuit(circuit: Circuit, state: Statevector | None = None) -> Statevector:
    """Apply every gate of ``circuit`` starting from ``state`` (default |0...0>)."""
    if state is None:
        state = Statevector.zero(circuit.num_qubits)
    for g in circuit.gates:
        state = apply_gate(state, g)
    return state


def measurement_distribution(state: Statevector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def _same_dim(a: Statevector, b: Statevector):
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def l2_distance(a: Statevector, b: Statevector) -> float:
    _same_dim(a, b)
    return float(np.linalg.norm(a.amplitudes - b.amplitudes))


def trace_distance_pure(a: Statevector, b: Statevector) -> float:
    """Trace norm of |a><a| - |b><b| (sum of singular values), in [0, 2]."""
    _same_dim(a, b)
    overlap = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return 2.0 * math.sqrt(max(0.0, 1.0 - overlap))


class CapacityError(RuntimeError):
    """Requested register exceeds the configured qubit cap."""


def qubit_cap() -> int:
    """Largest register the simulator will allocate (env ``QTRADEOFF_QUBIT_CAP``)."""
    return int(os.environ.get("QTRADEOFF_QUBIT_CAP", "22"))
