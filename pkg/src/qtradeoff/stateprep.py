"""Approximate state generation with few basis-changing gates.

The pipeline strips phases (a free diagonal gate), drops low-probability
outcomes, packs the survivors into ``k`` qubits with a free permutation and
builds the packed nonnegative state one qubit at a time with rotations whose
angles are truncated to ``ell`` binary digits of pi.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .entropy import _entropy
from .state import (
    CapacityError,
    Circuit,
    Gate,
    Statevector,
    basis_permutation,
    controlled_rotation,
    count_basis_changing,
    count_layers,
    l2_distance,
    phase_gate,
    qubit_cap,
    rotation,
    run_circuit,
)

# slack when truncating theta/pi so exactly dyadic angles survive round-off
_DYADIC_SLACK = 1e-9
# slack on the log-threshold so an outcome sitting exactly on it is kept
_LOG_SLACK = 1e-12


@dataclass(frozen=True)
class TargetState:
    probs: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        a = np.mod(np.asarray(self.phases, dtype=float), 2 * math.pi)
        if p.shape != a.shape or p.ndim != 1 or p.size == 0:
            raise ValueError("probs and phases must be equal-length 1-d arrays")
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-9:
            raise ValueError("probs must be nonnegative and sum to 1")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "phases", a)

    @classmethod
    def from_amplitudes(cls, amps) -> "TargetState":
        amps = np.asarray(amps, dtype=np.complex128)
        p = np.abs(amps) ** 2
        p = p / p.sum()
        phases = np.where(p > 0, np.angle(amps), 0.0)
        return cls(p, phases)

    @classmethod
    def from_state(cls, state: Statevector) -> "TargetState":
        return cls.from_amplitudes(state.amplitudes)

    @property
    def num_outcomes(self) -> int:
        return self.probs.size

    @property
    def num_qubits(self) -> int:
        n = self.probs.size
        return max(0, math.ceil(math.log2(n))) if n > 1 else 0

    def amplitudes(self, num_qubits: int | None = None) -> np.ndarray:
        n = self.num_qubits if num_qubits is None else num_qubits
        if 1 << n < self.num_outcomes:
            raise ValueError(f"{self.num_outcomes} outcomes do not fit in {n} qubits")
        out = np.zeros(1 << n, dtype=np.complex128)
        out[: self.num_outcomes] = np.sqrt(self.probs) * np.exp(1j * self.phases)
        return out

    def entropy(self) -> float:
        return _entropy(self.probs)


@dataclass(frozen=True)
class TruncationPlan:
    """Kept outcomes ``kept[c]`` for dense code ``c`` (descending probability)."""

    lam: float
    kept: np.ndarray
    tail_mass: float
    k: int
    entropy: float

    @property
    def kept_set(self) -> frozenset:
        return frozenset(int(i) for i in self.kept)

    def truncation_distance(self) -> float:
        """Exact distance between the target and its renormalized truncation."""
        p = self.tail_mass
        return math.sqrt(2 * p / (1 + math.sqrt(max(0.0, 1 - p))))


def plan_truncation(target: TargetState, eps: float, lam: float | None = None) -> TruncationPlan:
    """Keep outcomes with p_i >= 2**(-lam * H); ``lam`` defaults to 2/eps."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    lam = 2.0 / eps if lam is None else float(lam)
    p = target.probs
    h = target.entropy()
    nz = p > 0
    logp = np.full(p.shape, -np.inf)
    logp[nz] = np.log2(p[nz])
    keep = nz & (logp >= -lam * h - _LOG_SLACK)
    if h == 0 or not keep.any():
        keep = np.zeros(p.shape, dtype=bool)
        keep[int(np.argmax(p))] = True
    idx = np.flatnonzero(keep)
    kept = idx[np.lexsort((idx, -p[idx]))]
    tail = float(p[~keep].sum())
    k = math.ceil(math.log2(len(kept))) if len(kept) > 1 else 0
    return TruncationPlan(lam, kept, tail, k, h)


def minimal_lambda(target: TargetState, eps: float) -> float:
    """Smallest lam >= 2/eps whose truncation costs at most eps/2.

    Only the exponents -log2(p_i)/H of the outcomes are candidates, so the
    kept sets for shrinking eps are nested.
    """
    lam = 2.0 / eps
    h = target.entropy()
    if h == 0:
        return lam
    p = target.probs
    cands = np.unique(-np.log2(p[p > 0]) / h)
    cands = cands[cands > lam]
    if cands.size == 0:
        return lam
    # truncation distance shrinks as lam grows: bisect for the first fit
    lo, hi = 0, cands.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if plan_truncation(target, eps, lam=cands[mid]).truncation_distance() <= eps / 2:
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


@dataclass(frozen=True)
class SynthesisPlan:
    """Angles for each stage ``t``: arrays indexed by prefix value ``y``.

    ``bits[t][y, s-1]`` is the s-th binary digit of theta_y / pi.
    """

    k: int
    ell: int
    prefix_mass: list
    theta: list
    bits: list
    theta_q: list

    @property
    def nominal_count(self) -> int:
        return self.k * self.ell


def plan_synthesis(q, ell: int) -> SynthesisPlan:
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValueError("q contains negative mass")
    if ell < 1:
        raise ValueError("ell must be >= 1")
    size = q.size
    k = int(round(math.log2(size))) if size else -1
    if k < 0 or 1 << k != size:
        raise ValueError(f"q must have 2**k entries, got {size}")
    if k == 0 and q.size and q[0] == 0:
        raise ValueError("empty distribution")
    q = q / q.sum()
    masses, thetas, bits, thetas_q = [], [], [], []
    scale = 1 << ell
    for t in range(k):
        rows = q.reshape(1 << t, 2, -1).sum(axis=2)
        qy = rows.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(qy > 0, rows[:, 0] / qy, 1.0)
        theta = np.arccos(np.sqrt(np.clip(ratio, 0.0, 1.0)))
        m = np.floor(theta / math.pi * scale + _DYADIC_SLACK).astype(np.int64)
        m[qy <= 0] = 0
        b = (m[:, None] >> (ell - 1 - np.arange(ell))) & 1
        masses.append(qy)
        thetas.append(theta)
        bits.append(b.astype(np.uint8))
        thetas_q.append(m * math.pi / scale)
    return SynthesisPlan(k, ell, masses, thetas, bits, thetas_q)


def stage_gates(plan: SynthesisPlan, t: int, offset: int = 0) -> list[Gate]:
    """Gates for stage ``t``: one prefix-conditioned R(pi/2**s) per digit s."""
    target = offset + t
    controls = list(range(offset, offset + t))
    gates = []
    for s in range(1, plan.ell + 1):
        active = plan.bits[t][:, s - 1].astype(bool)
        if not active.any():
            continue
        angle = math.pi / (1 << s)
        if t == 0:
            gates.append(rotation(target, angle))
        else:
            gates.append(controlled_rotation(controls, target, angle, active))
    return gates


def circuit_from_plan(plan: SynthesisPlan, num_qubits: int | None = None, stages: int | None = None) -> Circuit:
    """Rotation circuit on the last ``k`` qubits of a ``num_qubits`` register."""
    n = plan.k if num_qubits is None else num_qubits
    offset = n - plan.k
    stop = plan.k if stages is None else stages
    gates = [g for t in range(stop) for g in stage_gates(plan, t, offset)]
    return Circuit(n, gates)


def synthesize_nonneg(q, ell: int) -> Circuit:
    """Circuit mapping |0..0> close to sum_x sqrt(q_x)|x> over k = log2(len(q)) qubits."""
    return circuit_from_plan(plan_synthesis(q, ell))


def precision_bits(k: int, eps: float) -> int:
    """Digits so that k * pi / 2**ell <= eps / 2."""
    if k == 0:
        return 0
    return max(1, math.ceil(math.log2(2 * math.pi * k / eps)))


@dataclass(frozen=True)
class PrepReport:
    requested_eps: float
    achieved_distance: float
    basis_changing_count: int
    nominal_count: int
    layer_count: int
    lam: float
    lambda_raised: bool
    k: int
    ell: int
    ell_coarse: int
    entropy_H: float
    num_qubits: int
    kept_count: int
    tail_mass: float
    truncation_distance: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def synthesize(target: TargetState, eps: float, cap: int | None = None) -> tuple[Circuit, PrepReport]:
    """Build a circuit whose output is within ``eps`` (l2) of ``target``.

    Half the budget goes to truncation and half to angle quantization. The
    default threshold exponent is lam = 2/eps; when the dropped tail would
    still cost more than eps/2, lam is raised to the smallest value that fits.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    n = target.num_qubits
    cap = qubit_cap() if cap is None else cap
    if n > cap:
        raise CapacityError(f"target needs {n} qubits, cap is {cap}")

    tplan = plan_truncation(target, eps)
    raised = tplan.truncation_distance() > eps / 2
    if raised:
        tplan = plan_truncation(target, eps, lam=minimal_lambda(target, eps))

    k = tplan.k
    ell = precision_bits(k, eps)
    gates: list[Gate] = []
    if k > 0:
        q = np.zeros(1 << k)
        q[: len(tplan.kept)] = target.probs[tplan.kept]
        splan = plan_synthesis(q, ell)
        gates += circuit_from_plan(splan, n).gates

    # code c lives in the low k qubits; send it back to its original index
    table = _unpack_table(tplan.kept, n)
    if not np.array_equal(table, np.arange(1 << n)):
        gates.append(basis_permutation(range(n), table))
    if np.any(target.phases != 0):
        phases = np.ones(1 << n, dtype=np.complex128)
        phases[: target.num_outcomes] = np.exp(1j * target.phases)
        gates.append(phase_gate(range(n), phases))

    circuit = Circuit(n, gates)
    achieved = verify_prep(circuit, target)
    report = PrepReport(
        requested_eps=float(eps),
        achieved_distance=achieved,
        basis_changing_count=count_basis_changing(circuit),
        nominal_count=k * ell,
        layer_count=count_layers(circuit),
        lam=tplan.lam,
        lambda_raised=raised,
        k=k,
        ell=ell,
        ell_coarse=math.ceil(math.log2(2 * k / eps)) if k else 0,
        entropy_H=tplan.entropy,
        num_qubits=n,
        kept_count=len(tplan.kept),
        tail_mass=tplan.tail_mass,
        truncation_distance=tplan.truncation_distance(),
    )
    return circuit, report


def _unpack_table(kept: np.ndarray, n: int) -> np.ndarray:
    dim = 1 << n
    table = np.empty(dim, dtype=np.int64)
    table[: len(kept)] = kept
    rest = np.setdiff1d(np.arange(dim), kept, assume_unique=True)
    table[len(kept):] = rest
    return table


def verify_prep(circuit: Circuit, target: TargetState) -> float:
    """l2 distance between the circuit's output on |0..0> and ``target``."""
    if target.num_outcomes > 1 << circuit.num_qubits:
        raise ValueError(
            f"target has {target.num_outcomes} outcomes, circuit covers {1 << circuit.num_qubits}"
        )
    out = run_circuit(circuit)
    want = Statevector(circuit.num_qubits, target.amplitudes(circuit.num_qubits))
    return l2_distance(out, want)
