"""Unstructured search in the oracle model, with query and layer accounting.

The hybrid algorithm splits the ``n`` input bits into ``h`` blocks of ``b``
bits, runs Grover search over the blocks (a block oracle costs ``b``
queries) and then scans the chosen block classically. It is simulated in
the ``h``-dimensional block register; workspace registers are restored at
every block boundary, so that picture is exact there.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .state import (
    Circuit,
    Gate,
    GateKind,
    Statevector,
    apply_gate,
    count_layers,
    hadamard,
    pauli_x,
    phase_gate,
)


@dataclass(frozen=True, eq=False)
class OracleInstance:
    """Hidden input string ``x``; ``O_x |i, b> = |i, b xor x_i>``."""

    x: np.ndarray
    tag: str = "unique-one"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8)
        if x.ndim != 1 or np.any(x > 1):
            raise ValueError("x must be a 0/1 string")
        ones = int(x.sum())
        if self.tag == "unique-one" and ones != 1:
            raise ValueError(f"unique-one instance has {ones} marked positions")
        if self.tag == "all-zero" and ones != 0:
            raise ValueError("all-zero instance has marked positions")
        object.__setattr__(self, "x", x)

    @classmethod
    def unique_one(cls, n: int, marked: int) -> "OracleInstance":
        if not 0 <= marked < n:
            raise ValueError(f"marked index {marked} outside [0, {n})")
        x = np.zeros(n, dtype=np.uint8)
        x[marked] = 1
        return cls(x, "unique-one")

    @classmethod
    def all_zero(cls, n: int) -> "OracleInstance":
        return cls(np.zeros(n, dtype=np.uint8), "all-zero")

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def marked(self) -> int | None:
        hits = np.flatnonzero(self.x)
        return int(hits[0]) if hits.size else None

    def bit(self, i: int) -> int:
        return int(self.x[i]) if 0 <= i < self.n else 0

    def local_table(self, index_qubits: int) -> np.ndarray:
        """Permutation of |i, b> (flag least significant) over the gate's qubits."""
        j = np.arange(1 << (index_qubits + 1), dtype=np.int64)
        i = j >> 1
        padded = np.zeros(1 << index_qubits, dtype=np.int64)
        m = min(self.n, padded.size)
        padded[:m] = self.x[:m]
        return j ^ padded[i]


@dataclass
class QueryCounter:
    count: int = 0


def oracle_gate(inst: OracleInstance, index_qubits: Sequence[int], flag: int) -> Gate:
    index_qubits = tuple(int(q) for q in index_qubits)
    if flag in index_qubits:
        raise ValueError("flag qubit overlaps the index register")
    return Gate(GateKind.ORACLE, index_qubits + (int(flag),), oracle=inst)


def oracle_apply(
    state: Statevector,
    inst: OracleInstance,
    index_qubits: Sequence[int],
    flag: int,
    counter: QueryCounter | None = None,
) -> Statevector:
    out = apply_gate(state, oracle_gate(inst, index_qubits, flag))
    if counter is not None:
        counter.count += 1
    return out


def run_counted(circuit: Circuit, counter: QueryCounter, state: Statevector | None = None) -> Statevector:
    """Simulate ``circuit``, adding one query per Oracle gate to ``counter``."""
    if state is None:
        state = Statevector.zero(circuit.num_qubits)
    for g in circuit.gates:
        state = apply_gate(state, g)
        if g.kind is GateKind.ORACLE:
            counter.count += 1
    return state


@dataclass(frozen=True)
class RunReport:
    n: int
    queries: int
    layers: int
    success_probability: float
    mode: str
    iterations: int
    h: int = 0
    block_size: int = 0
    T_target: int = 0

    @property
    def product_over_n(self) -> float:
        return self.queries * self.layers / self.n

    def as_dict(self) -> dict:
        d = asdict(self)
        d["product_over_n"] = self.product_over_n
        return d


def _log2_ceil(n: int) -> int:
    return max(0, (n - 1).bit_length())


# --- qubit-level circuits -------------------------------------------------


@dataclass(frozen=True)
class SearchLayout:
    """Registers for block search: block index, offset within block, flag."""

    block_qubits: int
    offset_qubits: int

    @property
    def num_qubits(self) -> int:
        return self.block_qubits + self.offset_qubits + 1

    @property
    def block(self) -> list[int]:
        return list(range(self.block_qubits))

    @property
    def offset(self) -> list[int]:
        return list(range(self.block_qubits, self.block_qubits + self.offset_qubits))

    @property
    def index(self) -> list[int]:
        return self.block + self.offset

    @property
    def flag(self) -> int:
        return self.num_qubits - 1


def search_segments(
    inst: OracleInstance, block_qubits: int, offset_qubits: int, iterations: int
) -> list[tuple[str, Circuit]]:
    """Block search as alternating ('block', ...) and ('layer', ...) segments.

    Each block oracle walks the offset register through every position of
    the addressed block and queries with the flag in |->, so the block picks
    up the phase (-1)**(OR of its bits).
    """
    lay = SearchLayout(block_qubits, offset_qubits)
    nq = lay.num_qubits
    b = 1 << offset_qubits

    def bank() -> Circuit:
        return Circuit(nq, [hadamard(q) for q in lay.block])

    def block_oracle() -> Circuit:
        gates: list[Gate] = []
        loaded = 0
        for j in range(b):
            gates += _xor_offset(lay, loaded ^ j)
            loaded = j
            gates.append(oracle_gate(inst, lay.index, lay.flag))
        gates += _xor_offset(lay, loaded)
        return Circuit(nq, gates)

    reflect = np.full(1 << block_qubits, -1.0 + 0j)
    reflect[0] = 1.0
    segments = [
        ("block", Circuit(nq, [pauli_x(lay.flag)])),
        ("layer", Circuit(nq, bank().gates + (hadamard(lay.flag),))),
    ]
    for _ in range(iterations):
        segments.append(("block", block_oracle()))
        segments.append(("layer", bank()))
        segments.append(("block", Circuit(nq, [phase_gate(lay.block, reflect)])))
        segments.append(("layer", bank()))
    return segments


def _xor_offset(lay: SearchLayout, value: int) -> list[Gate]:
    gates = []
    for pos, q in enumerate(lay.offset):
        if (value >> (lay.offset_qubits - 1 - pos)) & 1:
            gates.append(pauli_x(q))
    return gates


def search_circuit(inst: OracleInstance, block_qubits: int, offset_qubits: int, iterations: int) -> Circuit:
    segs = search_segments(inst, block_qubits, offset_qubits, iterations)
    nq = segs[0][1].num_qubits
    return Circuit(nq, [g for _, c in segs for g in c.gates])


def _block_marginal(state: Statevector, lay: SearchLayout) -> np.ndarray:
    probs = np.abs(state.amplitudes) ** 2
    return probs.reshape(1 << lay.block_qubits, -1).sum(axis=1)


def standard_iterations(size: int) -> int:
    return int(math.floor(math.pi / 4 * math.sqrt(size)))


def grover_standard(n: int, marked: int = 0) -> RunReport:
    """Grover search over ``n`` items, padded to the next power of two.

    The iteration count uses the padded size; padded indices are never marked.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        # the promise already names the marked index
        OracleInstance.unique_one(n, marked)
        return RunReport(n=1, queries=0, layers=0, success_probability=1.0, mode="standard", iterations=0, h=1, block_size=1)
    m = _log2_ceil(n)
    k = standard_iterations(1 << m)
    inst = OracleInstance.unique_one(n, marked)
    circuit = search_circuit(inst, m, 0, k)
    counter = QueryCounter()
    state = run_counted(circuit, counter)
    success = float(_block_marginal(state, SearchLayout(m, 0))[marked])
    return RunReport(
        n=n,
        queries=counter.count,
        layers=count_layers(circuit),
        success_probability=success,
        mode="standard",
        iterations=k,
        h=1 << m,
        block_size=1,
    )


def classical_scan(n: int) -> RunReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    return RunReport(n=n, queries=n, layers=0, success_probability=1.0, mode="classical", iterations=0)


# --- hybrid algorithm in the block register -------------------------------


@dataclass(frozen=True)
class HybridConfig:
    n: int
    T_target: int
    h: int
    b: int
    iterations: int
    phase: float | None = None

    @property
    def tuned(self) -> bool:
        return self.phase is not None

    @property
    def queries_per_oracle(self) -> int:
        return 2 * self.b if self.tuned else self.b

    @property
    def layers(self) -> int:
        return 0 if self.h == 1 else 2 * self.iterations + 1


def hybrid_config(n: int, T_target: int) -> HybridConfig:
    """Block count h = ceil((n/T)**2) clamped to [1, n].

    For h in {2, 3} one phase-matched iteration (phase 2*asin(sqrt(h)/2))
    finds the block with certainty; its oracle computes the block's OR into
    an accumulator and uncomputes it, so it costs 2b queries.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if T_target * T_target < n or T_target > n:
        raise ValueError(f"T_target={T_target} outside [sqrt(n), n] for n={n}")
    h = -(-n * n // (T_target * T_target))
    h = min(max(h, 1), n)
    b = -(-n // h)
    if h == 1:
        return HybridConfig(n, T_target, 1, b, 0)
    if h in (2, 3):
        return HybridConfig(n, T_target, h, b, 1, 2 * math.asin(math.sqrt(h) / 2))
    return HybridConfig(n, T_target, h, b, standard_iterations(h))


def _walsh_hadamard(m: int) -> np.ndarray:
    w = np.ones((1, 1))
    h1 = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    for _ in range(m):
        w = np.kron(w, h1)
    return w


def layer_unitary(h: int) -> np.ndarray:
    """Real symmetric unitary taking |0> to the uniform block superposition.

    Walsh-Hadamard when h is a power of two, a Householder reflection otherwise.
    """
    if h & (h - 1) == 0:
        return _walsh_hadamard(_log2_ceil(h))
    s = np.full(h, 1 / math.sqrt(h))
    w = np.zeros(h)
    w[0] = 1.0
    w -= s
    return np.eye(h) - 2 * np.outer(w, w) / (w @ w)


def _block_signs(cfg: HybridConfig, inst: OracleInstance, j: int) -> np.ndarray:
    items = np.arange(cfg.h) * cfg.b + j
    bits = np.array([inst.bit(int(i)) for i in items])
    return 1 - 2 * bits


@dataclass
class _Block:
    queries: int
    apply: Callable


def hybrid_schedule(cfg: HybridConfig, inst: OracleInstance, counter: QueryCounter) -> tuple[list, np.ndarray]:
    """(blocks, layer unitary). Layers sit between consecutive blocks.

    Block-register states have shape (h, 2); the second axis is the
    accumulator qubit used only by the phase-matched oracle.
    """
    h, b = cfg.h, cfg.b
    F = layer_unitary(h)

    def phase_oracle(psi):
        for j in range(b):
            psi = psi * _block_signs(cfg, inst, j)[:, None]
            counter.count += 1
        return psi

    def matched_oracle(psi):
        # compute OR into the accumulator, one query per position
        for j in range(b):
            flip = np.array([inst.bit(B * b + j) for B in range(h)], dtype=bool)
            psi = np.where(flip[:, None], psi[:, ::-1], psi)
            counter.count += 1
        psi = psi.copy()
        psi[:, 1] *= np.exp(1j * cfg.phase)
        for j in range(b):
            flip = np.array([inst.bit(B * b + j) for B in range(h)], dtype=bool)
            psi = np.where(flip[:, None], psi[:, ::-1], psi)
            counter.count += 1
        return psi

    def reflect(psi):
        psi = -psi
        psi[0] *= -1
        return psi

    def matched_reflect(psi):
        psi = psi.copy()
        psi[0] *= np.exp(1j * cfg.phase)
        return psi

    def scan(psi):
        counter.count += b
        return psi

    blocks = [_Block(0, lambda psi: psi)]
    oracle = matched_oracle if cfg.tuned else phase_oracle
    diffuse = matched_reflect if cfg.tuned else reflect
    for _ in range(cfg.iterations):
        blocks.append(_Block(cfg.queries_per_oracle, oracle))
        blocks.append(_Block(0, diffuse))
    if h > 1:
        blocks.append(_Block(b, scan))
    else:
        blocks = [_Block(b, scan)]
    return blocks, F


def simulate_hybrid(cfg: HybridConfig, inst: OracleInstance) -> tuple[list[np.ndarray], QueryCounter]:
    """Block-register states at every block boundary, plus the query counter.

    The returned list starts with the initial state; the last entry is the
    state after the final classical scan (which leaves amplitudes unchanged).
    """
    counter = QueryCounter()
    blocks, F = hybrid_schedule(cfg, inst, counter)
    psi = np.zeros((cfg.h, 2), dtype=np.complex128)
    psi[0, 0] = 1.0
    states = [psi]
    for i, blk in enumerate(blocks):
        if i > 0:
            psi = F @ psi
        psi = blk.apply(psi)
        states.append(psi)
    return states, counter


def hybrid_block(n: int, T_target: int, marked: int = 0) -> RunReport:
    cfg = hybrid_config(n, T_target)
    inst = OracleInstance.unique_one(n, marked)
    states, counter = simulate_hybrid(cfg, inst)
    # the final scan leaves amplitudes alone and finds the 1 once the block is right
    success = float(np.sum(np.abs(states[-1][marked // cfg.b]) ** 2))
    return RunReport(
        n=n,
        queries=counter.count,
        layers=cfg.layers,
        success_probability=success,
        mode="hybrid" if cfg.h > 1 else "classical",
        iterations=cfg.iterations,
        h=cfg.h,
        block_size=cfg.b,
        T_target=T_target,
    )


def tradeoff_sweep(n: int, T_targets: Sequence[int]) -> list[RunReport]:
    return [hybrid_block(n, int(t)) for t in T_targets]


SWEEP_HEADER = ["n", "T_target", "h", "iterations", "queries", "layers", "success_prob", "product_over_n"]


def sweep_csv(reports: Sequence[RunReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in reports:
        w.writerow(
            [r.n, r.T_target, r.h, r.iterations, r.queries, r.layers,
             f"{r.success_probability:.12f}", f"{r.product_over_n:.12f}"]
        )
    return buf.getvalue()


def valid_targets(n: int) -> list[int]:
    return [t for t in range(1, n + 1) if t * t >= n]


# --- adversary progress indicator -----------------------------------------


@dataclass(frozen=True)
class ProgressTrace:
    """Progress indicator at block boundaries for X = {e_0}, Y = {e_i}."""

    p: np.ndarray
    p_abs: np.ndarray
    block_queries: np.ndarray
    bounds: np.ndarray
    success_probability: float
    n: int = 0
    T_target: int = 0
    h: int = 0

    def changes(self) -> np.ndarray:
        return np.abs(np.diff(self.p))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "T_target": self.T_target,
            "h": self.h,
            "p_t": [float(v) for v in self.p],
            "p_abs": [float(v) for v in self.p_abs],
            "k_s": [int(v) for v in self.block_queries],
            "bounds": [float(v) for v in self.bounds],
            "success_probability": self.success_probability,
        }


def _scan_signature(cfg: HybridConfig, inst: OracleInstance) -> np.ndarray:
    """Bits a full scan of each block writes out, as the offset of the 1 (or -1)."""
    sig = np.full(cfg.h, -1)
    m = inst.marked
    if m is not None:
        sig[m // cfg.b] = m % cfg.b
    return sig


def progress_trace(n: int, T_target: int) -> ProgressTrace:
    cfg = hybrid_config(n, T_target)
    x = OracleInstance.all_zero(n)
    sx, cx = simulate_hybrid(cfg, x)
    sig_x = _scan_signature(cfg, x)
    inner = np.zeros((n, len(sx)), dtype=np.complex128)
    success = 0.0
    for i in range(n):
        y = OracleInstance.unique_one(n, i)
        sy, _ = simulate_hybrid(cfg, y)
        for t, (a, c) in enumerate(zip(sx, sy)):
            terms = np.sum(np.conj(a) * c, axis=1)
            if t == len(sx) - 1:
                terms = terms * (_scan_signature(cfg, y) == sig_x)
            inner[i, t] = terms.sum()
        success += float(np.sum(np.abs(sy[-1][i // cfg.b]) ** 2))
    blocks, _ = hybrid_schedule(cfg, x, QueryCounter())
    k_s = np.array([blk.queries for blk in blocks], dtype=np.int64)
    return ProgressTrace(
        p=inner.mean(axis=0).real,
        p_abs=np.abs(inner).mean(axis=0),
        block_queries=k_s,
        bounds=2 * np.sqrt(k_s / n),
        success_probability=success / n,
        n=n,
        T_target=T_target,
        h=cfg.h,
    )


# --- relations and adversary parameters -----------------------------------


@dataclass(frozen=True, eq=False)
class Relation:
    """Pairs ``(x, y)`` of n-bit strings (as ints, bit i = coordinate i)."""

    n: int
    X: tuple[int, ...]
    Y: tuple[int, ...]
    pairs: np.ndarray = field(repr=False)

    def __post_init__(self):
        X, Y = tuple(sorted(set(self.X))), tuple(sorted(set(self.Y)))
        if set(X) & set(Y):
            raise ValueError("X and Y must be disjoint")
        if self.n > 64:
            raise ValueError("strings longer than 64 bits are not supported")
        pairs = np.asarray(self.pairs, dtype=np.uint64).reshape(-1, 2)
        if pairs.size == 0:
            raise ValueError("empty relation")
        if not (np.isin(pairs[:, 0], X).all() and np.isin(pairs[:, 1], Y).all()):
            raise ValueError("relation pairs must lie in X x Y")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "pairs", pairs)

    @property
    def is_grover(self) -> bool:
        return (
            self.X == (0,)
            and self.Y == tuple(1 << i for i in range(self.n))
            and len(self.pairs) == self.n
            and len({tuple(p) for p in self.pairs.tolist()}) == self.n
        )


def grover_relation(n: int) -> Relation:
    """Decision version: X = {0^n}, Y = {e_i}, R = X x Y."""
    Y = [1 << i for i in range(n)]
    return Relation(n, (0,), tuple(Y), [(0, y) for y in Y])


def hamming_relation(n: int) -> Relation:
    """Even-weight X, odd-weight Y, related when they differ in one bit."""
    X = [v for v in range(1 << n) if bin(v).count("1") % 2 == 0]
    Y = [v for v in range(1 << n) if bin(v).count("1") % 2 == 1]
    pairs = [(x, x ^ (1 << i)) for x in X for i in range(n)]
    return Relation(n, tuple(X), tuple(Y), pairs)


class RelationParams(NamedTuple):
    m: int
    m_prime: int
    l: int
    l_prime: int
    bound: float


BRUTE_FORCE_LIMIT = 10**7


def relation_params(rel: Relation) -> RelationParams:
    """m, m', l, l' by exhaustive scan and the query bound sqrt(m m' / (l l'))."""
    if len(rel.X) * len(rel.Y) * rel.n > BRUTE_FORCE_LIMIT:
        raise ValueError("relation too large for exhaustive scan")
    xs, ys = rel.pairs[:, 0], rel.pairs[:, 1]
    diff = xs ^ ys
    xi = np.searchsorted(np.asarray(rel.X, dtype=np.uint64), xs)
    yi = np.searchsorted(np.asarray(rel.Y, dtype=np.uint64), ys)
    m = int(np.bincount(xi, minlength=len(rel.X)).min())
    mp = int(np.bincount(yi, minlength=len(rel.Y)).min())
    l = lp = 0
    for i in range(rel.n):
        hit = ((diff >> np.uint64(i)) & np.uint64(1)).astype(np.int64)
        l = max(l, int(np.bincount(xi, weights=hit, minlength=len(rel.X)).max()))
        lp = max(lp, int(np.bincount(yi, weights=hit, minlength=len(rel.Y)).max()))
    bound = math.sqrt(m * mp / (l * lp)) if l and lp else math.inf
    return RelationParams(m, mp, l, lp, bound)


def alpha_beta(rel: Relation, k: int, shortcut: bool = True) -> tuple[float, float]:
    """Largest fraction of related partners differing on some k coordinates.

    For the Grover decision relation the exact values are (k/n, 1) and are
    returned directly unless ``shortcut`` is False.
    """
    if not 0 <= k <= rel.n:
        raise ValueError(f"k={k} outside [0, {rel.n}]")
    if k == 0:
        return 0.0, 0.0
    if shortcut and rel.is_grover:
        return k / rel.n, 1.0
    if rel.n > 16:
        raise ValueError("subset enumeration limited to n <= 16")
    xs, ys = rel.pairs[:, 0], rel.pairs[:, 1]
    diff = xs ^ ys
    xi = np.searchsorted(np.asarray(rel.X, dtype=np.uint64), xs)
    yi = np.searchsorted(np.asarray(rel.Y, dtype=np.uint64), ys)
    deg_x = np.bincount(xi, minlength=len(rel.X)).astype(float)
    deg_y = np.bincount(yi, minlength=len(rel.Y)).astype(float)
    alpha = beta = 0.0
    for s in itertools.combinations(range(rel.n), k):
        mask = np.uint64(sum(1 << i for i in s))
        hit = ((diff & mask) != 0).astype(float)
        with np.errstate(invalid="ignore", divide="ignore"):
            fx = np.bincount(xi, weights=hit, minlength=len(rel.X)) / deg_x
            fy = np.bincount(yi, weights=hit, minlength=len(rel.Y)) / deg_y
        alpha = max(alpha, float(np.nanmax(fx)))
        beta = max(beta, float(np.nanmax(fy)))
    return alpha, beta
