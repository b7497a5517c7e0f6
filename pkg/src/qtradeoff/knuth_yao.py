"""Knuth-Yao discrete distribution generating trees.

The canonical tree puts a leaf for outcome ``i`` at depth ``s`` exactly when
the s-th binary digit of ``p_i`` is one. Probabilities are truncated to
``precision_bits`` digits; the leftover mass goes to the most likely
outcome so the tree is complete.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .entropy import check_distribution


@dataclass(frozen=True)
class DdgTree:
    """Leaves grouped by depth.

    ``leaves[d]`` lists outcome labels of the depth-``d`` leaves, left to
    right; every other node at that depth is internal.
    """

    precision_bits: int
    leaves: tuple[tuple[int, ...], ...]
    masses: np.ndarray

    @property
    def depth(self) -> int:
        return len(self.leaves) - 1

    def leaf_list(self) -> list[tuple[int, int]]:
        """(depth, outcome) for every leaf in canonical order."""
        return [(d, o) for d, row in enumerate(self.leaves) for o in row]

    def dump(self) -> str:
        lines = []
        internal = 1 if not self.leaves[0] else 0
        for d in range(1, len(self.leaves)):
            width = 2 * internal
            row = self.leaves[d]
            for o in row:
                lines.append(f"{'  ' * d}({d}, {o})")
            internal = width - len(row)
        if self.leaves[0]:
            lines.append(f"(0, {self.leaves[0][0]})")
        return "\n".join(lines)

    def _arrays(self):
        counts = np.array([len(r) for r in self.leaves], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
        outcomes = np.array([o for r in self.leaves for o in r], dtype=np.int64)
        return counts, offsets, outcomes


def build_ddg(probs, precision_bits: int) -> DdgTree:
    p = check_distribution(probs)
    if precision_bits < 1:
        raise ValueError("precision_bits must be >= 1")
    if precision_bits > 62:
        raise ValueError("precision_bits above 62 is not supported")
    scale = 1 << precision_bits
    mant = np.floor(p * scale).astype(np.int64)
    if mant.sum() == 0:
        raise ValueError(f"precision {precision_bits} cannot represent any probability mass")
    mant[int(np.argmax(p))] += scale - int(mant.sum())

    if mant.max() == scale:
        # a certain outcome: the root itself is a leaf
        leaves = ((int(np.argmax(mant)),),)
    else:
        leaves = [()]
        for s in range(1, precision_bits + 1):
            shift = precision_bits - s
            leaves.append(tuple(int(i) for i in np.flatnonzero((mant >> shift) & 1)))
        while len(leaves) > 1 and not leaves[-1]:
            leaves.pop()
        leaves = tuple(leaves)
    return DdgTree(precision_bits, leaves, mant / scale)


def expected_flips(tree: DdgTree) -> float:
    return float(sum(d * len(row) * 2.0**-d for d, row in enumerate(tree.leaves)))


def leaf_mass(tree: DdgTree) -> np.ndarray:
    """Probability the tree assigns to each outcome."""
    mass = np.zeros(len(tree.masses))
    for d, row in enumerate(tree.leaves):
        for o in row:
            mass[o] += 2.0**-d
    return mass


def sample(tree: DdgTree, bits) -> int:
    """Walk the tree once, pulling one bit per level from the iterator ``bits``."""
    if tree.leaves[0]:
        return tree.leaves[0][0]
    bits = iter(bits)
    internal = 0
    for d in range(1, len(tree.leaves)):
        try:
            b = next(bits)
        except StopIteration:
            raise ValueError("bit source exhausted mid-walk") from None
        node = 2 * internal + (1 if b else 0)
        row = tree.leaves[d]
        if node < len(row):
            return row[node]
        internal = node - len(row)
    raise ValueError("walk ran past the deepest level")


def sample_many(tree: DdgTree, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``size`` outcomes with fair bits from ``rng``.

    Returns (outcomes, flips used per draw).
    """
    if tree.leaves[0]:
        return np.full(size, tree.leaves[0][0], dtype=np.int64), np.zeros(size, dtype=np.int64)
    counts, offsets, outcomes = tree._arrays()
    # expected use is below H + 2 per draw; grow the pool if it runs short
    pool = int(size * (expected_flips(tree) + 4)) + 64
    bits = rng.integers(0, 2, size=pool, dtype=np.uint8)
    out = np.empty(size, dtype=np.int64)
    flips = np.empty(size, dtype=np.int64)
    done = 0
    while done < size:
        chunk = min(size - done, max(1, len(bits) // (tree.depth + 1)))
        o, f, used = kernels.ddg_walk(bits, counts, offsets, outcomes, chunk)
        out[done : done + chunk] = o
        flips[done : done + chunk] = f
        done += chunk
        bits = bits[used:]
        if len(bits) < tree.depth + 1 and done < size:
            bits = np.concatenate([bits, rng.integers(0, 2, size=pool, dtype=np.uint8)])
    return out, flips
