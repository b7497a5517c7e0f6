"""Pure numpy/Python versions of the compiled kernels."""

import numpy as np


def apply_1q(psi, tbit, u, cond):
    idx = np.arange(psi.shape[0])
    mask = (idx & tbit) == 0
    if cond is not None:
        mask &= cond.astype(bool)
    i0 = idx[mask]
    i1 = i0 | tbit
    a = psi[i0]
    b = psi[i1]
    psi[i0] = u[0, 0] * a + u[0, 1] * b
    psi[i1] = u[1, 0] * a + u[1, 1] * b


def permute_phase(psi, perm, phases):
    out = np.empty_like(psi)
    out[perm] = phases * psi
    return out


def ddg_walk(bits, leaf_counts, leaf_offsets, leaf_outcomes, size):
    outcomes = np.empty(size, dtype=np.int64)
    flips = np.empty(size, dtype=np.int64)
    nbits = len(bits)
    depth_max = len(leaf_counts) - 1
    pos = 0
    for k in range(size):
        internal = 0
        d = 0
        while True:
            if pos >= nbits or d >= depth_max:
                raise ValueError("bit source exhausted mid-walk")
            d += 1
            node = 2 * internal + int(bits[pos])
            pos += 1
            if node < leaf_counts[d]:
                outcomes[k] = leaf_outcomes[leaf_offsets[d] + node]
                flips[k] = d
                break
            internal = node - leaf_counts[d]
    return outcomes, flips, pos
