# cython: language_level=3
"""Compiled inner loops. Signatures mirror ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def apply_1q(double complex[::1] psi, Py_ssize_t tbit, u, cond):
    """Apply a 2x2 unitary in place to every pair (i, i | tbit) with cond[i] set."""
    cdef double complex u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex a, b
    cdef const unsigned char[::1] c
    if cond is None:
        with nogil:
            for i in range(dim):
                if i & tbit:
                    continue
                j = i | tbit
                a = psi[i]
                b = psi[j]
                psi[i] = u00 * a + u01 * b
                psi[j] = u10 * a + u11 * b
    else:
        c = cond
        with nogil:
            for i in range(dim):
                if (i & tbit) or not c[i]:
                    continue
                j = i | tbit
                a = psi[i]
                b = psi[j]
                psi[i] = u00 * a + u01 * b
                psi[j] = u10 * a + u11 * b


def permute_phase(const double complex[::1] psi, const cnp.int64_t[::1] perm,
                  const double complex[::1] phases):
    """Return out with out[perm[i]] = phases[i] * psi[i]."""
    cdef Py_ssize_t dim = psi.shape[0]
    out = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(dim):
            o[perm[i]] = phases[i] * psi[i]
    return out


def ddg_walk(const unsigned char[::1] bits, const cnp.int64_t[::1] leaf_counts,
             const cnp.int64_t[::1] leaf_offsets, const cnp.int64_t[::1] leaf_outcomes,
             Py_ssize_t size):
    """Walk a DDG tree ``size`` times, consuming ``bits`` in order.

    Returns (outcomes, flips, bits_used). Raises ValueError if bits run out.
    """
    outcomes = np.empty(size, dtype=np.int64)
    flips = np.empty(size, dtype=np.int64)
    cdef cnp.int64_t[::1] out = outcomes
    cdef cnp.int64_t[::1] fl = flips
    cdef Py_ssize_t nbits = bits.shape[0]
    cdef Py_ssize_t depth_max = leaf_counts.shape[0] - 1
    cdef Py_ssize_t pos = 0, k, d, node, internal
    cdef bint exhausted = False
    with nogil:
        for k in range(size):
            internal = 0
            d = 0
            while True:
                if pos >= nbits:
                    exhausted = True
                    break
                d += 1
                node = 2 * internal + bits[pos]
                pos += 1
                if node < leaf_counts[d]:
                    out[k] = leaf_outcomes[leaf_offsets[d] + node]
                    fl[k] = d
                    break
                internal = node - leaf_counts[d]
                if d >= depth_max:
                    exhausted = True
                    break
            if exhausted:
                break
    if exhausted:
        raise ValueError("bit source exhausted mid-walk")
    return outcomes, flips, pos
