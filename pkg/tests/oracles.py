"""Independent brute-force references used by the tests."""

import itertools

import numpy as np


def entropy_bits(p):
    p = np.asarray(p, dtype=float)
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log2(p)))


def grid_min_entropy(d, eps, step=1e-3):
    """Min entropy over all 3-outcome grid points within total variation eps/2 of d."""
    assert len(d) == 3
    units = int(round(1 / step))
    a = np.arange(units + 1)
    A, B = np.meshgrid(a, a, indexing="ij")
    keep = A + B <= units
    P = np.stack([A[keep], B[keep], units - A[keep] - B[keep]], axis=1) * step
    tv = 0.5 * np.abs(P - np.asarray(d)).sum(axis=1)
    P = P[tv <= eps / 2 + 1e-12]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, -P * np.log2(P), 0.0)
    return float(terms.sum(axis=1).min())


def vertex_min_entropy(d, eps):
    """Min entropy over the vertices of {d - r + a : 0<=r<=d, a>=0, sum r = sum a <= eps/2}.

    Entropy is concave, so the minimum over the polytope sits at a vertex.
    Vertices are found by solving every square system of active constraints.
    """
    d = np.asarray(d, dtype=float)
    n = len(d)
    dim = 2 * n
    rows, rhs = [], []
    for i in range(n):  # r_i >= 0 ; r_i <= d_i ; a_i >= 0
        e = np.zeros(dim); e[i] = 1; rows.append(e); rhs.append(0.0)
        e = np.zeros(dim); e[i] = 1; rows.append(e); rhs.append(d[i])
        e = np.zeros(dim); e[n + i] = 1; rows.append(e); rhs.append(0.0)
    e = np.r_[np.ones(n), np.zeros(n)]; rows.append(e); rhs.append(eps / 2)
    rows, rhs = np.array(rows), np.array(rhs)
    balance = np.r_[np.ones(n), -np.ones(n)]
    best = np.inf
    combos = np.array(list(itertools.combinations(range(len(rows)), dim - 1)))
    for chunk in np.array_split(combos, max(1, len(combos) // 20000)):
        M = np.concatenate([rows[chunk], np.broadcast_to(balance, (len(chunk), 1, dim))], axis=1)
        b = np.concatenate([rhs[chunk], np.zeros((len(chunk), 1))], axis=1)
        ok = np.abs(np.linalg.det(M)) > 1e-12
        if not ok.any():
            continue
        x = np.linalg.solve(M[ok], b[ok][..., None])[..., 0]
        r, a = x[:, :n], x[:, n:]
        feas = (
            (r >= -1e-12).all(1) & (r <= d + 1e-12).all(1) & (a >= -1e-12).all(1)
            & (r.sum(1) <= eps / 2 + 1e-12)
        )
        for q in (d - r[feas] + a[feas]):
            best = min(best, entropy_bits(np.clip(q, 0, None)))
    return best


def ddg_exhaustive(sample_fn, depth):
    """Outcome masses and expected bits by feeding every depth-bit string to ``sample_fn``.

    ``sample_fn(bits)`` must consume bits from the iterator it is given.
    """
    masses = {}
    flips = 0.0
    w = 2.0**-depth
    for word in itertools.product((0, 1), repeat=depth):
        it = iter(word)
        used = [0]

        def counted():
            for b in it:
                used[0] += 1
                yield b

        o = sample_fn(counted())
        masses[o] = masses.get(o, 0.0) + w
        flips += used[0] * w
    return masses, flips
