"""Vectorised numpy versions of the matrix-assembly kernels.

Every function here has a twin of the same name and signature in
``numba_impl``; the two must agree to machine precision.
"""

import numpy as np


def sector_offsets(d, N):
    sizes = np.array([d**n for n in range(N + 1)], dtype=np.int64)
    offsets = np.zeros(N + 2, dtype=np.int64)
    offsets[1:] = np.cumsum(sizes)
    return offsets


def full_annihilator(fconj, d, N):
    """Matrix of a(f) on the full Fock space truncated at N particles.

    ``fconj`` holds the complex conjugates of the components of f, so
    that the amplitude of the first tensor factor is <f|e_i> = conj(f_i).
    """
    offsets = sector_offsets(d, N)
    size = int(offsets[-1])
    out = np.zeros((size, size), dtype=np.complex128)
    for n in range(1, N + 1):
        stride = d ** (n - 1)
        t = np.arange(d**n, dtype=np.int64)
        first = t // stride
        rest = t % stride
        out[offsets[n - 1] + rest, offsets[n] + t] = np.sqrt(n) * fconj[first]
    return out


def _digits(d, n):
    # row t holds the factor indices (i_1, ..., i_n), most significant first
    t = np.arange(d**n, dtype=np.int64)
    powers = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (t[:, None] // powers[None, :]) % d, powers


def permutation_projector(d, n, perms, signs):
    """(1/n!) sum_sigma sign(sigma) * (permutation of tensor factors).

    ``perms`` is a (k, n) integer array of permutations, ``signs`` the
    matching weights (all ones for the symmetriser).
    """
    dim = d**n
    out = np.zeros((dim, dim), dtype=np.float64)
    if n == 0:
        out[0, 0] = 1.0
        return out
    digits, powers = _digits(d, n)
    cols = np.arange(dim, dtype=np.int64)
    norm = float(perms.shape[0])
    for sigma, s in zip(perms, signs):
        rows = digits[:, sigma] @ powers
        np.add.at(out, (rows, cols), s / norm)
    return out


def tensor_power(U, n):
    out = np.ones((1, 1), dtype=np.complex128)
    for _ in range(n):
        out = np.kron(out, U)
    return out


def _lookup(sorted_keys, order, keys):
    pos = np.searchsorted(sorted_keys, keys)
    pos = np.minimum(pos, sorted_keys.shape[0] - 1)
    found = sorted_keys[pos] == keys
    return order[pos], found


def direct_bose(fconj, occupations, radix):
    """a(f) on the occupation basis: |..n_k..> -> sqrt(n_k) conj(f_k) |..n_k-1..>."""
    size, d = occupations.shape
    weights = radix ** np.arange(d, dtype=np.int64)
    keys = occupations @ weights
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    out = np.zeros((size, size), dtype=np.complex128)
    for k in range(d):
        cols = np.nonzero(occupations[:, k] > 0)[0]
        if cols.size == 0:
            continue
        rows, found = _lookup(sorted_keys, order, keys[cols] - weights[k])
        cols, rows = cols[found], rows[found]
        out[rows, cols] += np.sqrt(occupations[cols, k]) * fconj[k]
    return out


def _popcount(x):
    x = x.copy()
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x >>= 1
    return count


def direct_fermi(fconj, masks, d):
    """a(f) on the subset basis: S -> (-1)^{#{j in S: j<k}} conj(f_k) S\\{k}."""
    size = masks.shape[0]
    order = np.argsort(masks, kind="stable")
    sorted_masks = masks[order]
    out = np.zeros((size, size), dtype=np.complex128)
    for k in range(d):
        bit = np.int64(1) << k
        cols = np.nonzero(masks & bit)[0]
        if cols.size == 0:
            continue
        below = _popcount(masks[cols] & (bit - 1))
        sign = 1.0 - 2.0 * (below % 2)
        rows, found = _lookup(sorted_masks, order, masks[cols] ^ bit)
        cols, rows, sign = cols[found], rows[found], sign[found]
        out[rows, cols] += sign * fconj[k]
    return out
