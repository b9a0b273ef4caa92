"""Loop-level kernels compiled with numba; see ``numpy_impl`` for the contract."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def sector_offsets(d, N):
    offsets = np.zeros(N + 2, dtype=np.int64)
    size = 1
    for n in range(N + 1):
        offsets[n + 1] = offsets[n] + size
        size *= d
    return offsets


@njit(cache=True)
def full_annihilator(fconj, d, N):
    offsets = sector_offsets(d, N)
    size = offsets[N + 1]
    out = np.zeros((size, size), dtype=np.complex128)
    stride = 1
    for n in range(1, N + 1):
        amp = math.sqrt(n)
        for t in range(stride * d):
            first = t // stride
            rest = t - first * stride
            out[offsets[n - 1] + rest, offsets[n] + t] = amp * fconj[first]
        stride *= d
    return out


@njit(cache=True)
def permutation_projector(d, n, perms, signs):
    dim = d**n
    out = np.zeros((dim, dim), dtype=np.float64)
    if n == 0:
        out[0, 0] = 1.0
        return out
    digits = np.empty(n, dtype=np.int64)
    norm = perms.shape[0]
    for t in range(dim):
        rem = t
        for p in range(n - 1, -1, -1):
            digits[p] = rem % d
            rem //= d
        for s in range(perms.shape[0]):
            row = 0
            for p in range(n):
                row = row * d + digits[perms[s, p]]
            out[row, t] += signs[s] / norm
    return out


@njit(cache=True)
def tensor_power(U, n):
    # repeated Kronecker product, out <- kron(out, U), same order as numpy
    d = U.shape[0]
    out = np.ones((1, 1), dtype=np.complex128)
    for _ in range(n):
        m = out.shape[0]
        nxt = np.empty((m * d, m * d), dtype=np.complex128)
        for i in range(m):
            for j in range(m):
                a = out[i, j]
                for k in range(d):
                    for l in range(d):
                        nxt[i * d + k, j * d + l] = a * U[k, l]
        out = nxt
    return out


@njit(cache=True)
def direct_bose(fconj, occupations, radix):
    size, d = occupations.shape
    weights = np.empty(d, dtype=np.int64)
    w = 1
    for k in range(d):
        weights[k] = w
        w *= radix
    keys = np.zeros(size, dtype=np.int64)
    for j in range(size):
        for k in range(d):
            keys[j] += occupations[j, k] * weights[k]
    order = np.argsort(keys)
    sorted_keys = keys[order]
    out = np.zeros((size, size), dtype=np.complex128)
    for j in range(size):
        for k in range(d):
            nk = occupations[j, k]
            if nk == 0:
                continue
            target = keys[j] - weights[k]
            pos = np.searchsorted(sorted_keys, target)
            if pos < size and sorted_keys[pos] == target:
                out[order[pos], j] += math.sqrt(nk) * fconj[k]
    return out


@njit(cache=True)
def direct_fermi(fconj, masks, d):
    size = masks.shape[0]
    order = np.argsort(masks)
    sorted_masks = masks[order]
    out = np.zeros((size, size), dtype=np.complex128)
    for j in range(size):
        m = masks[j]
        for k in range(d):
            bit = np.int64(1) << k
            if (m & bit) == 0:
                continue
            below = 0
            x = m & (bit - 1)
            while x:
                below += x & 1
                x >>= 1
            sign = -1.0 if below % 2 else 1.0
            target = m ^ bit
            pos = np.searchsorted(sorted_masks, target)
            if pos < size and sorted_masks[pos] == target:
                out[order[pos], j] += sign * fconj[k]
    return out
