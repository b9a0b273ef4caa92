"""Truncated full, Bose and Fermi Fock spaces over C^d.

Basis conventions
-----------------
* Modes are numbered 0..d-1.
* full sector n: tuples (i_1, ..., i_n) in lexicographic order, which is
  the row-major order of the tensor index, first factor most significant.
* bose sector n: occupation vectors (n_0, ..., n_{d-1}) ordered by the
  lexicographic order of the sorted mode multiset; each label stands for
  the unit-norm symmetrisation of the sorted elementary tensor.
* fermi sector n: strictly increasing mode tuples in lexicographic order;
  each label stands for the unit-norm antisymmetrisation of
  e_{i_1} x ... x e_{i_n} with i_1 < ... < i_n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np

from . import kernels
from .errors import BasisMismatch, DimensionMismatch, NotUnitary, SizeOverflow

STATISTICS = ("full", "bose", "fermi")
MAX_BASIS_SIZE = 10**6
# 1365**2 (d=4, N=5 full Fock) must fit
MAX_MATRIX_ENTRIES = 2**21
UNITARY_TOL = 1e-10


def _check_matrix_size(dim, cap=None):
    cap = MAX_MATRIX_ENTRIES if cap is None else cap
    if dim * dim > cap:
        raise SizeOverflow(f"dense {dim}x{dim} matrix exceeds the cap of {cap} entries")


def sector_size(statistics: str, d: int, n: int) -> int:
    if statistics == "full":
        return d**n
    if statistics == "bose":
        return comb(d + n - 1, n)
    if statistics == "fermi":
        return comb(d, n)
    raise ValueError(f"unknown statistics {statistics!r}")


@dataclass(frozen=True)
class SectorBasis:
    statistics: str
    modes: int
    cutoff: int
    labels: tuple = field(compare=False, repr=False)
    offsets: tuple = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.offsets[-1]

    @property
    def top(self) -> int:
        """Highest particle number actually present."""
        return len(self.offsets) - 2

    def sector(self, n: int) -> slice:
        return slice(self.offsets[n], self.offsets[n + 1])

    def sectors(self, lo: int, hi: int) -> np.ndarray:
        """Indices of labels with particle number in [lo, hi]."""
        lo = max(lo, 0)
        hi = min(hi, self.top)
        if hi < lo:
            return np.zeros(0, dtype=np.int64)
        return np.arange(self.offsets[lo], self.offsets[hi + 1])

    @cached_property
    def particle_number(self) -> np.ndarray:
        counts = np.diff(np.asarray(self.offsets))
        return np.repeat(np.arange(self.top + 1), counts)

    @cached_property
    def _index(self) -> dict:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label) -> int:
        return self._index[tuple(label)]

    @cached_property
    def occupations(self) -> np.ndarray:
        """(size, d) occupation numbers of every label."""
        occ = np.zeros((self.size, self.modes), dtype=np.int64)
        for i, label in enumerate(self.labels):
            if self.statistics == "bose":
                occ[i] = label
            else:
                for k in label:
                    occ[i, k] += 1
        return occ

    @cached_property
    def masks(self) -> np.ndarray:
        if self.statistics != "fermi":
            raise BasisMismatch("bit masks are defined for fermi bases only")
        return np.array([sum(1 << k for k in label) for label in self.labels], dtype=np.int64)

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.size, dtype=np.complex128)
        v[0] = 1.0
        return v

    def one_particle(self, f) -> np.ndarray:
        """Embed a one-particle vector f into sector 1."""
        f = np.asarray(f, dtype=np.complex128)
        if f.shape != (self.modes,):
            raise DimensionMismatch(f"expected a vector of length {self.modes}")
        if self.top < 1:
            raise DimensionMismatch("basis has no one-particle sector")
        v = np.zeros(self.size, dtype=np.complex128)
        # in all three conventions sector 1 is ordered by mode
        v[self.sector(1)] = f
        return v


def enumerate_basis(statistics: str, d: int, N: int, cap: int = MAX_BASIS_SIZE) -> SectorBasis:
    if statistics not in STATISTICS:
        raise ValueError(f"statistics must be one of {STATISTICS}, got {statistics!r}")
    if d < 1 or N < 0:
        raise ValueError(f"need d >= 1 and N >= 0, got d={d}, N={N}")
    top = min(N, d) if statistics == "fermi" else N
    sizes = [sector_size(statistics, d, n) for n in range(top + 1)]
    total = sum(sizes)
    if total > cap:
        raise SizeOverflow(f"{statistics} basis with d={d}, N={N} has {total} labels > cap {cap}")
    labels = []
    for n in range(top + 1):
        if statistics == "full":
            labels.extend(itertools.product(range(d), repeat=n))
        elif statistics == "fermi":
            labels.extend(itertools.combinations(range(d), n))
        else:
            for multiset in itertools.combinations_with_replacement(range(d), n):
                occ = [0] * d
                for k in multiset:
                    occ[k] += 1
                labels.append(tuple(occ))
    offsets = tuple(int(x) for x in np.concatenate([[0], np.cumsum(sizes)]))
    return SectorBasis(statistics, d, N, tuple(labels), offsets)


@dataclass(frozen=True, eq=False)
class GradedOperator:
    """Dense matrix between two sector bases.

    ``grade_shift`` is the change in particle number (``None`` for an
    operator that mixes several shifts). Entries violating the declared
    shift are rejected at construction.
    """

    domain: SectorBasis
    codomain: SectorBasis
    matrix: np.ndarray
    grade_shift: int | None = 0

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.shape != (self.codomain.size, self.domain.size):
            raise DimensionMismatch(
                f"matrix shape {mat.shape} does not match bases ({self.codomain.size}, {self.domain.size})"
            )
        object.__setattr__(self, "matrix", mat)
        if self.grade_shift is not None:
            bad = self.codomain.particle_number[:, None] != self.domain.particle_number[None, :] + self.grade_shift
            if np.any(mat[bad] != 0):
                raise ValueError(f"matrix has entries outside grade shift {self.grade_shift}")

    @classmethod
    def identity(cls, basis: SectorBasis) -> GradedOperator:
        return cls(basis, basis, np.eye(basis.size), 0)

    @classmethod
    def zeros(cls, basis: SectorBasis) -> GradedOperator:
        return cls(basis, basis, np.zeros((basis.size, basis.size)), 0)

    @property
    def H(self) -> GradedOperator:
        """Adjoint with respect to the positive inner product."""
        shift = None if self.grade_shift is None else -self.grade_shift
        return GradedOperator(self.codomain, self.domain, self.matrix.conj().T, shift)

    def __matmul__(self, other):
        if isinstance(other, GradedOperator):
            if self.domain != other.codomain:
                raise BasisMismatch(f"cannot compose {self.domain} after {other.codomain}")
            shift = (
                None if self.grade_shift is None or other.grade_shift is None else self.grade_shift + other.grade_shift
            )
            return GradedOperator(other.domain, self.codomain, self.matrix @ other.matrix, shift)
        return self.matrix @ np.asarray(other)

    def _combine(self, other, sign):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise BasisMismatch("operators live on different bases")
        shift = self.grade_shift if self.grade_shift == other.grade_shift else None
        return GradedOperator(self.domain, self.codomain, self.matrix + sign * other.matrix, shift)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        return GradedOperator(self.domain, self.codomain, scalar * self.matrix, self.grade_shift)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0


def _permutations(n):
    listed = list(itertools.permutations(range(n)))
    perms = np.array(listed, dtype=np.int64).reshape(len(listed), n)
    signs = np.empty(len(perms))
    for s, p in enumerate(perms):
        # parity via cycle decomposition
        seen = [False] * n
        parity = 0
        for i in range(n):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            parity += length - 1
        signs[s] = -1.0 if parity % 2 else 1.0
    return perms, signs


def symmetrizer(d: int, n: int) -> np.ndarray:
    """P+ on the n-particle sector of the full Fock space over C^d."""
    _check_matrix_size(d**n)
    perms, _ = _permutations(n)
    return kernels.permutation_projector(d, n, perms, np.ones(len(perms)))


def antisymmetrizer(d: int, n: int) -> np.ndarray:
    """P- on the n-particle sector; the zero matrix when n > d."""
    _check_matrix_size(d**n)
    perms, signs = _permutations(n)
    return kernels.permutation_projector(d, n, perms, signs)


def full_projector(basis_full: SectorBasis, statistics: str) -> GradedOperator:
    """P+ (``statistics='bose'``) or P- (``'fermi'``) on the truncated full Fock space."""
    if basis_full.statistics != "full":
        raise BasisMismatch("projector lives on a full Fock basis")
    _check_matrix_size(basis_full.size)
    build = symmetrizer if statistics == "bose" else antisymmetrizer
    P = np.zeros((basis_full.size, basis_full.size))
    for n in range(basis_full.top + 1):
        s = basis_full.sector(n)
        P[s, s] = build(basis_full.modes, n)
    return GradedOperator(basis_full, basis_full, P, 0)


def embed_symmetric(basis: SectorBasis, basis_full: SectorBasis) -> np.ndarray:
    """Isometry V mapping occupation/subset labels into the full Fock space.

    Column j is the normalised P+- image of the sorted elementary tensor
    for label j, built from the explicit permutation sum.
    """
    if basis.statistics not in ("bose", "fermi") or basis_full.statistics != "full":
        raise BasisMismatch("embed_symmetric needs a bose/fermi basis and a full basis")
    if basis.modes != basis_full.modes or basis.cutoff != basis_full.cutoff:
        raise BasisMismatch("bases differ in mode count or cutoff")
    _check_matrix_size(max(basis_full.size, basis.size))
    d = basis.modes
    build = symmetrizer if basis.statistics == "bose" else antisymmetrizer
    V = np.zeros((basis_full.size, basis.size))
    occ = basis.occupations
    for n in range(basis.top + 1):
        P = build(d, n)
        full_off = basis_full.offsets[n]
        powers = d ** np.arange(n - 1, -1, -1)
        for j in range(basis.offsets[n], basis.offsets[n + 1]):
            modes = np.repeat(np.arange(d), occ[j])
            col = P[:, int(modes @ powers)] if n else P[:, 0]
            V[full_off : full_off + P.shape[0], j] = col / np.linalg.norm(col)
    return V


def _require_unitary(U, d, tol):
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (d, d):
        raise DimensionMismatch(f"expected a {d}x{d} matrix, got {U.shape}")
    res = float(np.max(np.abs(U.conj().T @ U - np.eye(d))))
    if res > tol:
        raise NotUnitary(f"||U*U - I||_max = {res:.3e} > {tol:.1e}", residual=res)
    return U


def _diagonal_second_quantization(u: np.ndarray, basis: SectorBasis) -> GradedOperator:
    if basis.statistics == "bose":
        entries = [np.prod(u ** np.asarray(occ)) for occ in basis.occupations]
    else:
        entries = [np.prod(u[list(label)]) for label in basis.labels]
    G = np.diag(np.asarray(entries, dtype=np.complex128))
    return GradedOperator(basis, basis, G, 0)


def second_quantization(U, basis: SectorBasis, tol: float = UNITARY_TOL) -> GradedOperator:
    """Gamma(U) = I + U + U^{x2} + ... restricted to ``basis``.

    On bose/fermi bases each sector block is the compression
    V_n* U^{xn} V_n through ``embed_symmetric``.  A diagonal U skips the
    compression: Gamma(U) is then diagonal in the occupation basis with
    entries prod_k u_k^{n_k}, which keeps sign metrics free of rounding.
    """
    U = _require_unitary(U, basis.modes, tol)
    if not np.any(U - np.diag(np.diag(U))):
        return _diagonal_second_quantization(np.diag(U), basis)
    full = basis if basis.statistics == "full" else enumerate_basis("full", basis.modes, basis.cutoff)
    _check_matrix_size(full.size)
    G = np.zeros((basis.size, basis.size), dtype=np.complex128)
    V = None if basis is full else embed_symmetric(basis, full)
    for n in range(basis.top + 1):
        block = kernels.tensor_power(U, n)
        s = basis.sector(n)
        if V is None:
            G[s, s] = block
        else:
            Vn = V[full.sector(n), s]
            G[s, s] = Vn.T @ block @ Vn
    return GradedOperator(basis, basis, G, 0)


def check_projection_commutation(gamma: GradedOperator, projector: GradedOperator) -> float:
    """||P Gamma - Gamma P||_max for operators on the same full Fock basis."""
    if gamma.domain != projector.domain or gamma.codomain != projector.codomain:
        raise BasisMismatch("Gamma(eta) and the projector live on different bases")
    return (projector @ gamma - gamma @ projector).max_abs()


def check_sizes(basis: SectorBasis) -> bool:
    """Sector sizes agree with the closed-form counts."""
    return all(
        basis.offsets[n + 1] - basis.offsets[n] == sector_size(basis.statistics, basis.modes, n)
        for n in range(basis.top + 1)
    )
