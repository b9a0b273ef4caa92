"""Annihilation/creation operators, the swapped involution and relation checks.

Two independent constructions of the Bose/Fermi annihilators exist:

* ``compressed_field`` follows the tensor-level definition on the full
  Fock space and compresses through the symmetric embedding, and
* ``direct_bose`` / ``direct_fermi`` act on occupation labels directly.

Checks quantify over the truncation domain: for Bose spaces the
relations are asserted on sectors 0..N-2 and the defect outside that
range is measured separately; Fermi spaces with N = d are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import BasisMismatch, CutoffTooSmall, DimensionMismatch, SizeOverflow
from .fock import GradedOperator, SectorBasis, embed_symmetric, enumerate_basis, second_quantization
from .krein import KreinTriplet, indefinite_form

RELATION_TOL = 1e-10
RANK_TOL = 1e-8
MAX_MONOMIALS = 10**5


def _vector(f, d) -> np.ndarray:
    f = np.asarray(f, dtype=np.complex128)
    if f.shape != (d,):
        raise DimensionMismatch(f"smearing vector must have length {d}, got shape {f.shape}")
    return f


def annihilator_full(f, basis_full: SectorBasis) -> GradedOperator:
    """a(f) on the full Fock space: f_1 x ... x f_n -> sqrt(n) <f|f_1> f_2 x ... x f_n."""
    if basis_full.statistics != "full":
        raise BasisMismatch("annihilator_full needs a full Fock basis")
    f = _vector(f, basis_full.modes)
    mat = kernels.full_annihilator(np.ascontiguousarray(f.conj()), basis_full.modes, basis_full.cutoff)
    return GradedOperator(basis_full, basis_full, mat, -1)


def creator_full(f, basis_full: SectorBasis) -> GradedOperator:
    """a*(f); creation out of the top sector is truncated to zero."""
    return annihilator_full(f, basis_full).H


@dataclass(frozen=True)
class FieldOperatorPair:
    f: np.ndarray
    annihilator: GradedOperator
    creator_star: GradedOperator
    creator_dagger: GradedOperator


def dagger(X: GradedOperator, gamma: GradedOperator) -> GradedOperator:
    """x -> Gamma(eta) x* Gamma(eta)*."""
    if X.domain != gamma.domain or X.codomain != gamma.codomain:
        raise BasisMismatch("operator and Gamma(eta) live on different bases")
    return gamma @ X.H @ gamma.H


def compressed_field(
    f,
    basis: SectorBasis,
    basis_full: SectorBasis | None = None,
    gamma: GradedOperator | None = None,
    embedding: np.ndarray | None = None,
) -> FieldOperatorPair:
    """a+-(f) = V* a(f) V with V the normalised symmetric embedding.

    Without ``gamma`` the metric is taken to be the identity, so the
    dagger creator coincides with the star creator.
    """
    if basis.statistics not in ("bose", "fermi"):
        raise BasisMismatch("compressed_field needs a bose or fermi basis")
    if basis_full is None:
        basis_full = enumerate_basis("full", basis.modes, basis.cutoff)
    V = embed_symmetric(basis, basis_full) if embedding is None else embedding
    f = _vector(f, basis.modes)
    a_full = annihilator_full(f, basis_full)
    a = GradedOperator(basis, basis, V.T @ a_full.matrix @ V, -1)
    a_star = a.H
    a_dag = a_star if gamma is None else dagger(a, gamma)
    return FieldOperatorPair(f, a, a_star, a_dag)


def direct_bose(f, basis: SectorBasis) -> GradedOperator:
    if basis.statistics != "bose":
        raise BasisMismatch("direct_bose needs a bose basis")
    f = _vector(f, basis.modes)
    mat = kernels.direct_bose(np.ascontiguousarray(f.conj()), basis.occupations, basis.cutoff + 1)
    return GradedOperator(basis, basis, mat, -1)


def direct_fermi(f, basis: SectorBasis) -> GradedOperator:
    if basis.statistics != "fermi":
        raise BasisMismatch("direct_fermi needs a fermi basis")
    f = _vector(f, basis.modes)
    mat = kernels.direct_fermi(np.ascontiguousarray(f.conj()), basis.masks, basis.modes)
    return GradedOperator(basis, basis, mat, -1)


def commutator(X: GradedOperator, Y: GradedOperator) -> GradedOperator:
    return X @ Y - Y @ X


def anticommutator(X: GradedOperator, Y: GradedOperator) -> GradedOperator:
    return X @ Y + Y @ X


@dataclass(frozen=True, eq=False)
class FockRepresentation:
    """eta-Bose or eta-Fermi Fock representation at a fixed cutoff."""

    triplet: KreinTriplet
    statistics: str
    cutoff: int
    method: str = "compressed"

    def __post_init__(self):
        if self.statistics not in ("bose", "fermi"):
            raise ValueError(f"statistics must be 'bose' or 'fermi', got {self.statistics!r}")
        if self.method not in ("compressed", "direct"):
            raise ValueError(f"unknown construction method {self.method!r}")

    @cached_property
    def basis(self) -> SectorBasis:
        return enumerate_basis(self.statistics, self.triplet.dim, self.cutoff)

    @cached_property
    def basis_full(self) -> SectorBasis:
        return enumerate_basis("full", self.triplet.dim, self.cutoff)

    @cached_property
    def embedding(self) -> np.ndarray:
        return embed_symmetric(self.basis, self.basis_full)

    @cached_property
    def gamma(self) -> GradedOperator:
        return second_quantization(self.triplet.eta, self.basis)

    @property
    def exact(self) -> bool:
        return self.statistics == "fermi" and self.basis.top == self.triplet.dim

    @property
    def domain(self) -> np.ndarray:
        """Label indices on which the relations are asserted."""
        if self.exact:
            return np.arange(self.basis.size)
        return self.basis.sectors(0, self.cutoff - 2)

    @property
    def outside(self) -> np.ndarray:
        mask = np.ones(self.basis.size, dtype=bool)
        mask[self.domain] = False
        return np.nonzero(mask)[0]

    @property
    def sign(self) -> float:
        """-1 for commutators, +1 for anticommutators."""
        return -1.0 if self.statistics == "bose" else 1.0

    def annihilator(self, f) -> GradedOperator:
        if self.method == "direct":
            build = direct_bose if self.statistics == "bose" else direct_fermi
            return build(f, self.basis)
        return compressed_field(f, self.basis, self.basis_full, embedding=self.embedding).annihilator

    def creator_star(self, f) -> GradedOperator:
        return self.annihilator(f).H

    def creator_dagger(self, f) -> GradedOperator:
        return dagger(self.annihilator(f), self.gamma)

    def pair(self, f) -> FieldOperatorPair:
        a = self.annihilator(f)
        return FieldOperatorPair(np.asarray(f, dtype=np.complex128), a, a.H, dagger(a, self.gamma))

    def bracket(self, X: GradedOperator, Y: GradedOperator) -> GradedOperator:
        return X @ Y + self.sign * (Y @ X)


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def default_probes(d: int, n_random: int = 10, seed: int = 0) -> list:
    """All (e_i, e_j) pairs followed by ``n_random`` seeded random pairs."""
    eye = np.eye(d, dtype=np.complex128)
    probes = [(eye[i], eye[j]) for i in range(d) for j in range(d)]
    rng = np.random.default_rng(seed)
    fs = random_unit_vectors(rng, n_random, d)
    gs = random_unit_vectors(rng, n_random, d)
    probes.extend(zip(fs, gs))
    return probes


def _restricted_norm(M: np.ndarray, cols: np.ndarray) -> float:
    """max over unit v supported on ``cols`` of ||M v||."""
    if cols.size == 0:
        return 0.0
    return float(np.linalg.norm(M[:, cols], ord=2))


@dataclass
class ProbeResidual:
    f: np.ndarray
    g: np.ndarray
    coefficient: complex
    residual: float
    outside_defect: float
    zero_residual: float


@dataclass
class RelationReport:
    kind: str
    probes: list = field(default_factory=list)
    tol: float = RELATION_TOL
    domain: str = ""

    @property
    def residual(self) -> float:
        return max((p.residual for p in self.probes), default=0.0)

    @property
    def zero_residual(self) -> float:
        return max((p.zero_residual for p in self.probes), default=0.0)

    @property
    def outside_defect(self) -> float:
        return max((p.outside_defect for p in self.probes), default=0.0)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol and self.zero_residual <= self.tol


def relation_residuals(rep: FockRepresentation, f, g, coefficient=None) -> ProbeResidual:
    """Residuals of a(f)a+(g) -+ a+(g)a(f) = c I and of the zero relations.

    ``coefficient`` defaults to <f|eta g>.
    """
    eta = rep.triplet.eta
    if coefficient is None:
        coefficient = indefinite_form(eta, np.asarray(f), np.asarray(g))
    af, ag = rep.annihilator(f), rep.annihilator(g)
    af_dag, ag_dag = dagger(af, rep.gamma), dagger(ag, rep.gamma)
    M = rep.bracket(af, ag_dag).matrix - coefficient * np.eye(rep.basis.size)
    zero = max(rep.bracket(af, ag).max_abs(), rep.bracket(af_dag, ag_dag).max_abs())
    return ProbeResidual(
        np.asarray(f),
        np.asarray(g),
        complex(coefficient),
        _restricted_norm(M, rep.domain),
        _restricted_norm(M, rep.outside),
        zero,
    )


def check_eta_ccr(
    triplet: KreinTriplet, cutoff: int, probes=None, tol: float = RELATION_TOL, seed: int = 0
) -> RelationReport:
    if cutoff < 2:
        raise CutoffTooSmall(f"bose relation checks need cutoff >= 2, got {cutoff}")
    rep = FockRepresentation(triplet, "bose", cutoff)
    probes = default_probes(triplet.dim, seed=seed) if probes is None else probes
    report = RelationReport("commutator", tol=tol, domain=f"sectors 0..{cutoff - 2}")
    report.probes = [relation_residuals(rep, f, g) for f, g in probes]
    return report


def check_eta_car(
    triplet: KreinTriplet, probes=None, tol: float = RELATION_TOL, seed: int = 0, cutoff: int | None = None
) -> RelationReport:
    rep = FockRepresentation(triplet, "fermi", triplet.dim if cutoff is None else cutoff)
    probes = default_probes(triplet.dim, seed=seed) if probes is None else probes
    domain = "whole space" if rep.exact else f"sectors 0..{rep.cutoff - 2}"
    report = RelationReport("anticommutator", tol=tol, domain=domain)
    report.probes = [relation_residuals(rep, f, g) for f, g in probes]
    return report


def sample_domain_vectors(rng, basis: SectorBasis, max_sector: int, count: int) -> np.ndarray:
    idx = basis.sectors(0, max_sector)
    out = np.zeros((count, basis.size), dtype=np.complex128)
    out[:, idx] = random_unit_vectors(rng, count, idx.size)
    return out


def check_adjoint_pairing(
    pair: FieldOperatorPair, gamma: GradedOperator, samples: int = 50, seed: int = 0
) -> float:
    """max |(a+(f)v|w) - (v|a(f)w)| with (x|y) = <x|Gamma(eta) y>."""
    basis = gamma.domain
    if pair.annihilator.domain != basis:
        raise BasisMismatch("field operators and Gamma(eta) live on different bases")
    rng = np.random.default_rng(seed)
    top = basis.top if basis.statistics == "fermi" else basis.top - 1
    vs = sample_domain_vectors(rng, basis, top, samples)
    ws = sample_domain_vectors(rng, basis, top, samples)
    G = gamma.matrix
    A = pair.annihilator.matrix
    Ad = pair.creator_dagger.matrix
    worst = 0.0
    for v, w in zip(vs, ws):
        lhs = np.vdot(Ad @ v, G @ w)
        rhs = np.vdot(v, G @ (A @ w))
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def check_vacuum(pair: FieldOperatorPair) -> bool:
    return not np.any(pair.annihilator.matrix[:, 0])


def vacuum_creation_residual(rep: FockRepresentation, f) -> float:
    """||a+(f) Omega - eta f||, the created vector read as a one-particle state."""
    out = rep.creator_dagger(f) @ rep.basis.vacuum()
    expected = rep.basis.one_particle(rep.triplet.eta @ np.asarray(f, dtype=np.complex128))
    return float(np.linalg.norm(out - expected))


@dataclass
class CyclicityReport:
    rank: int
    size: int
    monomials: int

    @property
    def passed(self) -> bool:
        return self.rank == self.size


def check_cyclicity(rep: FockRepresentation, max_monomials: int = MAX_MONOMIALS) -> CyclicityReport:
    """Rank of all creator words a+(e_i1)...a+(e_ik) Omega with k <= top sector."""
    d = rep.triplet.dim
    top = rep.basis.top
    count = sum(d**k for k in range(top + 1))
    if count > max_monomials:
        raise SizeOverflow(f"{count} creator monomials exceed the cap of {max_monomials}")
    eye = np.eye(d)
    creators = [rep.creator_dagger(eye[i]).matrix for i in range(d)]
    level = [rep.basis.vacuum()]
    vectors = list(level)
    for _ in range(top):
        level = [C @ v for v in level for C in creators]
        vectors.extend(level)
    M = np.array(vectors).T
    sv = np.linalg.svd(M, compute_uv=False)
    return CyclicityReport(int(np.sum(sv > RANK_TOL)), rep.basis.size, len(vectors))


def dagger_identity_residual(rep: FockRepresentation, f) -> float:
    """||Gamma a*(f) Gamma* - a*(eta f)||_max."""
    f = np.asarray(f, dtype=np.complex128)
    return (rep.creator_dagger(f) - rep.creator_star(rep.triplet.eta @ f)).max_abs()


def random_operator(rng, basis: SectorBasis) -> GradedOperator:
    n = basis.size
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
    return GradedOperator(basis, basis, z, None)


@dataclass
class DaggerAlgebraReport:
    involutive: float
    antimultiplicative: float
    conjugate_linear: float


def check_dagger_algebra(gamma: GradedOperator, pairs: int = 50, seed: int = 0) -> DaggerAlgebraReport:
    """Involution axioms of x -> Gamma x* Gamma* on random operator pairs."""
    rng = np.random.default_rng(seed)
    inv = anti = lin = 0.0
    for _ in range(pairs):
        X = random_operator(rng, gamma.domain)
        Y = random_operator(rng, gamma.domain)
        alpha = complex(*rng.standard_normal(2))
        inv = max(inv, (dagger(dagger(X, gamma), gamma) - X).max_abs())
        anti = max(anti, (dagger(X @ Y, gamma) - dagger(Y, gamma) @ dagger(X, gamma)).max_abs())
        lin = max(lin, (dagger(alpha * X + Y, gamma) - (np.conj(alpha) * dagger(X, gamma) + dagger(Y, gamma))).max_abs())
    return DaggerAlgebraReport(inv, anti, lin)


@dataclass
class SwapReport:
    """Conjugating eta-generators by Gamma(eta) gives ordinary CCR/CAR."""

    ordinary_residual: float
    membership_residual: float
    outside_defect: float


def check_involution_swap(rep: FockRepresentation, probes=None, seed: int = 0) -> SwapReport:
    """b(f) = Gamma a(f) Gamma* must equal a(eta f) and satisfy
    b(f) b(g)* -+ b(g)* b(f) = <f|g> I with the ordinary adjoint."""
    d = rep.triplet.dim
    probes = default_probes(d, seed=seed) if probes is None else probes
    G = rep.gamma
    eta = rep.triplet.eta
    ordinary = member = outside = 0.0
    for f, g in probes:
        f = np.asarray(f, dtype=np.complex128)
        g = np.asarray(g, dtype=np.complex128)
        bf = G @ rep.annihilator(f) @ G.H
        bg = G @ rep.annihilator(g) @ G.H
        M = rep.bracket(bf, bg.H).matrix - np.vdot(f, g) * np.eye(rep.basis.size)
        ordinary = max(ordinary, _restricted_norm(M, rep.domain))
        outside = max(outside, _restricted_norm(M, rep.outside))
        member = max(member, (bf - rep.annihilator(eta @ f)).max_abs())
    return SwapReport(ordinary, member, outside)
