"""Ready-made configurations for the concrete indefinite-metric models.

Mode orderings
--------------
froissart   pair-major: alpha_1, beta_1, alpha_2, beta_2, ...
icar        a_1, a_2, ..., a_{2m}; a_{2n} is the +1 mode of pair n and
            a_{2n-1} the -1 mode, so eta = diag((-1)^n)
two_field   (p,1), (p,2), (p+1,1), ...; c(p,1) = a(p), c(p,2) = b(p)
feynman     e_0, e_1, e_2, e_3 with eta = -g
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadParams, UnknownModel
from .fields import FockRepresentation, check_eta_car, check_eta_ccr, random_unit_vectors, relation_residuals
from .fock import SectorBasis
from .krein import KreinTriplet, fundamental_decomposition, indefinite_form

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
ETA0 = np.array([[0.0, 1.0], [1.0, 0.0]])


def eta_theta_xi(theta: float, xi: float) -> np.ndarray:
    """The general non-scalar selfadjoint unitary on C^2."""
    phase = np.exp(1j * theta)
    return np.array(
        [[np.cos(xi), phase * np.sin(xi)], [np.conj(phase) * np.sin(xi), -np.cos(xi)]],
        dtype=np.complex128,
    )


@dataclass(frozen=True)
class ExpectedRelation:
    label: str
    f: np.ndarray
    g: np.ndarray
    coefficient: complex
    kind: str  # "commutator" or "anticommutator"


@dataclass(frozen=True, eq=False)
class ModelSpec:
    name: str
    statistics: str  # bose, fermi or matrix
    d: int
    eta: np.ndarray
    builder: str
    params: dict
    cutoff: int
    expected_relations: tuple = ()
    anchor: str = ""

    @property
    def triplet(self) -> KreinTriplet:
        return KreinTriplet(self.eta)

    def representation(self, cutoff: int | None = None) -> FockRepresentation:
        return FockRepresentation(self.triplet, self.statistics, self.cutoff if cutoff is None else cutoff)

    def self_consistency_residual(self) -> float:
        """max |expected coefficient - <f|eta g>| over the relation table."""
        return max(
            (abs(r.coefficient - indefinite_form(self.eta, r.f, r.g)) for r in self.expected_relations),
            default=0.0,
        )


def _kind(statistics):
    return "commutator" if statistics == "bose" else "anticommutator"


def _basis_relations(names, eta, statistics):
    d = len(names)
    eye = np.eye(d, dtype=np.complex128)
    return tuple(
        ExpectedRelation(f"[{names[i]}, {names[j]}^dag]", eye[i], eye[j], complex(eta[i, j]), _kind(statistics))
        for i in range(d)
        for j in range(d)
    )


def _abnormal(modes):
    names = ["a"] if modes == 1 else [f"a_{k + 1}" for k in range(modes)]
    return -np.eye(modes), names


def _build_abnormal_bose(p):
    return ("bose", *_abnormal(p["modes"]))


def _build_abnormal_fermi(p):
    return ("fermi", *_abnormal(p["modes"]))


def _build_froissart(p):
    m = p["pairs"]
    eta = np.kron(np.eye(m), ETA0)
    names = [x for n in range(1, m + 1) for x in (f"alpha_{n}", f"beta_{n}")]
    return "bose", eta, names


def _build_icar(p):
    m = p["pairs"]
    eta = np.diag([(-1.0) ** n for n in range(1, 2 * m + 1)])
    names = [f"a_{n}" for n in range(1, 2 * m + 1)]
    return "fermi", eta, names


def _build_eta_theta_xi(p):
    if p["statistics"] not in ("bose", "fermi"):
        raise BadParams("statistics must be 'bose' or 'fermi'")
    return p["statistics"], eta_theta_xi(p["theta"], p["xi"]), ["a_1", "a_2"]


def _build_feynman(p):
    return "bose", -MINKOWSKI, [f"a_{mu}" for mu in range(4)]


def _build_brs(p):
    return "matrix", ETA0.copy(), []


def _build_two_field(p):
    m = p["modes"]
    eta = np.kron(np.eye(m), ETA0)
    names = [x for q in range(1, m + 1) for x in (f"a({q})", f"b({q})")]
    return "bose", eta, names


@dataclass(frozen=True)
class ModelEntry:
    build: Callable
    params: dict  # name -> (type, default)
    anchor: str
    description: str


def _positive(name):
    def check(v):
        if v < 1:
            raise BadParams(f"{name} must be >= 1, got {v}")
    return check


REGISTRY = {
    "abnormal_bose": ModelEntry(
        _build_abnormal_bose,
        {"modes": (int, 1), "cutoff": (int, 3)},
        "abnormal commutation relations aa* - a*a = -I (eta = -I)",
        "eta = -I, bosonic: [a, a^dag] = -1",
    ),
    "abnormal_fermi": ModelEntry(
        _build_abnormal_fermi,
        {"modes": (int, 1), "cutoff": (int, -1)},
        "abnormal anticommutation relations aa* + a*a = -I (eta = -I)",
        "eta = -I, fermionic: {a, a^dag} = -1",
    ),
    "froissart": ModelEntry(
        _build_froissart,
        {"pairs": (int, 2), "cutoff": (int, 3)},
        "Froissart model: eta swaps e_{n,+} and e_{n,-}",
        "pairs (alpha_n, beta_n) swapped by eta: [alpha_n, beta_m^dag] = delta_nm",
    ),
    "icar": ModelEntry(
        _build_icar,
        {"pairs": (int, 2), "cutoff": (int, -1)},
        "ICARs: eta e_{n,+-} = +-e_{n,+-}",
        "interleaved CARs: {a_n, a_m^dag} = (-1)^n delta_nm",
    ),
    "eta_theta_xi": ModelEntry(
        _build_eta_theta_xi,
        {"theta": (float, 0.0), "xi": (float, math.pi / 3), "statistics": (str, "bose"), "cutoff": (int, 3)},
        "rank-2 metric family eta(theta, xi)",
        "general rank-2 selfadjoint unitary metric",
    ),
    "feynman": ModelEntry(
        _build_feynman,
        {"cutoff": (int, 3)},
        "Feynman-gauge photon modes, eta = -g",
        "[a_mu, a_nu^dag] = -g_{mu nu} on the eta-Bose-Fock space over C^4",
    ),
    "brs": ModelEntry(
        _build_brs,
        {"a": (float, 0.0)},
        "BRS algebra, 2x2 representation with x^dag = U x* U*",
        "Q_B, Q_C with involution x^dag = U x* U*",
    ),
    "two_field": ModelEntry(
        _build_two_field,
        {"modes": (int, 2), "cutoff": (int, 3)},
        "two-field model, eta = I (x) eta_0",
        "discretised [a(p), b^dag(q)] = delta_pq",
    ),
}

_RANGE_CHECKS = {"modes": _positive("modes"), "pairs": _positive("pairs")}


def model_names() -> list:
    return sorted(REGISTRY)


def coerce_params(name: str, params: dict | None) -> dict:
    """Fill defaults and convert values (possibly strings) to the schema types."""
    if name not in REGISTRY:
        raise UnknownModel(f"unknown model {name!r}; known: {', '.join(model_names())}")
    schema = REGISTRY[name].params
    params = dict(params or {})
    unknown = set(params) - set(schema)
    if unknown:
        raise BadParams(f"unknown parameters for {name}: {sorted(unknown)}")
    out = {}
    for key, (typ, default) in schema.items():
        value = params.get(key, default)
        try:
            value = typ(value)
        except (TypeError, ValueError) as exc:
            raise BadParams(f"parameter {key}={value!r} is not a valid {typ.__name__}") from exc
        if typ is float and not math.isfinite(value):
            raise BadParams(f"parameter {key} must be finite")
        if key in _RANGE_CHECKS:
            _RANGE_CHECKS[key](value)
        out[key] = value
    return out


def build_model(name: str, params: dict | None = None) -> ModelSpec:
    p = coerce_params(name, params)
    entry = REGISTRY[name]
    statistics, eta, names = entry.build(p)
    d = eta.shape[0]
    cutoff = p.get("cutoff", 0)
    if statistics == "fermi" and cutoff < 0:
        cutoff = d
    if cutoff < 0:
        raise BadParams(f"cutoff must be >= 0, got {cutoff}")
    p["cutoff"] = cutoff
    relations = _basis_relations(names, eta, statistics) if names else ()
    return ModelSpec(name, statistics, d, eta, name, p, cutoff, relations, entry.anchor)


def two_field_model(m: int, N: int = 3) -> ModelSpec:
    return build_model("two_field", {"modes": m, "cutoff": N})


@dataclass
class RelationCheck:
    label: str
    kind: str
    coefficient: complex
    residual: float
    outside_defect: float
    zero_residual: float


def check_expected_relations(spec: ModelSpec, rep: FockRepresentation | None = None) -> list:
    """Evaluate each tabulated relation against its stated coefficient."""
    if spec.statistics not in ("bose", "fermi"):
        return []
    rep = spec.representation() if rep is None else rep
    out = []
    for r in spec.expected_relations:
        pr = relation_residuals(rep, r.f, r.g, r.coefficient)
        out.append(RelationCheck(r.label, r.kind, r.coefficient, pr.residual, pr.outside_defect, pr.zero_residual))
    return out


# Feynman-gauge fundamental decomposition


@dataclass
class FeynmanDecompositionReport:
    cutoff: int
    basis: SectorBasis = field(repr=False)
    parity_plus: frozenset
    parity_minus: frozenset
    eigen_plus: frozenset
    eigen_minus: frozenset
    min_plus_eigenvalue: float
    min_minus_eigenvalue: float
    tol: float

    @property
    def partition_equal(self) -> bool:
        return self.parity_plus == self.eigen_plus and self.parity_minus == self.eigen_minus

    @property
    def definite(self) -> bool:
        return self.min_plus_eigenvalue >= 1 - self.tol and self.min_minus_eigenvalue >= 1 - self.tol

    @property
    def passed(self) -> bool:
        return self.partition_equal and self.definite


def feynman_decomposition_check(N: int = 4, tol: float = 1e-12) -> FeynmanDecompositionReport:
    """Compare the parity-of-e_0 split of F+(C^4) with the eigenspaces of Gamma(-g)
    and test definiteness of +-(.|.) on each part."""
    rep = FockRepresentation(KreinTriplet(-MINKOWSKI), "bose", N)
    basis = rep.basis
    G = rep.gamma.matrix
    parity_plus = frozenset(lab for lab in basis.labels if lab[0] % 2 == 0)
    parity_minus = frozenset(basis.labels) - parity_plus

    dec = fundamental_decomposition(G, tol=1e-10)
    diag_plus = np.real(np.diag(dec.proj_plus))
    diag_minus = np.real(np.diag(dec.proj_minus))
    eigen_plus = frozenset(lab for lab, w in zip(basis.labels, diag_plus) if abs(w - 1) <= tol)
    eigen_minus = frozenset(lab for lab, w in zip(basis.labels, diag_minus) if abs(w - 1) <= tol)

    def min_eig(labels, sign):
        idx = [basis.index(lab) for lab in labels]
        if not idx:
            return math.inf
        gram = sign * G[np.ix_(idx, idx)]
        return float(np.min(np.linalg.eigvalsh(gram)))

    return FeynmanDecompositionReport(
        N,
        basis,
        parity_plus,
        parity_minus,
        eigen_plus,
        eigen_minus,
        min_eig(parity_plus, 1.0),
        min_eig(parity_minus, -1.0),
        tol,
    )


# BRS representation

# c in Q_C Q_B - Q_B Q_C = c Q_B as usually quoted; the matrices give +i
STATED_BRS_CONSTANT = -1j


@dataclass(frozen=True, eq=False)
class BrsRep:
    a: float
    Q_B: np.ndarray
    Q_C: np.ndarray
    U: np.ndarray

    def dagger(self, x: np.ndarray) -> np.ndarray:
        return self.U @ x.conj().T @ self.U.conj().T

    def form(self, v, w) -> complex:
        return complex(np.vdot(v, self.U @ w))


def brs_build(a: float) -> BrsRep:
    a = float(a)
    Q_B = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    Q_C = np.diag([a + 0.5j, a - 0.5j])
    U = ETA0.astype(np.complex128)
    return BrsRep(a, Q_B, Q_C, U)


@dataclass
class BrsReport:
    a: float
    qb_selfadjoint: float
    qc_selfadjoint: float
    qb_nilpotent: float
    measured_constant: complex
    constant_fit_residual: float
    pairing: float
    null_norm: float
    det_U: complex
    decomposition: float
    kernel_cyclic_rank: int
    tol: float

    @property
    def nondegenerate(self) -> bool:
        return abs(abs(self.det_U) - 1) <= self.tol

    @property
    def passed(self) -> bool:
        return (
            max(self.qb_selfadjoint, self.qc_selfadjoint, self.qb_nilpotent, self.pairing, self.decomposition)
            <= self.tol
            and self.nondegenerate
        )


def brs_check(rep: BrsRep, tol: float = 1e-14, samples: int = 50, seed: int = 0) -> BrsReport:
    """Verify the BRS relations under x^dag = U x* U* and measure the
    constant c in Q_C Q_B - Q_B Q_C = c Q_B."""
    QB, QC = rep.Q_B, rep.Q_C
    comm = QC @ QB - QB @ QC
    c = complex(np.vdot(QB, comm) / np.vdot(QB, QB))
    fit = float(np.max(np.abs(comm - c * QB)))

    rng = np.random.default_rng(seed)
    pairing = null = 0.0
    for _ in range(samples):
        x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        x /= np.linalg.norm(x)
        v, w = random_unit_vectors(rng, 2, 2)
        pairing = max(pairing, abs(rep.form(rep.dagger(x) @ v, w) - rep.form(v, x @ w)))
        null = max(null, abs(rep.form(QB @ v, QB @ v)))

    dec = fundamental_decomposition(rep.U)
    e_plus = np.array([1, 1]) / math.sqrt(2)
    e_minus = np.array([1, -1]) / math.sqrt(2)
    decomposition = max(
        float(np.max(np.abs(dec.proj_plus - np.outer(e_plus, e_plus)))),
        float(np.max(np.abs(dec.proj_minus - np.outer(e_minus, e_minus)))),
    )

    # a vector killed by Q_B only reaches its own line under {1, Q_B, Q_C}
    _, s, vh = np.linalg.svd(QB)
    kernel = vh[-1].conj()
    span = np.array([kernel, QB @ kernel, QC @ kernel, QC @ QC @ kernel, QB @ QC @ kernel]).T
    kernel_rank = int(np.sum(np.linalg.svd(span, compute_uv=False) > 1e-8))

    return BrsReport(
        rep.a,
        float(np.max(np.abs(rep.dagger(QB) - QB))),
        float(np.max(np.abs(rep.dagger(QC) - QC))),
        float(np.max(np.abs(QB @ QB))),
        c,
        fit,
        pairing,
        null,
        complex(np.linalg.det(rep.U)),
        decomposition,
        kernel_rank,
        tol,
    )


# eta(theta, xi) family


@dataclass
class EtaFamilyReport:
    theta: float
    xi: float
    metric_residuals: tuple
    det: complex
    ccr: object
    car: object

    @property
    def passed(self) -> bool:
        return self.ccr.passed and self.car.passed


def eta_family_check(theta: float, xi: float, N: int = 4, tol: float = 1e-10, seed: int = 0) -> EtaFamilyReport:
    triplet = KreinTriplet(eta_theta_xi(theta, xi))
    return EtaFamilyReport(
        theta,
        xi,
        tuple(triplet.residuals),
        complex(np.linalg.det(triplet.eta)),
        check_eta_ccr(triplet, N, tol=tol, seed=seed),
        check_eta_car(triplet, tol=tol, seed=seed),
    )
