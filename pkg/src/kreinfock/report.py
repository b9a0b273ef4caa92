"""Verification suites and the structured report they produce."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import ConfigInvalid, KreinFockError, ModelBuildFailed, ParseError, SchemaError, UnknownModel
from .fields import (
    FockRepresentation,
    check_adjoint_pairing,
    check_cyclicity,
    check_dagger_algebra,
    check_involution_swap,
    check_vacuum,
    dagger_identity_residual,
    default_probes,
    random_unit_vectors,
    relation_residuals,
    vacuum_creation_residual,
)
from .fock import check_projection_commutation, enumerate_basis, full_projector, second_quantization
from .krein import KreinTriplet, fundamental_decomposition, gram_matrix, validate_metric
from .models import (
    STATED_BRS_CONSTANT,
    REGISTRY,
    ExpectedRelation,
    ModelSpec,
    brs_build,
    brs_check,
    build_model,
    check_expected_relations,
    feynman_decomposition_check,
)

CHECK_GROUPS = ("relations", "adjoint", "vacuum", "cyclicity", "decomposition", "dagger-swap")

# every record's anchor comes from this table
ANCHORS = {
    "metric": "Krein triplet: eta is a selfadjoint unitary",
    "eta_ccr": "eta-CCR: a(f)a^dag(g) - a^dag(g)a(f) = <f|eta g> I",
    "eta_car": "eta-CAR: a(f)a^dag(g) + a^dag(g)a(f) = <f|eta g> I",
    "zero_relations": "eta-CCR/eta-CAR: a(f)a(g) -+ a(g)a(f) = a^dag(f)a^dag(g) -+ a^dag(g)a^dag(f) = 0",
    "self_consistency": "expected coefficient equals <f|eta g>",
    "truncation": "truncated Fock space: relation defect outside the asserted domain",
    "adjoint": "Fock representation: (a^dag(f)v|w) = (v|a(f)w) with (x|y) = <x|Gamma(eta)y>",
    "vacuum": "Fock representation: a(f)Omega = 0",
    "vacuum_creation": "a^dag(f)Omega = eta f",
    "cyclicity": "Omega is cyclic for the algebra generated by a(f), a^dag(f)",
    "fundamental_decomposition": "fundamental decomposition H = H+ (+) H-, eta = E+ - E-",
    "gamma_krein": "Gamma(eta) is a selfadjoint unitary on the Fock space",
    "projection_commutation": "P+- Gamma(eta) = Gamma(eta) P+-",
    "dagger_identity": "a^dag(f) = Gamma(eta) a*(f) Gamma(eta)* = a*(eta f)",
    "dagger_algebra": "x^dag = Gamma(eta) x* Gamma(eta)* is an involution",
    "involution_swap": "Gamma(eta) A_eta Gamma(eta)* satisfies the ordinary CCR/CAR",
    "feynman_decomposition": "F+(C^4)+- split by parity of the e_0 count; +-(.|.) positive-definite",
    "brs_relations": "BRS: Q_B^dag = Q_B, Q_B^2 = 0, Q_C^dag = Q_C",
    "brs_constant": "BRS: Q_C Q_B - Q_B Q_C = c Q_B (stated c = -i)",
    "brs_pairing": "BRS: (x^dag v|w) = (v|xw) for x^dag = U x* U*",
    "brs_decomposition": "BRS: H+ = C(e1+e2), H- = C(e1-e2), U nondegenerate",
    "brs_null": "BRS: (Q_B v|Q_B v) = (v|Q_B^2 v) = 0",
}

# verdict tolerances, overridable with --tol
DEFAULT_TOLERANCES = {
    "bose": 1e-10,
    "fermi": 1e-12,
    "identity": 1e-12,
    "swap": 1e-10,
    "krein": 1e-12,
    "brs": 1e-14,
}

ENV_REPORT_DIR = "KREINFOCK_REPORT_DIR"


def fmt(x: float) -> str:
    """Full-precision scientific notation."""
    return f"{float(x) + 0.0:.16e}"


def fmt_complex(z: complex) -> str:
    re, im = z.real + 0.0, z.imag + 0.0
    return f"{fmt(re)}{'+' if im >= 0 else '-'}{fmt(abs(im))}j"


@dataclass
class CheckRecord:
    name: str
    anchor_key: str
    residual: float | None
    tolerance: float | None
    passed: bool | None = None
    informative: bool = False
    domain: str = ""
    value: str | None = None

    @property
    def verdict(self) -> str:
        if self.informative:
            return "info"
        if self.passed is not None:
            return "pass" if self.passed else "fail"
        return "pass" if self.residual <= self.tolerance else "fail"

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "anchor": ANCHORS[self.anchor_key],
            "residual": None if self.residual is None else fmt(self.residual),
            "tolerance": None if self.tolerance is None else fmt(self.tolerance),
            "verdict": self.verdict,
            "informative": self.informative,
            "domain": self.domain,
        }
        if self.value is not None:
            out["value"] = self.value
        return out


@dataclass
class RunConfig:
    model: str
    params: dict = field(default_factory=dict)
    cutoff: int | None = None
    tol: float | None = None
    seed: int = 0
    checks: tuple = CHECK_GROUPS
    out: Path | None = None

    def validate(self):
        if self.tol is not None and not (self.tol > 0 and math.isfinite(self.tol)):
            raise ConfigInvalid(f"tolerance must be positive, got {self.tol}")
        unknown = set(self.checks) - set(CHECK_GROUPS)
        if unknown:
            raise ConfigInvalid(f"unknown checks {sorted(unknown)}; choose from {', '.join(CHECK_GROUPS)}")
        if self.cutoff is not None and self.cutoff < 0:
            raise ConfigInvalid(f"cutoff must be >= 0, got {self.cutoff}")


@dataclass
class VerificationReport:
    model: str
    params: dict
    source: str
    records: list
    environment: dict

    @property
    def passed(self) -> bool:
        return all(r.verdict != "fail" for r in self.records)

    def to_dict(self, include_time: bool = True) -> dict:
        env = dict(self.environment)
        if not include_time:
            env.pop("wall_time_s", None)
        return {
            "model": self.model,
            "params": self.params,
            "source": self.source,
            "overall": "pass" if self.passed else "fail",
            "checks": [r.to_dict() for r in self.records],
            "environment": env,
        }

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), indent=2) + "\n"


# model files


def _complex_entry(entry, where):
    if not isinstance(entry, dict) or "re" not in entry:
        raise SchemaError(f"{where}: expected an object {{re, im}}, got {entry!r}")
    try:
        return complex(float(entry["re"]), float(entry.get("im", 0.0)))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where}: non-numeric entry {entry!r}") from exc


def _complex_vector(raw, d, where):
    if not isinstance(raw, list) or len(raw) != d:
        raise SchemaError(f"{where}: expected a list of {d} complex entries")
    return np.array([_complex_entry(x, f"{where}[{i}]") for i, x in enumerate(raw)])


def load_model_file(path) -> ModelSpec:
    """Read a custom model: {name, statistics, dim, eta: {rows}, cutoff, probes?}."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    missing = [k for k in ("name", "statistics", "dim", "eta", "cutoff") if k not in data]
    if missing:
        raise SchemaError(f"{path}: missing fields {missing}")
    stats = data["statistics"]
    if stats not in ("bose", "fermi"):
        raise SchemaError(f"{path}: statistics must be 'bose' or 'fermi', got {stats!r}")
    dim, cutoff = data["dim"], data["cutoff"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError(f"{path}: dim must be a positive integer")
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise SchemaError(f"{path}: cutoff must be a nonnegative integer")
    rows = data["eta"].get("rows") if isinstance(data["eta"], dict) else None
    if not isinstance(rows, list) or len(rows) != dim:
        raise SchemaError(f"{path}: eta.rows must be a list of {dim} rows")
    eta = np.array([_complex_vector(r, dim, f"eta.rows[{i}]") for i, r in enumerate(rows)])
    validate_metric(eta)

    kind = "commutator" if stats == "bose" else "anticommutator"
    relations = []
    probes = data.get("probes")
    if probes is None:
        eye = np.eye(dim, dtype=np.complex128)
        for i in range(dim):
            for j in range(dim):
                relations.append(ExpectedRelation(f"[a_{i + 1}, a_{j + 1}^dag]", eye[i], eye[j], complex(eta[i, j]), kind))
    else:
        if not isinstance(probes, list):
            raise SchemaError(f"{path}: probes must be a list")
        for k, pr in enumerate(probes):
            if not isinstance(pr, dict) or "f" not in pr or "g" not in pr:
                raise SchemaError(f"{path}: probes[{k}] needs fields f and g")
            f = _complex_vector(pr["f"], dim, f"probes[{k}].f")
            g = _complex_vector(pr["g"], dim, f"probes[{k}].g")
            if "expected" in pr:
                coeff = _complex_entry(pr["expected"], f"probes[{k}].expected")
            else:
                coeff = complex(np.vdot(f, eta @ g))
            relations.append(ExpectedRelation(pr.get("label", f"probe {k}"), f, g, coeff, kind))
    return ModelSpec(str(data["name"]), stats, dim, eta, "file", {"cutoff": cutoff}, cutoff, tuple(relations), "custom metric")


def list_models() -> list:
    return [
        {
            "name": name,
            "anchor": REGISTRY[name].anchor,
            "description": REGISTRY[name].description,
            "params": {k: {"type": t.__name__, "default": v} for k, (t, v) in REGISTRY[name].params.items()},
        }
        for name in sorted(REGISTRY)
    ]


def catalog_json() -> str:
    return json.dumps(list_models(), indent=2) + "\n"


# suites


def _resolve(config: RunConfig) -> ModelSpec:
    if config.model in REGISTRY:
        params = dict(config.params)
        if config.cutoff is not None and "cutoff" in REGISTRY[config.model].params:
            params["cutoff"] = config.cutoff
        return build_model(config.model, params)
    path = Path(config.model)
    if path.suffix == ".json" or path.exists():
        if config.params:
            raise ConfigInvalid("--param is not accepted for model files")
        spec = load_model_file(path)
        if config.cutoff is not None:
            spec = ModelSpec(
                spec.name, spec.statistics, spec.d, spec.eta, spec.builder,
                {"cutoff": config.cutoff}, config.cutoff, spec.expected_relations, spec.anchor,
            )
        return spec
    raise UnknownModel(f"unknown model {config.model!r}")


def _tolerances(config):
    if config.tol is None:
        return dict(DEFAULT_TOLERANCES)
    return {k: config.tol for k in DEFAULT_TOLERANCES}


def _probe_vectors(d, seed, n_random=10):
    """Basis vectors followed by seeded random unit vectors."""
    rng = np.random.default_rng(seed)
    return list(np.eye(d, dtype=np.complex128)) + list(random_unit_vectors(rng, n_random, d))


def _fock_suite(spec: ModelSpec, config: RunConfig, tols: dict, env: dict) -> list:
    rep = FockRepresentation(KreinTriplet(spec.eta), spec.statistics, spec.cutoff)
    bose = spec.statistics == "bose"
    rel_tol = tols[spec.statistics]
    env["basis_size"] = rep.basis.size
    env["full_basis_size"] = rep.basis_full.size
    records = []
    domain = "whole space" if rep.exact else f"sectors 0..{rep.cutoff - 2}"

    if "relations" in config.checks:
        checks = check_expected_relations(spec, rep)
        for c in checks:
            records.append(CheckRecord(f"relation {c.label} = {fmt_complex(c.coefficient)}",
                                       "eta_ccr" if bose else "eta_car", c.residual, rel_tol, domain=domain))
        probes = default_probes(spec.d, seed=config.seed)[spec.d * spec.d :]
        random = [relation_residuals(rep, f, g) for f, g in probes]
        records.append(CheckRecord("relations on seeded random probes", "eta_ccr" if bose else "eta_car",
                                   max(p.residual for p in random), rel_tol, domain=domain))
        zero = max([c.zero_residual for c in checks] + [p.zero_residual for p in random])
        records.append(CheckRecord("zero relations", "zero_relations", zero, rel_tol, domain="whole space"))
        records.append(CheckRecord("expected coefficients equal <f|eta g>", "self_consistency",
                                   spec.self_consistency_residual(), tols["identity"]))
        # vacuum expectation of the bracket reproduces the coefficient
        vac = rep.basis.vacuum()
        measured = []
        for r in spec.expected_relations:
            a_f, a_g = rep.annihilator(r.f), rep.annihilator(r.g)
            measured.append(np.vdot(vac, rep.bracket(a_f, rep.creator_dagger(r.g)).matrix @ vac))
        records.append(CheckRecord(
            "measured vacuum coefficients", "self_consistency",
            max((abs(m - r.coefficient) for m, r in zip(measured, spec.expected_relations)), default=0.0),
            rel_tol, value="[" + ", ".join(fmt_complex(m) for m in measured) + "]",
        ))
        if not rep.exact:
            defect = max([c.outside_defect for c in checks] + [p.outside_defect for p in random])
            records.append(CheckRecord("top-sector relation defect", "truncation", defect, None, informative=True,
                                       domain=f"sectors {rep.cutoff - 1}..{rep.cutoff}"))

    fs = _probe_vectors(spec.d, config.seed)
    if "adjoint" in config.checks:
        worst = max(check_adjoint_pairing(rep.pair(f), rep.gamma, samples=50, seed=config.seed + k)
                    for k, f in enumerate(fs))
        records.append(CheckRecord("adjoint pairing", "adjoint", worst, tols["krein"],
                                   domain="whole space" if not bose else f"sectors 0..{rep.cutoff - 1}"))

    if "vacuum" in config.checks:
        ok = all(check_vacuum(rep.pair(f)) for f in fs)
        records.append(CheckRecord("annihilators kill the vacuum", "vacuum", 0.0 if ok else 1.0, 0.0, passed=ok))
        if rep.basis.top >= 1:
            res = max(vacuum_creation_residual(rep, f) for f in fs)
            records.append(CheckRecord("a^dag(f) Omega = eta f", "vacuum_creation", res, tols["identity"]))

    if "cyclicity" in config.checks:
        cyc = check_cyclicity(rep)
        records.append(CheckRecord("creator monomials span the space", "cyclicity", float(cyc.size - cyc.rank), 0.0,
                                   passed=cyc.passed, value=f"rank {cyc.rank} of {cyc.size} ({cyc.monomials} monomials)"))

    if "decomposition" in config.checks:
        dec = fundamental_decomposition(spec.eta)
        records.append(CheckRecord("eta = E+ - E-", "fundamental_decomposition",
                                   float(np.max(np.abs(dec.symmetry() - spec.eta))), tols["krein"],
                                   value=f"dim H+ = {dec.dim_plus}, dim H- = {dec.dim_minus}"))
        form = lambda v, w: np.vdot(v, spec.eta @ w)  # noqa: E731
        defin = 0.0
        for basis, sign in ((dec.basis_plus, 1.0), (dec.basis_minus, -1.0)):
            if basis.shape[1]:
                G = sign * gram_matrix(form, list(basis.T))
                defin = max(defin, float(np.max(np.abs(G - np.eye(basis.shape[1])))))
        records.append(CheckRecord("+-(.|.) is the identity Gram matrix on H+-", "fundamental_decomposition",
                                   defin, tols["krein"]))
        G = rep.gamma
        gk = max((G - G.H).max_abs(), (G @ G - type(G).identity(rep.basis)).max_abs())
        records.append(CheckRecord("Gamma(eta) selfadjoint unitary", "gamma_krein", gk, tols["krein"]))
        full = rep.basis_full
        gamma_full = second_quantization(spec.eta, full)
        pc = check_projection_commutation(gamma_full, full_projector(full, spec.statistics))
        records.append(CheckRecord("P Gamma(eta) = Gamma(eta) P", "projection_commutation", pc, tols["krein"],
                                   domain=f"full Fock space, N = {full.cutoff}"))
        if spec.builder == "feynman":
            fd = feynman_decomposition_check(spec.cutoff, tol=tols["krein"])
            records.append(CheckRecord("parity of e_0 count = Gamma(eta) eigenspaces", "feynman_decomposition",
                                       0.0 if fd.partition_equal else 1.0, 0.0, passed=fd.partition_equal,
                                       value=f"{len(fd.parity_plus)} even / {len(fd.parity_minus)} odd labels"))
            records.append(CheckRecord("+-(.|.) positive-definite on F+(C^4)+-", "feynman_decomposition",
                                       max(0.0, 1 - min(fd.min_plus_eigenvalue, fd.min_minus_eigenvalue)),
                                       tols["krein"], passed=fd.definite,
                                       value=f"min eigenvalues {fmt(fd.min_plus_eigenvalue)}, {fmt(fd.min_minus_eigenvalue)}"))

    if "dagger-swap" in config.checks:
        records.append(CheckRecord("a^dag(f) = a*(eta f)", "dagger_identity",
                                   max(dagger_identity_residual(rep, f) for f in fs), tols["identity"]))
        alg = check_dagger_algebra(rep.gamma, pairs=50, seed=config.seed)
        records.append(CheckRecord("dagger involutive", "dagger_algebra", alg.involutive, tols["identity"]))
        records.append(CheckRecord("dagger antimultiplicative", "dagger_algebra", alg.antimultiplicative, tols["identity"]))
        records.append(CheckRecord("dagger conjugate-linear", "dagger_algebra", alg.conjugate_linear, tols["identity"]))
        swap = check_involution_swap(rep, seed=config.seed)
        records.append(CheckRecord("Gamma a(f) Gamma* obeys ordinary relations", "involution_swap",
                                   swap.ordinary_residual, tols["swap"], domain=domain))
        records.append(CheckRecord("Gamma a(f) Gamma* = a(eta f)", "involution_swap",
                                   swap.membership_residual, tols["identity"]))
    return records


def _brs_suite(spec: ModelSpec, config: RunConfig, tols: dict, env: dict) -> list:
    rep = brs_build(spec.params["a"])
    r = brs_check(rep, tol=tols["brs"], seed=config.seed)
    env["basis_size"] = 2
    records = []
    if "relations" in config.checks:
        records.append(CheckRecord("Q_B^dag = Q_B", "brs_relations", r.qb_selfadjoint, tols["brs"]))
        records.append(CheckRecord("Q_C^dag = Q_C", "brs_relations", r.qc_selfadjoint, tols["brs"]))
        records.append(CheckRecord("Q_B^2 = 0", "brs_relations", r.qb_nilpotent, tols["brs"]))
        records.append(CheckRecord(
            "measured_commutator_constant", "brs_constant", r.constant_fit_residual, None, informative=True,
            value=f"measured {fmt_complex(r.measured_constant)}; stated {fmt_complex(STATED_BRS_CONSTANT)}; "
                  f"differs from stated: {abs(r.measured_constant - STATED_BRS_CONSTANT) > tols['brs']}",
        ))
        records.append(CheckRecord("(Q_B v|Q_B v) = 0", "brs_null", r.null_norm, tols["brs"]))
    if "adjoint" in config.checks:
        records.append(CheckRecord("(x^dag v|w) = (v|xw)", "brs_pairing", r.pairing, tols["brs"]))
    if "decomposition" in config.checks:
        records.append(CheckRecord("H+- = C(e1 +- e2)", "brs_decomposition", r.decomposition, tols["brs"]))
        records.append(CheckRecord("U nondegenerate (|det U| = 1)", "brs_decomposition",
                                   abs(abs(r.det_U) - 1), tols["brs"]))
    if "cyclicity" in config.checks:
        records.append(CheckRecord("span generated from ker Q_B", "cyclicity", None, None, informative=True,
                                   value=f"rank {r.kernel_cyclic_rank} of 2: a Q_B-annihilated vector is not cyclic"))
    return records


def run_suite(config: RunConfig) -> VerificationReport:
    """Run the selected check groups for one model; deterministic given the seed."""
    config.validate()
    start = time.perf_counter()
    try:
        spec = _resolve(config)
    except KreinFockError:
        raise
    except ValueError as exc:
        raise ModelBuildFailed(str(exc)) from exc
    if spec.statistics == "bose" and "relations" in config.checks and spec.cutoff < 2:
        raise ConfigInvalid(f"bose relation checks need cutoff >= 2, got {spec.cutoff}")
    tols = _tolerances(config)
    env = {"seed": config.seed, "backend": kernels.BACKEND}
    records = [CheckRecord("metric is a selfadjoint unitary", "metric", max(validate_metric(spec.eta)), 1e-10)]
    if spec.statistics == "matrix":
        records += _brs_suite(spec, config, tols, env)
    else:
        records += _fock_suite(spec, config, tols, env)
    env["wall_time_s"] = round(time.perf_counter() - start, 6)
    params = {k: spec.params[k] for k in sorted(spec.params)}
    source = "builtin" if config.model in REGISTRY else str(config.model)
    return VerificationReport(spec.name, params, source, records, env)


@dataclass
class DecompositionSummary:
    model: str
    one_particle: dict
    fock: dict

    def to_json(self) -> str:
        return json.dumps({"model": self.model, "one_particle": self.one_particle, "fock": self.fock}, indent=2) + "\n"


def decompose(model: str, cutoff: int, params: dict | None = None) -> DecompositionSummary:
    """Dimensions of the +-1 eigenspaces of eta and of Gamma(eta) on each Fock sector."""
    spec = _resolve(RunConfig(model, params or {}, cutoff))
    dec = fundamental_decomposition(spec.eta)
    one = {
        "dim": spec.d,
        "dim_plus": dec.dim_plus,
        "dim_minus": dec.dim_minus,
        "basis_plus": [[fmt_complex(x) for x in v] for v in dec.basis_plus.T],
        "basis_minus": [[fmt_complex(x) for x in v] for v in dec.basis_minus.T],
    }
    fock = {}
    if spec.statistics in ("bose", "fermi"):
        basis = enumerate_basis(spec.statistics, spec.d, spec.cutoff)
        gamma = second_quantization(spec.eta, basis).matrix
        sectors = []
        for n in range(basis.top + 1):
            s = basis.sector(n)
            vals = np.linalg.eigvalsh(0.5 * (gamma[s, s] + gamma[s, s].conj().T))
            sectors.append({"n": n, "dim_plus": int(np.sum(vals > 0)), "dim_minus": int(np.sum(vals < 0))})
        fock = {"statistics": spec.statistics, "cutoff": spec.cutoff, "sectors": sectors}
        if spec.builder == "feynman":
            fd = feynman_decomposition_check(spec.cutoff)
            fock["parity_partition_matches"] = fd.partition_equal
            fock["even_e0_labels"] = len(fd.parity_plus)
            fock["odd_e0_labels"] = len(fd.parity_minus)
    return DecompositionSummary(spec.name, one, fock)
