"""Truncated Fock-space representations of eta-canonical (anti)commutation
relations over Krein triplets, with numerical verification suites."""

from .errors import KreinFockError
from .fields import (
    FockRepresentation,
    check_eta_car,
    check_eta_ccr,
    compressed_field,
    dagger,
    direct_bose,
    direct_fermi,
)
from .fock import GradedOperator, SectorBasis, enumerate_basis, second_quantization
from .krein import KreinTriplet, fundamental_decomposition, indefinite_form, validate_metric
from .models import build_model, model_names
from .report import RunConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "FockRepresentation",
    "GradedOperator",
    "KreinFockError",
    "KreinTriplet",
    "RunConfig",
    "SectorBasis",
    "build_model",
    "check_eta_car",
    "check_eta_ccr",
    "compressed_field",
    "dagger",
    "direct_bose",
    "direct_fermi",
    "enumerate_basis",
    "fundamental_decomposition",
    "indefinite_form",
    "model_names",
    "run_suite",
    "second_quantization",
    "validate_metric",
]
