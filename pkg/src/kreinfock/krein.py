"""Krein triplets on a finite-dimensional one-particle space.

All hermitian forms are conjugate-linear in the left argument and
linear in the right one, so ``<v|w> = np.vdot(v, w)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, MetricInvalid, NonSquare, NotInvolutive, NotSelfadjoint

DEFAULT_TOL = 1e-10


class MetricResiduals(NamedTuple):
    selfadjoint: float
    involution: float


def _as_matrix(eta) -> np.ndarray:
    arr = np.asarray(eta, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"metric must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise NonSquare("metric over the zero space is not supported")
    return arr


def validate_metric(eta, tol: float = DEFAULT_TOL) -> MetricResiduals:
    """Check that ``eta`` is a selfadjoint unitary and return the residuals.

    Raises NotSelfadjoint or NotInvolutive (carrying the offending
    residual) when the corresponding max-norm residual exceeds ``tol``.
    """
    arr = _as_matrix(eta)
    sa = float(np.max(np.abs(arr - arr.conj().T)))
    if sa > tol:
        raise NotSelfadjoint(f"||eta - eta*||_max = {sa:.3e} > {tol:.1e}", residual=sa)
    inv = float(np.max(np.abs(arr @ arr - np.eye(arr.shape[0]))))
    if inv > tol:
        raise NotInvolutive(f"||eta^2 - I||_max = {inv:.3e} > {tol:.1e}", residual=inv)
    return MetricResiduals(sa, inv)


@dataclass(frozen=True)
class KreinTriplet:
    """C^dim with its standard inner product and a selfadjoint unitary ``eta``."""

    eta: np.ndarray
    tol: float = DEFAULT_TOL
    residuals: MetricResiduals = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arr = _as_matrix(self.eta).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "eta", arr)
        object.__setattr__(self, "residuals", validate_metric(arr, self.tol))

    @property
    def dim(self) -> int:
        return self.eta.shape[0]

    def form(self, v, w) -> complex:
        return indefinite_form(self.eta, v, w)

    def decomposition(self) -> FundamentalDecomposition:
        return fundamental_decomposition(self.eta, self.tol)


def indefinite_form(eta, v, w) -> complex:
    """(v|w) = <v|eta w>."""
    eta = np.asarray(eta)
    v = np.asarray(v)
    w = np.asarray(w)
    n = eta.shape[0]
    if v.shape != (n,) or w.shape != (n,):
        raise DimensionMismatch(f"vectors of shape {v.shape}, {w.shape} for metric of size {n}")
    return complex(np.vdot(v, eta @ w))


def standard_form(v, w) -> complex:
    v = np.asarray(v)
    w = np.asarray(w)
    if v.shape != w.shape:
        raise DimensionMismatch(f"vectors of shape {v.shape} and {w.shape}")
    return complex(np.vdot(v, w))


@dataclass(frozen=True)
class FundamentalDecomposition:
    """Orthonormal bases of the +1 and -1 eigenspaces of a metric.

    ``basis_plus`` and ``basis_minus`` are stored column-wise.
    """

    basis_plus: np.ndarray
    basis_minus: np.ndarray
    proj_plus: np.ndarray
    proj_minus: np.ndarray

    @property
    def dim_plus(self) -> int:
        return self.basis_plus.shape[1]

    @property
    def dim_minus(self) -> int:
        return self.basis_minus.shape[1]

    def symmetry(self) -> np.ndarray:
        """The fundamental symmetry E+ - E-."""
        return self.proj_plus - self.proj_minus


def fundamental_decomposition(eta, tol: float = DEFAULT_TOL) -> FundamentalDecomposition:
    """Split C^dim into the +-1 eigenspaces of ``eta``.

    Eigenvalues from a hermitian eigensolve are snapped to +-1; any
    eigenvalue further than ``tol`` from both is rejected.
    """
    arr = _as_matrix(eta)
    validate_metric(arr, tol)
    herm = 0.5 * (arr + arr.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    plus = np.abs(vals - 1.0) <= tol
    minus = np.abs(vals + 1.0) <= tol
    if not np.all(plus | minus):
        bad = vals[~(plus | minus)]
        raise MetricInvalid(f"eigenvalues {bad} are not +-1 within {tol:.1e}")
    bp = vecs[:, plus]
    bm = vecs[:, minus]
    return FundamentalDecomposition(bp, bm, bp @ bp.conj().T, bm @ bm.conj().T)


def gram_matrix(form: Callable[[np.ndarray, np.ndarray], complex], vectors: Sequence) -> np.ndarray:
    vecs = [np.asarray(v) for v in vectors]
    if vecs and any(v.shape != vecs[0].shape for v in vecs):
        raise DimensionMismatch("all vectors must have the same length")
    k = len(vecs)
    G = np.empty((k, k), dtype=np.complex128)
    for i in range(k):
        for j in range(k):
            G[i, j] = form(vecs[i], vecs[j])
    return G
