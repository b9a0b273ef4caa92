import os
import subprocess
import sys

import numpy as np
import pytest

from kreinfock import kernels
from kreinfock.fock import _permutations, enumerate_basis
from kreinfock.kernels import numpy_impl

numba_impl = pytest.importorskip("kreinfock.kernels.numba_impl")


def _fconj(rng, d):
    return (rng.standard_normal(d) + 1j * rng.standard_normal(d)).conj()


@pytest.mark.parametrize("d,N", [(1, 0), (1, 4), (2, 3), (3, 3), (4, 2)])
def test_full_annihilator_backends_agree(rng, d, N):
    f = _fconj(rng, d)
    np.testing.assert_array_equal(numba_impl.sector_offsets(d, N), numpy_impl.sector_offsets(d, N))
    np.testing.assert_allclose(numba_impl.full_annihilator(f, d, N), numpy_impl.full_annihilator(f, d, N), atol=1e-15)


@pytest.mark.parametrize("d,n", [(1, 3), (2, 0), (2, 3), (3, 3), (2, 4)])
@pytest.mark.parametrize("anti", [False, True])
def test_permutation_projector_backends_agree(d, n, anti):
    perms, signs = _permutations(n)
    if not anti:
        signs = np.ones(len(perms))
    np.testing.assert_allclose(
        numba_impl.permutation_projector(d, n, perms, signs),
        numpy_impl.permutation_projector(d, n, perms, signs),
        atol=1e-15,
    )


@pytest.mark.parametrize("d,n", [(1, 3), (2, 0), (2, 3), (3, 2)])
def test_tensor_power_backends_agree(rng, d, n):
    U = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    np.testing.assert_allclose(numba_impl.tensor_power(U, n), numpy_impl.tensor_power(U, n), atol=1e-13)


@pytest.mark.parametrize("d,N", [(1, 3), (2, 3), (3, 4)])
def test_direct_backends_agree(rng, d, N):
    f = _fconj(rng, d)
    bose = enumerate_basis("bose", d, N)
    fermi = enumerate_basis("fermi", d, N)
    np.testing.assert_allclose(
        numba_impl.direct_bose(f, bose.occupations, N + 1), numpy_impl.direct_bose(f, bose.occupations, N + 1), atol=1e-15
    )
    np.testing.assert_allclose(
        numba_impl.direct_fermi(f, fermi.masks, d), numpy_impl.direct_fermi(f, fermi.masks, d), atol=1e-15
    )


@pytest.mark.skipif(bool(os.environ.get("KREINFOCK_DISABLE_NUMBA")), reason="numpy path forced by env flag")
def test_default_backend_is_numba():
    assert kernels.BACKEND == "numba"


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, KREINFOCK_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from kreinfock import kernels; print(kernels.BACKEND, kernels.full_annihilator.__module__)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.split() == ["numpy", "kreinfock.kernels.numpy_impl"]
