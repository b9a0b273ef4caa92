"""Matrix-assembly kernels with a numba path and a pure-numpy fallback.

The numba path is used by default. Set ``KREINFOCK_DISABLE_NUMBA=1``
(before import) to force the numpy path, e.g. for debugging or on
platforms without numba.
"""

import os

from . import numpy_impl

_FLAG = os.environ.get("KREINFOCK_DISABLE_NUMBA", "").strip().lower()

if _FLAG in ("1", "true", "yes", "on"):
    numba_impl = None
else:
    try:
        from . import numba_impl
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba_impl = None

_impl = numba_impl if numba_impl is not None else numpy_impl
BACKEND = "numba" if numba_impl is not None else "numpy"

sector_offsets = _impl.sector_offsets
full_annihilator = _impl.full_annihilator
permutation_projector = _impl.permutation_projector
tensor_power = _impl.tensor_power
direct_bose = _impl.direct_bose
direct_fermi = _impl.direct_fermi

__all__ = [
    "BACKEND",
    "direct_bose",
    "direct_fermi",
    "full_annihilator",
    "numba_impl",
    "numpy_impl",
    "permutation_projector",
    "sector_offsets",
    "tensor_power",
]
