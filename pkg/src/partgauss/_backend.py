"""Kernel backend selection.

The hot loops (counter-based RNG, rejection sampling, path synthesis, empirical
CF sums) exist twice: as numba ``@njit`` kernels and as vectorised numpy code.
Set ``PARTGAUSS_BACKEND=numpy`` to force the pure-numpy path; the default is
numba when it imports cleanly.
"""
import os
import warnings

BACKEND_ENV = "PARTGAUSS_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

if _requested == "numba" and not HAVE_NUMBA:  # pragma: no cover
    warnings.warn("numba is not installed - falling back to numpy kernels")

USE_NUMBA = _requested == "numba" and HAVE_NUMBA

if USE_NUMBA:
    from . import _kernels_numba as kernels
else:
    from . import _kernels_numpy as kernels

BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = ["BACKEND", "BACKEND_ENV", "HAVE_NUMBA", "USE_NUMBA", "kernels"]
