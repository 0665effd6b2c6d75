"""Kernel backend selection.

The numba kernels are used unless ``APPROXCOVER_DISABLE_NUMBA`` is set to a
truthy value or numba cannot be imported; then the pure-numpy kernels run.
"""

import os

from . import _kernels_numpy

_FLAG = os.environ.get("APPROXCOVER_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

kernels = _kernels_numpy
if not _DISABLED:
    try:
        from . import _kernels_numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass
    else:
        kernels = _kernels_numba

BACKEND = kernels.NAME


def get_kernels(name=None):
    """Return the kernel module named ``name`` (default: the active one)."""
    if name is None:
        return kernels
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown kernel backend {name!r}")
