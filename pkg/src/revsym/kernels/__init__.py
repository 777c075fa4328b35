"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly, unless the environment
variable ``REVSYM_DISABLE_NUMBA`` is set to a non-empty value other than
``0``. Both paths expose the same functions; ``numpy_impl`` and
``numba_impl`` are importable directly for comparison and benchmarks.
"""
import os

from . import _numpy as numpy_impl

try:
    from . import _numba as numba_impl
except ImportError:  # pragma: no cover - numba is a soft dependency
    numba_impl = None

_flag = os.environ.get("REVSYM_DISABLE_NUMBA", "")
USE_NUMBA = numba_impl is not None and _flag in ("", "0")

BACKEND = "numba" if USE_NUMBA else "numpy"
_impl = numba_impl if USE_NUMBA else numpy_impl

inverse_image = _impl.inverse_image
cycle_labels = _impl.cycle_labels
power_image = _impl.power_image
entropy_bits = _impl.entropy_bits
push_forward = _impl.push_forward
project = _impl.project
filter_sequence = _impl.filter_sequence
reconstruct_all = _impl.reconstruct_all
apply_transfers = _impl.apply_transfers

__all__ = [
    "BACKEND",
    "USE_NUMBA",
    "numpy_impl",
    "numba_impl",
    "inverse_image",
    "cycle_labels",
    "power_image",
    "entropy_bits",
    "push_forward",
    "project",
    "filter_sequence",
    "reconstruct_all",
    "apply_transfers",
]
