"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``WEYLHERM_PURE_PYTHON`` is set to a non-empty value,
the numpy fallback is used.  ``BACKEND`` names the active implementation.
"""
import os

from . import _fallback

if os.environ.get("WEYLHERM_PURE_PYTHON"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

advect = _impl.advect
add_full_coupling = _impl.add_full_coupling
add_band_coupling = _impl.add_band_coupling
