"""Hot kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and ``PRODSETS_DISABLE_NUMBA`` is
unset. Both paths return identical arrays (the omega polynomial agrees to
floating accumulation). ``numpy_impl`` and ``numba_impl`` stay importable for
equivalence tests and the benchmark.
"""

from ..config import numba_requested
from . import _numpy as numpy_impl

try:
    from . import _numba as numba_impl
except ImportError:  # numba missing
    numba_impl = None

USE_NUMBA = numba_impl is not None and numba_requested()
BACKEND = "numba" if USE_NUMBA else "numpy"
_impl = numba_impl if USE_NUMBA else numpy_impl

spf_table = _impl.spf_table
prime_mask = _impl.prime_mask
omega_counts = _impl.omega_counts
smooth_parts = _impl.smooth_parts
coprime_mask = _impl.coprime_mask
product_bits = _impl.product_bits
omega_poly_coeffs = _impl.omega_poly_coeffs


def set_threads(n=None):
    """Set the numba worker count; ``None`` means all available. No-op on numpy."""
    if numba_impl is None:
        return 1
    import numba

    n = numba.config.NUMBA_NUM_THREADS if n is None else int(n)
    n = max(1, min(n, numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


def max_threads():
    if numba_impl is None:
        return 1
    import numba

    return numba.config.NUMBA_NUM_THREADS
