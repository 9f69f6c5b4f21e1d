"""Runtime knobs: memory budget, numba toggle and thread count."""

import os

from .errors import CapacityError, DomainError

MEMORY_ENV = "PRODSETS_MEMORY_BUDGET"
DISABLE_NUMBA_ENV = "PRODSETS_DISABLE_NUMBA"

DEFAULT_MEMORY_BUDGET = 4 * 2**30  # bytes

# Segment length for window-partitioned kernels.
SEGMENT = 1 << 16


def _parse_bytes(text):
    raw = text
    text = text.strip().lower()
    scale = 1
    for suffix, mult in (("k", 2**10), ("m", 2**20), ("g", 2**30), ("t", 2**40)):
        if text.endswith(suffix):
            text, scale = text[:-1], mult
            break
    try:
        value = int(float(text) * scale)
    except (ValueError, OverflowError):
        raise DomainError(f"memory budget {raw!r} is not a byte count") from None
    if value <= 0:
        raise DomainError(f"memory budget must be positive, got {raw!r}")
    return value


_budget = None


def memory_budget():
    """Current memory budget in bytes (env var read once, overridable)."""
    global _budget
    if _budget is None:
        raw = os.environ.get(MEMORY_ENV)
        _budget = _parse_bytes(raw) if raw else DEFAULT_MEMORY_BUDGET
    return _budget


def set_memory_budget(nbytes):
    global _budget
    _budget = None if nbytes is None else int(nbytes)


def check_capacity(count, itemsize, what="array"):
    """Raise CapacityError if ``count`` items of ``itemsize`` bytes exceed the budget."""
    need = int(count) * int(itemsize)
    if need > memory_budget():
        raise CapacityError(
            f"{what} needs {need} bytes, over the memory budget of {memory_budget()} bytes"
        )


def numba_requested():
    flag = os.environ.get(DISABLE_NUMBA_ENV, "")
    return flag.strip().lower() not in ("1", "true", "yes", "on")
