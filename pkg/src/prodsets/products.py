"""Product sets A·B ∩ [1, x], k-fold products and multiplication-table counts."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import check_capacity
from .errors import DomainError
from .sets import WindowSet

# Put the sparser set outside once sizes differ by this factor.
SPARSITY_RATIO = 4


@dataclass(frozen=True, eq=False)
class ProductWindow:
    x: int
    bits: np.ndarray
    meta: tuple = ()

    @property
    def count(self):
        return self.window.count

    @property
    def window(self):
        w = self.__dict__.get("_window")
        if w is None:
            w = WindowSet.from_mask(self.bits)
            object.__setattr__(self, "_window", w)
        return w


def _as_window(obj):
    return obj.window if isinstance(obj, ProductWindow) else obj


def product_window(A, B, meta=None):
    """Exact bitset of ``{ab <= x : a in A, b in B}`` for windows sharing ``x``.

    Cost is sum over outer ``a`` of ``|inner ∩ [1, x/a]|``; ``B`` goes outside
    when it is at least ``SPARSITY_RATIO`` times sparser than ``A``.
    """
    A, B = _as_window(A), _as_window(B)
    if A.x != B.x:
        raise DomainError(f"window sizes differ: {A.x} vs {B.x}")
    x = A.x
    check_capacity(x + 1, 1, "product window")
    outer, inner = A.members(), B.members()
    if inner.size * SPARSITY_RATIO <= outer.size:
        outer, inner = inner, outer
    if outer.size == 0 or inner.size == 0:
        bits = np.zeros(x + 1, dtype=np.bool_)
    else:
        bits = kernels.product_bits(outer, inner, x)
    bits[0] = False
    bits.flags.writeable = False
    return ProductWindow(x, bits, tuple(meta) if meta else ())


def kfold_window(A, k):
    """``A^k ∩ [1, x]`` by left fold; ``A^1 = A``."""
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    A = _as_window(A)
    acc = ProductWindow(A.x, A.bits, ("A^1",))
    for j in range(2, int(k) + 1):
        acc = product_window(acc, A, (f"A^{j}",))
    return acc


def mult_table_count(n):
    """M_n: the number of distinct products ``i*j`` with ``1 <= i, j <= n``."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be positive")
    x = n * n
    check_capacity(x + 1, 2, "multiplication table window")
    bits = np.zeros(x + 1, dtype=np.bool_)
    bits[1 : n + 1] = True
    first = WindowSet.from_mask(bits)
    return product_window(first, first, (f"[1,{n}]", f"[1,{n}]")).count
