"""Factorization infrastructure: smallest-prime-factor tables, Omega counters,
smooth/rough splits and bulk sieved arrays over windows [1, x].

Real thresholds ``y`` and ``t`` are compared against primes as ``p <= floor(t)``.
"""

import math
import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .config import check_capacity
from .errors import DomainError, OutOfRangeError

INF = math.inf

_TABLE_MAGIC = b"PSFT"
_TABLE_VERSION = 1


def prime_bound(t):
    """Largest integer ``b`` with ``b <= t`` (``inf`` stays ``inf``)."""
    if t == INF:
        return INF
    if t != t:
        raise DomainError("threshold is NaN")
    return math.floor(t)


def root_bound(y, u):
    """Largest integer ``b`` with ``b <= y ** (1/u)``.

    Exact when ``u`` is a positive integer: uses ``b**u <= y``; otherwise the
    floating root is floored and nudged with an integer-power check.
    """
    if u <= 0:
        raise DomainError("u must be positive")
    b = math.floor(y ** (1.0 / u))
    if float(u).is_integer():
        u = int(u)
        while b > 0 and b**u > y:
            b -= 1
        while (b + 1) ** u <= y:
            b += 1
    return max(b, 1)


@lru_cache(maxsize=32)
def _primes_cached(n):
    check_capacity(n + 1, 1, "prime sieve")
    mask = kernels.prime_mask(n)
    out = np.flatnonzero(mask).astype(np.int64)
    out.flags.writeable = False
    return out


def primes_up_to(t):
    """Ascending int64 array of primes ``p <= t`` (read-only, cached)."""
    n = prime_bound(t)
    if n == INF:
        raise DomainError("cannot list primes up to infinity")
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    return _primes_cached(int(n))


@dataclass(frozen=True)
class Factorization:
    n: int
    pairs: tuple

    @property
    def big_omega(self):
        return sum(e for _, e in self.pairs)

    def value(self):
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out


@dataclass(frozen=True)
class SmoothRoughSplit:
    n: int
    threshold: float
    smooth: int
    rough: int


@dataclass(frozen=True, eq=False)
class FactorTable:
    """Smallest-prime-factor table for ``[0, limit]``.

    ``spf[0] = 0`` and ``spf[1] = 1`` are placeholders; invariants hold on ``[2, limit]``.
    """

    limit: int
    spf: np.ndarray
    primes: np.ndarray

    def _check(self, n):
        if n < 1 or n > self.limit:
            raise OutOfRangeError(f"n={n} outside the table range [1, {self.limit}]")

    def factorize(self, n):
        n = int(n)
        self._check(n)
        pairs = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pairs.append((p, e))
        return pairs

    def omega(self, n, y=INF):
        bound = prime_bound(y)
        return sum(e for p, e in self.factorize(n) if p <= bound)

    def extreme_primes(self, n):
        pairs = self.factorize(n)
        if not pairs:
            return INF, 1
        return pairs[0][0], pairs[-1][0]

    def smooth_part(self, n, t):
        bound = prime_bound(t)
        a = 1
        for p, e in self.factorize(n):
            if p > bound:
                break
            a *= p**e
        return a

    def save(self, path):
        """Write the table: 16-byte header (magic, u32 version, u64 limit), then u32 LE spf."""
        with open(path, "wb") as fh:
            fh.write(_TABLE_MAGIC + struct.pack("<IQ", _TABLE_VERSION, self.limit))
            fh.write(self.spf.astype("<u4", copy=False).tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            head = fh.read(16)
            if len(head) != 16 or head[:4] != _TABLE_MAGIC:
                raise DomainError(f"{path}: not a factor table dump")
            version, limit = struct.unpack("<IQ", head[4:])
            if version != _TABLE_VERSION:
                raise DomainError(f"{path}: unsupported version {version}")
            spf = np.frombuffer(fh.read(), dtype="<u4").astype(np.uint32)
        if spf.size != limit + 1:
            raise DomainError(f"{path}: truncated table")
        primes = np.flatnonzero(spf[2:] == np.arange(2, limit + 1)).astype(np.int64) + 2
        return cls(limit, spf, primes)


def build_factor_table(N):
    """Build the smallest-prime-factor table for ``[2, N]``.

    Raises
    ------
    DomainError
        If ``N < 2`` or ``N`` does not fit 32-bit entries.
    CapacityError
        If the table would exceed the memory budget.
    """
    N = int(N)
    if N < 2:
        raise DomainError("factor table limit must be >= 2")
    if N >= 2**32:
        raise DomainError("factor table limit must be below 2**32")
    check_capacity(N + 1, 4, "factor table")
    spf = kernels.spf_table(N)
    idx = np.arange(2, N + 1, dtype=np.int64)
    primes = idx[spf[2:] == idx]
    spf.flags.writeable = False
    primes.flags.writeable = False
    return FactorTable(N, spf, primes)


def factorize(n, table):
    pairs = table.factorize(n)
    return Factorization(int(n), tuple(pairs))


def omega(n, y, table):
    """Omega_y(n): prime factors ``p <= y`` counted with multiplicity; ``y=inf`` gives Omega(n)."""
    return table.omega(n, y)


def extreme_primes(n, table):
    """(P^-(n), P^+(n)) with P^-(1) = inf and P^+(1) = 1."""
    return table.extreme_primes(n)


def smooth_rough_split(n, t, table):
    if t < 1:
        raise DomainError("threshold must be >= 1")
    a = table.smooth_part(n, t)
    return SmoothRoughSplit(int(n), t, a, int(n) // a)


def bulk_omega_y(x, y):
    """Array ``out`` of length ``x + 1`` with ``out[n] = Omega_y(n)``; ``out[0] = 0``.

    Computed by additive sieving over prime powers ``p^a <= x`` with ``p <= y``.
    """
    x = int(x)
    if x < 1:
        raise DomainError("x must be positive")
    check_capacity(x + 1, 1, "Omega_y array")
    bound = x if prime_bound(y) == INF else min(prime_bound(y), x)
    return kernels.omega_counts(x, primes_up_to(bound))


def bulk_smooth_part(x, t):
    """Array ``out`` of length ``x + 1`` with ``out[n]`` the ``t``-smooth part of ``n``."""
    x = int(x)
    if x < 1:
        raise DomainError("x must be positive")
    if t < 1:
        raise DomainError("threshold must be >= 1")
    check_capacity(x + 1, 8, "smooth-part array")
    bound = x if prime_bound(t) == INF else min(prime_bound(t), x)
    return kernels.smooth_parts(x, primes_up_to(bound))


def prime_pi_table(n):
    """Cumulative prime counts ``pi[v]`` for ``0 <= v <= n``."""
    n = int(n)
    check_capacity(n + 1, 8, "prime counting table")
    mask = kernels.prime_mask(max(n, 1))
    return np.cumsum(mask[: n + 1], dtype=np.int64)
