"""Rule-defined integer sets, their bitset windows over [1, x] and density traces.

Window bit ``n`` is membership of ``n``; bit 0 is unused and always clear.
"""

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .analytic import normalize_primes
from .config import check_capacity
from .errors import DomainError, OutOfRangeError
from .sieve import build_factor_table, bulk_omega_y

_WINDOW_MAGIC = b"PSWS"
_WINDOW_VERSION = 1


@dataclass(frozen=True, eq=False)
class WindowSet:
    """Sealed membership bitset for ``[1, x]`` with cached population."""

    x: int
    bits: np.ndarray
    count: int

    @classmethod
    def from_mask(cls, mask):
        bits = np.array(mask, dtype=np.bool_, copy=True)
        if bits.ndim != 1 or bits.size < 2:
            raise DomainError("window mask must cover at least [0, 1]")
        bits[0] = False
        bits.flags.writeable = False
        return cls(bits.size - 1, bits, int(np.count_nonzero(bits)))

    @classmethod
    def from_members(cls, members, x):
        bits = np.zeros(int(x) + 1, dtype=np.bool_)
        idx = np.asarray(list(members), dtype=np.int64)
        if idx.size and (idx.min() < 1 or idx.max() > x):
            raise OutOfRangeError(f"members must lie in [1, {x}]")
        bits[idx] = True
        return cls.from_mask(bits)

    def __contains__(self, n):
        return 1 <= n <= self.x and bool(self.bits[n])

    def __len__(self):
        return self.count

    def __eq__(self, other):
        if not isinstance(other, WindowSet):
            return NotImplemented
        return self.x == other.x and np.array_equal(self.bits, other.bits)

    __hash__ = None

    def members(self):
        return np.flatnonzero(self.bits)

    def restrict(self, x):
        if x > self.x:
            raise OutOfRangeError(f"window covers [1, {self.x}], asked for [1, {x}]")
        return WindowSet.from_mask(self.bits[: x + 1])

    def issubset(self, other):
        self._same_x(other)
        return not np.any(self.bits & ~other.bits)

    def symmetric_difference(self, other):
        self._same_x(other)
        return np.flatnonzero(self.bits ^ other.bits)

    def _same_x(self, other):
        if self.x != other.x:
            raise DomainError(f"window sizes differ: {self.x} vs {other.x}")

    def to_bytes(self):
        """16-byte header (magic ``PSWS``, u32 LE version, u64 LE x), then the bits
        for ``n = 1..x`` packed least-significant-bit first."""
        head = _WINDOW_MAGIC + struct.pack("<IQ", _WINDOW_VERSION, self.x)
        return head + np.packbits(self.bits[1:], bitorder="little").tobytes()

    @classmethod
    def from_bytes(cls, data):
        if len(data) < 16 or data[:4] != _WINDOW_MAGIC:
            raise DomainError("not a window dump")
        version, x = struct.unpack("<IQ", data[4:16])
        if version != _WINDOW_VERSION:
            raise DomainError(f"unsupported window dump version {version}")
        body = np.frombuffer(data[16:], dtype=np.uint8)
        if body.size != (x + 7) // 8:
            raise DomainError("window dump has the wrong length")
        bits = np.zeros(x + 1, dtype=np.bool_)
        bits[1:] = np.unpackbits(body, count=x, bitorder="little").astype(np.bool_)
        return cls.from_mask(bits)

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def _fmt_num(v):
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _fmt_primes(P):
    return "/".join(str(p) for p in P)


# Rule variants ---------------------------------------------------------------


@dataclass(frozen=True)
class FullSet:
    def contains(self, n, table=None):
        return n >= 1

    def mask(self, x):
        out = np.ones(x + 1, dtype=np.bool_)
        out[0] = False
        return out

    def describe(self):
        return "full"


@dataclass(frozen=True)
class Composites:
    def contains(self, n, table):
        _check_table(n, table)
        return n >= 4 and int(table.spf[n]) != n

    def mask(self, x):
        out = ~kernels.prime_mask(x)
        out[: min(2, x + 1)] = False
        return out

    def describe(self):
        return "composites"


@dataclass(frozen=True)
class CoprimeTo:
    primes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "primes", normalize_primes(self.primes))

    def contains(self, n, table=None):
        return n >= 1 and all(n % p for p in self.primes)

    def mask(self, x):
        return kernels.coprime_mask(x, np.asarray(self.primes, dtype=np.int64))

    def describe(self):
        return f"coprime:P={_fmt_primes(self.primes)}"


@dataclass(frozen=True)
class OmegaThreshold:
    """``{n : Omega_y(n) >= k, gcd(n, p) = 1 for p in primes}``, every prime > y."""

    y: float
    k: int
    primes: tuple = ()

    def __post_init__(self):
        if self.y < 1:
            raise DomainError("y must be >= 1")
        if int(self.k) != self.k or self.k < 0:
            raise DomainError("k must be a nonnegative integer")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "primes", normalize_primes(self.primes, self.y))

    def contains(self, n, table):
        _check_table(n, table)
        if any(n % p == 0 for p in self.primes):
            return False
        return table.omega(n, self.y) >= self.k

    def mask(self, x):
        if self.k == 0:
            out = np.ones(x + 1, dtype=np.bool_)
            out[0] = False
        else:
            out = bulk_omega_y(x, self.y) >= self.k
        if self.primes:
            out &= kernels.coprime_mask(x, np.asarray(self.primes, dtype=np.int64))
        return out

    def describe(self):
        text = f"omega:y={_fmt_num(self.y)},k={self.k}"
        if self.primes:
            text += f",P={_fmt_primes(self.primes)}"
        return text


def _rough_cutoff(a, p):
    # smallest real n with P^-(n) = p still a member: n >= exp((log p)^(1/a))
    try:
        return math.exp(math.log(p) ** (1.0 / a))
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class RoughComplement:
    """``{n >= 2 : P^-(n) <= exp((log n)^a)}``; ``n = 1`` lies in the complement.

    Membership is decided as ``n >= exp((log P^-(n))^(1/a))`` with ``math`` in
    both the scalar and the bulk path, so the two always agree.
    """

    a: float

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise DomainError("a must lie in (0, 1)")

    def contains(self, n, table):
        _check_table(n, table)
        if n < 2:
            return False
        return n >= _rough_cutoff(self.a, int(table.spf[n]))

    def mask(self, x):
        out = np.zeros(x + 1, dtype=np.bool_)
        if x < 2:
            return out
        table = build_factor_table(x)
        primes = table.primes
        cut = np.array([_rough_cutoff(self.a, p) for p in primes.tolist()])
        check_capacity(x + 1, 16, "rough-complement cutoffs")
        rank = np.searchsorted(primes, table.spf[2:])
        out[2:] = np.arange(2, x + 1) >= cut[rank]
        return out

    def describe(self):
        return f"rough:a={_fmt_num(self.a)}"


@dataclass(frozen=True, eq=False)
class Explicit:
    window: WindowSet = field(repr=False)

    def contains(self, n, table=None):
        if n > self.window.x:
            raise OutOfRangeError(f"n={n} outside the explicit window [1, {self.window.x}]")
        return n in self.window

    def mask(self, x):
        if x > self.window.x:
            raise OutOfRangeError(
                f"explicit window covers [1, {self.window.x}], asked for [1, {x}]"
            )
        return self.window.bits[: x + 1].copy()

    def describe(self):
        return f"explicit:x={self.window.x},count={self.window.count}"


RuleSet = (FullSet, Composites, CoprimeTo, OmegaThreshold, RoughComplement, Explicit)


def _check_table(n, table):
    if table is None or n < 1 or n > table.limit:
        limit = None if table is None else table.limit
        raise OutOfRangeError(f"n={n} not covered by the factor table (limit {limit})")


def parse_rule(text):
    """Parse the CLI rule syntax, e.g. ``omega:y=100,k=2,P=37/41`` or ``rough:a=0.5``."""
    name, _, rest = text.strip().partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise DomainError(f"bad rule parameter {item!r} in {text!r}")
        params[key.strip()] = val.strip()

    def primes():
        raw = params.pop("P", "")
        return tuple(int(p) for p in raw.split("/") if p)

    try:
        if name == "full":
            rule = FullSet()
        elif name == "composites":
            rule = Composites()
        elif name == "coprime":
            rule = CoprimeTo(primes())
        elif name == "omega":
            P = primes()
            rule = OmegaThreshold(float(params.pop("y")), int(params.pop("k")), P)
        elif name == "rough":
            rule = RoughComplement(float(params.pop("a")))
        else:
            raise DomainError(f"unknown rule {name!r}")
    except KeyError as exc:
        raise DomainError(f"rule {name!r} is missing parameter {exc.args[0]}") from None
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad rule {text!r}: {exc}") from None
    if params:
        raise DomainError(f"unexpected parameters {sorted(params)} for rule {name!r}")
    return rule


# Operations ------------------------------------------------------------------


def membership(rule, n, table):
    return rule.contains(int(n), table)


def materialize(rule, x):
    """Window of ``rule`` over ``[1, x]``, built by bulk sieves."""
    x = int(x)
    if x < 1:
        raise DomainError("x must be positive")
    check_capacity(x + 1, 2, "window")
    return WindowSet.from_mask(rule.mask(x))


@dataclass(frozen=True)
class DensityTrace:
    rule: object
    checkpoints: tuple  # (x, count, count / x)


def default_checkpoints(x_max):
    out, v = [], 10
    while v <= x_max:
        out.append(v)
        v *= 10
    return out


def density_trace(rule, checkpoints=None):
    """Counts ``#(rule ∩ [1, x_i])`` from one materialization at the largest checkpoint.

    Finite-x ratios only; no claim that the density exists.
    """
    checkpoints = default_checkpoints(10**6) if checkpoints is None else list(checkpoints)
    if not checkpoints:
        raise DomainError("need at least one checkpoint")
    if any(c < 1 for c in checkpoints) or any(
        b <= a for a, b in zip(checkpoints, checkpoints[1:])
    ):
        raise DomainError("checkpoints must be positive and strictly ascending")
    window = materialize(rule, checkpoints[-1])
    cum = np.cumsum(window.bits, dtype=np.int64)
    rows = tuple((int(c), int(cum[c]), int(cum[c]) / c) for c in checkpoints)
    return DensityTrace(rule, rows)


@dataclass(frozen=True)
class CoprimeCheck:
    empirical: float
    exact: float
    gap: float


def coprime_sieve_check(P, x):
    """Empirical density of integers ``<= x`` free of primes in ``P`` against prod(1 - 1/p).

    The gap is computed in rationals, so it is exactly 0 when ``x`` is a multiple
    of prod(P).
    """
    P = normalize_primes(P)
    x = int(x)
    if x < 1:
        raise DomainError("x must be positive")
    count = materialize(CoprimeTo(P), x).count
    exact = Fraction(1)
    for p in P:
        exact *= Fraction(p - 1, p)
    empirical = Fraction(count, x)
    return CoprimeCheck(float(empirical), float(exact), float(abs(empirical - exact)))
