"""Exact finite evaluators: Mertens products, the Omega_y generating polynomial,
densities of Omega_y-threshold sets, the rate function Q and the Turan-type
tail sums, and exact rough-number counts Phi(x, y) by Legendre's recursion.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .config import check_capacity
from .errors import DomainError
from .sieve import INF, prime_bound, primes_up_to

# z-grid for the geometric (Cauchy) tail bound; F(z) needs z < 2.
_TAIL_Z = (1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 1.95, 1.99)

EXACT_MAX_Y = 50
EXACT_MAX_K = 20


def _bound(y):
    b = prime_bound(y)
    if b == INF:
        raise DomainError("y must be finite")
    return int(b)


@lru_cache(maxsize=256)
def _mertens(bound):
    primes = primes_up_to(bound)
    if primes.size == 0:
        return 1.0
    logs = np.log1p(-1.0 / primes.astype(np.float64))
    return math.exp(math.fsum(logs.tolist()))


def mertens_product(y):
    """prod_{p <= y} (1 - 1/p) as a float, summed in log space with ``math.fsum``."""
    if y < 1:
        raise DomainError("y must be >= 1")
    return _mertens(_bound(y))


def mertens_product_exact(y):
    if y < 1:
        raise DomainError("y must be >= 1")
    out = Fraction(1)
    for p in primes_up_to(y).tolist():
        out *= Fraction(p - 1, p)
    return out


def default_degree(y):
    if y <= math.e:
        return 64
    return max(64, math.ceil(4 * math.log(math.log(y))) + 40)


@dataclass(frozen=True)
class OmegaPolynomial:
    """Coefficients ``c_j = sum 1/m`` over ``y``-smooth ``m`` with ``Omega(m) = j``, ``j <= K``.

    ``tail_bound`` is a rigorous upper bound on ``sum_{j > K} c_j``.
    """

    y: float
    K: int
    coeffs: np.ndarray
    tail_bound: float

    def total(self):
        return math.fsum(self.coeffs.tolist())

    def head(self, j):
        """sum_{i <= j} c_i (``j < 0`` gives 0)."""
        if j < 0:
            return 0.0
        if j > self.K:
            raise DomainError(f"index {j} beyond truncation degree {self.K}")
        return math.fsum(self.coeffs[: j + 1].tolist())


def _tail_bound(primes, K):
    if primes.size == 0:
        return 0.0
    inv = 1.0 / primes.astype(np.float64)
    best = INF
    for z in _TAIL_Z:
        log_f = -math.fsum(np.log1p(-z * inv).tolist())
        log_tail = log_f - (K + 1) * math.log(z) - math.log1p(-1.0 / z)
        best = min(best, math.exp(log_tail) if log_tail < 700 else INF)
    return best


@lru_cache(maxsize=256)
def _omega_poly(bound, K):
    primes = primes_up_to(bound)
    coeffs = kernels.omega_poly_coeffs(primes, K)
    coeffs.flags.writeable = False
    return OmegaPolynomial(bound, K, coeffs, _tail_bound(primes, K))


def omega_poly(y, K=None):
    """Truncated coefficients of prod_{p <= y} (1 - z/p)^{-1} up to degree ``K``."""
    K = default_degree(y) if K is None else int(K)
    if K < 0:
        raise DomainError("degree K must be >= 0")
    if y < 1:
        raise DomainError("y must be >= 1")
    return _omega_poly(_bound(y), K)


def omega_poly_exact(y, K):
    """Rational coefficients by the same geometric-series update; small ``y``, ``K`` only."""
    if y > EXACT_MAX_Y or K > EXACT_MAX_K:
        raise DomainError(
            f"exact mode supports y <= {EXACT_MAX_Y}, K <= {EXACT_MAX_K}"
        )
    c = [Fraction(1)] + [Fraction(0)] * K
    for p in primes_up_to(y).tolist():
        for j in range(1, K + 1):
            c[j] += c[j - 1] / p
    return c


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def normalize_primes(P, y=None):
    """Sorted, de-duplicated tuple of primes; rejects composites and primes ``<= y``."""
    out = tuple(sorted({int(p) for p in P}))
    if not out:
        return out
    if out[0] < 2:
        raise DomainError(f"{out[0]} is not prime")
    if len(out) > 8 and out[-1] <= 10**8:
        known = primes_up_to(out[-1])
        hit = np.isin(np.asarray(out, dtype=np.int64), known)
        if not hit.all():
            raise DomainError(f"{out[int(np.argmin(hit))]} is not prime")
    else:
        for p in out:
            if not _is_prime(p):
                raise DomainError(f"{p} is not prime")
    if y is not None and out[0] <= y:
        raise DomainError(f"prime {out[0]} in P does not exceed y={y}")
    return out


def coprime_factor(P):
    """prod_{p in P} (1 - 1/p), accumulated in log space."""
    if not P:
        return 1.0
    return math.exp(math.fsum(math.log1p(-1.0 / p) for p in P))


def density_omega_threshold(y, k, P=()):
    """Natural density of ``{n : Omega_y(n) >= k, gcd(n, p) = 1 for p in P}``.

    Equals ``(1 - M(y) * sum_{j<k} c_j) * prod_{p in P} (1 - 1/p)`` with ``M`` the
    Mertens product; every prime in ``P`` must exceed ``y``.
    """
    k = int(k)
    if k < 0:
        raise DomainError("k must be >= 0")
    if y < 1:
        raise DomainError("y must be >= 1")
    P = normalize_primes(P, y)
    base = 1.0
    if k > 0:
        poly = omega_poly(y, max(default_degree(y), k))
        base = 1.0 - mertens_product(y) * poly.head(k - 1)
    return max(base, 0.0) * coprime_factor(P)


def density_omega_threshold_exact(y, k, P=()):
    P = normalize_primes(P, y)
    base = Fraction(1)
    if k > 0:
        c = omega_poly_exact(y, k - 1)
        base = 1 - mertens_product_exact(y) * sum(c)
    for p in P:
        base *= Fraction(p - 1, p)
    return base


def q_rate(lam):
    """Q(lam) = lam log lam - lam + 1 with Q(0) = 0, on ``0 <= lam <= 1.99``."""
    if not 0 <= lam <= 1.99:
        raise DomainError(f"lambda={lam} outside [0, 1.99]")
    if lam == 0:
        return 0.0
    return lam * math.log(lam) - lam + 1.0


@dataclass(frozen=True)
class RateComparison:
    y: float
    lam: float
    side: str
    index: int
    lhs: float
    rhs: float
    ratio: float
    lhs_exact: Fraction = None


_SIDES = {"<=": "<=", "le": "<=", "≤": "<=", ">=": ">=", "ge": ">=", "≥": ">="}


def turan_check(y, lam, side, exact=False):
    """Compare the Mertens-weighted Omega-tail sum with (log y)^{-Q(lam)}.

    Side ``<=`` keeps ``Omega(m) <= floor(lam log log y)`` and needs ``0 <= lam <= 1``;
    side ``>=`` keeps ``Omega(m) >= ceil(lam log log y)`` and needs ``1 <= lam <= 1.99``.
    """
    try:
        side = _SIDES[side]
    except KeyError:
        raise DomainError(f"side must be '<=' or '>=', got {side!r}") from None
    if side == "<=" and not 0 <= lam <= 1:
        raise DomainError("side '<=' requires 0 <= lambda <= 1")
    if side == ">=" and not 1 <= lam <= 1.99:
        raise DomainError("side '>=' requires 1 <= lambda <= 1.99")
    if y <= math.e:
        raise DomainError("need y > e so that log log y > 0")
    loglog = math.log(math.log(y))
    rhs = math.log(y) ** (-q_rate(lam))
    if side == "<=":
        index = math.floor(lam * loglog)
        head = index
    else:
        index = math.ceil(lam * loglog)
        head = index - 1

    lhs_exact = None
    if exact:
        m = mertens_product_exact(y)
        s = m * sum(omega_poly_exact(y, max(head, 0))[: head + 1]) if head >= 0 else Fraction(0)
        lhs_exact = s if side == "<=" else 1 - s
        lhs = float(lhs_exact)
    else:
        poly = omega_poly(y, max(default_degree(y), head))
        s = mertens_product(y) * poly.head(head)
        lhs = s if side == "<=" else max(1.0 - s, 0.0)
    return RateComparison(y, lam, side, index, lhs, rhs, lhs / rhs, lhs_exact)


# Legendre's Phi --------------------------------------------------------------

_phi_lock = threading.Lock()
_phi_memo = {}
_PHI_MEMO_MAX = 4_000_000
_pi_table = np.zeros(1, dtype=np.int32)
_pi_primes = np.zeros(0, dtype=np.int64)


def _ensure_pi(n):
    global _pi_table, _pi_primes
    if _pi_table.size > n:
        return _pi_table
    with _phi_lock:
        if _pi_table.size <= n:
            size = max(n, 2 * (_pi_table.size - 1), 1024)
            check_capacity(size + 1, 5, "prime counting table")
            mask = kernels.prime_mask(size)
            table = np.cumsum(mask, dtype=np.int32)
            _pi_primes = np.flatnonzero(mask).astype(np.int64)
            _pi_table = table
    return _pi_table


def _phi(v, a, primes, pi):
    # count of n <= v free of the first a primes
    if a == 0 or v < 2:
        return v
    pa = primes[a - 1]
    if pa * pa >= v:
        # survivors are 1 and the primes in (p_a, v]
        return 1 + max(0, int(pi[v]) - a)
    key = (v, a)
    hit = _phi_memo.get(key)
    if hit is not None:
        return hit
    # Phi(v, a) = Phi(v, a-1) - Phi(v // p_a, a-1), unrolled over a
    total = v
    for i in range(a):
        p = primes[i]
        if p > v:
            break
        total -= _phi(v // p, i, primes, pi)
    with _phi_lock:
        if len(_phi_memo) >= _PHI_MEMO_MAX:
            _phi_memo.clear()
        _phi_memo[key] = total
    return total


def phi_legendre(x, y):
    """Exact count of ``n <= x`` with ``P^-(n) > y`` (``n = 1`` always counts)."""
    if x < 0:
        raise DomainError("x must be >= 0")
    if y < 1:
        raise DomainError("y must be >= 1")
    xi = math.floor(x)
    if xi < 1:
        return 0
    b = prime_bound(y)
    if b == INF or b >= xi:
        return 1
    b = int(b)
    # pi is only read at arguments <= b^2
    pi = _ensure_pi(min(xi, b * b))
    if b * b >= xi:
        return 1 + int(pi[xi]) - int(pi[b])
    a = int(pi[b])
    primes = _pi_primes[:a].tolist()
    return _phi(xi, a, primes, pi)

