"""Dense sets with sparse squares: parameter search over (y, k), the greedy
prime tail that pulls the density of B_{y,k,P} down to alpha, the constructive
square split, and window verification of B_{y,k,P}^2 = B_{y,2k,P}.
"""

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .analytic import coprime_factor, density_omega_threshold, normalize_primes
from .errors import DomainError, InfeasibleError
from .products import product_window
from .sets import OmegaThreshold, materialize
from .sieve import prime_bound, primes_up_to

DEFAULT_DELTA = 1e-3
DEFAULT_PRIME_CAP = 10**7
DEFAULT_Y_MAX = 10**5
DEFAULT_K_MAX = 8
GRID_STEPS_PER_DOUBLING = 4


def coupled_y(k):
    """The schedule y = exp(exp(4k/3)); ``inf`` once it overflows."""
    try:
        return math.exp(math.exp(4 * k / 3))
    except OverflowError:
        return math.inf


def y_grid(y_max):
    """Geometric grid of integer thresholds in [2, y_max], ratio 2^(1/4)."""
    out, v = [], 2.0
    while v <= y_max:
        out.append(math.floor(v))
        v *= 2 ** (1 / GRID_STEPS_PER_DOUBLING)
    if not out or out[-1] != math.floor(y_max):
        out.append(math.floor(y_max))
    return sorted(set(out))


def search_parameters(alpha, epsilon, y_max=DEFAULT_Y_MAX, k_max=DEFAULT_K_MAX):
    """Smallest ``k <= k_max`` with some ``y <= y_max`` such that
    d(B_{y,k}) > alpha and d(B_{y,2k}) < epsilon.

    The coupled ``y = exp(exp(4k/3))`` is tried first for each ``k``; otherwise the
    grid point with the largest worst-side margin is returned.

    Raises
    ------
    InfeasibleError
        With the best margins seen, if no pair qualifies.
    """
    if not 0 < alpha < 1 or not 0 < epsilon < 1:
        raise DomainError("alpha and epsilon must lie in (0, 1)")
    if y_max < 2 or k_max < 1:
        raise DomainError("need y_max >= 2 and k_max >= 1")
    grid = y_grid(y_max)
    best = {"margin": -math.inf}
    for k in range(1, int(k_max) + 1):
        yc = coupled_y(k)
        if yc <= y_max:
            lo = density_omega_threshold(yc, k) - alpha
            hi = epsilon - density_omega_threshold(yc, 2 * k)
            if lo > 0 and hi > 0:
                return yc, k
        chosen = None
        for y in grid:
            lo = density_omega_threshold(y, k) - alpha
            hi = epsilon - density_omega_threshold(y, 2 * k)
            margin = min(lo, hi)
            if margin > best["margin"]:
                best = {"margin": margin, "y": y, "k": k, "alpha_margin": lo,
                        "epsilon_margin": hi}
            if lo > 0 and hi > 0 and (chosen is None or margin > chosen[0]):
                chosen = (margin, y)
        if chosen is not None:
            return chosen[1], k
    raise InfeasibleError(
        f"no (y <= {y_max}, k <= {k_max}) with d(B_k) > {alpha} and d(B_2k) < {epsilon}; "
        f"best worst-side margin {best['margin']:.6g} at y={best.get('y')}, k={best.get('k')}",
        best,
    )


@dataclass(frozen=True)
class Construction:
    alpha: float
    epsilon: float
    k: int
    y: float
    P: tuple
    achieved: float
    square_density: float
    tolerance: float
    gap: float
    truncated: bool

    def to_record(self):
        """Self-contained ``key=value`` text describing the set."""
        fields = [
            ("set", "{n : Omega_y(n) >= k, gcd(n, p) = 1 for p in P}"),
            ("alpha", _g(self.alpha)),
            ("epsilon", _g(self.epsilon)),
            ("y", _g(self.y)),
            ("k", str(self.k)),
            ("P_count", str(len(self.P))),
            ("P", ",".join(map(str, self.P))),
            ("achieved", _g(self.achieved)),
            ("square_density", _g(self.square_density)),
            ("tolerance", _g(self.tolerance)),
            ("gap", _g(self.gap)),
            ("truncated", "true" if self.truncated else "false"),
        ]
        return "".join(f"{k}={v}\n" for k, v in fields)

    @classmethod
    def from_record(cls, text):
        kv = dict(line.split("=", 1) for line in text.splitlines() if "=" in line)
        P = tuple(int(p) for p in kv["P"].split(",") if p)
        return cls(float(kv["alpha"]), float(kv["epsilon"]), int(kv["k"]), float(kv["y"]),
                   P, float(kv["achieved"]), float(kv["square_density"]),
                   float(kv["tolerance"]), float(kv["gap"]), kv["truncated"] == "true")


def _g(v):
    return format(float(v), ".17g")


def greedy_prime_tail(alpha, y, k, delta=DEFAULT_DELTA, prime_cap=DEFAULT_PRIME_CAP,
                      epsilon=None):
    """Append the smallest prime ``p > y`` (beyond the last one taken) that keeps
    the running density strictly above ``alpha``; stop within ``delta`` of alpha
    or at ``prime_cap``.
    """
    base = density_omega_threshold(y, k)
    if base < alpha:
        raise DomainError(f"base density {base} is below alpha={alpha}")
    primes = primes_up_to(prime_cap)
    start = bisect.bisect_right(primes, prime_bound(y))
    d = base
    tail = []
    pos = start
    while d - alpha > delta and pos < primes.size:
        # admissibility is monotone in p (p > d / (d - alpha)); jump near the
        # boundary, then settle it with the float rule itself
        guess = int(np.searchsorted(primes, math.floor(d / (d - alpha)), side="right"))
        i = min(max(pos, guess), primes.size)
        while i > pos and d * (1 - 1 / int(primes[i - 1])) > alpha:
            i -= 1
        while i < primes.size and not d * (1 - 1 / int(primes[i])) > alpha:
            i += 1
        if i >= primes.size:
            break
        p = int(primes[i])
        tail.append(p)
        d *= 1 - 1 / p
        pos = i + 1
    P = tuple(tail)
    achieved = base * coprime_factor(P)
    square = density_omega_threshold(y, 2 * k) * coprime_factor(P)
    gap = achieved - alpha
    return Construction(
        alpha=alpha,
        epsilon=math.nan if epsilon is None else epsilon,
        k=int(k),
        y=y,
        P=P,
        achieved=achieved,
        square_density=square,
        tolerance=delta,
        gap=gap,
        truncated=gap > 0,
    )


def build_construction(alpha, epsilon, delta=DEFAULT_DELTA, prime_cap=DEFAULT_PRIME_CAP,
                       y_max=DEFAULT_Y_MAX, k_max=DEFAULT_K_MAX):
    """Search (y, k), then build the greedy tail. The square density stays below
    epsilon because the tail only lowers it."""
    y, k = search_parameters(alpha, epsilon, y_max, k_max)
    return greedy_prime_tail(alpha, y, k, delta, prime_cap, epsilon)


def constructive_split(n, y, k, P, table):
    """Split ``n`` in B_{y,2k,P} as ``a*b`` with both factors in B_{y,k,P}.

    ``a`` is the product of the ``k`` smallest ``y``-smooth prime factors of ``n``
    counted with multiplicity.
    """
    rule = OmegaThreshold(y, 2 * k, P)
    if not rule.contains(n, table):
        raise DomainError(f"{n} is not in B_(y={y}, k={2 * k}, P)")
    a, left = 1, k
    for p, e in table.factorize(n):
        if left == 0:
            break
        take = min(e, left)
        a *= p**take
        left -= take
    return a, n // a


@dataclass(frozen=True)
class SquareReport:
    y: float
    k: int
    P: tuple
    N: int
    target_k: int
    square_count: int
    target_count: int
    mismatches: int
    witnesses: tuple


def verify_square_identity(y, k, P, N, target_k=None):
    """Compare B_{y,k,P}^2 with B_{y,target_k,P} on ``[1, N]`` (``target_k`` defaults to 2k)."""
    P = normalize_primes(P, y)
    target_k = 2 * k if target_k is None else target_k
    base = materialize(OmegaThreshold(y, k, P), N)
    square = product_window(base, base).window
    target = materialize(OmegaThreshold(y, target_k, P), N)
    diff = square.symmetric_difference(target)
    return SquareReport(y, k, P, int(N), target_k, square.count, target.count,
                        int(diff.size), tuple(int(v) for v in diff[:10]))
