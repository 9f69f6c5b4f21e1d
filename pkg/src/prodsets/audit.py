"""Measure the density-one product argument on finite windows.

Builds the set N of n <= x with small smooth part, the counts S1 and S2, the
exceptional count of n missing from A·B, the rate functions alpha(t) and
beta(t) with their parameter schedule, the large-smooth-divisor count and the
quantitative sweep over RoughComplement sets.
"""

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import AuditFailure, DomainError
from .products import product_window
from .sets import RoughComplement, materialize
from .sieve import bulk_smooth_part, root_bound


@dataclass(frozen=True)
class AuditReport:
    x: int
    y: float
    u: float
    smooth_bound: int
    sizeN: int
    s1: int
    s2: int
    missing: int
    discard: int
    alphaY: float
    betaRoot: float

    COLUMNS = ("x", "y", "u", "smooth_bound", "sizeN", "s1", "s2", "missing",
               "discard", "alphaY", "betaRoot")

    def row(self):
        return [getattr(self, c) for c in self.COLUMNS]

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


def exception_rate_alpha(A, t):
    """(1/log t) * sum of 1/m over m <= t not in A."""
    if t < 2:
        raise DomainError("alpha(t) needs t >= 2")
    T = math.floor(t)
    window = materialize(A, T)
    miss = np.flatnonzero(~window.bits[1:]) + 1
    return math.fsum((1.0 / miss).tolist()) / math.log(t)


def beta_profile(B, x):
    """Array ``prof`` with ``prof[t] = max_{t <= s <= x} #((N \\ B) ∩ [1, s]) / s``.

    One backward running-maximum pass; ``prof[0]`` is unused.
    """
    window = materialize(B, x)
    miss = np.cumsum(~window.bits, dtype=np.int64)
    miss -= 1  # bit 0 is not an integer of [1, x]
    ratio = np.zeros(x + 1)
    ratio[1:] = miss[1:] / np.arange(1, x + 1)
    return np.maximum.accumulate(ratio[::-1])[::-1]


def exception_rate_beta(B, t, x):
    """Finite-horizon beta: sup over integer s in [t, x] of the missing fraction."""
    x = int(x)
    if not 2 <= t <= x:
        raise DomainError("beta(t) needs 2 <= t <= x")
    return float(beta_profile(B, x)[math.ceil(t)])


def u_cap(x):
    return max(1.0, math.log(math.log(x)))


def choose_parameters(x, A, B):
    """y = min(sqrt x, exp(beta(sqrt x)^(-1/2))), then u = alpha(y)^(-1/2).

    ``u`` is clamped to ``[1, log log x]``; alpha(y) = 0 gives the cap.
    Returns ``(y, u, alpha_y, beta_root)``.
    """
    x = int(x)
    if x < 4:
        raise DomainError("x must be >= 4")
    root = math.sqrt(x)
    beta_root = exception_rate_beta(B, root, x)
    y = root if beta_root == 0 else min(root, math.exp(beta_root ** -0.5))
    alpha_y = exception_rate_alpha(A, y)
    cap = u_cap(x)
    u = cap if alpha_y == 0 else min(cap, alpha_y ** -0.5)
    return y, max(1.0, u), alpha_y, beta_root


def theorem1_audit(A, B, x, y, u, windows=None):
    """Count N, S1, S2 and the integers <= x missing from A·B; check
    missing <= discard + s1 + s2 (discard = x - #N).

    Smoothness uses the integer bound floor(y^(1/u)). ``windows`` may pass
    prebuilt ``(A_window, B_window)`` over ``[1, x]``.

    Raises
    ------
    AuditFailure
        If the inequality fails; it is a theorem, so this signals a bug.
    """
    x = int(x)
    if x < 1:
        raise DomainError("x must be positive")
    if not 1 <= y <= math.sqrt(x) * (1 + 1e-12):
        raise DomainError("need 1 <= y <= sqrt(x)")
    if u < 1:
        raise DomainError("need u >= 1")
    Aw, Bw = windows if windows is not None else (materialize(A, x), materialize(B, x))
    t = root_bound(y, u)
    smooth = bulk_smooth_part(x, t)[1:]
    n = np.arange(1, x + 1, dtype=np.int64)
    in_N = smooth <= math.floor(y)
    sizeN = int(np.count_nonzero(in_N))
    sm = smooth[in_N]
    rough = n[in_N] // sm
    s1 = int(np.count_nonzero(~Aw.bits[sm]))
    s2 = int(np.count_nonzero(~Bw.bits[rough]))
    missing = x - product_window(Aw, Bw).count
    discard = x - sizeN
    alpha_y = exception_rate_alpha(A, y) if y >= 2 else 0.0
    beta_root = exception_rate_beta(B, math.sqrt(x), x) if x >= 4 else 0.0
    report = AuditReport(x, y, u, t, sizeN, s1, s2, missing, discard, alpha_y, beta_root)
    if missing > discard + s1 + s2:
        raise AuditFailure(f"missing={missing} > discard+s1+s2={discard + s1 + s2}: {report}")
    return report


@dataclass(frozen=True)
class SmoothDivisorResult:
    x: int
    y: float
    u: float
    smooth_bound: int
    count: int
    bound_ratio: float


def lemma22_empirical(x, y, u):
    """Count n <= x whose floor(y^(1/u))-smooth part exceeds y, and compare
    with x (e^-u + y^(-1/3))."""
    x = int(x)
    if not (y >= 1 and x >= y * y):
        raise DomainError("need x >= y^2 >= 1")
    if u < 1:
        raise DomainError("need u >= 1")
    t = root_bound(y, u)
    smooth = bulk_smooth_part(x, t)[1:]
    count = int(np.count_nonzero(smooth > y))
    ratio = count / (x * (math.exp(-u) + y ** (-1 / 3)))
    return SmoothDivisorResult(x, y, u, t, count, ratio)


@dataclass(frozen=True)
class SweepRow:
    x: int
    y: float
    u: float
    complement_ratio: float
    missing: int
    missing_fraction: float
    exponent: float
    slope_exponent: float
    report: AuditReport

    COLUMNS = ("x", "y", "u", "complement_ratio", "missing", "missing_fraction",
               "exponent", "slope_exponent")

    def row(self):
        return [getattr(self, c) for c in self.COLUMNS]


def remark_schedule(x, a):
    """y = exp((log x)^(a/(1+a))), u = log log x."""
    lx = math.log(x)
    return math.exp(lx ** (a / (1 + a))), math.log(lx)


def quantitative_sweep(a, x_grid):
    """Audit A = B = RoughComplement(a) along ``x_grid`` with the quantitative schedule.

    ``exponent`` is -log(missing/x) / log log x at each x; ``slope_exponent`` the
    same ratio of differences between consecutive grid points. These are
    measurements, not estimates of an optimal exponent.
    """
    if not 0 < a < 1:
        raise DomainError("a must lie in (0, 1)")
    grid = [int(v) for v in x_grid]
    if not grid or any(b <= c for c, b in zip(grid, grid[1:])) or grid[0] < 16:
        raise DomainError("x_grid must be ascending with every x >= 16")
    rule = RoughComplement(a)
    rows, prev = [], None
    for x in grid:
        y, u = remark_schedule(x, a)
        Aw = materialize(rule, x)
        report = theorem1_audit(rule, rule, x, y, u, windows=(Aw, Aw))
        complement_ratio = (x - Aw.count) * math.log(x) ** a / x
        frac = report.missing / x
        llx = math.log(math.log(x))
        exponent = -math.log(frac) / llx if frac > 0 else math.inf
        slope = math.nan
        if prev is not None and frac > 0 and prev[1] > 0:
            slope = -(math.log(frac) - math.log(prev[1])) / (llx - prev[0])
        rows.append(SweepRow(x, y, u, complement_ratio, report.missing, frac, exponent,
                             slope, report))
        prev = (llx, frac)
    fracs = [r.missing_fraction for r in rows]
    if any(b >= c for c, b in zip(fracs, fracs[1:])):
        warnings.warn("missing/x is not strictly decreasing along the grid", stacklevel=2)
    return rows


def reports_to_csv(rows, columns):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
