"""End-to-end acceptance checks; each prints one PASS/FAIL line.

Run under pytest (the lines are repeated in the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from prodsets.analytic import density_omega_threshold, phi_legendre, turan_check
from prodsets.audit import choose_parameters, lemma22_empirical, theorem1_audit
from prodsets.construct import build_construction, verify_square_identity
from prodsets.products import kfold_window, mult_table_count, product_window
from prodsets.sets import (
    Composites,
    OmegaThreshold,
    RoughComplement,
    coprime_sieve_check,
    materialize,
)
from prodsets.sieve import bulk_omega_y, primes_up_to

# Oracles ---------------------------------------------------------------------


def trial_lpf(limit):
    """Least prime factor of 0..limit by trial division (lpf[1] = 0)."""
    lpf = [0] * (limit + 1)
    for n in range(2, limit + 1):
        d = 2
        while d * d <= n and n % d:
            d += 1
        lpf[n] = d if d * d <= n else n
    return lpf


def trial_factor(n):
    out, d = [], 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def big_omega_sieve(x):
    """Omega(n) for n <= x by adding 1 at every multiple of every prime power."""
    out = np.zeros(x + 1, dtype=np.int16)
    for p in primes_up_to(x).tolist():
        q = p
        while q <= x:
            out[q::q] += 1
            q *= p
    return out


# Criteria --------------------------------------------------------------------


def c01_phi_exact():
    assert phi_legendre(10, 2) == 5
    assert phi_legendre(100, 7) == 22
    X = 5000
    lpf = trial_lpf(X)
    bad = 0
    for y in (p for p in range(2, 101) if trial_lpf(p)[p] == p):
        # survivors n with no prime factor <= y; n = 1 included
        rough = np.array([n == 1 or (n > 1 and lpf[n] > y) for n in range(X + 1)])
        rough[0] = False
        expect = np.cumsum(rough)
        got = [phi_legendre(x, y) for x in range(X + 1)]
        bad += int(np.count_nonzero(np.asarray(got) != expect))
    assert bad == 0, f"{bad} discrepancies"
    return "x <= 5000, 25 prime y, 0 discrepancies"


def c02_phi_log_constant():
    x = 10**6
    worst = max(phi_legendre(x, y) * math.log(y) / x for y in range(2, 1001))
    assert worst <= 3, f"max ratio {worst:.4f}"
    return f"max Phi(x,y) log y / x = {worst:.4f} <= 3"


def c03_density_two():
    for k in range(21):
        assert abs(density_omega_threshold(2, k) - 2.0**-k) <= 1e-12, k
    return "d(B_{2,k}) = 2^-k for k <= 20"


def c04_density_vs_count():
    x = 10**7
    worst = 0.0
    for y, k in ((10, 1), (100, 2), (1000, 3)):
        om = bulk_omega_y(x, y)[1:]
        empirical = np.count_nonzero(om >= k) / x
        worst = max(worst, abs(density_omega_threshold(y, k) - empirical))
    assert worst <= 0.01, worst
    return f"max |analytic - empirical| = {worst:.2e} over [1, 1e7]"


def c05_square_identity():
    cases = [(2, 1, (), 10**4), (30, 2, (37, 41), 10**5), (100, 3, (), 10**5)]
    for y, k, P, N in cases:
        rep = verify_square_identity(y, k, P, N)
        assert rep.mismatches == 0, (y, k, P, N, rep.witnesses)
    return "0 mismatches on all 3 cases"


def c06_construction():
    c = build_construction(0.5, 0.25, delta=1e-3, prime_cap=10**7, y_max=1e5, k_max=8)
    assert c.y <= 1e5 and c.k <= 8
    assert 0 < c.achieved - 0.5 <= 1e-3, c.achieved
    assert not c.P or max(c.P) <= 10**7
    x = 10**7
    A = materialize(OmegaThreshold(c.y, c.k, c.P), x)
    emp = A.count / x
    assert abs(emp - c.achieved) <= 0.01, (emp, c.achieved)
    sq = product_window(A, A).count / x
    assert sq < 0.26, sq
    return (f"y={c.y:g} k={c.k} |P|={len(c.P)} achieved={c.achieved:.6f} "
            f"empirical={emp:.4f} square={sq:.4f}")


def c07_mult_table():
    for n in range(1, 201):
        brute = len({i * j for i in range(1, n + 1) for j in range(1, n + 1)})
        assert mult_table_count(n) == brute, n
    assert mult_table_count(10) == 42
    big, small = mult_table_count(4096) / 4096**2, mult_table_count(256) / 256**2
    assert big < small
    return f"n <= 200 exact, M_4096/4096^2={big:.4f} < M_256/256^2={small:.4f}"


def c08_composites_square():
    x = 10**6
    A = materialize(Composites(), x)
    prod = kfold_window(A, 2)
    target = big_omega_sieve(x) >= 4
    target[0] = False
    diff = int(np.count_nonzero(prod.bits != target))
    assert diff == 0, diff
    fractions = []
    for xx in (10**4, 10**5, 10**6):
        fractions.append((xx - kfold_window(materialize(Composites(), xx), 2).count) / xx)
    assert fractions[0] > fractions[1] > fractions[2], fractions
    return "A.A = {Omega >= 4} on [1,1e6]; missing/x " + ", ".join(
        f"{f:.4f}" for f in fractions)


AUDIT_MATRIX = [
    (Composites(), Composites()),
    (OmegaThreshold(10, 1), OmegaThreshold(10, 1)),
    (OmegaThreshold(100, 2, (101, 103)), Composites()),
    (RoughComplement(0.5), RoughComplement(0.5)),
    (RoughComplement(0.3), OmegaThreshold(30, 1)),
]


def c09_audit_inequality():
    n = 0
    for (A, B), x in itertools.product(AUDIT_MATRIX, (10**4, 10**5, 10**6)):
        y, u, _, _ = choose_parameters(x, A, B)
        rep = theorem1_audit(A, B, x, y, u)
        assert rep.missing <= rep.discard + rep.s1 + rep.s2, (A.describe(), x)
        n += 1
    return f"{n} configurations, missing <= discard + s1 + s2 on all"


def c10_smooth_divisor():
    X = 10**4
    for y, u in ((100, 1), (100, 2), (50, 3), (10, 1.5), (30, 2)):
        t = math.floor(y ** (1 / u) + 1e-12)
        member = np.zeros(X + 1, dtype=np.int64)
        for n in range(1, X + 1):
            divisors = [1]
            for p, e in trial_factor(n):
                if p <= t:
                    divisors = [d * p**i for d in divisors for i in range(e + 1)]
            member[n] = max(divisors) > y
        prefix = np.cumsum(member)
        start = max(1, math.ceil(y * y))
        # every prefix count agrees, so membership agrees for every n
        for x in range(start, X + 1):
            assert lemma22_empirical(x, y, u).count == prefix[x], (y, u, x)
    ratios = [lemma22_empirical(10**6, 10**3, u).bound_ratio for u in (2, 3, 4)]
    assert max(ratios) <= 5, ratios
    return "exhaustive n <= 1e4; bound ratios " + ", ".join(f"{r:.3f}" for r in ratios)


def c11_turan():
    worst = 0.0
    grid = [(lam, "<=") for lam in (0.25, 0.5, 0.75, 1)] + \
           [(lam, ">=") for lam in (1, 1.25, 1.5, 1.75)]
    for y in (10**3, 10**4, 10**5, 10**6):
        for lam, side in grid:
            worst = max(worst, turan_check(y, lam, side).ratio)
    assert worst <= 10, worst
    for y in (10, 20, 30, 50):
        for lam, side in grid:
            fast = turan_check(y, lam, side)
            exact = turan_check(y, lam, side, exact=True)
            assert isinstance(exact.lhs_exact, Fraction)
            assert math.isclose(fast.lhs, float(exact.lhs_exact), rel_tol=1e-12), (y, lam)
    return f"max ratio {worst:.4f} <= 10; exact lhs reproduced for y <= 50"


def c12_coprime_gap():
    base = (2, 3, 5, 7)
    n = 0
    for r in range(len(base) + 1):
        for P in itertools.combinations(base, r):
            m = math.prod(P)
            for x in range(1, 1500):
                gap = coprime_sieve_check(P, x).gap
                if x % m == 0:
                    assert gap == 0, (P, x, gap)
                else:
                    assert gap <= 2 ** len(P) * len(P) / x, (P, x, gap)
                n += 1
    return f"{n} (P, x) pairs within bound, 0 at multiples of prod(P)"


CLI_MATRIX = [
    ["phi", "--x", "1000000", "--y", "50"],
    ["mertens", "--y", "100000"],
    ["omegapoly", "--y", "1000", "--K", "30"],
    ["density", "--y", "30", "--k", "2", "--primes", "37,41", "--format", "json"],
    ["trace", "--rule", "omega:y=100,k=2", "--checkpoints", "1000,100000,1000000"],
    ["product", "--a-rule", "composites", "--b-rule", "rough:a=0.5", "--x", "1000000"],
    ["multtable", "--n", "10,256,1024"],
    ["construct", "--alpha", "0.5", "--epsilon", "0.25"],
    ["verify-square", "--y", "30", "--k", "2", "--primes", "37,41", "--N", "100000"],
    ["audit", "--a-rule", "composites", "--b-rule", "composites", "--x", "1000000"],
    ["lemma21", "--x", "100000", "--y-max", "200"],
    ["lemma22", "--x", "1000000", "--y", "1000", "--u", "2,3,4", "--format", "json"],
    ["turan", "--y", "100000", "--lam", "1.5", "--side", "ge"],
    ["sweep", "--a", "0.5", "--grid", "10000,100000,1000000"],
]


def c13_cli_determinism():
    # force a multi-thread pool even on a single-core machine
    pool = max(4, os.cpu_count() or 1)
    env = dict(os.environ, NUMBA_NUM_THREADS=str(pool))
    for argv in CLI_MATRIX:
        outs = []
        for threads in (1, pool):
            proc = subprocess.run([sys.executable, "-m", "prodsets", *argv,
                                   "--threads", str(threads)],
                                  capture_output=True, env=env, check=False)
            assert proc.returncode == 0, (argv, proc.stderr.decode())
            outs.append(proc.stdout)
        assert outs[0] == outs[1], argv
    return f"{len(CLI_MATRIX)} subcommands byte-identical at 1 vs {pool} threads"


CRITERIA = [
    (1, "phi exactness", c01_phi_exact, 60),
    (2, "Phi log y / x constant", c02_phi_log_constant, 60),
    (3, "Omega_2 densities", c03_density_two, None),
    (4, "analytic vs empirical density", c04_density_vs_count, 300),
    (5, "square identity", c05_square_identity, None),
    (6, "dense set with sparse square", c06_construction, None),
    (7, "multiplication table", c07_mult_table, 300),
    (8, "composites square", c08_composites_square, None),
    (9, "audit inequality", c09_audit_inequality, None),
    (10, "large smooth divisor count", c10_smooth_divisor, None),
    (11, "Omega tail rates", c11_turan, None),
    (12, "coprime sieve gap", c12_coprime_gap, None),
    (13, "CLI determinism", c13_cli_determinism, None),
]


def evaluate(func, limit):
    """Run one criterion; returns (ok, message)."""
    t0 = time.perf_counter()
    try:
        detail = func()
        ok = True
    except AssertionError as exc:
        detail, ok = f"assertion failed: {exc}", False
    elapsed = time.perf_counter() - t0
    if ok and limit is not None and elapsed > limit:
        ok, detail = False, f"{detail}; took {elapsed:.1f}s > {limit}s"
    return ok, f"{detail} ({elapsed:.1f}s)"


@pytest.mark.parametrize("number,name,func,limit", CRITERIA,
                         ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_acceptance(number, name, func, limit, acceptance_log):
    ok, message = evaluate(func, limit)
    line = f"{'PASS' if ok else 'FAIL'} [{number:2d}] {name}: {message}"
    print(line)
    acceptance_log.append(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for number, name, func, limit in CRITERIA:
        ok, message = evaluate(func, limit)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} [{number:2d}] {name}: {message}", flush=True)
    sys.exit(1 if failed else 0)
