"""Pure-numpy kernels. Same signatures and results as the numba versions."""

from math import isqrt

import numpy as np


def spf_table(n):
    spf = np.zeros(n + 1, dtype=np.uint32)
    for p in range(2, isqrt(n) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    spf[0] = 0
    if n >= 1:
        spf[1] = 1
    return spf


def prime_mask(n):
    mask = np.ones(n + 1, dtype=np.bool_)
    mask[:2] = False
    for p in range(2, isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def omega_counts(x, primes):
    out = np.zeros(x + 1, dtype=np.uint8)
    for p in primes:
        p = int(p)
        if p > x:
            break
        pk = p
        while pk <= x:
            out[pk::pk] += 1
            pk *= p
    return out


def smooth_parts(x, primes):
    out = np.ones(x + 1, dtype=np.int64)
    out[0] = 0
    for p in primes:
        p = int(p)
        if p > x:
            break
        pk = p
        while pk <= x:
            out[pk::pk] *= p
            pk *= p
    return out


def coprime_mask(x, primes):
    out = np.ones(x + 1, dtype=np.bool_)
    out[0] = False
    for p in primes:
        p = int(p)
        if p > x:
            break
        out[p::p] = False
    return out


def product_bits(outer, inner, x):
    bits = np.zeros(x + 1, dtype=np.bool_)
    if inner.size == 0:
        return bits
    first = int(inner[0])
    for a in outer:
        a = int(a)
        lim = x // a
        if lim < first:
            break
        cut = np.searchsorted(inner, lim, side="right")
        bits[a * inner[:cut]] = True
    return bits


def omega_poly_coeffs(primes, K):
    # exp of the log-series sum_m S_m z^m / m, S_m = sum_p p^-m
    c = np.zeros(K + 1)
    c[0] = 1.0
    if K == 0 or len(primes) == 0:
        return c
    inv = 1.0 / np.asarray(primes, dtype=np.float64)
    power_sums = np.zeros(K + 1)
    pw = inv.copy()
    for m in range(1, K + 1):
        power_sums[m] = pw.sum()
        pw *= inv
    for n in range(1, K + 1):
        c[n] = np.dot(power_sums[1 : n + 1], c[n - 1 :: -1][:n]) / n
    return c
