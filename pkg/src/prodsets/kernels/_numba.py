"""numba kernels. Window-shaped loops run over disjoint segments in parallel."""

import os

import numba
import numpy as np
from numba import njit, prange

from ..config import SEGMENT

# the bundled TBB is too old and warns on every first launch
if "NUMBA_THREADING_LAYER" not in os.environ:
    try:
        from numba.np.ufunc import omppool  # noqa: F401

        numba.config.THREADING_LAYER = "omp"
    except ImportError:
        numba.config.THREADING_LAYER = "workqueue"


@njit(cache=True)
def _base_primes(limit):
    mark = np.ones(limit + 1, dtype=np.bool_)
    count = 0
    for i in range(2, limit + 1):
        if mark[i]:
            count += 1
            for j in range(i * i, limit + 1, i):
                mark[j] = False
    out = np.empty(count, dtype=np.int64)
    k = 0
    for i in range(2, limit + 1):
        if mark[i]:
            out[k] = i
            k += 1
    return out


@njit(parallel=True, cache=True)
def _spf_segments(n, base, seg):
    spf = np.zeros(n + 1, dtype=np.uint32)
    nseg = (n + seg) // seg
    for s in prange(nseg):
        lo = s * seg
        hi = min(n, lo + seg - 1)
        for i in range(base.size):
            p = base[i]
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            for m in range(start, hi + 1, p):
                if spf[m] == 0:
                    spf[m] = p
        for m in range(lo, hi + 1):
            if spf[m] == 0:
                spf[m] = m
    spf[0] = 0
    return spf


def spf_table(n):
    from math import isqrt

    return _spf_segments(n, _base_primes(isqrt(n)), SEGMENT)


@njit(cache=True)
def _prime_mask(n):
    mask = np.ones(n + 1, dtype=np.bool_)
    mask[0] = False
    if n >= 1:
        mask[1] = False
    p = 2
    while p * p <= n:
        if mask[p]:
            for j in range(p * p, n + 1, p):
                mask[j] = False
        p += 1
    return mask


def prime_mask(n):
    return _prime_mask(n)


@njit(parallel=True, cache=True)
def _omega_counts(x, primes, seg):
    out = np.zeros(x + 1, dtype=np.uint8)
    nseg = (x + seg) // seg
    for s in prange(nseg):
        lo = max(1, s * seg)
        hi = min(x, s * seg + seg - 1)
        for i in range(primes.size):
            p = primes[i]
            if p > hi:
                break
            pk = p
            while pk <= hi:
                start = ((lo + pk - 1) // pk) * pk
                for m in range(start, hi + 1, pk):
                    out[m] += 1
                if pk > hi // p:
                    break
                pk *= p
    return out


def omega_counts(x, primes):
    return _omega_counts(x, np.asarray(primes, dtype=np.int64), SEGMENT)


@njit(parallel=True, cache=True)
def _smooth_parts(x, primes, seg):
    out = np.ones(x + 1, dtype=np.int64)
    out[0] = 0
    nseg = (x + seg) // seg
    for s in prange(nseg):
        lo = max(1, s * seg)
        hi = min(x, s * seg + seg - 1)
        for i in range(primes.size):
            p = primes[i]
            if p > hi:
                break
            pk = p
            while pk <= hi:
                start = ((lo + pk - 1) // pk) * pk
                for m in range(start, hi + 1, pk):
                    out[m] *= p
                if pk > hi // p:
                    break
                pk *= p
    return out


def smooth_parts(x, primes):
    return _smooth_parts(x, np.asarray(primes, dtype=np.int64), SEGMENT)


@njit(parallel=True, cache=True)
def _coprime_mask(x, primes, seg):
    out = np.ones(x + 1, dtype=np.bool_)
    out[0] = False
    nseg = (x + seg) // seg
    for s in prange(nseg):
        lo = max(1, s * seg)
        hi = min(x, s * seg + seg - 1)
        for i in range(primes.size):
            p = primes[i]
            if p > hi:
                break
            start = ((lo + p - 1) // p) * p
            for m in range(start, hi + 1, p):
                out[m] = False
    return out


def coprime_mask(x, primes):
    return _coprime_mask(x, np.asarray(primes, dtype=np.int64), SEGMENT)


@njit(parallel=True, cache=True)
def _product_bits(outer, inner, x, nchunks):
    bits = np.zeros(x + 1, dtype=np.bool_)
    n = outer.size
    # interleaved chunks: small a carry most of the work
    for c in prange(nchunks):
        for i in range(c, n, nchunks):
            a = outer[i]
            lim = x // a
            for j in range(inner.size):
                b = inner[j]
                if b > lim:
                    break
                bits[a * b] = True
    return bits


def product_bits(outer, inner, x):
    outer = np.asarray(outer, dtype=np.int64)
    inner = np.asarray(inner, dtype=np.int64)
    nchunks = max(1, min(outer.size, 256))
    return _product_bits(outer, inner, x, nchunks)


@njit(cache=True)
def _omega_poly_coeffs(primes, K):
    c = np.zeros(K + 1)
    c[0] = 1.0
    for i in range(primes.size):
        inv = 1.0 / primes[i]
        # in place, ascending j: c[j-1] already holds the updated value
        for j in range(1, K + 1):
            c[j] += c[j - 1] * inv
    return c


def omega_poly_coeffs(primes, K):
    return _omega_poly_coeffs(np.asarray(primes, dtype=np.float64), K)
