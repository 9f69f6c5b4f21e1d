"""Time each hot kernel under the numba and the pure-numpy implementation.

    python3 benchmarks/bench_kernels.py --x 1000000 --repeat 3

Every pair of outputs is checked for equality before timings are reported.
The numba column excludes compilation (one warm-up call per kernel).
"""

import argparse
import time

import numpy as np

from prodsets import kernels
from prodsets.kernels import numpy_impl

numba_impl = kernels.numba_impl


def cases(x):
    primes = numpy_impl.spf_table(x)
    primes = np.flatnonzero(primes[2:] == np.arange(2, x + 1)) + 2
    primes = primes.astype(np.int64)
    small = primes[primes <= 1000]
    composite = np.flatnonzero(~numpy_impl.prime_mask(x))[2:].astype(np.int64)
    rough = composite[composite % 2 == 1]
    return [
        ("spf_table", (x,)),
        ("prime_mask", (x,)),
        ("omega_counts", (x, small)),
        ("smooth_parts", (x, primes[primes <= 100])),
        ("coprime_mask", (x, small)),
        ("product_bits", (rough, composite, x)),
        ("omega_poly_coeffs", (primes[primes <= min(x, 10**6)], 64)),
    ]


def best_of(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--x", type=int, default=10**6)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)

    if numba_impl is None:
        parser.error("numba is not importable; nothing to compare")
    threads = kernels.set_threads(args.threads)
    print(f"x={args.x} numba_threads={threads}")
    print(f"{'kernel':<18} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, call_args in cases(args.x):
        getattr(numba_impl, name)(*call_args)  # compile
        t_np, a = best_of(getattr(numpy_impl, name), call_args, args.repeat)
        t_nb, b = best_of(getattr(numba_impl, name), call_args, args.repeat)
        if a.dtype.kind == "f":
            assert np.allclose(a, b, rtol=1e-12, atol=0), name
        else:
            assert np.array_equal(a, b), name
        print(f"{name:<18} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
