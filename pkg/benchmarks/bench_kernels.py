"""Timing comparison of the compiled kernels against the numpy fallback.

Runs each kernel pair on representative shapes and prints per-call times.
The numba path is what the package uses by default; the numpy path is the
one selected by PKERNELS_NO_NUMBA=1.

    python benchmarks/bench_kernels.py [--reps N] [--ext R]
"""

import argparse
import time

import numpy as np

from pkernels import _kernels as K
from pkernels.shtuka import field


def _time(fn, args, reps):
    fn(*args)   # warm (jit compile, cache touch)
    best = float('inf')
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _fmt(seconds):
    if seconds < 1e-3:
        return '%7.1fus' % (seconds * 1e6)
    if seconds < 1.0:
        return '%7.2fms' % (seconds * 1e3)
    return '%7.2fs ' % seconds


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument('--reps', type=int, default=7, help='timed repetitions')
    ap.add_argument('--ext', type=int, default=2, help='field extension degree r')
    args = ap.parse_args()

    cfg = field(2, args.ext)
    q = cfg.q
    rng = np.random.default_rng(0)

    def gf(*shape):
        return rng.integers(0, q, size=shape, dtype=np.int64)

    cases = [
        ('gf_matmul 64x64', K.gf_matmul, K._gf_matmul_numpy,
         (gf(64, 64), gf(64, 64), cfg.add, cfg.mul)),
        ('gf_matmul 256x256', K.gf_matmul, K._gf_matmul_numpy,
         (gf(256, 256), gf(256, 256), cfg.add, cfg.mul)),
        ('gf_rref 64x128', K.gf_rref, K._gf_rref_numpy,
         (gf(64, 128), cfg.add, cfg.mul, cfg.neg, cfg.inv)),
        ('gf_rref 128x256', K.gf_rref, K._gf_rref_numpy,
         (gf(128, 256), cfg.add, cfg.mul, cfg.neg, cfg.inv)),
        ('gf_conv2 32x32', K.gf_conv2, K._gf_conv2_numpy,
         (gf(32, 32), gf(32, 32), cfg.add, cfg.mul)),
        ('polymat_mul 8x8 deg16', K.polymat_mul, K._polymat_mul_numpy,
         (gf(8, 8, 16), gf(8, 8, 16), cfg.add, cfg.mul)),
        ('polymat_mul 16x16 deg32', K.polymat_mul, K._polymat_mul_numpy,
         (gf(16, 16, 32), gf(16, 16, 32), cfg.add, cfg.mul)),
    ]

    print('kernels: %s (numba %s)  field GF(%d)'
          % ('numba' if K.USE_NUMBA else 'numpy fallback',
             'available' if K.HAVE_NUMBA else 'not installed', q))
    print('%-26s %10s %10s %9s' % ('case', 'compiled', 'numpy', 'speedup'))
    for name, fast, ref, data in cases:
        t_ref = _time(ref, data, args.reps)
        if K.USE_NUMBA:
            t_fast = _time(fast, data, args.reps)
            print('%-26s %s %s %8.1fx' % (name, _fmt(t_fast), _fmt(t_ref),
                                          t_ref / t_fast))
        else:
            print('%-26s %10s %s %9s' % (name, '-', _fmt(t_ref), '-'))

    # the two families must agree wherever both run
    for name, fast, ref, data in cases:
        a = fast(*data)
        b = ref(*data)
        if isinstance(a, tuple):
            ok = all(np.array_equal(x, y) for x, y in zip(a, b))
        else:
            ok = np.array_equal(a, b)
        if not ok:
            raise SystemExit('MISMATCH in %s' % name)
    print('agreement: all kernel pairs returned identical results')


if __name__ == '__main__':
    main()
