"""Time the jitted inner loops against the pure-numpy fallback.

Runs both lanes in one process (independent of HBSPACE_BACKEND) and
prints a table of best-of-5 timings.  If numba is missing only the
fallback lane runs.

Usage: python3 benchmarks/bench_kernels.py [--reps 5]
"""

import argparse
import time

import numpy as np

from hbspace._kernels import (_aberth_loops, _aberth_numpy, _horner_loops,
                              _horner_numpy, _series_loops, _series_numpy)
from hbspace.poly import ROOT_SWEEP_TOL, _aberth_initial

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False
    print("numba not importable - timing the numpy lane only")


def _workloads():
    rng = np.random.default_rng(7)
    true = 0.9 * np.exp(2j * np.pi * rng.random(24)) * (0.5 + rng.random(24))
    cn = np.ones(1, dtype=np.complex128)
    for r in true:
        cn = np.convolve(cn, np.array([-r, 1.0], dtype=np.complex128))
    hc = rng.standard_normal(65) + 1j * rng.standard_normal(65)
    pts = np.exp(2j * np.pi * rng.random(4096))
    num = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    den = np.empty(9, dtype=np.complex128)
    den[0] = 1.0
    den[1:] = 0.1 * (rng.standard_normal(8) + 1j * rng.standard_normal(8))
    return cn, hc, pts, num, den


def _best(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(reps):
    cn, hc, pts, num, den = _workloads()
    hout = np.empty(len(pts), dtype=np.complex128)
    sout = np.empty(8192, dtype=np.complex128)

    lanes = {"numpy": (_aberth_numpy, _horner_numpy, _series_numpy)}
    if HAS_NUMBA:
        lanes["numba"] = (njit(cache=True)(_aberth_loops),
                          njit(cache=True)(_horner_loops),
                          njit(cache=True)(_series_loops))

    cases = {
        "aberth deg-24": lambda ab: ab(cn, _aberth_initial(cn), 200,
                                       ROOT_SWEEP_TOL),
        "horner 65x4096": lambda hr: hr(hc, pts, hout),
        "series head 8192": lambda sr: sr(num, den, sout),
    }

    results = {}
    for lane, (ab, hr, sr) in lanes.items():
        picks = {"aberth deg-24": ab, "horner 65x4096": hr,
                 "series head 8192": sr}
        for case, fn in cases.items():
            fn(picks[case])  # warm-up (and jit compile)
            results[(case, lane)] = _best(lambda: fn(picks[case]), reps)

    print(f"{'kernel':<18} | {'numpy':>10} | {'numba':>10} | {'speedup':>8}")
    print("-" * 55)
    for case in cases:
        tn = results[(case, "numpy")]
        if HAS_NUMBA:
            tj = results[(case, "numba")]
            print(f"{case:<18} | {tn * 1e3:>8.3f}ms | {tj * 1e3:>8.3f}ms "
                  f"| {tn / tj:>7.1f}x")
        else:
            print(f"{case:<18} | {tn * 1e3:>8.3f}ms | {'-':>10} | {'-':>8}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=5)
    run(ap.parse_args().reps)
