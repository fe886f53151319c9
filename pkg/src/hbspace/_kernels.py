"""Hot numeric kernels with numba and pure-numpy implementations.

Three inner loops dominate the low-level work: the Aberth simultaneous
root iteration, Horner evaluation over point grids, and the linear
recurrence producing Taylor heads of rational functions.  Each exists
twice -- a scalar-loop version that numba jit-compiles, and a vectorized
numpy fallback -- selected in ``_backend``.  ``benchmarks/bench_kernels.py``
times one against the other.
"""

import numpy as np

from ._backend import USE_NUMBA


# ---------------------------------------------------------------- aberth

def _aberth_loops(c, x, maxiter, tol):
    # c: monic-normalized ascending coefficients, degree d = len(c)-1.
    # x: current root estimates, updated in place (Gauss-Seidel sweep).
    # Returns the number of sweeps used, or -1 if the budget ran out.
    d = len(c) - 1
    for it in range(maxiter):
        moved = 0.0
        for i in range(d):
            xi = x[i]
            p = c[d]
            dp = 0.0 + 0.0j
            for k in range(d - 1, -1, -1):
                dp = dp * xi + p
                p = p * xi + c[k]
            if p == 0.0:
                continue
            if dp == 0.0:
                # Sitting on a critical point: nudge off and retry.
                x[i] = xi * (1.0 + 1e-6) + 1e-6
                moved = 1.0
                continue
            w = p / dp
            s = 0.0 + 0.0j
            for j in range(d):
                if j != i:
                    diff = xi - x[j]
                    if diff == 0.0:
                        diff = 1e-30 + 0.0j
                    s += 1.0 / diff
            den = 1.0 - w * s
            if abs(den) < 1e-30:
                corr = w
            else:
                corr = w / den
            x[i] = xi - corr
            m = abs(corr) / (1.0 + abs(xi))
            if m > moved:
                moved = m
        if moved < tol:
            return it + 1
    return -1


def _aberth_numpy(c, x, maxiter, tol):
    # Jacobi-style vectorized variant of the same iteration.
    d = len(c) - 1
    for it in range(maxiter):
        p = np.full(d, c[d], dtype=np.complex128)
        dp = np.zeros(d, dtype=np.complex128)
        for k in range(d - 1, -1, -1):
            dp = dp * x + p
            p = p * x + c[k]
        safe_dp = np.where(dp == 0.0, 1.0, dp)
        w = np.where(dp == 0.0, 0.0, p / safe_dp)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        den = 1.0 - w * s
        small = np.abs(den) < 1e-30
        corr = np.where(small, w, w / np.where(small, 1.0, den))
        corr = np.where(p == 0.0, 0.0, corr)
        stuck = (dp == 0.0) & (p != 0.0)
        x -= corr
        if stuck.any():
            x[stuck] = x[stuck] * (1.0 + 1e-6) + 1e-6
            continue
        moved = np.max(np.abs(corr) / (1.0 + np.abs(x)))
        if moved < tol:
            return it + 1
    return -1


# ---------------------------------------------------------------- horner

def _horner_loops(c, pts, out):
    n = len(c)
    for i in range(len(pts)):
        z = pts[i]
        acc = 0.0 + 0.0j
        for k in range(n - 1, -1, -1):
            acc = acc * z + c[k]
        out[i] = acc


def _horner_numpy(c, pts, out):
    acc = np.zeros(len(pts), dtype=np.complex128)
    for k in range(len(c) - 1, -1, -1):
        acc = acc * pts + c[k]
    out[:] = acc


# ------------------------------------------------- series head (p/q)

def _series_loops(num, den, out):
    # Taylor coefficients of num/den by long division; den[0] != 0.
    N = len(out)
    dq = len(den) - 1
    nn = len(num)
    for n in range(N):
        s = num[n] if n < nn else 0.0 + 0.0j
        kmax = dq if dq < n else n
        for k in range(1, kmax + 1):
            s -= den[k] * out[n - k]
        out[n] = s / den[0]


def _series_numpy(num, den, out):
    # The recurrence is the impulse response of the IIR filter (num, den).
    from scipy.signal import lfilter

    N = len(out)
    impulse = np.zeros(N, dtype=np.complex128)
    impulse[0] = 1.0
    out[:] = lfilter(np.asarray(num, dtype=np.complex128),
                     np.asarray(den, dtype=np.complex128), impulse)


# ---------------------------------------------------------- dispatch

if USE_NUMBA:
    from numba import njit

    aberth_sweeps = njit(cache=True)(_aberth_loops)
    _horner_jit = njit(cache=True)(_horner_loops)
    _series_jit = njit(cache=True)(_series_loops)

    def horner_many(c, pts):
        out = np.empty(len(pts), dtype=np.complex128)
        _horner_jit(np.ascontiguousarray(c, dtype=np.complex128),
                    np.ascontiguousarray(pts, dtype=np.complex128), out)
        return out

    def series_head(num, den, N):
        out = np.empty(N, dtype=np.complex128)
        _series_jit(np.ascontiguousarray(num, dtype=np.complex128),
                    np.ascontiguousarray(den, dtype=np.complex128), out)
        return out

    # Warm the compile cache so the first real call is not the slow one.
    _w = np.array([1.0 + 0j, 1.0 + 0j])
    _x = np.array([0.5 + 0.5j])
    aberth_sweeps(_w, _x, 4, 1e-13)
    horner_many(_w, _x)
    series_head(_w, _w, 4)
else:
    aberth_sweeps = _aberth_numpy

    def horner_many(c, pts):
        out = np.empty(len(pts), dtype=np.complex128)
        _horner_numpy(np.asarray(c, dtype=np.complex128),
                      np.asarray(pts, dtype=np.complex128), out)
        return out

    def series_head(num, den, N):
        out = np.empty(N, dtype=np.complex128)
        _series_numpy(num, den, out)
        return out
