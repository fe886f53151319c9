"""Truncated Hardy-space computations on coefficient vectors.

A function analytic past the closed disk is represented by the first N
Taylor coefficients; geometric decay (rate = smallest pole modulus)
controls the truncation error, and `tail_bound` turns that into an
explicit certificate.  Toeplitz operators act by convolution (analytic
symbol) or correlation (conjugate-analytic symbol), so applications cost
O(N log N) while explicit matrices are kept for the triangular solves.
"""

import numpy as np
import scipy.linalg

from ._kernels import series_head
from .config import DEFAULT_TOL
from .errors import InputError, ValidationError
from .poly import ComplexPoly, RationalFn


def expand(f, N):
    """First N Taylor coefficients of a polynomial or rational function."""
    if isinstance(f, RationalFn):
        num, den = f.num.c, f.den.c
        if len(num) == 0:
            return np.zeros(N, dtype=np.complex128)
        if abs(den[0]) < 1e-300:
            raise InputError("function has a pole at the origin")
        return series_head(np.ascontiguousarray(num),
                           np.ascontiguousarray(den), N)
    c = f.c if isinstance(f, ComplexPoly) else np.asarray(f, np.complex128)
    out = np.zeros(N, dtype=np.complex128)
    m = min(N, len(c))
    out[:m] = c[:m]
    return out


def tail_bound(f, N):
    """Upper estimate of the l2 norm of the discarded coefficients.

    Rational tails decay geometrically at the rate of the innermost
    pole; the constant is calibrated on the computed head, in log space
    to survive large N.  Polynomials have exact tails; a pole on or
    inside the circle gives an infinite bound.
    """
    if isinstance(f, ComplexPoly):
        if f.degree < N:
            return 0.0
        return float(np.linalg.norm(f.c[N:]))
    pol = f.poles()
    if len(pol) == 0:
        return tail_bound(f.num, N)
    rho = float(np.abs(pol).min())
    if rho <= 1.0 + 1e-12:
        return np.inf
    head = expand(f, N)
    k = max(2, min(16, N // 2))
    idx = np.arange(N - k, N)
    mags = np.abs(head[idx])
    mask = mags > 0
    if not np.any(mask):
        return 0.0
    logC = float(np.max(np.log(mags[mask]) + idx[mask] * np.log(rho)))
    log_tail = (logC - N * np.log(rho)
                - 0.5 * np.log1p(-rho ** -2.0))
    if log_tail > 700.0:
        return np.inf
    return float(np.exp(log_tail))


def inner(f, g):
    """Hardy inner product sum f_n conj(g_n)."""
    return complex(np.vdot(g, f))


def norm(f):
    return float(np.linalg.norm(f))


def eval_vec(f, z):
    """Evaluate a coefficient vector at a point (or points) in the disk."""
    from ._kernels import horner_many
    zs = np.asarray(z, dtype=np.complex128)
    vals = horner_many(np.ascontiguousarray(f, np.complex128), zs.ravel())
    return vals.reshape(zs.shape) if zs.ndim else vals[0]


def cauchy_kernel_power(w, j, N):
    """Coefficients of 1/(1 - conj(w) z)^j: binomial times conj(w)^n.

    Built by the stable running product c_n = c_{n-1} (n+j-1)/n conj(w),
    avoiding explicit factorials.
    """
    if j < 1:
        raise InputError("kernel power must be >= 1")
    out = np.empty(N, dtype=np.complex128)
    out[0] = 1.0
    wb = np.conj(complex(w))
    for n in range(1, N):
        out[n] = out[n - 1] * ((n + j - 1) / n) * wb
    return out


def shift_apply(f):
    """Multiplication by z in the truncated model (top coefficient falls off)."""
    out = np.empty_like(f)
    out[0] = 0.0
    out[1:] = f[:-1]
    return out


def backward_shift_apply(f):
    out = np.empty_like(f)
    out[:-1] = f[1:]
    out[-1] = 0.0
    return out


def toeplitz_analytic_apply(g, f, N=None):
    """T_g f for analytic symbol g: truncated convolution."""
    N = len(f) if N is None else N
    g = np.asarray(g, dtype=np.complex128)
    f = np.asarray(f, dtype=np.complex128)
    return np.convolve(g, f)[:N]


def toeplitz_coanalytic_apply(g, f, N=None):
    """T_{conj(g)} f: correlation against the symbol coefficients,
    h_n = sum_k conj(g_k) f_{n+k}."""
    N = len(f) if N is None else N
    g = np.asarray(g, dtype=np.complex128)
    f = np.asarray(f, dtype=np.complex128)
    M = len(g)
    full = np.convolve(f, np.conj(g)[::-1])
    out = np.zeros(N, dtype=np.complex128)
    seg = full[M - 1:M - 1 + N]
    out[:len(seg)] = seg
    return out


def toeplitz_analytic_matrix(g, N):
    """Lower-triangular Toeplitz matrix of T_g on the first N coefficients."""
    g = np.asarray(g, dtype=np.complex128)
    col = np.zeros(N, dtype=np.complex128)
    m = min(N, len(g))
    col[:m] = g[:m]
    row = np.zeros(N, dtype=np.complex128)
    row[0] = col[0]
    return scipy.linalg.toeplitz(col, row)


def toeplitz_coanalytic_matrix(g, N):
    """Upper-triangular Toeplitz matrix of T_{conj(g)}."""
    g = np.asarray(g, dtype=np.complex128)
    row = np.zeros(N, dtype=np.complex128)
    m = min(N, len(g))
    row[:m] = np.conj(g[:m])
    col = np.zeros(N, dtype=np.complex128)
    col[0] = row[0]
    return scipy.linalg.toeplitz(col, row)
