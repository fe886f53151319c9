"""The truncated model of the space H(b) for nonextreme rational b.

An element is a pair of coefficient vectors (f, f+), where f+ is the
unique Hardy function with  T_{conj(a)} f+ = T_{conj(b)} f.  The H(b)
inner product is then the sum of the two Hardy inner products, which
turns every computation here into dense linear algebra on stacked
vectors of length 2N.

Provided operations: reproducing kernels and their conjugate-w
derivatives, boundary (circle) kernels obtained through the isometry
W_lam = T_{1-conj(lam)b} T_{conj(F_lam)} from the Hardy space, the
adjoint-shift operator, and the multiplication embedding attached to
the lam = 1 spectral measure.
"""

import math
import warnings

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOL, QUADRATURE_FACTOR
from .errors import (FormulaUndefinedError, InputError,
                     NotAbsolutelyContinuousError, PlusPartError)
from .hardy import (cauchy_kernel_power, eval_vec, expand, inner,
                    toeplitz_analytic_apply, toeplitz_analytic_matrix,
                    toeplitz_coanalytic_apply, toeplitz_coanalytic_matrix)
from .poly import RationalFn, circle_points, deflate_at
from .pair import Pair


class HbElement:
    """A space element as (coefficients, plus-part coefficients)."""

    __slots__ = ("value", "plus")

    def __init__(self, value, plus):
        self.value = np.asarray(value, dtype=np.complex128)
        self.plus = np.asarray(plus, dtype=np.complex128)
        if self.value.shape != self.plus.shape:
            raise InputError("value and plus part must have equal length")

    @property
    def N(self):
        return len(self.value)

    def stacked(self):
        return np.concatenate([self.value, self.plus])

    def inner(self, other):
        return inner(self.value, other.value) + inner(self.plus, other.plus)

    def norm(self):
        return float(np.sqrt(max(self.inner(self).real, 0.0)))

    def __add__(self, other):
        return HbElement(self.value + other.value, self.plus + other.plus)

    def __sub__(self, other):
        return HbElement(self.value - other.value, self.plus - other.plus)

    def __rmul__(self, scalar):
        return HbElement(scalar * self.value, scalar * self.plus)

    def __call__(self, z):
        return eval_vec(self.value, z)

    def __repr__(self):
        return f"HbElement(N={self.N}, |f|={np.linalg.norm(self.value):.4g})"


# ------------------------------------------------------------ cached data

def _exp(pair, name, N):
    key = ("exp", name, N)
    if key not in pair._cache:
        fn = {"a": pair.a, "b": pair.b}[name]
        pair._cache[key] = expand(fn, N)
    return pair._cache[key]


def _tri_matrices(pair, N):
    key = ("tri", N)
    if key not in pair._cache:
        Ta = toeplitz_coanalytic_matrix(_exp(pair, "a", N), N)
        Tb = toeplitz_coanalytic_matrix(_exp(pair, "b", N), N)
        pair._cache[key] = (Ta, Tb)
    return pair._cache[key]


# ------------------------------------------------------------- plus parts

def plus_part(pair, f, N=None, tol=None):
    """The plus part: solve the triangular system T_conj(a) g = T_conj(b) f.

    T_conj(a) is upper triangular with diagonal conj(a(0)) != 0, so the
    truncated system is always solvable; membership failures show up as
    solutions whose norm diverges with N, and conditioning failures as a
    residual above tolerance.
    """
    tol = tol or pair.tol
    f = np.asarray(f, dtype=np.complex128)
    N = len(f) if N is None else N
    if len(f) != N:
        g = np.zeros(N, dtype=np.complex128)
        g[:min(N, len(f))] = f[:min(N, len(f))]
        f = g
    Ta, Tb = _tri_matrices(pair, N)
    rhs = Tb @ f
    g = scipy.linalg.solve_triangular(Ta, rhs, lower=False)
    resid = float(np.linalg.norm(Ta @ g - rhs))
    scale = max(1.0, float(np.linalg.norm(f)))
    if resid > tol.plus * scale:
        raise PlusPartError(
            f"plus-part residual {resid:.3e} exceeds {tol.plus:.1e} * ||f||")
    return g


def plus_part_batch(pair, F, tol=None):
    """Plus parts of the columns of F (N x k), one triangular solve."""
    tol = tol or pair.tol
    F = np.asarray(F, dtype=np.complex128)
    N = F.shape[0]
    Ta, Tb = _tri_matrices(pair, N)
    rhs = Tb @ F
    G = scipy.linalg.solve_triangular(Ta, rhs, lower=False)
    resid = float(np.linalg.norm(Ta @ G - rhs))
    scale = max(1.0, float(np.linalg.norm(F)))
    if resid > tol.plus * scale * max(1, F.shape[1]):
        raise PlusPartError(f"batched plus-part residual {resid:.3e} too large")
    return G


def element(pair, f, N=None):
    """Wrap a coefficient vector as a space element (plus part solved)."""
    f = np.asarray(f, dtype=np.complex128)
    N = len(f) if N is None else N
    return HbElement(_pad(f, N), plus_part(pair, f, N))


def _pad(f, N):
    out = np.zeros(N, dtype=np.complex128)
    m = min(N, len(f))
    out[:m] = f[:m]
    return out


# ---------------------------------------------------------------- kernels

def kernel(pair, w, N):
    """Reproducing kernel at an interior point w.

    value: (1 - conj(b(w)) b) Cauchy_w;  plus part in closed form:
    conj(b(w)) a Cauchy_w."""
    w = complex(w)
    if abs(w) >= 1.0:
        raise InputError("kernel point must lie strictly inside the disk")
    cw = cauchy_kernel_power(w, 1, N)
    bw = pair.b(w)
    bexp = _exp(pair, "b", N)
    aexp = _exp(pair, "a", N)
    value = cw - np.conj(bw) * toeplitz_analytic_apply(bexp, cw, N)
    plus = np.conj(bw) * toeplitz_analytic_apply(aexp, cw, N)
    return HbElement(value, plus)


def _shifted_cauchy(w, j, N):
    """Coefficients of z^j / (1 - conj(w) z)^(j+1)."""
    out = np.zeros(N, dtype=np.complex128)
    if j < N:
        out[j:] = cauchy_kernel_power(w, j + 1, N - j)
    return out


def deriv_kernel(pair, w, m, N):
    """m-th conjugate-derivative of the kernel in w, at an interior point.

    Leibniz expansion of d^m/d(conj w)^m applied to both the value and
    the closed-form plus part; the m = 0 case is the kernel itself.
    """
    w = complex(w)
    if abs(w) >= 1.0:
        raise InputError("derivative kernel point must lie inside the disk")
    if m < 0:
        raise InputError("derivative order must be >= 0")
    bexp = _exp(pair, "b", N)
    aexp = _exp(pair, "a", N)
    value = np.zeros(N, dtype=np.complex128)
    plus = np.zeros(N, dtype=np.complex128)
    for j in range(m + 1):
        coef = math.comb(m, j) * math.factorial(j)
        base = coef * _shifted_cauchy(w, j, N)
        i = m - j                       # derivative order hitting b(w)
        if i == 0:
            value += base - pair.b(w).conjugate() * \
                toeplitz_analytic_apply(bexp, base, N)
            plus += pair.b(w).conjugate() * \
                toeplitz_analytic_apply(aexp, base, N)
        else:
            dbw = np.conj(pair.b_derivative(i)(w))
            value -= dbw * toeplitz_analytic_apply(bexp, base, N)
            plus += dbw * toeplitz_analytic_apply(aexp, base, N)
    return HbElement(value, plus)


def deriv_kernel_rational(pair, w, m):
    """The same derivative kernel as an explicit rational function of z.

    Valid for interior w, and for unimodular w formally: the reduction
    cancels the circle pole exactly when the kernel belongs to the
    space, which makes this an independent pointwise cross-check for the
    boundary construction.
    """
    w = complex(w)
    total = None
    for j in range(m + 1):
        coef = math.comb(m, j) * math.factorial(j)
        if m - j == 0:
            dpart = RationalFn(pair.q - np.conj(pair.b(w)) * pair.p, pair.q,
                               reduce=False)
        else:
            dpart = RationalFn(
                (-np.conj(pair.b_derivative(m - j)(w))) * pair.p, pair.q,
                reduce=False)
        cau = RationalFn([0.0] * j + [coef],
                         _one_minus_conj_poly(w, j + 1), reduce=False)
        term = dpart * cau
        total = term if total is None else total + term
    return total


def _one_minus_conj_poly(w, power):
    from .poly import ComplexPoly
    base = ComplexPoly([1.0, -np.conj(w)])
    return (base ** power).c


# ------------------------------------------------ the isometry from Hardy

def w_lambda_vec(pair, lam, u, N, pad=None):
    """Apply W_lam = T_{1-conj(lam)b} T_{conj(F_lam)} to a coefficient
    vector u (treated as exact, i.e. zero beyond its length)."""
    lam = complex(lam)
    pad = 2 * N if pad is None else pad
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        F = pair.f_lambda(lam)
    Fexp = expand(F, pad)
    up = _pad(np.asarray(u, np.complex128), pad)
    y = toeplitz_coanalytic_apply(Fexp, up, pad)
    fac = expand(RationalFn(pair.q - np.conj(lam) * pair.p, pair.q,
                            reduce=False), pad)
    v = toeplitz_analytic_apply(fac, y, pad)[:N]
    return v


def w_lambda_element(pair, lam, u, N, tol=None):
    value = w_lambda_vec(pair, lam, u, N)
    return HbElement(value, plus_part(pair, value, N, tol))


def w_lambda_preimage(pair, lam, x, N=None, tol=None):
    """Invert the isometry: two triangular solves.

    The analytic factor is exactly lower triangular, so its solve is
    error-free in the model; the conjugate factor's truncation shows up
    only through coefficients beyond N.
    """
    lam = complex(lam)
    value = x.value if isinstance(x, HbElement) else np.asarray(x)
    N = len(value) if N is None else N
    key = ("wfac", complex(lam), N)
    if key not in pair._cache:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            F = pair.f_lambda(lam)
        Fexp = expand(F, N)
        fac = expand(RationalFn(pair.q - np.conj(lam) * pair.p, pair.q,
                                reduce=False), N)
        L = toeplitz_analytic_matrix(fac, N)
        U = toeplitz_coanalytic_matrix(Fexp, N)
        pair._cache[key] = (L, U)
    L, U = pair._cache[key]
    y = scipy.linalg.solve_triangular(L, value, lower=True)
    u = scipy.linalg.solve_triangular(U, y, lower=False)
    return u


def boundary_kernel(pair, z0, m, lam, N, tol=None):
    """Kernel (m-th conjugate-derivative) at a circle point z0.

    Built as W_lam of the explicit Hardy preimage: every term
    F_lam / (1 - conj(z0) z)^(j+1) is formed by deflating the zero of
    the numerator at z0, so the construction fails loudly (instead of
    silently diverging) when the membership order is exceeded.
    """
    tol = tol or pair.tol
    z0 = complex(z0)
    if abs(abs(z0) - 1.0) > tol.cluster:
        raise InputError("boundary kernel point must lie on the unit circle")
    z0 = z0 / abs(z0)
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise InputError("lambda must be unimodular")
    bz0 = pair.b(z0)
    if abs(lam - bz0) <= 1e-8:
        from .errors import HypothesisError
        raise HypothesisError(
            f"lambda = {lam} coincides with b(z0) = {bz0}; "
            f"choose a different unimodular lambda")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        F = pair.f_lambda(lam)

    def G_vec(j, length):
        # F_lam / (1 - conj(z0) z)^(j+1) as a reduced rational, via
        # deflation: (1 - conj(z0) z)^(j+1) = (-conj(z0))^(j+1) (z-z0)^(j+1)
        numdef = deflate_at(F.num, z0, j + 1)
        scalefac = (-np.conj(z0)) ** (j + 1)
        Gj = RationalFn(numdef * (1.0 / scalefac), F.den, reduce=False)
        return expand(Gj, length)

    pad = 2 * N
    u = np.zeros(pad, dtype=np.complex128)
    lead = (1.0 - lam * np.conj(bz0)) * math.factorial(m)
    gm = G_vec(m, pad - m)
    u[m:] += lead * gm
    for j in range(1, m + 1):
        c = math.comb(m, j) * lam * np.conj(pair.b_derivative(j)(z0)) \
            * math.factorial(m - j)
        gv = G_vec(m - j, pad - (m - j))
        u[m - j:] -= c * gv
    value = _apply_w_padded(pair, lam, u, N)
    return HbElement(value, plus_part(pair, value, N, tol))


def _apply_w_padded(pair, lam, u_pad, N):
    pad = len(u_pad)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        F = pair.f_lambda(lam)
    Fexp = expand(F, pad)
    y = toeplitz_coanalytic_apply(Fexp, u_pad, pad)
    fac = expand(RationalFn(pair.q - np.conj(lam) * pair.p, pair.q,
                            reduce=False), pad)
    return toeplitz_analytic_apply(fac, y, pad)[:N]


# ----------------------------------------------------- the adjoint shift

def _shifted_b_element(pair, N, tol=None):
    key = ("ssb", N)
    if key not in pair._cache:
        bexp = _exp(pair, "b", N)
        sb = np.empty(N, dtype=np.complex128)
        sb[:-1] = bexp[1:]
        sb[-1] = 0.0
        # the dropped top coefficient is the N-truncation of S* b
        pair._cache[key] = element(pair, sb, N)
    return pair._cache[key]


def x_star_apply(pair, h, tol=None):
    """Adjoint of the restricted backward shift:
    (X* h)(z) = z h(z) - <h, S*b>_b b(z)."""
    if not isinstance(h, HbElement):
        h = element(pair, h)
    N = h.N
    ssb = _shifted_b_element(pair, N, tol)
    c = h.inner(ssb)
    value = np.empty(N, dtype=np.complex128)
    value[0] = 0.0
    value[1:] = h.value[:-1]
    value -= c * _exp(pair, "b", N)
    return HbElement(value, plus_part(pair, value, N, tol))


# ----------------------------------------- multiplication embedding (V_b)

def v_b_apply(pair, f, N, strict=True, tol=None):
    """The multiplication embedding attached to the lam = 1 measure:
    f -> (1 - b) P_+(|F_1|^2 f), computed by circle quadrature.

    The construction presumes that measure is absolutely continuous;
    with strict=True a singular part raises, with strict=False only the
    density part is used (and the result is the a.c. component of the
    embedding).
    """
    tol = tol or pair.tol
    ac = pair.mu_is_ac(1.0)
    if strict and not ac:
        raise NotAbsolutelyContinuousError(
            "the lam = 1 spectral measure has point masses; pass "
            "strict=False to compute the density-only embedding")
    f = np.asarray(f, dtype=np.complex128)
    M = QUADRATURE_FACTOR * max(N, len(f))
    z = circle_points(M)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        F = pair.f_lambda(1.0)
    dens = np.abs(F(z)) ** 2
    fv = eval_vec(f, z)
    coeffs = np.fft.fft(dens * fv) / M
    proj = coeffs[:N].astype(np.complex128)
    fac = expand(RationalFn(pair.q - pair.p, pair.q, reduce=False), N)
    return toeplitz_analytic_apply(fac, proj, N)


def herglotz_mass(pair):
    """Total mass of the lam = 1 measure via its Herglotz transform at 0:
    Re (1+b(0))/(1-b(0)).  Finite-check guard for the formula."""
    b0 = pair.b(0.0)
    if abs(1.0 - b0) < 1e-14:
        raise FormulaUndefinedError("b(0) = 1 leaves the mass formula undefined")
    return float(((1.0 + b0) / (1.0 - b0)).real)
