"""Polynomials, Laurent symbols on the unit circle, and rational functions.

Everything downstream reduces to a handful of primitives collected here:

* simultaneous root finding (Aberth iteration, companion-matrix
  eigenvalues as fallback, residual-validated either way),
* the autocorrelation symbol |p|^2 restricted to the unit circle,
* spectral factorization of nonnegative circle symbols into an outer
  polynomial factor,
* multiplicity-aware root clustering.  A root of multiplicity s can only
  be located to about eps**(1/s), so any clustering radius must widen
  with the candidate multiplicity; a fixed tolerance silently shatters
  double roots.

Coefficients are stored ascending (c[k] multiplies z**k).  The zero
polynomial is the empty coefficient sequence with degree -1.
"""

import numpy as np

from ._kernels import aberth_sweeps, horner_many, series_head  # noqa: F401
from .config import Tolerances, DEFAULT_TOL, CIRCLE_GRID
from .errors import (AmbiguousZeroError, FactorizationError, InputError,
                     NotSchurError, RootFindingError, ValidationError)

_EPS = np.finfo(float).eps
_TRIM_REL = 1e-14

ROOT_ITER_BUDGET = 200
ROOT_SWEEP_TOL = 1e-13


def circle_points(M):
    """M equispaced points on the unit circle, starting at 1."""
    return np.exp(2j * np.pi * np.arange(M) / M)


class ComplexPoly:
    """Polynomial with complex coefficients in ascending order."""

    __slots__ = ("c",)

    def __init__(self, coeffs=(), trim=True):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).ravel()
        if trim and len(c):
            top = np.abs(c).max()
            if top == 0.0:
                c = c[:0]
            else:
                keep = len(c)
                while keep > 0 and abs(c[keep - 1]) <= _TRIM_REL * top:
                    keep -= 1
                c = c[:keep]
        self.c = c

    @property
    def degree(self):
        return len(self.c) - 1

    def __call__(self, z):
        if self.degree < 0:
            return np.zeros_like(np.asarray(z, dtype=np.complex128)) if np.ndim(z) else 0j
        zs = np.asarray(z, dtype=np.complex128)
        vals = horner_many(self.c, zs.ravel())
        return vals.reshape(zs.shape) if zs.ndim else vals[0]

    def __add__(self, other):
        if np.isscalar(other):
            other = ComplexPoly([other])
        n = max(len(self.c), len(other.c))
        out = np.zeros(n, dtype=np.complex128)
        out[:len(self.c)] += self.c
        out[:len(other.c)] += other.c
        return ComplexPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self.c, trim=False)

    def __sub__(self, other):
        if np.isscalar(other):
            other = ComplexPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return ComplexPoly(self.c * other)
        if self.degree < 0 or other.degree < 0:
            return ComplexPoly([])
        return ComplexPoly(np.convolve(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0 or n != int(n):
            raise InputError("polynomial powers must be nonnegative integers")
        out = ComplexPoly([1.0])
        base = self
        n = int(n)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self):
        if self.degree <= 0:
            return ComplexPoly([])
        return ComplexPoly(self.c[1:] * np.arange(1, len(self.c)), trim=False)

    def monic(self):
        if self.degree < 0:
            raise InputError("zero polynomial has no monic form")
        return ComplexPoly(self.c / self.c[-1], trim=False)

    def shift_up(self, k=1):
        """Multiply by z**k."""
        if self.degree < 0:
            return self
        return ComplexPoly(np.concatenate([np.zeros(k, np.complex128), self.c]),
                           trim=False)

    def to_json(self):
        return [[float(v.real), float(v.imag)] for v in self.c]

    @classmethod
    def from_json(cls, data):
        return cls([complex(re, im) for re, im in data])

    def __repr__(self):
        return f"ComplexPoly({list(self.c)!r})"


def poly_from_roots(rts, lead=1.0):
    c = np.array([lead], dtype=np.complex128)
    for r in rts:
        c = np.convolve(c, np.array([-r, 1.0], dtype=np.complex128))
    return ComplexPoly(c, trim=False)


def roots(p, tol=None):
    """All roots of p, multiplicity-repeated, sorted by (re, im).

    Aberth iteration first; companion-matrix eigenvalues as fallback.
    Either result must pass |p(root)| <= tol.root * ||c||_inf * (1+|root|)^deg.
    """
    tol = tol or DEFAULT_TOL
    if p.degree <= 0:
        return np.zeros(0, dtype=np.complex128)
    c = p.c
    # Exact zero leading coefficients give roots at the origin.
    nz = 0
    while nz < len(c) - 1 and c[nz] == 0.0:
        nz += 1
    zero_roots = np.zeros(nz, dtype=np.complex128)
    c = c[nz:]
    d = len(c) - 1
    if d == 0:
        found = zero_roots
    elif d == 1:
        found = np.concatenate([zero_roots, [-c[0] / c[1]]])
    else:
        cn = np.ascontiguousarray(c / c[-1])
        x = _aberth_initial(cn)
        sweeps = aberth_sweeps(cn, x, ROOT_ITER_BUDGET, ROOT_SWEEP_TOL)
        resid = _root_residual(c, x)
        bound = tol.root * np.abs(c).max()
        if sweeps < 0 or np.any(resid > bound * (1.0 + np.abs(x)) ** d):
            # companion-matrix eigenvalues (descending coefficients)
            x = np.roots(c[::-1]).astype(np.complex128)
            resid = _root_residual(c, x)
            if np.any(resid > bound * (1.0 + np.abs(x)) ** d):
                raise RootFindingError(
                    "root finding failed residual validation "
                    f"(max residual {resid.max():.3e})", residual=float(resid.max()))
        found = np.concatenate([zero_roots, x])
    order = np.lexsort((found.imag, found.real))
    return found[order]


def _aberth_initial(cn):
    d = len(cn) - 1
    R = 1.0 + np.abs(cn[:-1]).max()
    ang = 2.0 * np.pi * np.arange(d) / d + 0.4
    return R * np.exp(1j * ang)


def _root_residual(c, x):
    return np.abs(horner_many(c, x))


def _adaptive_radius(s, tol):
    """Clustering radius for a candidate multiplicity-s root."""
    if s <= 1:
        return tol.cluster
    return max(tol.cluster, 6.0 * _EPS ** (1.0 / s))


def _linkage(pts, s_max, tol):
    """Single-linkage clustering with a size cap.

    The merge radius is swept upward through the candidate multiplicities
    2..s_max: the fragments of an s-fold root scatter like eps**(1/s), so
    the first passes (tight radius) assemble low-multiplicity clusters and
    later passes (wide radius) let higher-multiplicity fragments coalesce.
    A single fixed radius cannot do both.
    """
    clusters = [[r] for r in pts]
    for s_allow in range(2, s_max + 1):
        rad_s = _adaptive_radius(s_allow, tol)
        changed = True
        while changed:
            changed = False
            for i in range(len(clusters)):
                ci = np.mean(clusters[i])
                for j in range(i + 1, len(clusters)):
                    if len(clusters[i]) + len(clusters[j]) > s_allow:
                        continue
                    cj = np.mean(clusters[j])
                    if abs(ci - cj) <= rad_s * (1.0 + abs(ci)):
                        clusters[i] = clusters[i] + clusters[j]
                        del clusters[j]
                        changed = True
                        break
                if changed:
                    break
    return clusters


def _mult_residual_ok(p, z, s, tol):
    """Does p really vanish to order s at z?  Checks p and its first s-1
    derivatives relative to their own coefficient scales.

    A genuine multiple root evaluates to coefficient roundoff (~1e-15
    relative); two distinct roots delta apart masquerading as a double
    leave a residual ~(delta/2)^2, so the 1e-10 threshold separates the
    cases down to delta ~ 1e-5."""
    q = p
    for j in range(s):
        if j > 0:
            q = q.derivative()
        if q.degree < 0:
            return False
        denom = max(np.abs(q.c).max(), 1e-300) * (1.0 + abs(z)) ** q.degree
        if abs(q(z)) > 1e-10 * denom:
            return False
    return True


def _split_cluster(p, members, tol):
    s = len(members)
    if s == 1:
        return [(complex(members[0]), 1)]
    center = complex(np.mean(members))
    zhat = polish_root(p, center, s)
    if _mult_residual_ok(p, zhat, s, tol):
        return [(zhat, s)]
    # Not genuinely s-fold: the wide radius over-merged.  Re-cluster the
    # members with the size cap lowered and recurse.
    sub = _linkage(members, s - 1, tol)
    if len(sub) == 1:
        return [(polish_root(p, complex(m), 1), 1) for m in members]
    out = []
    for cl in sub:
        out.extend(_split_cluster(p, cl, tol))
    return out


def cluster_roots(rts, tol=None, p=None):
    """Group a root multiset into (center, multiplicity) clusters.

    Geometric linkage alone cannot tell a tight cluster of simple roots
    from a genuinely multiple root, so when the source polynomial p is
    supplied each multi-point cluster is verified analytically (p and its
    derivatives must vanish at the polished center) and split if the
    check fails.  Roots closer together than the eps**(1/s) scatter of a
    true s-fold root are inherently indistinguishable from one and are
    reported as a single cluster.
    """
    tol = tol or DEFAULT_TOL
    pts = list(rts)
    if not pts:
        return []
    clusters = _linkage(pts, len(pts), tol)
    if p is None:
        return [(complex(np.mean(cl)), len(cl)) for cl in clusters]
    out = []
    for cl in clusters:
        out.extend(_split_cluster(p, cl, tol))
    return out


def polish_root(p, z, mult=1):
    """Newton-polish a root of multiplicity mult.

    An s-fold root of p is a simple root of the (s-1)-th derivative, so
    Newton on that derivative recovers the cluster center to near machine
    precision even though the individual roots scatter like eps**(1/s).
    """
    q = p
    for _ in range(mult - 1):
        q = q.derivative()
    dq = q.derivative()
    if dq.degree < 0:
        return z
    z0 = z
    for _ in range(60):
        dqz = dq(z)
        if dqz == 0.0:
            break
        step = q(z) / dqz
        if not np.isfinite(step):
            break
        z_new = z - step
        if abs(z_new - z0) > 0.1 * (1.0 + abs(z0)):
            return z0  # Newton ran away; keep the cluster mean
        z = z_new
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


def deflate_at(p, z0, times=1):
    """Divide p by (z - z0) `times` times via synthetic division.

    The remainder must be negligible each round; otherwise the claimed
    root is not actually present and we refuse to fabricate a quotient.
    """
    c = p.c.copy()
    top = max(np.abs(c).max(), 1e-300)
    for _ in range(times):
        d = len(c) - 1
        if d < 1:
            raise ValidationError("cannot deflate a constant polynomial")
        out = np.empty(d, dtype=np.complex128)
        acc = c[d]
        for k in range(d - 1, -1, -1):
            out[k] = acc
            acc = c[k] + acc * z0
        if abs(acc) > 1e-6 * top * (1.0 + abs(z0)) ** d:
            raise ValidationError(
                f"deflation remainder {abs(acc):.3e} too large at {z0}")
        c = out
    return ComplexPoly(c)


class LaurentSymbol:
    """Trigonometric polynomial sum c_n z^n, n = -m..m, on |z| = 1.

    Coefficients are stored ascending from index -m.  Real-valued symbols
    satisfy c_{-n} = conj(c_n).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).ravel()
        if len(c) % 2 == 0:
            raise InputError("Laurent symbol needs an odd coefficient count")
        self.coeffs = c

    @property
    def m(self):
        return (len(self.coeffs) - 1) // 2

    def __add__(self, other):
        m = max(self.m, other.m)
        out = np.zeros(2 * m + 1, dtype=np.complex128)
        out[m - self.m:m + self.m + 1] += self.coeffs
        out[m - other.m:m + other.m + 1] += other.coeffs
        return LaurentSymbol(out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        return LaurentSymbol(self.coeffs * scalar)

    def values(self, M=CIRCLE_GRID, pts=None):
        """Sample the symbol on the unit circle."""
        z = circle_points(M) if pts is None else np.asarray(pts, np.complex128)
        # z^{-m} * (ascending polynomial in z); conj(z) = 1/z on the circle
        return horner_many(self.coeffs, z) * np.conj(z) ** self.m

    def hermitian_residual(self):
        return float(np.abs(self.coeffs - np.conj(self.coeffs[::-1])).max())

    def trimmed(self):
        c = self.coeffs
        m = self.m
        top = np.abs(c).max()
        if top == 0.0:
            return LaurentSymbol([0.0])
        while m > 0 and max(abs(c[0]), abs(c[-1])) <= _TRIM_REL * top:
            c = c[1:-1]
            m -= 1
        return LaurentSymbol(c)

    def __repr__(self):
        return f"LaurentSymbol(m={self.m}, coeffs={list(self.coeffs)!r})"


def abs_square_on_circle(p):
    """The symbol |p(z)|^2 on the circle: c_n = sum_k p_{k+n} conj(p_k)."""
    if p.degree < 0:
        return LaurentSymbol([0.0])
    c = p.c
    return LaurentSymbol(np.convolve(c, np.conj(c)[::-1]))


def fejer_riesz(symbol, tol=None, grid=CIRCLE_GRID):
    """Outer polynomial factor r with |r|^2 = symbol on the circle.

    The symbol must be real and >= -tol.pos on the circle.  Roots of the
    associated polynomial z^m w(z) come in (rho, 1/conj(rho)) pairs; the
    outer factor keeps one of each, splitting circle roots (necessarily
    of even multiplicity) equally.  Normalized so r(0) > 0, and validated
    against the symbol on a dense grid.
    """
    tol = tol or DEFAULT_TOL
    w = symbol.trimmed()
    scale0 = max(np.abs(w.coeffs).max(), 1.0)
    if w.hermitian_residual() > 1e-12 * scale0:
        raise NotSchurError("symbol is not real on the circle")
    vals = w.values(grid)
    vals = vals.real
    scale = max(1.0, float(vals.max()))
    if float(vals.min()) < -tol.pos * scale:
        raise NotSchurError(
            f"symbol is negative on the circle (min {vals.min():.3e})")
    if float(np.abs(vals).max()) <= tol.pos:
        return ComplexPoly([])
    m = w.m
    if m == 0:
        return ComplexPoly([np.sqrt(max(w.coeffs[0].real, 0.0))])

    P = ComplexPoly(w.coeffs)
    clusters = cluster_roots(roots(P, tol), tol, p=P)
    kept = []
    n_inside = 0
    n_circle = 0
    for center, mult in clusters:
        dev = abs(abs(center) - 1.0)
        if dev <= tol.cluster:
            if mult % 2:
                raise FactorizationError(
                    f"odd multiplicity {mult} on the circle at {center}")
            z = center / abs(center)
            kept.extend([z] * (mult // 2))
            n_circle += mult
        elif abs(center) < 1.0:
            n_inside += mult
        else:
            kept.extend([center] * mult)
    if len(kept) != m:
        raise FactorizationError(
            f"root pairing failed: kept {len(kept)} of expected {m}")

    prod = np.prod([-np.conj(z) for z in kept]) if kept else 1.0
    s = w.coeffs[-1] / prod
    if abs(s.imag) > 1e-6 * abs(s) or s.real <= 0.0:
        raise FactorizationError(f"factorization scale {s} is not positive")
    r = poly_from_roots(kept, lead=np.sqrt(s.real))
    r0 = r(0.0)
    if r0 != 0.0:
        r = r * (np.conj(r0) / abs(r0))

    rv = np.abs(horner_many(r.c, circle_points(grid))) ** 2
    err = float(np.abs(rv - vals).max())
    if err > tol.fr * scale:
        raise ValidationError(
            f"spectral factor failed grid validation (max error {err:.3e})")
    return r


class RationalFn:
    """Quotient of two polynomials, monic denominator, common roots
    cancelled (within tol.gcd)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, tol=None, reduce=True):
        tol = tol or DEFAULT_TOL
        num = num if isinstance(num, ComplexPoly) else ComplexPoly(
            [num] if np.isscalar(num) else num)
        if den is None:
            den = ComplexPoly([1.0])
        elif not isinstance(den, ComplexPoly):
            den = ComplexPoly([den] if np.isscalar(den) else den)
        if den.degree < 0:
            raise InputError("denominator is the zero polynomial")
        if num.degree < 0:
            self.num = ComplexPoly([])
            self.den = ComplexPoly([1.0])
            return
        if reduce and num.degree > 0 and den.degree > 0:
            num, den = _cancel_common_roots(num, den, tol)
        lead = den.c[-1]
        self.num = ComplexPoly(num.c / lead, trim=False)
        self.den = ComplexPoly(den.c / lead, trim=False)

    def __call__(self, z):
        zs = np.asarray(z, dtype=np.complex128)
        flat = zs.ravel()
        if self.num.degree < 0:
            nv = np.zeros(len(flat), dtype=np.complex128)
        else:
            nv = horner_many(self.num.c, flat)
        dv = horner_many(self.den.c, flat)
        vals = nv / dv
        return vals.reshape(zs.shape) if zs.ndim else vals[0]

    def poles(self, tol=None):
        return roots(self.den, tol)

    def derivative(self):
        n, d = self.num, self.den
        return RationalFn(n.derivative() * d - n * d.derivative(), d * d)

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, ComplexPoly) or np.isscalar(other):
            return RationalFn(other, reduce=False)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFn(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n):
        return RationalFn(self.num ** n, self.den ** n, reduce=False)

    def eval_on_circle(self, M=CIRCLE_GRID):
        return self(circle_points(M))

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(ComplexPoly.from_json(data["num"]),
                   ComplexPoly.from_json(data["den"]))

    def __repr__(self):
        return f"RationalFn({self.num!r}, {self.den!r})"


def _cancel_common_roots(num, den, tol):
    rn = list(roots(num, tol))
    rd = list(roots(den, tol))
    lead_n = num.c[-1]
    lead_d = den.c[-1]
    used = [False] * len(rn)
    kept_d = []
    cancelled = False
    for r in rd:
        best = -1
        best_dist = np.inf
        for i, rr in enumerate(rn):
            if used[i]:
                continue
            dd = abs(rr - r)
            if dd < best_dist:
                best, best_dist = i, dd
        if best >= 0 and best_dist <= tol.gcd * (1.0 + abs(r)):
            used[best] = True
            cancelled = True
        else:
            kept_d.append(r)
    if not cancelled:
        return num, den
    kept_n = [rr for i, rr in enumerate(rn) if not used[i]]
    new_num = poly_from_roots(kept_n, lead=lead_n / lead_d)
    new_den = poly_from_roots(kept_d, lead=1.0)
    return new_num, new_den


def ord_at(f, z0, tol=None):
    """Multiplicity of the zero of f at z0 (0 if f(z0) != 0).

    Cluster membership uses the multiplicity-aware radius; a root that is
    neither clearly at z0 nor clearly away raises AmbiguousZeroError.
    For rational f, z0 must stay clear of the poles.
    """
    tol = tol or DEFAULT_TOL
    if isinstance(f, RationalFn):
        num = f.num
        pol = f.poles(tol)
        if len(pol) and np.abs(pol - z0).min() <= tol.cluster * (1.0 + abs(z0)):
            raise InputError(f"{z0} is a pole of the function")
    else:
        num = f
    if num.degree < 0:
        raise InputError("the zero function has no vanishing order")
    if num.degree == 0:
        return 0
    rts = roots(num, tol)
    dist = np.sort(np.abs(rts - z0))
    scale = 1.0 + abs(z0)
    d = len(rts)
    for s in range(d, 0, -1):
        rad = _adaptive_radius(s, tol) * scale
        if dist[s - 1] <= rad:
            if s < d and dist[s] < 10.0 * rad:
                raise AmbiguousZeroError(
                    f"root at distance {dist[s]:.3e} from {z0} cannot be "
                    f"separated from a multiplicity-{s} cluster")
            return s
    if dist[0] < 10.0 * tol.cluster * scale:
        raise AmbiguousZeroError(
            f"root at distance {dist[0]:.3e} from {z0} is in the gray zone")
    return 0
