"""Schur-class rational symbols b and their outer mates a.

A rational b with |b| <= 1 on the circle and poles outside the closed
disk admits, unless |b| = 1 almost everywhere, a unique outer a with

    |a|^2 + |b|^2 = 1  on the circle,  a(0) > 0.

Writing b = p/q over a monic common denominator, the mate is a = r/q
where |r|^2 = |q|^2 - |p|^2 is a spectral factorization problem; all of
the Hilbert-space machinery downstream works with the coefficient triple
(p, q, r).
"""

import warnings

import numpy as np

from .config import DEFAULT_TOL, CIRCLE_GRID
from .errors import (AmbiguousZeroError, ExtremeSymbolError, HypothesisError,
                     InputError, NotSchurError, PoleOnCircleWarning,
                     ValidationError)
from .poly import (ComplexPoly, RationalFn, abs_square_on_circle, circle_points,
                   cluster_roots, fejer_riesz, ord_at, roots)


class BoundaryPoint:
    """A circle zero of the mate a, with its vanishing order."""

    __slots__ = ("point", "order")

    def __init__(self, point, order):
        self.point = complex(point)
        self.order = int(order)

    def __repr__(self):
        return f"BoundaryPoint({self.point!r}, order={self.order})"

    def __eq__(self, other):
        return (isinstance(other, BoundaryPoint)
                and self.point == other.point and self.order == other.order)


class Pair:
    """The triple (p, q, r) with b = p/q, a = r/q, |p|^2 + |r|^2 = |q|^2."""

    def __init__(self, p, q, r, tol=None):
        self.tol = tol or DEFAULT_TOL
        self.p = p
        self.q = q
        self.r = r
        self.b = RationalFn(p, q, reduce=False)
        self.a = RationalFn(r, q, reduce=False)
        self._cache = {}
        self._b_derivs = [self.b]

    # -- basic evaluation ------------------------------------------------

    def b_derivative(self, j):
        """The j-th derivative of b as a rational function (cached)."""
        while len(self._b_derivs) <= j:
            self._b_derivs.append(self._b_derivs[-1].derivative())
        return self._b_derivs[j]

    def degree(self):
        return max(self.p.degree, self.q.degree, self.r.degree)

    # -- the family F_lambda --------------------------------------------

    def _atom_state(self, lam):
        """Circle-zero state of q - conj(lam) p: 'none', 'some', or
        'ambiguous'.  This is checked before any cancellation against r,
        because the cancellation can hide a genuine circle zero (the
        measure keeps its point mass even when F_lam is smooth there)."""
        key = ("atoms", complex(lam))
        if key in self._cache:
            return self._cache[key]
        den = self.q - np.conj(lam) * self.p
        if den.degree < 0:
            raise InputError("1 - conj(lambda) b vanishes identically")
        state = "none"
        if den.degree > 0:
            dev = np.abs(np.abs(roots(den, self.tol)) - 1.0)
            if np.any((dev > self.tol.cluster)
                      & (dev < 10 * self.tol.cluster)):
                state = "ambiguous"
            elif dev.min() <= self.tol.cluster:
                state = "some"
        self._cache[key] = state
        return state

    def f_lambda(self, lam, warn=True):
        """F_lam = a / (1 - conj(lam) b), reduced to lowest terms.

        Warns when 1 - conj(lam) b vanishes somewhere on the circle: the
        associated measure then carries point masses, even though the
        reduced F_lam itself may be smooth there.
        """
        key = ("flam", complex(lam))
        if key in self._cache:
            F = self._cache[key]
        else:
            den = self.q - np.conj(lam) * self.p
            if den.degree < 0:
                raise InputError("1 - conj(lambda) b vanishes identically")
            F = RationalFn(self.r, den, tol=self.tol)
            self._cache[key] = F
        if warn and self._atom_state(lam) == "some":
            warnings.warn(
                f"1 - conj(lambda) b vanishes on the circle for lambda={lam}; "
                f"the spectral measure has point masses",
                PoleOnCircleWarning, stacklevel=2)
        return F

    def mu_is_ac(self, lam):
        """Is the measure with Herglotz transform (1+conj(lam)b)/(1-conj(lam)b)
        absolutely continuous?  Equivalent to q - conj(lam) p having no
        circle zeros (checked before cancellation)."""
        state = self._atom_state(lam)
        if state == "ambiguous":
            raise AmbiguousZeroError(
                "cannot decide whether 1 - conj(lambda) b vanishes on the "
                "circle at the working tolerance")
        return state == "none"

    # -- boundary structure ----------------------------------------------

    def boundary_structure(self):
        """Circle zeros of the mate a with their orders, sorted by angle.

        Cached; raises AmbiguousZeroError when a zero sits in the gray
        band around the circle where on/off cannot be decided at the
        working tolerance.
        """
        if "boundary" in self._cache:
            return self._cache["boundary"]
        pts = []
        if self.r.degree > 0:
            clusters = cluster_roots(roots(self.r, self.tol), self.tol,
                                     p=self.r)
            for center, mult in clusters:
                dev = abs(abs(center) - 1.0)
                if dev <= self.tol.cluster:
                    z0 = center / abs(center)
                    pts.append(BoundaryPoint(z0, mult))
                elif dev < 10 * self.tol.cluster:
                    raise AmbiguousZeroError(
                        f"zero of the mate at {center} is neither clearly on "
                        f"nor clearly off the circle "
                        f"(|dev| = {dev:.3e}, tol = {self.tol.cluster:.1e})")
        pts.sort(key=lambda bp: (np.angle(bp.point) % (2 * np.pi)))
        self._cache["boundary"] = pts
        return pts

    def membership_order(self, z0, lam=None):
        """Largest k with the k-th derivative kernel at z0 in the space:
        ord_{z0}(a) - 1.  If lam is given it must stay away from b(z0)."""
        z0 = complex(z0)
        if abs(abs(z0) - 1.0) > self.tol.cluster:
            raise InputError(f"{z0} is not on the unit circle")
        if lam is not None:
            bz0 = self.b(z0)
            if abs(lam - bz0) <= 1e-8:
                raise HypothesisError(
                    f"lambda = {lam} coincides with b({z0}) = {bz0}")
        return ord_at(self.a, z0, self.tol) - 1

    def __repr__(self):
        return (f"Pair(p={list(self.p.c)!r}, q={list(self.q.c)!r}, "
                f"r={list(self.r.c)!r})")


def _as_rational(b):
    if isinstance(b, RationalFn):
        return b
    if isinstance(b, ComplexPoly):
        return RationalFn(b, reduce=False)
    return RationalFn(ComplexPoly(b), reduce=False)


def pair_from_b(b, tol=None):
    """Validate a rational Schur symbol and construct its outer mate.

    Rejects symbols with poles in the closed disk, symbols exceeding
    modulus 1 on the circle, and symbols of constant modulus 1 (which
    admit no mate).  The returned Pair satisfies |a|^2 + |b|^2 = 1 on a
    dense circle grid to tol.pair and a(0) > 0.
    """
    tol = tol or DEFAULT_TOL
    b = _as_rational(b)
    p, q = b.num, b.den

    pol = b.poles(tol)
    if len(pol):
        amin = np.abs(pol).min()
        if amin <= 1.0 + tol.cluster:
            raise NotSchurError(
                f"symbol has a pole at modulus {amin:.6f}, inside or on the "
                f"unit circle")

    w = abs_square_on_circle(q) - abs_square_on_circle(p)
    vals = w.values(CIRCLE_GRID).real
    qscale = float(np.abs(abs_square_on_circle(q).values(CIRCLE_GRID).real).max())
    if vals.min() < -tol.pos * max(1.0, qscale):
        raise NotSchurError(
            f"symbol modulus exceeds 1 on the circle "
            f"(max |b|^2 - 1 = {-vals.min() / qscale:.3e})")
    if vals.max() <= tol.pos * max(1.0, qscale):
        raise ExtremeSymbolError(
            "symbol has modulus 1 a.e. on the circle; no outer mate exists")

    r = fejer_riesz(w, tol)

    # normalize the phase so a(0) = r(0)/q(0) > 0
    a0 = r(0.0) / q(0.0)
    if a0 == 0.0:
        raise ValidationError("outer mate vanishes at the origin")
    r = r * (np.conj(a0) / abs(a0))

    pair = Pair(p, q, r, tol)
    z = circle_points(CIRCLE_GRID)
    resid = np.abs(np.abs(pair.a(z)) ** 2 + np.abs(pair.b(z)) ** 2 - 1.0)
    if float(resid.max()) > tol.pair * 10:
        raise ValidationError(
            f"|a|^2 + |b|^2 - 1 residual {resid.max():.3e} exceeds tolerance")
    a00 = pair.a(0.0)
    if not (abs(a00.imag) <= 1e-12 * abs(a00) and a00.real > 0.0):
        raise ValidationError(f"mate normalization failed: a(0) = {a00}")
    return pair
