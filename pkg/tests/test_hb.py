import numpy as np
import pytest

from hbspace import ComplexPoly, pair_from_b
from hbspace import hb
from hbspace.errors import (HypothesisError, InputError,
                            NotAbsolutelyContinuousError, ValidationError)

N = 96


def _vec(*entries):
    return np.array(entries, dtype=np.complex128)


# ------------------------------------------------------------- plus parts

def test_plus_part_of_one_is_one(canonical_pair):
    one = np.zeros(N, complex)
    one[0] = 1.0
    g = hb.plus_part(canonical_pair, one)
    want = np.zeros(N, complex)
    want[0] = 1.0
    np.testing.assert_allclose(g, want, atol=1e-12)


def test_plus_part_of_mate_is_minus_b(canonical_pair):
    aexp = hb._exp(canonical_pair, "a", N)
    bexp = hb._exp(canonical_pair, "b", N)
    np.testing.assert_allclose(hb.plus_part(canonical_pair, aexp), -bexp,
                               atol=1e-12)


def test_plus_part_batch_matches_single(gamma_pair):
    rng = np.random.default_rng(8)
    F = rng.standard_normal((N, 3)) + 1j * rng.standard_normal((N, 3))
    G = hb.plus_part_batch(gamma_pair, F)
    for k in range(3):
        np.testing.assert_allclose(G[:, k], hb.plus_part(gamma_pair, F[:, k]),
                                   atol=1e-10)


def test_plus_part_defines_inner_product(canonical_pair):
    one = np.zeros(N, complex)
    one[0] = 1.0
    e = hb.element(canonical_pair, one)
    assert e.inner(e) == pytest.approx(2.0)          # 1 + ||1+||^2
    assert e.norm() == pytest.approx(np.sqrt(2.0))


def test_element_shape_guard():
    with pytest.raises(InputError):
        hb.HbElement(np.zeros(4), np.zeros(5))


# ---------------------------------------------------------------- kernels

def test_kernel_reproduces(canonical_pair, gamma_pair, rational_pair):
    rng = np.random.default_rng(404)
    for pair in (canonical_pair, gamma_pair, rational_pair):
        for _ in range(6):
            w = 0.8 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            kw = hb.kernel(pair, w, N)
            f = hb.element(pair, rng.standard_normal(10)
                           + 1j * rng.standard_normal(10), N)
            assert f.inner(kw) == pytest.approx(f(w), rel=1e-9, abs=1e-11)


def test_kernel_norm_at_origin(canonical_pair):
    k0 = hb.kernel(canonical_pair, 0.0, N)
    assert k0.inner(k0) == pytest.approx(0.75)
    np.testing.assert_allclose(k0.value[:2], [0.75, -0.25], atol=1e-13)
    np.testing.assert_allclose(k0.plus[:2], [0.25, -0.25], atol=1e-13)


def test_kernel_closed_form_plus_agrees_with_solve(gamma_pair):
    w = 0.3 - 0.45j
    kw = hb.kernel(gamma_pair, w, N)
    np.testing.assert_allclose(kw.plus, hb.plus_part(gamma_pair, kw.value),
                               atol=1e-10)


def test_kernel_rejects_exterior_point(canonical_pair):
    with pytest.raises(InputError):
        hb.kernel(canonical_pair, 1.0, N)


# ------------------------------------------------------ derivative kernels

def test_deriv_kernel_order_zero_equals_kernel(gamma_pair):
    w = 0.2 + 0.6j
    kw = hb.kernel(gamma_pair, w, N)
    d0 = hb.deriv_kernel(gamma_pair, w, 0, N)
    np.testing.assert_allclose(d0.value, kw.value, atol=1e-13)
    np.testing.assert_allclose(d0.plus, kw.plus, atol=1e-13)


def test_deriv_kernel_canonical_frozen_value(canonical_pair):
    v1 = hb.deriv_kernel(canonical_pair, 0.0, 1, N)
    np.testing.assert_allclose(v1.value[:4], [-0.25, 0.5, -0.25, 0.0],
                               atol=1e-13)


def test_deriv_kernel_finite_difference(canonical_pair, rational_pair):
    """d/d(conj w) via the Wirtinger combination of two real FDs."""
    h = 1e-5
    for pair in (canonical_pair, rational_pair):
        for w in [0.4 + 0.1j, -0.2 - 0.3j]:
            k1 = hb.deriv_kernel(pair, w, 1, N)
            dx = (hb.kernel(pair, w + h, N).value
                  - hb.kernel(pair, w - h, N).value) / (2 * h)
            dy = (hb.kernel(pair, w + 1j * h, N).value
                  - hb.kernel(pair, w - 1j * h, N).value) / (2 * h)
            fd = (dx + 1j * dy) / 2
            assert np.abs(fd - k1.value).max() < 1e-6 * max(1.0, k1.norm())


def test_deriv_kernel_reproduces_derivatives(gamma_pair):
    fpoly = ComplexPoly([0.3, -1.0, 2.0, 0.5])
    f = hb.element(gamma_pair, fpoly.c, N)
    w = 0.35 - 0.2j
    for m in [0, 1, 2]:
        dk = hb.deriv_kernel(gamma_pair, w, m, N)
        want = fpoly(w) if m == 0 else \
            (fpoly.derivative()(w) if m == 1
             else fpoly.derivative().derivative()(w))
        assert f.inner(dk) == pytest.approx(want, rel=1e-9, abs=1e-11)


def test_deriv_kernel_rational_cross_check(canonical_pair, gamma_pair):
    pts = 0.5 * np.exp(2j * np.pi * np.arange(16) / 16)
    for pair in (canonical_pair, gamma_pair):
        for m in [0, 1]:
            w = 0.4 + 0.1j
            model = hb.deriv_kernel(pair, w, m, N)
            rat = hb.deriv_kernel_rational(pair, w, m)
            vals = np.array([hb.eval_vec(model.value, z) for z in pts])
            np.testing.assert_allclose(vals, rat(pts), rtol=1e-9, atol=1e-11)


# ------------------------------------------------------------ the isometry

def test_w_lambda_isometry(canonical_pair, gamma_pair, rational_pair):
    rng = np.random.default_rng(909)
    for pair in (canonical_pair, gamma_pair, rational_pair):
        for lam in [-1.0, 1j, np.exp(0.3j)]:
            u = rng.standard_normal(14) + 1j * rng.standard_normal(14)
            el = hb.w_lambda_element(pair, lam, u, N)
            assert el.norm() == pytest.approx(np.linalg.norm(u), rel=1e-9)


def test_w_lambda_preimage_roundtrip(gamma_pair):
    rng = np.random.default_rng(13)
    u = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    el = hb.w_lambda_element(gamma_pair, -1.0, u, N)
    back = hb.w_lambda_preimage(gamma_pair, -1.0, el)
    np.testing.assert_allclose(back[:10], u, atol=1e-9)
    np.testing.assert_allclose(back[10:], 0.0, atol=1e-9)


def test_w_lambda_kernel_transfer(canonical_pair):
    """The preimage of an interior kernel has the explicit Cauchy form
    (1 - lam conj(b(w))) F_lam(z) / (1 - conj(w) z)."""
    pair = canonical_pair
    lam = -1.0
    w = 0.3 + 0.25j
    kw = hb.kernel(pair, w, N)
    u = hb.w_lambda_preimage(pair, lam, kw)
    F = pair.f_lambda(lam)
    pref = (1.0 - lam * np.conj(pair.b(w)))
    want = pref * hb.toeplitz_analytic_apply(
        hb.expand(F, N), hb.cauchy_kernel_power(w, 1, N), N)
    np.testing.assert_allclose(u, want, atol=1e-9)


# -------------------------------------------------------- boundary kernels

def test_boundary_kernel_canonical_constant(canonical_pair):
    nu0 = hb.boundary_kernel(canonical_pair, 1.0, 0, -1.0, N)
    want = np.zeros(N, complex)
    want[0] = 0.5
    np.testing.assert_allclose(nu0.value, want, atol=1e-10)
    assert nu0.inner(nu0) == pytest.approx(0.5, rel=1e-9)


def test_boundary_kernel_reproduces(canonical_pair, gamma_pair,
                                    rational_pair):
    fpoly = ComplexPoly([0.3, -1.0, 2.0, 0.5])
    cases = [(canonical_pair, 0), (gamma_pair, 0), (gamma_pair, 1),
             (rational_pair, 0)]
    for pair, m in cases:
        f = hb.element(pair, fpoly.c, N)
        nu = hb.boundary_kernel(pair, 1.0, m, -1.0, N)
        want = fpoly(1.0) if m == 0 else fpoly.derivative()(1.0)
        assert f.inner(nu) == pytest.approx(want, rel=1e-7)


def test_boundary_kernel_lambda_independent(gamma_pair):
    nu_a = hb.boundary_kernel(gamma_pair, 1.0, 1, -1.0, N)
    nu_b = hb.boundary_kernel(gamma_pair, 1.0, 1, 1j, N)
    assert (nu_a - nu_b).norm() < 1e-7 * nu_a.norm()


def test_boundary_kernel_guards(canonical_pair, gamma_pair):
    with pytest.raises(InputError):
        hb.boundary_kernel(canonical_pair, 0.5, 0, -1.0, N)
    with pytest.raises(HypothesisError):
        hb.boundary_kernel(canonical_pair, 1.0, 0, 1.0, N)   # lam = b(1)
    with pytest.raises(ValidationError):
        # order 2 exceeds the membership order of the gamma pair (k_max=1):
        # the deflation of the F-numerator must refuse
        hb.boundary_kernel(gamma_pair, 1.0, 2, -1.0, N)


def test_boundary_kernel_rational_cross_check(gamma_pair):
    pts = 0.5 * np.exp(2j * np.pi * np.arange(16) / 16)
    for m in [0, 1]:
        nu = hb.boundary_kernel(gamma_pair, 1.0, m, -1.0, N)
        rat = hb.deriv_kernel_rational(gamma_pair, 1.0, m)
        vals = np.array([hb.eval_vec(nu.value, z) for z in pts])
        np.testing.assert_allclose(vals, rat(pts), rtol=1e-6, atol=1e-8)


# ------------------------------------------------------- the adjoint shift

def test_x_star_norm_identity(canonical_pair, gamma_pair):
    rng = np.random.default_rng(515)
    for pair in (canonical_pair, gamma_pair):
        ssb = hb._shifted_b_element(pair, N)
        for _ in range(5):
            h = hb.element(pair, rng.standard_normal(12)
                           + 1j * rng.standard_normal(12), N)
            xh = hb.x_star_apply(pair, h)
            want = h.norm() ** 2 - abs(h.inner(ssb)) ** 2
            assert xh.norm() ** 2 == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_x_star_resolvent_identity(canonical_pair):
    """(1 - conj(w) X*) k_w = k_0."""
    w = 0.4 - 0.3j
    kw = hb.kernel(canonical_pair, w, N)
    k0 = hb.kernel(canonical_pair, 0.0, N)
    xkw = hb.x_star_apply(canonical_pair, kw)
    lhs = kw - np.conj(w) * xkw
    assert (lhs - k0).norm() < 1e-10


# ------------------------------------------------- multiplication embedding

def test_v_b_strict_raises_on_atoms(canonical_pair):
    one = _vec(1.0)
    with pytest.raises(NotAbsolutelyContinuousError):
        hb.v_b_apply(canonical_pair, one, N)


def test_v_b_density_values(canonical_pair, half_shift_pair):
    one = _vec(1.0)
    v = hb.v_b_apply(canonical_pair, one, N, strict=False)
    assert v[0] == pytest.approx(0.5, abs=1e-10)
    np.testing.assert_allclose(v[:3], [0.5, -0.5, 0.0], atol=1e-10)
    v2 = hb.v_b_apply(half_shift_pair, one, N)
    assert v2[0] == pytest.approx(1.0, abs=1e-10)


def test_v_b_mass_matches_herglotz():
    """For an a.c. measure the density integrates to the Herglotz mass."""
    pair = pair_from_b(ComplexPoly([0.25, 0.25]))    # b = (1+z)/4, |b| <= 1/2
    M = 2048
    from hbspace import circle_points
    z = circle_points(M)
    F = pair.f_lambda(1.0)
    mass = float(np.mean(np.abs(F(z)) ** 2))
    assert mass == pytest.approx(hb.herglotz_mass(pair), rel=1e-10)
    assert hb.herglotz_mass(pair) == pytest.approx(
        ((1 + 0.25) / (1 - 0.25)), rel=1e-12)


def test_herglotz_mass_guard():
    from hbspace.errors import FormulaUndefinedError
    pair = pair_from_b(ComplexPoly([0.25, 0.25]))
    assert hb.herglotz_mass(pair) > 0
    # a symbol with b(0) = 1 would be non-Schur anyway; check the guard
    # through a direct call on a fabricated pair is not possible, so just
    # assert the formula value here.
    assert hb.herglotz_mass(pair) == pytest.approx(5.0 / 3.0)
