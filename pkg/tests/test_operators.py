"""Tests for the finite-section shift model and null-space estimation."""

import warnings

import numpy as np
import pytest

from hbspace import operators as op
from hbspace.errors import (AmbiguousRankWarning, FormulaUndefinedError,
                            InputError, ValidationError)
from hbspace import hb
from hbspace.hardy import backward_shift_apply, expand
from hbspace.pair import Pair
from hbspace.poly import ComplexPoly, RationalFn


def test_backward_shift_matrix_acts_as_shift():
    rng = np.random.default_rng(41)
    for N in (5, 17, 64):
        S = op.backward_shift_matrix(N)
        v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        assert np.allclose(S @ v, backward_shift_apply(v))


def test_rank_one_model_frozen_column(canonical_pair):
    # b = (1+z)/2, lam = -1: F = (1-z)/(3+z), so the perturbation column
    # is -F_n/F_0 = (-1)^n 4 / 3^(n+1) in rows n = 0, 1, 2, ...
    A = op.a_lambda_matrix(canonical_pair, -1.0, 8)
    assert abs(A[0, 0] - 4.0 / 3.0) < 1e-14
    assert abs(A[1, 0] + 4.0 / 9.0) < 1e-14
    assert abs(A[2, 0] - 4.0 / 27.0) < 1e-14
    assert np.allclose(np.diag(A, k=1), 1.0)
    # away from column 0 and the superdiagonal everything vanishes
    mask = np.ones_like(A, dtype=bool)
    mask[:, 0] = False
    np.fill_diagonal(mask[:, 1:], False)
    assert np.max(np.abs(A[mask])) == 0.0


def test_rank_one_model_annihilates_its_generator(canonical_pair, gamma_pair):
    # A_lam is S* after projecting out F_lam, so F_lam itself is killed.
    for pair in (canonical_pair, gamma_pair):
        N = 96
        A = op.a_lambda_matrix(pair, -1.0, N)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            Fexp = expand(pair.f_lambda(-1.0), N)
        assert np.linalg.norm(A @ Fexp) < 1e-13 * np.linalg.norm(Fexp)


def test_matrix_cached_and_frozen(canonical_pair):
    A1 = op.a_lambda_matrix(canonical_pair, -1.0, 32)
    A2 = op.a_lambda_matrix(canonical_pair, -1.0, 32)
    assert A1 is A2
    with pytest.raises(ValueError):
        A1[0, 0] = 99.0


def test_chain_identity_residual_tiny(canonical_pair, gamma_pair):
    assert op.chain_identity_residual(canonical_pair, -1.0, 1.0, 1, 128) \
        < 1e-14
    assert op.chain_identity_residual(gamma_pair, -1.0, 1.0, 2, 128) < 1e-14


def test_chain_matches_direct_expansion(canonical_pair, gamma_pair):
    # the deflation route must agree with expanding F / (1 - conj(z0) z)^j
    # built by plain rational arithmetic
    for pair, jmax in ((canonical_pair, 1), (gamma_pair, 2)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            F = pair.f_lambda(-1.0)
        U = op.candidate_chain(pair, -1.0, 1.0, jmax, 64)
        for j in range(1, jmax + 1):
            den = F.den
            for _ in range(j):
                den = den * ComplexPoly([1.0, -1.0])
            direct = expand(RationalFn(F.num, den, reduce=False), 64)
            assert np.max(np.abs(U[:, j - 1] - direct)) < 1e-11


def test_chain_beyond_mate_order_fails(canonical_pair, gamma_pair):
    # the chain vectors stop existing past the zero order of the mate;
    # the deflation remainder check turns that into a loud error
    with pytest.raises(ValidationError):
        op.candidate_chain(canonical_pair, -1.0, 1.0, 2, 64)
    with pytest.raises(ValidationError):
        op.candidate_chain(gamma_pair, -1.0, 1.0, 3, 64)


def test_chain_rejects_bad_length(canonical_pair):
    with pytest.raises(InputError):
        op.candidate_chain(canonical_pair, -1.0, 1.0, 0, 32)


def test_nullspace_dims_canonical(canonical_pair):
    for N in (256, 512):
        A = op.a_lambda_matrix(canonical_pair, -1.0, N)
        for k, want in ((1, 1), (2, 1)):
            B = np.linalg.matrix_power(A - np.eye(N), k)
            with warnings.catch_warnings():
                warnings.simplefilter("error", AmbiguousRankWarning)
                dim, basis, s_asc, gap = op.numeric_nullspace(B)
            assert dim == want
            assert gap > 1e10
            assert basis.shape == (N, want)


def test_nullspace_dims_gamma(gamma_pair):
    for N in (256, 512):
        A = op.a_lambda_matrix(gamma_pair, -1.0, N)
        for k, want in ((1, 1), (2, 2)):
            B = np.linalg.matrix_power(A - np.eye(N), k)
            with warnings.catch_warnings():
                warnings.simplefilter("error", AmbiguousRankWarning)
                dim, _, _, gap = op.numeric_nullspace(B)
            assert dim == want
            assert gap > 1e10


def test_nullspace_sigma_separation(canonical_pair):
    # the first nonzero singular value of (A-1)^2 shrinks with N but must
    # stay well above the decision threshold at the sizes we rely on
    for N, band in ((256, (5e-5, 2e-4)), (512, (1e-5, 5e-5))):
        A = op.a_lambda_matrix(canonical_pair, -1.0, N)
        B = (A - np.eye(N)) @ (A - np.eye(N))
        _, _, s_asc, _ = op.numeric_nullspace(B)
        assert band[0] < s_asc[1] < band[1]
        assert s_asc[0] < 1e-12


def test_nullspace_overpower_is_flagged(canonical_pair):
    # one power past the true root order the truncated sections develop a
    # smear of small singular values; the estimate must refuse to answer
    # quietly
    N = 256
    A = op.a_lambda_matrix(canonical_pair, -1.0, N)
    B = np.linalg.matrix_power(A - np.eye(N), 3)
    with pytest.warns(AmbiguousRankWarning):
        op.numeric_nullspace(B)


def test_nullspace_zero_dim_smear_flagged():
    # S* - I is injective in the limit but its finite sections have
    # slowly decaying smallest singular values: dimension 0 with a
    # health warning
    B = op.backward_shift_matrix(128) - np.eye(128)
    with pytest.warns(AmbiguousRankWarning):
        dim, _, _, _ = op.numeric_nullspace(B)
    assert dim == 0


def test_nullspace_plain_cases():
    with warnings.catch_warnings():
        warnings.simplefilter("error", AmbiguousRankWarning)
        dim, basis, _, _ = op.numeric_nullspace(np.eye(16))
        assert dim == 0 and basis.shape == (16, 0)
        dim, basis, _, _ = op.numeric_nullspace(
            np.zeros((16, 16), dtype=complex))
        assert dim == 16
        rng = np.random.default_rng(7)
        M = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
        M[:, 3] = M[:, 5]  # rank deficiency by construction
        dim, basis, _, _ = op.numeric_nullspace(M)
        assert dim == 1
        assert np.linalg.norm(M @ basis[:, 0]) < 1e-12


def test_root_space_images_are_isometric(canonical_pair, gamma_pair):
    # the transported null vectors are unit vectors on the Hardy side and
    # the transport is isometric, so their full-space norms are 1
    for pair, k, want in ((canonical_pair, 1, 1), (gamma_pair, 2, 2)):
        N = 256
        dim, images, s_asc, gap = op.operator_root_space(
            pair, -1.0, 1.0, k, N)
        assert dim == want
        assert images.shape == (N, want)
        for i in range(dim):
            el = hb.HbElement(images[:, i],
                              hb.plus_part(pair, images[:, i]))
            assert abs(el.norm() - 1.0) < 1e-6


def test_choose_lambda_prefers_far_side(canonical_pair, gamma_pair,
                                        half_shift_pair):
    # b(1) = 1 for both boundary-point pairs, and b(1) = 1/2 for z/2:
    # the grid point farthest away is -1 in every case
    for pair in (canonical_pair, gamma_pair, half_shift_pair):
        lam = op.choose_lambda(pair, 1.0)
        assert abs(lam + 1.0) < 1e-12
        assert lam == op.choose_lambda(pair, 1.0)


def test_degenerate_generator_rejected():
    # a doctored pair whose F_lam vanishes identically cannot feed the
    # rank-one model
    pair = Pair(ComplexPoly([0.5]), ComplexPoly([1.0]), ComplexPoly([0.0]))
    with pytest.raises(FormulaUndefinedError):
        op.a_lambda_matrix(pair, -1.0, 16)


def test_model_matrix_deterministic(canonical_pair):
    from hbspace import pair_from_b
    fresh = pair_from_b(ComplexPoly([0.5, 0.5]))
    A1 = op.a_lambda_matrix(canonical_pair, -1.0, 64)
    A2 = op.a_lambda_matrix(fresh, -1.0, 64)
    assert A1.tobytes() == A2.tobytes()
