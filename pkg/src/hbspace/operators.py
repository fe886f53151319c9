"""Finite-section operator models and numerically robust null spaces.

The central object is the rank-one perturbation of the backward shift

    A_lam u = S*(u - (u(0)/F_lam(0)) F_lam),

the Hardy-side model of the restricted shift under the isometry from
`hb`.  Its root vectors at a unimodular point z0 are the explicit chain
F_lam / (1 - conj(z0) z)^j, which gives every null-space computation an
independent analytic cross-check.

Null-space dimensions come from singular value thresholding with an
explicit gap diagnostic: a decision without a clear spectral gap is
reported via AmbiguousRankWarning rather than silently returned.
"""

import warnings

import numpy as np

from .config import DEFAULT_TOL, LAMBDA_GRID
from .errors import FormulaUndefinedError, InputError
from .hardy import expand
from .poly import RationalFn, deflate_at
from .hb import _apply_w_padded


def backward_shift_matrix(N):
    """The plain backward shift on N coefficients (superdiagonal ones)."""
    return np.eye(N, k=1, dtype=np.complex128)


def a_lambda_matrix(pair, lam, N):
    """Matrix of A_lam on the first N coefficients (cached per pair)."""
    lam = complex(lam)
    key = ("amat", lam, N)
    if key in pair._cache:
        return pair._cache[key]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        F = pair.f_lambda(lam)
    Fexp = expand(F, N + 1)
    F0 = Fexp[0]
    if abs(F0) < 1e-14:
        raise FormulaUndefinedError(
            "F_lam(0) vanishes; the rank-one model is undefined")
    A = backward_shift_matrix(N)
    A[:, 0] -= Fexp[1:N + 1] / F0
    A.setflags(write=False)
    pair._cache[key] = A
    return A


def clark_quotient(pair, lam, z0, j, length):
    """Expansion of F_lam / (1 - conj(z0) z)^j for a circle point z0.

    The power is removed by deflating the numerator's zero at z0, so a
    request beyond the vanishing order fails loudly in the deflation
    remainder check rather than returning a polluted expansion.
    """
    z0 = complex(z0)
    z0 = z0 / abs(z0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        F = pair.f_lambda(lam)
    if j == 0:
        return expand(F, length)
    numdef = deflate_at(F.num, z0, j)
    scalefac = (-np.conj(z0)) ** j
    G = RationalFn(numdef * (1.0 / scalefac), F.den, reduce=False)
    return expand(G, length)


def candidate_chain(pair, lam, z0, k, N):
    """The exact root-vector chain of A_lam at conj(z0): columns j = 1..k
    hold the expansion of F_lam / (1 - conj(z0) z)^j."""
    if k < 1:
        raise InputError("chain length must be >= 1")
    cols = [clark_quotient(pair, lam, z0, j, N) for j in range(1, k + 1)]
    return np.stack(cols, axis=1)


def numeric_nullspace(B, tol_null=None, tol=None):
    """Null space of a matrix by SVD thresholding, with gap diagnostics.

    dim counts singular values <= tol_null * sigma_max.  gap_ratio is
    the ratio of the first kept to the last discarded singular value (in
    ascending order); a ratio below 10 means the threshold fell inside a
    smear of singular values rather than a clean gap, and a dimension-0
    answer with a smallest singular value that is small (<= 1e-2 rel)
    but not below threshold is flagged the same way.  Both cases emit
    AmbiguousRankWarning.

    Returns (dim, basis, sigmas_ascending, gap_ratio); basis columns are
    right singular vectors spanning the estimated null space.
    """
    tol = tol or DEFAULT_TOL
    tol_null = tol.nullspace if tol_null is None else tol_null
    B = np.asarray(B, dtype=np.complex128)
    _, s, Vh = np.linalg.svd(B)
    s_asc = s[::-1]
    smax = s_asc[-1] if len(s_asc) else 0.0
    if smax == 0.0:
        return len(s_asc), np.eye(B.shape[1], dtype=np.complex128), s_asc, np.inf
    dim = int(np.count_nonzero(s_asc <= tol_null * smax))
    gap_ratio = np.inf
    if 0 < dim < len(s_asc):
        gap_ratio = float(s_asc[dim] / max(s_asc[dim - 1], 1e-300))
        if gap_ratio < 10.0:
            warnings.warn(
                f"null-space threshold fell inside a singular-value smear "
                f"(gap ratio {gap_ratio:.2f}); dimension {dim} is unreliable",
                _ambiguous_rank_warning(), stacklevel=2)
    elif dim == 0:
        if s_asc[0] <= 1e-2 * smax and len(s_asc) > 1 \
                and s_asc[1] / max(s_asc[0], 1e-300) < 10.0:
            warnings.warn(
                f"smallest singular value {s_asc[0]:.3e} is small but above "
                f"threshold with no clear gap; dimension 0 is unreliable",
                _ambiguous_rank_warning(), stacklevel=2)
    basis = Vh[len(s_asc) - dim:].conj().T if dim else \
        np.zeros((B.shape[1], 0), dtype=np.complex128)
    return dim, basis, s_asc, gap_ratio


def _ambiguous_rank_warning():
    from .errors import AmbiguousRankWarning
    return AmbiguousRankWarning


def operator_root_space(pair, lam, z0, k, N, tol=None):
    """Numeric null space of (A_lam - conj(z0))^k.

    Returns (dim, hb_basis, sigmas, gap_ratio): hb_basis columns are the
    images under the isometry of the null vectors, i.e. candidate
    elements of the derivative-kernel span inside the space.
    """
    tol = tol or pair.tol
    z0 = complex(z0)
    z0 = z0 / abs(z0)
    A = a_lambda_matrix(pair, lam, N)
    B = np.linalg.matrix_power(
        A - np.conj(z0) * np.eye(N, dtype=np.complex128), k)
    dim, basis, s_asc, gap = numeric_nullspace(B, tol_null=tol.nullspace,
                                               tol=tol)
    images = np.zeros((N, dim), dtype=np.complex128)
    for i in range(dim):
        images[:, i] = _apply_w_padded(pair, lam, _padded(basis[:, i], 2 * N),
                                       N)
    return dim, images, s_asc, gap


def _padded(v, L):
    out = np.zeros(L, dtype=np.complex128)
    out[:len(v)] = v
    return out


def chain_identity_residual(pair, lam, z0, k, N):
    """Exact recurrence check (A - conj(z0)) u_j = conj(z0) sum_{t<j} u_t
    for the candidate chain: a strong internal consistency test of both
    the matrix and the deflation-based expansions."""
    z0 = complex(z0) / abs(complex(z0))
    A = a_lambda_matrix(pair, lam, N)
    U = candidate_chain(pair, lam, z0, k, N)
    resid = 0.0
    for j in range(1, k + 1):
        lhs = (A - np.conj(z0) * np.eye(N)) @ U[:, j - 1]
        rhs = np.conj(z0) * U[:, :j - 1].sum(axis=1) if j > 1 else \
            np.zeros(N, dtype=np.complex128)
        denom = max(1.0, float(np.linalg.norm(U[:, j - 1])))
        # the top row of the finite section loses one coefficient of S*
        resid = max(resid, float(np.linalg.norm((lhs - rhs)[:N - 1])) / denom)
    return resid


def choose_lambda(pair, z0, grid=LAMBDA_GRID):
    """Pick a unimodular lambda far from b(z0) and from every boundary
    unimodular value of b, by maximizing the minimum distance over a
    fixed grid of candidates (deterministic tie-break: first maximum)."""
    z0 = complex(z0)
    targets = [pair.b(z0 / abs(z0))]
    for bp in pair.boundary_structure():
        targets.append(pair.b(bp.point))
    targets = np.array(targets, dtype=np.complex128)
    lams = np.exp(2j * np.pi * np.arange(grid) / grid)
    scores = np.min(np.abs(lams[:, None] - targets[None, :]), axis=1)
    return complex(lams[int(np.argmax(scores))])
