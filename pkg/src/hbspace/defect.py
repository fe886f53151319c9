"""Defect subspaces spanned by boundary kernels, and their verification.

At a circle zero z0 of the mate a of order n, the derivative kernels
nu^0 .. nu^(n-1) exist in the space and span an n-dimensional piece
orthogonal to every a z^k; summing over all circle zeros gives the
defect space.  Everything here is validated three independent ways:

* Gram conditioning of the normalized kernel basis,
* orthogonality against the dense family a z^n,
* principal angles against the isometry image of the numeric root
  space of the shift model A_lam at conj(z0), for more than one lambda.

`verify_boundary_point` packages the full evidence for one point: the
nontangential kernel limits along three approach directions, the span
agreement, and the existence dichotomy at the next derivative order.
"""

import warnings

import numpy as np

from .errors import InputError
from . import hb
from .hardy import expand
from .operators import choose_lambda, operator_root_space
from .poly import ComplexPoly


def detect_boundary_structure(pair):
    """Circle zeros of the mate with orders: (point, order) list."""
    return pair.boundary_structure()


def _lambda_candidates(pair, z0, count=2):
    """The top `count` lambda choices by the max-min separation score."""
    from .config import LAMBDA_GRID
    targets = [pair.b(complex(z0) / abs(complex(z0)))]
    for bp in pair.boundary_structure():
        targets.append(pair.b(bp.point))
    targets = np.array(targets, dtype=np.complex128)
    lams = np.exp(2j * np.pi * np.arange(LAMBDA_GRID) / LAMBDA_GRID)
    scores = np.min(np.abs(lams[:, None] - targets[None, :]), axis=1)
    order = np.argsort(-scores, kind="stable")
    return [complex(lams[i]) for i in order[:count]]


def principal_angle(X, Y):
    """Largest principal angle (radians) between the column spans of X, Y."""
    if X.shape[1] == 0 or Y.shape[1] == 0:
        return 0.0 if X.shape[1] == Y.shape[1] else np.pi / 2
    Qx, _ = np.linalg.qr(X)
    Qy, _ = np.linalg.qr(Y)
    s = np.linalg.svd(Qx.conj().T @ Qy, compute_uv=False)
    smin = min(1.0, float(s.min())) if len(s) else 0.0
    return float(np.arccos(max(-1.0, smin)))


def defect_space(pair, N, lam=None, tol=None):
    """The full defect subspace with its quality diagnostics.

    Returns a dict: points (list of (point, order)), dim, basis (list of
    space elements ordered point-major), gram (of the normalized basis),
    gram_cond, ortho_residual (worst normalized pairing against a z^n
    for n up to N/2), angles (per point, per lambda candidate: largest
    principal angle against the transported operator root space).
    """
    tol = tol or pair.tol
    pts = pair.boundary_structure()
    basis = []
    owners = []
    for bp in pts:
        lam_pt = lam if lam is not None else choose_lambda(pair, bp.point)
        for m in range(bp.order):
            basis.append(hb.boundary_kernel(pair, bp.point, m, lam_pt, N,
                                            tol))
            owners.append(bp)
    dim = len(basis)
    out = {
        "points": [(bp.point, bp.order) for bp in pts],
        "dim": dim,
        "basis": basis,
    }
    if dim == 0:
        out.update(gram=np.zeros((0, 0)), gram_cond=1.0,
                   ortho_residual=0.0, angles={})
        return out

    stacked = np.stack([el.stacked() for el in basis], axis=1)
    nrms = np.linalg.norm(stacked, axis=0)
    Q = stacked / nrms
    gram = Q.conj().T @ Q
    out["gram"] = gram
    out["gram_cond"] = float(np.linalg.cond(gram))

    # orthogonality against a z^n: batch the plus parts of all a z^n
    n_checks = max(4, N // 2)
    aexp = expand(pair.a, N)
    cols = np.zeros((N, n_checks), dtype=np.complex128)
    for n in range(n_checks):
        cols[n:, n] = aexp[:N - n]
    plus_cols = hb.plus_part_batch(pair, cols, tol)
    az_stacked = np.concatenate([cols, plus_cols], axis=0)
    az_norms = np.linalg.norm(az_stacked, axis=0)
    pairings = np.abs(Q.conj().T @ az_stacked) / az_norms[None, :]
    out["ortho_residual"] = float(pairings.max())

    # principal angles against the numeric operator root spaces
    angles = {}
    for bp in pts:
        idx = [i for i, o in enumerate(owners) if o is bp]
        span = stacked[:, idx]
        angles_pt = []
        for lam_c in _lambda_candidates(pair, bp.point):
            dim_op, images, _, _ = operator_root_space(
                pair, lam_c, bp.point, bp.order, N, tol)
            plus_imgs = hb.plus_part_batch(pair, images, tol) \
                if dim_op else np.zeros((N, 0))
            op_stacked = np.concatenate([images, plus_imgs], axis=0)
            angles_pt.append({
                "lam": lam_c,
                "operator_dim": dim_op,
                "angle": principal_angle(span, op_stacked),
            })
        angles[bp.point] = angles_pt
    out["angles"] = angles
    return out


def _approach_points(z0, n):
    """Radial and two 45-degree nontangential approach points at depth n."""
    t = 2.0 ** (-n)
    return [z0 * (1.0 - t),
            z0 * (1.0 - t * np.exp(1j * np.pi / 4)),
            z0 * (1.0 - t * np.exp(-1j * np.pi / 4))]


def verify_boundary_point(pair, z0, k, lam=None, N=None, tol=None,
                          depth=14, growth_span=(4, 12)):
    """Assemble the verification record for 'z0 carries kernels up to
    order exactly k'.

    The record contains: the membership bound read off the mate's zero
    order; nontangential limit gaps of the interior derivative kernel
    toward the boundary kernel along three directions; the largest
    principal angle between the kernel span and the transported operator
    root space; and the norm growth of the next-order kernel, which must
    diverge when k is maximal.  ok is True only when every piece holds.
    """
    from .config import DEFAULT_N
    tol = tol or pair.tol
    N = DEFAULT_N if N is None else N
    z0 = complex(z0)
    if abs(abs(z0) - 1.0) > tol.cluster:
        raise InputError("verification point must lie on the unit circle")
    z0 = z0 / abs(z0)
    if k < 0:
        raise InputError("claimed order must be >= 0")
    k_max = pair.membership_order(z0)
    lam = choose_lambda(pair, z0) if lam is None else complex(lam)
    record = {
        "point": z0,
        "claimed_order": int(k),
        "membership_bound": int(k_max),
        "lambda": lam,
        "N": int(N),
        "checks": {},
        "ok": False,
    }
    if k > k_max:
        record["reason"] = (
            f"claimed order {k} exceeds the membership bound {k_max}; "
            f"the order-{k} kernel does not belong to the space")
        record["checks"]["next_order_norms"] = _norm_growth(
            pair, z0, max(k_max + 1, 0), N, growth_span)
        return record

    nu = hb.boundary_kernel(pair, z0, k, lam, N, tol)

    # (a) nontangential limits along three directions, measured weakly:
    # the pairing of a fixed probe element with the interior derivative
    # kernel must converge to its pairing with the boundary kernel.
    # (The norm gap decays only like sqrt(1-|w|), too slowly to certify
    # anything at reasonable depth; the pairing gap decays linearly and
    # is insensitive to the truncation order.)
    probe_poly = ComplexPoly([0.3, -1.0, 2.0, 0.5])
    probe = hb.element(pair, probe_poly.c, N)
    target = complex(probe.inner(nu))
    scale = 1.0 + abs(target)
    limit_checks = []
    ns = list(range(4, depth + 1))
    for d in range(3):
        gaps = []
        for n in ns:
            w = _approach_points(z0, n)[d]
            dk = hb.deriv_kernel(pair, w, k, N)
            gaps.append(float(abs(probe.inner(dk) - target)) / scale)
        limit_checks.append({
            "direction": ["radial", "stolz+", "stolz-"][d],
            "depths": ns,
            "gaps": gaps,
            "decreasing": bool(all(g2 <= g1 * 1.05
                                   for g1, g2 in zip(gaps, gaps[1:]))),
            "final": gaps[-1],
        })
    record["checks"]["limits"] = limit_checks
    limits_ok = all(c["decreasing"] and c["final"] < 1e-3
                    for c in limit_checks)

    # (b) span agreement with the operator root space
    span_cols = []
    for m in range(k + 1):
        el = nu if m == k else hb.boundary_kernel(pair, z0, m, lam, N, tol)
        span_cols.append(el.stacked())
    span = np.stack(span_cols, axis=1)
    dim_op, images, _, gap = operator_root_space(pair, lam, z0, k + 1, N, tol)
    if dim_op:
        plus_imgs = hb.plus_part_batch(pair, images, tol)
        op_stacked = np.concatenate([images, plus_imgs], axis=0)
    else:
        op_stacked = np.zeros((2 * N, 0))
    angle = principal_angle(span, op_stacked)
    record["checks"]["span"] = {
        "operator_dim": int(dim_op),
        "kernel_dim": k + 1,
        "angle": float(angle),
        "sigma_gap": float(gap),
    }
    span_ok = (dim_op == k + 1) and angle <= 1e-5

    # (c) dichotomy at the next order
    growth = _norm_growth(pair, z0, k + 1, N, growth_span)
    record["checks"]["next_order_norms"] = growth
    dichotomy_ok = growth["ratio"] >= 10.0

    record["ok"] = bool(limits_ok and span_ok and dichotomy_ok)
    if not record["ok"]:
        reasons = []
        if not limits_ok:
            reasons.append("nontangential limits did not settle")
        if not span_ok:
            reasons.append("kernel span disagrees with the operator model")
        if not dichotomy_ok:
            reasons.append(
                f"order-{k + 1} kernels do not diverge (ratio "
                f"{growth['ratio']:.2f}); the claimed order is not maximal")
        record["reason"] = "; ".join(reasons)
    return record


def _norm_growth(pair, z0, m, N, span):
    """Norms of the order-m interior kernels along the radial approach and
    their end-to-end growth ratio."""
    n0, n1 = span
    ns = list(range(n0, n1 + 1))
    norms = []
    for n in ns:
        w = z0 * (1.0 - 2.0 ** (-n))
        dk = hb.deriv_kernel(pair, w, m, N)
        norms.append(float(dk.norm()))
    return {
        "order": int(m),
        "depths": ns,
        "norms": norms,
        "ratio": float(norms[-1] / max(norms[0], 1e-300)),
    }
