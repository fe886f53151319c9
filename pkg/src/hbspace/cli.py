"""Batch command-line front end.

Four subcommands cover the pipeline stages:

* ``pair``    -- validate a symbol, construct its mate, list boundary points
* ``kernel``  -- evaluate an interior or boundary derivative kernel
* ``defect``  -- the full defect-space report with quality diagnostics
* ``verify``  -- the evidence record for one claimed boundary order

Reports go to standard output as JSON (default), CSV, or indented text;
``--emit PATH`` writes the same bytes to a file as well.  Exit status: 0
on success, 1 on input errors (bad flags, malformed expressions, invalid
symbols), 2 when a computation refuses to certify its result or a
verification comes back negative.

Note that negative complex flag values need the ``=`` form, e.g.
``--lambda=-1+0i``, to keep the shell-level parser happy.
"""

import argparse
import json
import sys
import warnings

import numpy as np

from .config import CIRCLE_GRID, DEFAULT_N, DEFAULT_TOL
from .defect import defect_space, verify_boundary_point
from .errors import HbError, InputError, ParseError
from . import hb
from .operators import choose_lambda
from .pair import pair_from_b
from .parsing import parse_rational
from .poly import ComplexPoly, circle_points


def _parse_complex(text, what):
    """A complex scalar through the expression grammar: '0.3+0.4i', '-1'."""
    f = parse_rational(text)
    if f.den.degree != 0 or f.num.degree > 0:
        raise ParseError(f"{what} must be a complex constant, got {text!r}")
    return complex(f.num.c[0]) if f.num.degree == 0 else 0j


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        # adding +0.0 canonicalizes negative zeros
        return [float(obj.real) + 0.0, float(obj.imag) + 0.0]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) + 0.0
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    return obj


def _flatten(obj, prefix, rows):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k), rows)
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            rows.append((prefix, ";".join(repr(v) for v in obj)))
        else:
            for i, v in enumerate(obj):
                _flatten(v, f"{prefix}[{i}]", rows)
    else:
        rows.append((prefix, repr(obj)))


def _render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        rows = []
        _flatten(report, "", rows)
        return "key,value\n" + "".join(f"{k},{v}\n" for k, v in rows)
    lines = []

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {v}")

    walk(report, 0)
    return "\n".join(lines) + "\n"


class _ArgumentParser(argparse.ArgumentParser):
    # input problems exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def build_parser():
    top = _ArgumentParser(prog="hbspace",
                          description=__doc__.split("\n\n")[0])
    sub = top.add_subparsers(dest="command", required=True)
    common = _ArgumentParser(add_help=False)
    common.add_argument("--b", required=True,
                        help="rational symbol, e.g. '(1+z)/2'")
    common.add_argument("--N", type=int, default=DEFAULT_N,
                        help="truncation order, a power of two in [64, 16384]")
    common.add_argument("--lambda", dest="lam", default=None,
                        help="unimodular parameter (use --lambda=-1+0i)")
    common.add_argument("--z0", default=None,
                        help="evaluation / boundary point")
    common.add_argument("--k", type=int, default=0,
                        help="derivative order (kernel) or claimed order "
                             "(verify)")
    for name in DEFAULT_TOL.names():
        common.add_argument(f"--tol-{name}", type=float, default=None,
                            dest=f"tol_{name}", metavar="X",
                            help=f"override the {name} tolerance")
    common.add_argument("--output", choices=("json", "csv", "pretty"),
                        default="json")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for the randomized property sweeps")
    common.add_argument("--emit", default=None, metavar="PATH",
                        help="also write the report to this file")
    for name in ("pair", "kernel", "defect", "verify"):
        sub.add_parser(name, parents=[common])
    return top


def _config_from(args):
    if args.N < 64 or args.N > 16384 or args.N & (args.N - 1):
        raise InputError(f"N must be a power of two in [64, 16384], "
                         f"got {args.N}")
    overrides = {}
    for name in DEFAULT_TOL.names():
        val = getattr(args, f"tol_{name}")
        if val is not None:
            if val <= 0:
                raise InputError(f"tolerance {name} must be positive")
            overrides[name] = val
    tol = DEFAULT_TOL.with_overrides(**overrides) if overrides \
        else DEFAULT_TOL
    cfg = {"command": args.command, "b": args.b, "N": args.N,
           "seed": args.seed, "tolerances": overrides}
    if args.lam is not None:
        cfg["lambda"] = args.lam
    if args.z0 is not None:
        cfg["z0"] = args.z0
    cfg["k"] = args.k
    return cfg, tol


def _boundary_report(pair):
    return [{"point": bp.point, "order": bp.order,
             "max_kernel_order": bp.order - 1}
            for bp in pair.boundary_structure()]


def _run_pair(args, pair, tol):
    rng = np.random.default_rng(args.seed)
    zg = circle_points(CIRCLE_GRID)
    resid_grid = np.abs(np.abs(pair.a(zg)) ** 2 +
                        np.abs(pair.b(zg)) ** 2 - 1.0)
    zr = np.exp(2j * np.pi * rng.random(256))
    resid_rand = np.abs(np.abs(pair.a(zr)) ** 2 +
                        np.abs(pair.b(zr)) ** 2 - 1.0)
    return {
        "symbol": pair.b.to_json(),
        "mate": pair.a.to_json(),
        "mate_at_origin": complex(pair.a(0.0)),
        "boundary_points": _boundary_report(pair),
        "residuals": {
            "unimodular_identity_grid": float(resid_grid.max()),
            "unimodular_identity_random": float(resid_rand.max()),
        },
    }, True


def _run_kernel(args, pair, tol):
    z0 = _parse_complex(args.z0, "--z0") if args.z0 is not None else 0j
    k = args.k
    if k < 0:
        raise InputError("derivative order must be >= 0")
    N = args.N
    on_circle = abs(abs(z0) - 1.0) <= tol.cluster
    body = {"point": z0, "order": k, "regime":
            "boundary" if on_circle else "interior"}
    if on_circle:
        lam = _parse_complex(args.lam, "--lambda") if args.lam is not None \
            else choose_lambda(pair, z0)
        body["lambda"] = lam
        el = hb.boundary_kernel(pair, z0, k, lam, N, tol)
    else:
        el = hb.deriv_kernel(pair, z0, k, N)
    body["norm"] = float(el.norm())
    body["coefficients_head"] = el.value[:8]
    body["plus_head"] = el.plus[:8]
    # seeded sweep: the kernel must reproduce k-th derivatives of random
    # polynomials
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(16):
        c = (rng.standard_normal(9) + 1j * rng.standard_normal(9)) / 3.0
        f = hb.element(pair, c, N)
        d = ComplexPoly(c)
        for _ in range(k):
            d = d.derivative()
        worst = max(worst, abs(complex(f.inner(el)) - complex(d(z0))))
    body["reproducing_residual"] = worst
    return body, True


def _run_defect(args, pair, tol):
    lam = _parse_complex(args.lam, "--lambda") if args.lam is not None \
        else None
    d = defect_space(pair, args.N, lam=lam, tol=tol)
    body = {
        "dimension": d["dim"],
        "points": [{"point": pt, "order": order}
                   for pt, order in d["points"]],
        "gram_cond": d["gram_cond"],
        "ortho_residual": d["ortho_residual"],
        "basis_norms": [float(el.norm()) for el in d["basis"]],
        "angles": [{"point": pt,
                    "candidates": recs}
                   for pt, recs in d["angles"].items()],
    }
    return body, True


def _run_verify(args, pair, tol):
    if args.z0 is None:
        raise InputError("verify requires --z0")
    z0 = _parse_complex(args.z0, "--z0")
    lam = _parse_complex(args.lam, "--lambda") if args.lam is not None \
        else None
    rec = verify_boundary_point(pair, z0, args.k, lam=lam, N=args.N,
                                tol=tol)
    return rec, bool(rec["ok"])


_RUNNERS = {"pair": _run_pair, "kernel": _run_kernel,
            "defect": _run_defect, "verify": _run_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg, tol = _config_from(args)
        with warnings.catch_warnings(record=True) as wlist:
            warnings.simplefilter("always")
            pair = pair_from_b(parse_rational(args.b), tol)
            body, ok = _RUNNERS[args.command](args, pair, tol)
        report = {"schema": 1, "config": cfg}
        report.update(_jsonify(body))
        report["warnings"] = [str(w.message) for w in wlist]
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except HbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(report, args.output)
    sys.stdout.write(text)
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(text)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
