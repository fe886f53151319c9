"""Default tolerances and grid sizes.

Every numerical decision in the package (root identity, factorization
acceptance, rank thresholds, ...) goes through a named tolerance so that
callers -- and the CLI via ``--tol-<name>`` flags -- can tighten or relax
them without touching code.
"""

from dataclasses import dataclass, replace, fields


@dataclass(frozen=True)
class Tolerances:
    """Named numerical thresholds.

    gcd        common-root cancellation when reducing rational functions
    cluster    root identity / boundary-point clustering radius
    pos        nonnegativity slack for circle symbols
    fr         max-norm grid validation of spectral factorizations
    root       residual acceptance for polynomial root finding
    pair       |a|^2 + |b|^2 - 1 residual on the circle grid
    plus       plus-part solve residual, relative to the input norm
    iso        isometry deviation (relative)
    ker        kernel-candidate residual under the truncated operator
    quad       circle-quadrature consistency checks
    orth       orthogonality residuals in the H(b) inner product
    nullspace  SVD cutoff relative to sigma_max
    """

    gcd: float = 1e-8
    cluster: float = 1e-8
    pos: float = 1e-10
    fr: float = 1e-8
    root: float = 1e-10
    pair: float = 1e-9
    plus: float = 1e-9
    iso: float = 1e-8
    ker: float = 1e-7
    quad: float = 1e-6
    orth: float = 1e-7
    nullspace: float = 1e-6

    def with_overrides(self, **kw):
        """Return a copy with the non-None entries of kw replaced."""
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]


DEFAULT_TOL = Tolerances()

# Dense unit-circle grid used for validation sweeps.
CIRCLE_GRID = 4096

# Quadrature grid size is QUADRATURE_FACTOR * N for truncation order N.
QUADRATURE_FACTOR = 8

# Default truncation order (power of two).
DEFAULT_N = 1024

# Unimodular candidate grid for automatic lambda selection.
LAMBDA_GRID = 64
