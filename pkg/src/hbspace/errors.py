"""Exception and warning types.

``InputError`` subclasses signal problems with what the caller asked for
(bad symbols, violated hypotheses); the CLI maps them to exit code 1.
The remaining ``HbError`` subclasses signal numerical checks that ran
and failed; the CLI maps those to exit code 2.
"""


class HbError(Exception):
    """Base class for all package errors."""


class InputError(HbError):
    """The request itself is invalid (domain preconditions violated)."""


class ParseError(InputError):
    """A rational-function expression could not be parsed."""


class NotSchurError(InputError):
    """|b| exceeds 1 somewhere on the circle, or a symbol goes negative."""


class ExtremeSymbolError(InputError):
    """1 - |b|^2 vanishes a.e. on the circle: no Pythagorean mate exists."""


class HypothesisError(InputError):
    """A construction hypothesis fails, e.g. lambda = b(z0)."""


class NotAbsolutelyContinuousError(InputError):
    """The boundary measure for this lambda carries a singular part."""


class MembershipLimitError(InputError):
    """The requested derivative order exceeds what the data supports."""


class AmbiguousZeroError(HbError):
    """A root sits in the gray zone where on/off-circle (or cluster
    membership) cannot be decided at the working tolerance."""


class RootFindingError(HbError):
    """Both root-finding paths failed the residual test."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class FactorizationError(HbError):
    """Spectral factorization failed structurally (e.g. odd circle
    multiplicity)."""


class ValidationError(HbError):
    """An internal consistency check failed at the working precision."""


class PlusPartError(HbError):
    """The plus-part system residual exceeds tolerance: the input is not
    representable in H(b) at this truncation."""


class FormulaUndefinedError(HbError):
    """A formula's normalizing value vanished (e.g. F_lambda(0) = 0)."""


class PoleOnCircleWarning(UserWarning):
    """lambda matches a unimodular boundary value of b; the transfer
    function degenerates on the circle."""


class AmbiguousRankWarning(UserWarning):
    """Singular values show no clear gap; the reported null-space
    dimension is not certified."""
