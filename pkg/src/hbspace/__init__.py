"""Numerics for de Branges-Rovnyak spaces H(b) with rational symbols."""

from .config import Tolerances, DEFAULT_TOL
from .errors import (HbError, InputError, ParseError, NotSchurError,
                     ExtremeSymbolError, HypothesisError,
                     NotAbsolutelyContinuousError, MembershipLimitError,
                     AmbiguousZeroError, RootFindingError, FactorizationError,
                     ValidationError, PlusPartError, FormulaUndefinedError,
                     PoleOnCircleWarning, AmbiguousRankWarning)
from .poly import (ComplexPoly, LaurentSymbol, RationalFn, roots,
                   abs_square_on_circle, fejer_riesz, ord_at, poly_from_roots,
                   circle_points)
from .pair import Pair, BoundaryPoint, pair_from_b
from .parsing import parse_rational

__version__ = "0.1.0"
