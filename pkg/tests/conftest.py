import numpy as np
import pytest

from hbspace import ComplexPoly, RationalFn, pair_from_b


@pytest.fixture(scope="session")
def canonical_pair():
    """b = (1+z)/2, mate a = (1-z)/2; simple circle zero of a at 1."""
    return pair_from_b(ComplexPoly([0.5, 0.5]))


@pytest.fixture(scope="session")
def half_shift_pair():
    """b = z/2; mate has no circle zeros at all."""
    return pair_from_b(ComplexPoly([0.0, 0.5]))


@pytest.fixture(scope="session")
def gamma_pair():
    """b = (1+z)(gamma - z)/(4 sqrt(gamma)), gamma = 3 + 2 sqrt(2).

    Built so that the mate is exactly (1-z)^2/4: a double circle zero at
    1 and a simple one of b - 0 at -1 ... the workhorse for order-2
    boundary behavior.
    """
    g = 3.0 + 2.0 * np.sqrt(2.0)
    sg = np.sqrt(g)
    return pair_from_b(ComplexPoly([sg / 4.0, 0.5, -1.0 / (4.0 * sg)]))


@pytest.fixture(scope="session")
def rational_pair():
    """b = z^2 / (2 - z): a genuinely rational symbol with q nontrivial."""
    return pair_from_b(RationalFn(ComplexPoly([0.0, 0.0, 1.0]),
                                  ComplexPoly([2.0, -1.0])))
