from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from infoineq.core import LinExpr, LogLinValue
from infoineq.distributions import Distribution
from infoineq.shannon import elemental


@pytest.fixture(scope="session")
def gens2():
    return elemental(2)


@pytest.fixture(scope="session")
def gens3():
    return elemental(3)


@pytest.fixture(scope="session")
def gens4():
    return elemental(4)


@pytest.fixture
def xor_triple() -> Distribution:
    q = Fraction(1, 4)
    return Distribution.make((2, 2, 2), {(0, 0, 0): q, (0, 1, 1): q,
                                         (1, 0, 1): q, (1, 1, 0): q})


@pytest.fixture
def fair_bit() -> Distribution:
    return Distribution.make((2,), {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})


# -- hypothesis strategies ---------------------------------------------------

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=4),
)

positive_rationals = st.builds(
    Fraction,
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=1, max_value=12),
)

log_lin_values = st.lists(
    st.tuples(small_rationals, positive_rationals), max_size=5
).map(lambda terms: LogLinValue.of(*terms))


def lin_exprs(n: int):
    masks = st.integers(min_value=1, max_value=(1 << n) - 1)
    return st.dictionaries(masks, small_rationals, max_size=5).map(
        lambda coeffs: LinExpr.make(n, coeffs))
