from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdomain.algebra import QI, Polynomial, as_qi, nullspace, rank, row_basis

ints = st.integers(-9, 9)
qis = st.builds(lambda a, b: QI(Fraction(a), Fraction(b)), ints, ints)


def test_gaussian_rational_arithmetic():
    i = QI(Fraction(0), Fraction(1))
    assert i * i == as_qi(-1)
    assert (as_qi(3) + i) / (as_qi(3) + i) == as_qi(1)
    assert (as_qi(1) / i) == QI(Fraction(0), Fraction(-1))
    assert complex(QI(Fraction(1, 2), Fraction(-3, 4))) == 0.5 - 0.75j


def test_float_conversion_is_exact():
    q = as_qi(0.1)
    assert q.re == Fraction(0.1)
    assert float(q.re) == 0.1


@given(st.lists(qis, max_size=5), st.lists(qis, max_size=5), st.floats(-3, 3))
def test_polynomial_product_evaluates_pointwise(a, b, x):
    p, q = Polynomial(a), Polynomial(b)
    assert np.isclose(complex((p * q)(x)), complex(p(x)) * complex(q(x)), rtol=1e-9, atol=1e-9)


def test_polynomial_derivative_and_trim():
    p = Polynomial([1, 0, 3, 0, 0])
    assert p.degree == 2
    assert p.derivative() == Polynomial([0, 6])
    assert Polynomial([0, 0]).is_zero()
    assert Polynomial([0, 0]).degree == -1


def test_rank_and_nullspace_exact():
    rows = [[as_qi(1), as_qi(2), as_qi(3)], [as_qi(2), as_qi(4), as_qi(6)], [as_qi(0), as_qi(1), as_qi(1)]]
    assert rank(rows, 3) == 2
    ns = nullspace(rows, 3)
    assert len(ns) == 1
    v = ns[0]
    for r in rows:
        assert sum((a * b for a, b in zip(r, v)), as_qi(0)) == as_qi(0)
    assert len(row_basis(rows, 3)) == 2


def test_nonfinite_float_rejected():
    with pytest.raises(ValueError):
        as_qi(float("inf"))
