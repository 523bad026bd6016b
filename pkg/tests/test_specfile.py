import math
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from qdomain import catalog
from qdomain.algebra import QI, Polynomial
from qdomain.operator_core import (
    BoundaryForm,
    BoundaryFunctional,
    DifferentialExpression,
    ExtendedInterval,
    OperatorSpec,
    classify,
)
from qdomain.specfile import (
    SpecFileError,
    SpecSemanticError,
    SpecSyntaxError,
    emit_spec,
    parse_spec,
    parse_spec_file,
)

DATA = resources.files("qdomain") / "data"

MOMENTUM_BOX = """\
label = P_box

[expression]
order = 1
c1 = hbar/i

[interval]
lower = 0
upper = 1

[boundary]
f(a) = 0
f(b) = 0
"""


def test_momentum_box_file():
    spec = parse_spec(MOMENTUM_BOX)
    assert spec.expression == catalog.momentum()
    assert spec.interval == ExtendedInterval(0, 1)
    assert spec.domain.same_subspace(catalog.dirichlet())


def test_pq3_file_matches_catalog():
    spec = parse_spec_file(DATA / "pq3.spec")
    assert spec.expression == catalog.pq3_line().expression
    assert spec.rapid_decay
    # 2 x^3 g' + 3 x^2 g, times hbar/i
    assert spec.expression.coefficient(1) == Polynomial.monomial(3, QI(0, -2))
    assert spec.expression.coefficient(0) == Polynomial.monomial(2, QI(0, -3))


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.iterdir() if p.name.endswith(".spec")))
def test_shipped_files_round_trip(name):
    spec = parse_spec_file(DATA / name)
    again = parse_spec(emit_spec(spec))
    assert again == spec
    classify(spec)


def test_twisted_file():
    spec = parse_spec_file(DATA / "momentum_twisted.spec")
    assert spec.domain.same_subspace(catalog.momentum_twisted(1.0).domain)


def test_well_files():
    assert parse_spec_file(DATA / "infinite_well.spec") == catalog.infinite_well()
    h2 = parse_spec_file(DATA / "infinite_well_squared.spec")
    assert h2.expression == catalog.infinite_well_squared().expression


def test_jet_at_infinite_endpoint_is_semantic_error():
    text = MOMENTUM_BOX.replace("lower = 0", "lower = -inf")
    with pytest.raises(SpecSemanticError) as info:
        parse_spec(text)
    assert info.value.line == 12
    assert info.value.hint


def test_syntax_error_position():
    text = MOMENTUM_BOX.replace("c1 = hbar/i", "c1 = hbar/*i")
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec(text)
    assert info.value.line == 5
    assert info.value.column == 11


@pytest.mark.parametrize(
    "mutation",
    [
        ("order = 1", "order = 0"),           # coefficient above the order
        ("[interval]", "[intervals]"),        # unknown section
        ("upper = 1", "upper = 0"),           # empty interval
        ("f(b) = 0", "f(c) = 0"),             # unknown endpoint
        ("f(b) = 0", "f(b) = 1"),             # inhomogeneous
        ("f(b) = 0", "f(b) = f(b)*f(a)"),     # nonlinear
        ("f(b) = 0", "f(0.5) = 0"),           # interior point
    ],
)
def test_rejected_files(mutation):
    with pytest.raises(SpecFileError) as info:
        parse_spec(MOMENTUM_BOX.replace(*mutation))
    assert info.value.line is not None


def test_missing_file():
    with pytest.raises(OSError):
        parse_spec_file("/nonexistent/x.spec")


# -- round trip -------------------------------------------------------------

small = st.integers(-5, 5)
frac = st.builds(Fraction, small, st.integers(1, 4))
gauss = st.builds(QI, frac, frac)
polys = st.lists(gauss, max_size=4).map(Polynomial)
JETS = [(e, k) for e in (0, 1) for k in range(4)]


@st.composite
def specs(draw):
    order = draw(st.integers(0, 3))
    coeffs = [draw(polys) for _ in range(order)] + [Polynomial([draw(gauss.filter(lambda q: q != 0))])]
    lo = draw(st.sampled_from([-math.inf, -1.0, 0.0]))
    hi = draw(st.sampled_from([1.0, 2.5, math.inf]))
    iv = ExtendedInterval(lo, hi)
    ends = [e for e in (0, 1) if iv.finite(e)]
    funcs = []
    for _ in range(draw(st.integers(0, 3))):
        if not ends:
            break
        picks = draw(st.lists(st.sampled_from([j for j in JETS if j[0] in ends]), min_size=1, max_size=3, unique=True))
        terms = {j: complex(draw(small), draw(small)) or 1.0 for j in picks}
        funcs.append(BoundaryFunctional.from_terms(terms))
    dom = BoundaryForm.spanning(funcs) if funcs else BoundaryForm()
    expr = DifferentialExpression(tuple(coeffs))
    return OperatorSpec("S", expr, iv, dom, rapid_decay=draw(st.booleans()) and not iv.is_finite)


@given(specs())
def test_emit_parse_round_trip(spec):
    again = parse_spec(emit_spec(spec))
    assert again.expression == spec.expression
    assert again.interval == spec.interval
    assert again.rapid_decay == spec.rapid_decay
    assert again.domain.same_subspace(spec.domain)
