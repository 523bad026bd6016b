import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdomain import catalog
from qdomain.algebra import QI, Polynomial, as_qi
from qdomain.functions import circle_mode, parabola, poly_exp, pq_eigenfunction
from qdomain.operator_core import (
    BoundaryForm,
    BoundaryFunctional,
    DifferentialExpression,
    ExtendedInterval,
    OperatorSpec,
    adjoint_domain,
    apply_exact,
    classify,
    commutator_spec,
    composite_domain,
    formal_adjoint,
    is_in_domain,
    jet_index,
    surface_form,
)
from qdomain.quadrature import gauss_legendre_nodes

HBAR_I = QI(Fraction(0), Fraction(-1))
small = st.integers(-4, 4)
gauss_q = st.builds(lambda a, b: QI(Fraction(a), Fraction(b)), small, small)
polys = st.lists(gauss_q, max_size=7).map(Polynomial)


@st.composite
def expressions(draw, max_order=4):
    order = draw(st.integers(0, max_order))
    coeffs = [draw(polys) for _ in range(order)]
    lead = draw(polys)
    if lead.is_zero():
        lead = Polynomial([1])
    return DifferentialExpression(tuple(coeffs) + (lead,))


def _jets(f, iv):
    return np.concatenate([f.jet(iv.lower), f.jet(iv.upper)])


# -- formal adjoint ---------------------------------------------------------

def test_momentum_is_formally_symmetric():
    p = catalog.momentum()
    assert formal_adjoint(p) == p


def test_position_is_formally_symmetric():
    q = catalog.position()
    assert formal_adjoint(q) == q


def test_adjoint_of_cubic_first_order():
    expr = DifferentialExpression((Polynomial(), Polynomial.monomial(3)))
    expected = DifferentialExpression((Polynomial.monomial(2, -3), Polynomial.monomial(3, -1)))
    assert formal_adjoint(expr) == expected


@given(expressions())
def test_adjoint_is_an_involution(expr):
    assert formal_adjoint(formal_adjoint(expr)) == expr


# -- surface form -----------------------------------------------------------

def test_momentum_surface_form_on_unit_interval():
    s = surface_form(catalog.momentum(), ExtendedInterval(0, 1)).numeric()
    expected = np.zeros((8, 8), dtype=complex)
    expected[jet_index(1, 0), jet_index(1, 0)] = -1j
    expected[jet_index(0, 0), jet_index(0, 0)] = 1j
    assert np.array_equal(s, expected)


def test_kinetic_surface_form():
    s = surface_form(catalog.kinetic(), ExtendedInterval(-1, 1)).numeric()
    # (hbar^2/2m)[conj(g') f - conj(g) f'] from -a to a
    assert s[jet_index(1, 1), jet_index(1, 0)] == 0.5
    assert s[jet_index(1, 0), jet_index(1, 1)] == -0.5
    assert s[jet_index(0, 1), jet_index(0, 0)] == -0.5
    assert s[jet_index(0, 0), jet_index(0, 1)] == 0.5


def test_position_surface_form_vanishes():
    assert surface_form(catalog.position(), ExtendedInterval(0, 1)).is_zero()


def test_infinite_ends_contribute_nothing():
    assert surface_form(catalog.momentum(), ExtendedInterval(-math.inf, math.inf)).is_zero()


def _random_function(seed):
    rng = np.random.default_rng(seed)
    p = (rng.normal(size=3) + 1j * rng.normal(size=3)).tolist()
    q = [0.0, complex(rng.normal(), rng.normal()), -abs(rng.normal()) * 0.3]
    return poly_exp([(p, q)], max_order=9)


@given(expressions(), st.integers(0, 2**31 - 1), st.integers(0, 2**31 - 1))
def test_green_identity(expr, sf, sg):
    iv = ExtendedInterval(-0.5, 1.0)
    f, g = _random_function(sf), _random_function(sg)
    x, w = gauss_legendre_nodes(iv.lower, iv.upper, 8, 24)
    lhs = np.sum(w * np.conj(g(x)) * apply_exact(expr, f, x))
    rhs = np.sum(w * np.conj(apply_exact(formal_adjoint(expr), g, x)) * f(x))
    s = surface_form(expr, iv).evaluate(_jets(g, iv), _jets(f, iv))
    nf = math.sqrt(np.sum(w * np.abs(apply_exact(expr, f, x)) ** 2) + np.sum(w * np.abs(f(x)) ** 2))
    ng = math.sqrt(np.sum(w * np.abs(apply_exact(formal_adjoint(expr), g, x)) ** 2) + np.sum(w * np.abs(g(x)) ** 2))
    assert abs(lhs - rhs - s) <= 1e-8 * max(1.0, nf * ng)


# -- adjoint domain and classification -------------------------------------

def test_dirichlet_momentum_has_maximal_adjoint():
    spec = catalog.momentum_box()
    assert len(adjoint_domain(spec)) == 0
    rep = classify(spec)
    assert rep.hermitian and not rep.self_adjoint
    assert rep.maximal_adjoint
    assert rep.deficiency == (1, 1)
    assert rep.spectrum_region == "whole_plane"


def test_periodic_lz_is_self_adjoint():
    spec = catalog.angular_momentum()
    assert adjoint_domain(spec).same_subspace(spec.domain)
    assert classify(spec).self_adjoint


def test_dirichlet_well_adjoint_is_dirichlet():
    spec = catalog.infinite_well()
    assert adjoint_domain(spec).same_subspace(catalog.dirichlet())
    assert classify(spec).self_adjoint


@pytest.mark.parametrize("alpha", [0.0, 1.0, math.pi, -2.5])
def test_twisted_momentum_is_self_adjoint(alpha):
    rep = classify(catalog.momentum_twisted(alpha))
    assert rep.self_adjoint and rep.spectrum_region == "real_subset"


def test_non_symmetric_leading_coefficient_rejected():
    spec = OperatorSpec("D", DifferentialExpression((Polynomial(), Polynomial([1]))), ExtendedInterval(0, 1))
    with pytest.raises(ValueError):
        classify(spec)


def test_differential_operators_are_never_everywhere_defined():
    for make in catalog.SPECS.values():
        spec = make()
        rep = classify(spec)
        if spec.expression.order >= 1:
            assert not rep.everywhere_defined
    assert classify(catalog.angle()).everywhere_defined


def test_self_adjoint_implies_hermitian_for_catalog():
    for make in catalog.SPECS.values():
        spec = make()
        rep = classify(spec)
        if rep.self_adjoint:
            assert rep.hermitian
            assert rep.deficiency == (0, 0)
            if spec.interval.is_finite:
                assert rep.adjoint_domain.same_subspace(spec.domain)


JET_POOL = [(e, k) for e in (0, 1) for k in range(2)]


@given(
    st.lists(st.tuples(st.sampled_from(JET_POOL), st.sampled_from(JET_POOL), small, small), min_size=1, max_size=4),
    st.integers(1, 4),
)
def test_adjoint_domain_monotone(rows, cut):
    """More conditions on f leave fewer conditions on the adjoint."""
    fs = []
    for (j1, j2, c1, c2) in rows:
        terms = {j1: 1}
        terms[j2] = terms.get(j2, 0) + c1 + 1j * c2
        if all(v == 0 for v in terms.values()):
            continue
        fs.append(BoundaryFunctional.from_terms(terms))
    if not fs:
        return
    big = BoundaryForm.spanning(fs)
    small_form = BoundaryForm.spanning(fs[: min(cut, len(fs))])
    iv = ExtendedInterval(0, 1)
    a = OperatorSpec("A", catalog.kinetic(), iv, big)       # D(A) subset of D(B)
    b = OperatorSpec("B", catalog.kinetic(), iv, small_form)
    adj_a, adj_b = adjoint_domain(a), adjoint_domain(b)
    # D(B^dagger) subset of D(A^dagger): every constraint of A^dagger is implied by B^dagger's
    if len(adj_a):
        assert len(adj_b) >= len(adj_a)
        combined = BoundaryForm.spanning(list(adj_a) + list(adj_b))
        assert combined.same_subspace(adj_b)


# -- pointwise application and membership ----------------------------------

def test_pq3_eigen_equation_at_half():
    f = pq_eigenfunction()
    expr = catalog.pq_symmetrized(3)
    assert abs(apply_exact(expr, f, 0.5) / complex(f(0.5)) - (-1j)) <= 1e-12


def test_position_on_constant():
    one = poly_exp([([1.0], [0.0])])
    assert apply_exact(catalog.position(), one, 2.0) == 2.0


def test_kinetic_on_parabola():
    p = poly_exp([([1.0, 0.0, -1.0], [0.0])])
    assert apply_exact(catalog.kinetic(), p, 0.3) == pytest.approx(1.0, abs=1e-14)


def test_parabola_not_in_domain_of_h_squared():
    v = is_in_domain(catalog.infinite_well_squared(), parabola())
    assert v.member is False
    names = [c.name for c in v.failed()]
    assert any("f''(a)" in n for n in names) and any("f''(b)" in n for n in names)


def test_circle_mode_in_lz_domain():
    assert is_in_domain(catalog.angular_momentum(), circle_mode(2)).member is True


def test_pq3_eigenfunction_fails_decay():
    v = is_in_domain(catalog.pq3_line(), pq_eigenfunction())
    assert v.member is False
    assert [c.name for c in v.failed()] == ["rapid_decay"]


def test_grid_function_membership():
    x = np.linspace(0, 1, 201)
    v = is_in_domain(catalog.momentum_box(), (x, np.sin(np.pi * x)))
    assert v.member is True
    v = is_in_domain(catalog.momentum_box(), (x, np.cos(np.pi * x)))
    assert v.member is False


# -- composite domains ------------------------------------------------------

def test_lz_phi_composite_domain():
    lz, phi = catalog.angular_momentum(), catalog.angle()
    ab = composite_domain(lz, phi)
    assert ab.domain.same_subspace(BoundaryForm((BoundaryFunctional.from_terms({(1, 0): 1}),)))
    ba = composite_domain(phi, lz)
    assert ba.domain.same_subspace(lz.domain)
    comm = commutator_spec(lz, phi)
    assert comm.domain.same_subspace(catalog.dirichlet())
    assert comm.expression == DifferentialExpression((Polynomial([HBAR_I]),))
    assert is_in_domain(comm, circle_mode(1)).member is False


def test_interval_validation():
    with pytest.raises(ValueError):
        ExtendedInterval(1, 0)
    with pytest.raises(ValueError):
        ExtendedInterval(math.inf, math.inf)
    iv = ExtendedInterval(0, math.inf)
    assert iv.singular_flags(catalog.momentum()) == (False, True)
    assert ExtendedInterval(0, 1).singular_flags(catalog.pq_symmetrized(3)) == (True, False)
