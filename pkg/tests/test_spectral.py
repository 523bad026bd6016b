import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from qdomain import catalog
from qdomain.functions import circle_mode, gaussian, parabola, random_circle_state, random_line_state
from qdomain.operator_core import ExtendedInterval
from qdomain.spectral import (
    Grid,
    NonSymmetricOperator,
    WaveFunction,
    analytic_spectrum,
    approximate_eigenfunction,
    discretize,
    eigendecompose,
    fourier_transform,
    lphi_bound,
    moment_via_spectrum,
    uncertainty_product,
    weyl_check,
    well_decomposition,
)
from qdomain.spectral.fourier import unitary_dft_eigenvalues


def _well_errors(n, count=10):
    dec = eigendecompose(discretize(catalog.infinite_well(), n), count)
    exact = np.pi**2 * np.arange(1, count + 1) ** 2 / 8
    return np.abs(dec.eigenvalues - exact) / exact


def test_infinite_well_ladder():
    assert np.max(_well_errors(2000)) <= 1e-3


def test_infinite_well_second_order_convergence():
    e1, e2 = _well_errors(200, 3), _well_errors(400, 3)
    rate = np.log2(e1 / e2)
    assert np.all(np.abs(rate - 2.0) < 0.1)


def test_analytic_well_matches_catalog():
    spec = analytic_spectrum("infinite_well")
    assert spec.value(3) == pytest.approx(9 * np.pi**2 / 8, rel=1e-15)
    assert spec.within(0, 5) == pytest.approx([np.pi**2 / 8, np.pi**2 / 2])


def test_projectors_orthogonal():
    dec = eigendecompose(discretize(catalog.infinite_well(), 500), 20)
    assert np.max(np.abs(dec.gram() - np.eye(20))) <= 1e-10
    psi = WaveFunction.from_function(dec.grid, parabola())
    p3, p5 = dec.project(3, psi), dec.project(5, psi)
    assert abs(p3.inner(p5)) <= 1e-10
    again = dec.project(3, p3)
    assert np.max(np.abs(again.samples - p3.samples)) <= 1e-10


@pytest.mark.parametrize("alpha", [0.0, 1.0, math.pi])
def test_twisted_momentum_spectrum(alpha):
    dec = eigendecompose(discretize(catalog.momentum_twisted(alpha), 64), 64, "magnitude")
    exact = analytic_spectrum("momentum_twisted", alpha=alpha).values(range(-5, 6))
    for e in exact:
        assert np.min(np.abs(dec.eigenvalues - e)) <= 1e-8


def test_twisted_zero_equals_periodic():
    a = eigendecompose(discretize(catalog.momentum_twisted(0.0), 32), 9, "magnitude")
    b = eigendecompose(discretize(catalog.SPECS["momentum_periodic"](), 32), 9, "magnitude")
    assert np.allclose(a.eigenvalues, b.eigenvalues, atol=1e-12)


def test_lz_integer_spectrum():
    dec = eigendecompose(discretize(catalog.angular_momentum(), 64), 7, "magnitude")
    assert np.allclose(np.sort(dec.eigenvalues), np.arange(-3, 4), atol=1e-10)


def test_non_symmetric_discretisation_refused():
    op = discretize(catalog.momentum_box(), 100)
    assert not op.symmetric and op.warnings
    with pytest.raises(NonSymmetricOperator):
        eigendecompose(op, 3)


def test_moments_of_parabola():
    dec = well_decomposition(2000)
    psi = parabola()
    m0 = moment_via_spectrum(dec, psi, 0)
    m1 = moment_via_spectrum(dec, psi, 1)
    assert m0.total == pytest.approx(1.0, abs=1e-9)
    assert m1.total == pytest.approx(1.25, rel=1e-8)
    assert m1.decay_exponent == pytest.approx(4.0, abs=0.05)


def test_unnormalised_state_rejected():
    dec = well_decomposition(10)
    with pytest.raises(ValueError):
        moment_via_spectrum(dec, parabola(2.0), 1)


# -- Fourier ----------------------------------------------------------------

GRID = Grid(ExtendedInterval(-10.0, 10.0), 100, "open")
PGRID = Grid(ExtendedInterval(0.0, 2 * math.pi), 64, "periodic")
floats = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@given(arrays(np.float64, 100, elements=floats), arrays(np.float64, 100, elements=floats))
def test_parseval(re, im):
    psi = WaveFunction(GRID, re + 1j * im)
    phi = fourier_transform(psi)
    assert abs(phi.norm() - psi.norm()) <= 1e-12 * max(1.0, psi.norm())


def test_fourier_of_gaussian_is_gaussian():
    grid = Grid(ExtendedInterval(-20.0, 20.0), 1024, "open")
    psi = WaveFunction.from_function(grid, gaussian(0.0, 1.0))
    phi = fourier_transform(psi)
    expected = gaussian(0.0, 1.0)(phi.x)
    assert np.max(np.abs(np.abs(phi.samples) - np.abs(expected))) <= 1e-10


def test_fourier_rejects_closed_grid():
    grid = Grid(ExtendedInterval(0.0, 1.0), 10, "closed")
    with pytest.raises(ValueError):
        fourier_transform(WaveFunction(grid, np.ones(10)))


@given(st.integers(-5, 5), st.integers(-20, 20), st.integers(0, 2**31 - 1))
def test_weyl_relation(a, m, seed):
    rng = np.random.default_rng(seed)
    psi = WaveFunction(PGRID, rng.normal(size=64) + 1j * rng.normal(size=64))
    assert weyl_check(float(a), m * PGRID.spacing, psi) <= 1e-12 * max(1.0, psi.norm())


def test_weyl_rejects_incompatible_shift():
    psi = WaveFunction(PGRID, np.ones(64))
    with pytest.raises(ValueError):
        weyl_check(0.5, PGRID.spacing, psi)
    with pytest.raises(ValueError):
        weyl_check(1.0, 0.3 * PGRID.spacing, psi)


def test_dft_eigenvalues_are_fourth_roots_of_unity():
    ev = unitary_dft_eigenvalues(16)
    assert np.max(np.abs(ev**4 - 1)) <= 1e-12


# -- approximate eigenfunctions ---------------------------------------------

APPROX_GRID = Grid(ExtendedInterval(-10.0, 10.0), 8000, "open")


@pytest.mark.parametrize("eps", [0.4, 0.2, 0.1])
def test_position_residual(eps):
    _, res = approximate_eigenfunction("position", 1.0, eps, APPROX_GRID)
    assert res == pytest.approx(eps / math.sqrt(2), abs=1e-6)


def test_position_residual_halves():
    r = [approximate_eigenfunction("position", 0.0, e, APPROX_GRID)[1] for e in (0.4, 0.2)]
    assert r[1] / r[0] == pytest.approx(0.5, rel=0.01)


def test_momentum_residual():
    _, res = approximate_eigenfunction("momentum", 2.0, 1.0, APPROX_GRID)
    assert res == pytest.approx(1 / math.sqrt(2), rel=1e-6)


def test_approximate_eigenfunction_rejects_narrow_packet():
    with pytest.raises(ValueError):
        approximate_eigenfunction("position", 0.0, 1e-4, APPROX_GRID)


# -- uncertainty ------------------------------------------------------------

def test_uncertainty_random_line_states():
    rng = np.random.default_rng(3)
    p, q = catalog.momentum_line(), catalog.position_line()
    for _ in range(20):
        f, reach = random_line_state(rng)
        rep = uncertainty_product(p, q, f, truncation=reach)
        assert rep.lhs_product >= rep.rhs_sesquilinear - 1e-9
        assert rep.rhs_commutator == pytest.approx(0.5, rel=1e-8)


def test_uncertainty_random_circle_states():
    rng = np.random.default_rng(5)
    lz, phi = catalog.angular_momentum(), catalog.angle()
    for _ in range(20):
        rep = uncertainty_product(lz, phi, random_circle_state(rng))
        assert rep.holds
        assert rep.lhs_product >= rep.rhs_sesquilinear - 1e-9
        assert rep.rhs_commutator is None
        # the formal commutator value differs from the sesquilinear one by the surface term
        assert abs(rep.commutator_formal + rep.surface_contribution - rep.sesquilinear) <= 1e-9


def test_gaussian_saturates():
    rep = uncertainty_product(catalog.momentum_line(), catalog.position_line(), gaussian(0.3, 0.7, 1.1))
    assert rep.lhs_product == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("m", [0, 1, 3])
def test_lphi_bound_vanishes_on_modes(m):
    psi = circle_mode(m)
    assert lphi_bound(psi) <= 1e-12
    rep = uncertainty_product(catalog.angular_momentum(), catalog.angle(), psi)
    assert rep.delta_a <= 1e-9
