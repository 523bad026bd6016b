import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdomain import catalog
from qdomain.deficiency import (
    NoSelfAdjointExtension,
    deficiency_indices,
    point_spectrum_first_order,
    self_adjoint_extensions,
    spectrum_region,
)
from qdomain.functions import pq_deficiency_solution
from qdomain.operator_core import classify
from qdomain.quadrature import integrate

# hamiltonian_line takes a few seconds on the numeric path; it is covered once below
FAST = [n for n in catalog.SPECS if n != "hamiltonian_line"]


def test_momentum_box_indices():
    assert deficiency_indices(catalog.momentum_box()).indices == (1, 1)


def test_pq3_indices_and_evidence():
    res = deficiency_indices(catalog.pq3_line())
    assert res.indices == (0, 1)
    by_sign = {s.sign: s for s in res.solutions}
    assert not by_sign[+1].square_integrable
    assert by_sign[-1].square_integrable


def test_momentum_line_indices_with_shell_oracle():
    res = deficiency_indices(catalog.momentum_line(), method="numeric")
    assert res.indices == (0, 0)
    for sol in res.solutions:
        divergent = [r for (_, v, r) in sol.endpoint_classification if v == "divergent"]
        assert divergent
        assert all(ratio > 1.0 for ratio in divergent[0])


def test_pq3_closed_form_norms():
    """g_- has finite norm, g_+ blows up at the origin."""
    g_minus = pq_deficiency_solution(3, -1)
    g_plus = pq_deficiency_solution(3, +1)
    tail = integrate(lambda x: np.abs(g_minus(x)) ** 2, 1e-3, 50.0, panels=64)
    assert math.isfinite(tail) and tail > 0
    near = [integrate(lambda x: np.abs(g_plus(x)) ** 2, eps, 0.5, panels=64) for eps in (0.3, 0.2)]
    assert near[1] > 100 * near[0]


@pytest.mark.parametrize("name", FAST)
def test_evidence_consistency(name):
    res = deficiency_indices(catalog.SPECS[name]())
    counted = [sum(1 for s in res.solutions if s.sign == sign and s.counted) for sign in (1, -1)]
    assert tuple(counted) == res.indices
    for s in res.solutions:
        verdicts = [v for (_, v, _) in s.endpoint_classification]
        assert s.square_integrable == all(v == "convergent" for v in verdicts)


@pytest.mark.parametrize("name", FAST)
def test_catalog_numeric_agreement(name):
    spec = catalog.SPECS[name]()
    if spec.expression.order > 2:
        return
    assert deficiency_indices(spec, method="numeric").indices == deficiency_indices(spec).indices


def test_catalog_numeric_agreement_hamiltonian_line():
    spec = catalog.hamiltonian_line()
    assert deficiency_indices(spec, method="numeric").indices == (0, 0)


@pytest.mark.parametrize("name", FAST)
def test_kappa_invariance(name):
    spec = catalog.SPECS[name]()
    assert deficiency_indices(spec, 10.0).indices == deficiency_indices(spec, 1.0).indices


def test_kappa_must_be_positive():
    with pytest.raises(ValueError):
        deficiency_indices(catalog.momentum_box(), 0.0)


# -- extensions -------------------------------------------------------------

def test_momentum_box_family_is_self_adjoint():
    fam = self_adjoint_extensions(catalog.momentum_box())
    assert fam.indices == (1, 1) and fam.parameter_dimension == 1
    rng = np.random.default_rng(7)
    for alpha in rng.uniform(-2 * math.pi, 2 * math.pi, 20):
        assert classify(fam.generator(float(alpha))).self_adjoint


def test_alpha_zero_is_periodic():
    fam = self_adjoint_extensions(catalog.momentum_box())
    assert fam.generator(0.0).domain.same_subspace(catalog.momentum_twisted(0.0).domain)


def test_well_minimal_named_catalog():
    from qdomain.operator_core import BoundaryForm, BoundaryFunctional

    base = catalog.infinite_well()
    minimal = base.with_domain(
        BoundaryForm.spanning([BoundaryFunctional.from_terms({(e, k): 1}) for e in (0, 1) for k in (0, 1)]),
        "H_min",
    )
    fam = self_adjoint_extensions(minimal)
    assert fam.indices == (2, 2) and fam.parameter_dimension == 4
    rng = np.random.default_rng(11)
    for name in ("dirichlet", "neumann", "periodic"):
        assert classify(fam.generator(name)).self_adjoint
    for p in rng.uniform(-3, 3, 20):
        assert classify(fam.generator("quasi_periodic", float(p))).self_adjoint
        assert classify(fam.generator("robin", float(p))).self_adjoint


def test_pq3_has_no_extension():
    with pytest.raises(NoSelfAdjointExtension):
        self_adjoint_extensions(catalog.pq3_line())


def test_position_trivial_family():
    fam = self_adjoint_extensions(catalog.position_line())
    assert fam.parameter_dimension == 0 and fam.catalog_name == "trivial"
    assert fam.generator() is not None


# -- spectrum region --------------------------------------------------------

@pytest.mark.parametrize(
    "pair, region",
    [((0, 0), "real_subset"), ((1, 1), "whole_plane"), ((2, 2), "whole_plane"),
     ((0, 1), "closed_upper_half"), ((1, 0), "closed_lower_half")],
)
def test_spectrum_region(pair, region):
    assert spectrum_region(pair) == region


@given(st.integers(0, 5), st.integers(0, 5))
def test_spectrum_region_depends_only_on_pair(p, q):
    r = spectrum_region((p, q))
    assert (r == "real_subset") == (p == q == 0)
    assert (r == "whole_plane") == (p > 0 and q > 0)


def test_half_line_momentum_is_half_plane():
    rep = classify(catalog.momentum_half_line())
    assert rep.hermitian and not rep.self_adjoint
    assert rep.spectrum_region in ("closed_upper_half", "closed_lower_half")


# -- point spectrum ---------------------------------------------------------

@pytest.mark.parametrize("z", [3.0, 2 + 1j])
def test_dirichlet_momentum_adjoint_eigenvalue(z):
    assert point_spectrum_first_order(catalog.momentum_box(), z) == "eigenvalue_of_adjoint"


def test_periodic_momentum_eigenvalue():
    assert point_spectrum_first_order(catalog.momentum_twisted(0.0), 2 * math.pi) == "eigenvalue_of_spec"
    assert point_spectrum_first_order(catalog.momentum_twisted(0.0), 1.0) == "neither"


def test_residual_spectrum_sampling():
    rng = np.random.default_rng(2026)
    r = 10 * np.sqrt(rng.uniform(size=50))
    t = rng.uniform(0, 2 * math.pi, 50)
    spec = catalog.momentum_box()
    for z in r * np.exp(1j * t):
        assert point_spectrum_first_order(spec, complex(z)) == "eigenvalue_of_adjoint"
