import json
import math

import pytest

from qdomain.paradoxes import (
    ClaimRecord,
    ParadoxConfig,
    render_text,
    run_all,
    run_paradox,
    verdicts_to_json,
)


@pytest.fixture(scope="module")
def verdicts():
    return {v.example_id: v for v in run_all()}


def _claim(verdict, fragment):
    hits = [c for c in verdict.claims if fragment in c.description]
    assert hits, fragment
    return hits[0]


def test_all_seven_run(verdicts):
    assert sorted(verdicts) == list(range(1, 8))
    for v in verdicts.values():
        assert v.ok
        assert len(v.claims) >= 2
        roles = {c.role for c in v.claims}
        assert "fallacious" in roles or "check" in roles


def test_every_fallacious_claim_is_addressed(verdicts):
    """Each example pairs an apparent result with a corrected one."""
    for v in verdicts.values():
        assert any(c.role == "corrected" for c in v.claims)
        assert v.resolution_note


def test_trace(verdicts):
    v = verdicts[1]
    for n in (1, 4, 100):
        good = _claim(v, f"n={n}: Tr[P,Q] for Hermitian")
        bad = _claim(v, f"n={n}: canonical relation")
        assert good.status == "reproduced" and abs(good.computed) <= good.tolerance
        assert bad.status == "refuted_as_expected" and bad.claimed == pytest.approx(-1j * n)


def test_decay_examples(verdicts):
    v = verdicts[2]
    printed = _claim(v, "x^2 exp(-x^8 sin^2 x)")
    # each bump of the printed function carries mass sqrt(pi/2); its integral grows with the cutoff
    assert printed.status == "discrepancy"
    masses = [float(m) for m in v.data["printed_function_peak_masses"]]
    assert masses[-1] == pytest.approx(math.sqrt(2 * math.pi), rel=1e-6)
    assert _claim(v, "x exp(-x^8 sin^2 x)").status == "resolved"
    assert _claim(v, "comb partial sum").status == "reproduced"


def test_pq3(verdicts):
    v = verdicts[3]
    assert _claim(v, "pointwise").computed <= 1e-12
    assert _claim(v, "|f|^2 = 1").computed == pytest.approx(1.0, abs=1e-8)
    assert _claim(v, "rapidly decreasing").status == "refuted_as_expected"
    assert list(_claim(v, "deficiency indices").computed) == [0, 1]


def test_momentum_box(verdicts):
    v = verdicts[4]
    assert _claim(v, "exp(i z x/hbar) in D(P)").computed == 0
    assert _claim(v, "eigenvalues of P^dagger").computed == _claim(v, "eigenvalues of P^dagger").claimed
    assert _claim(v, "Sp P_alpha").computed <= 1e-8


def test_lz_phi_surface_term(verdicts):
    """Quadrature difference and endpoint formula agree."""
    d = verdicts[5].data
    assert abs(d["quadrature_difference"] - d["surface_term"]) <= 1e-10
    assert d["surface_term_modulus"] == pytest.approx(1.0, abs=1e-6)
    assert _claim(verdicts[5], "D([L_z, phi])").status in ("resolved", "refuted_as_expected")


def test_angle_uncertainty(verdicts):
    v = verdicts[6]
    assert _claim(v, "corrected bound").computed <= 1e-12
    assert _claim(v, "Delta phi for psi_m").computed == pytest.approx(math.pi / math.sqrt(3), rel=1e-10)


def test_h_squared_cross_methods(verdicts):
    d = verdicts[7].data
    exact = d["norm_h_psi_squared"]
    assert exact == pytest.approx(1.875, abs=1e-10)
    assert d["spectral_sum"] + d["spectral_tail"] == pytest.approx(exact, rel=1e-6)
    assert d["grid_sum"] + d["grid_tail"] == pytest.approx(exact, rel=1e-3)
    assert abs(d["naive"]) <= 1e-12
    assert "not in domain" in d["violation"]


def test_claim_record_serialises():
    c = ClaimRecord("x", 1 + 2j, float("inf"), "reproduced")
    assert c.role == "corrected" and c.tolerance is None


def test_unknown_example():
    with pytest.raises(ValueError):
        run_paradox(8)


def test_deterministic_json():
    cfg = ParadoxConfig()
    a = verdicts_to_json([run_paradox(i, cfg) for i in (1, 5, 6)], cfg)
    b = verdicts_to_json([run_paradox(i, cfg) for i in (1, 5, 6)], cfg)
    assert a == b
    json.loads(a)


def test_seed_changes_random_draws_but_not_verdicts():
    v = run_paradox(1, ParadoxConfig(seed=1))
    assert v.ok and all(c.status != "failed" for c in v.claims)


def test_render_text(verdicts):
    text = render_text(list(verdicts.values()))
    assert "Example 7" in text and "[discrepancy]" in text
