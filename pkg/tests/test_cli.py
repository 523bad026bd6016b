import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from qdomain import report
from qdomain.cli import CliConfig, build_parser, config_from_args, main, run_command

DATA = resources.files("qdomain") / "data"
SCHEMA = report.load_schema()


@pytest.fixture(autouse=True)
def _quad_env(monkeypatch):
    # run_command exports the quadrature order; keep it from leaking between tests
    monkeypatch.setenv("QDOMAIN_QUAD_ORDER", "16")


def _json(capsys, argv):
    status = main(argv + ["--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    jsonschema.validate(payload, SCHEMA)
    return status, payload


def test_classify_momentum_box(capsys):
    status, payload = _json(capsys, ["classify", str(DATA / "momentum_box.spec")])
    assert status == 2
    assert "NOT_OBSERVABLE" in payload["codes"]
    r = payload["result"]
    assert r["hermitian"] is True and r["self_adjoint"] is False
    assert r["deficiency"] == [1, 1]


def test_classify_text(capsys):
    main(["classify", str(DATA / "momentum_box.spec")])
    out = capsys.readouterr().out
    assert "Hermitian: yes" in out.splitlines()
    assert "Self-adjoint: no" in out.splitlines()


def test_classify_self_adjoint_exits_zero(capsys):
    status, payload = _json(capsys, ["classify", str(DATA / "angular_momentum.spec")])
    assert status == 0 and payload["codes"] == []


def test_deficiency_pq3(capsys):
    status, payload = _json(capsys, ["deficiency", str(DATA / "pq3.spec")])
    assert payload["result"]["indices"] == [0, 1]


def test_extensions(capsys):
    _, ok = _json(capsys, ["extensions", str(DATA / "momentum_box.spec")])
    assert ok["result"]["exists"] and ok["result"]["parameter_dimension"] == 1
    status, none = _json(capsys, ["extensions", str(DATA / "pq3.spec")])
    assert status == 2 and "NO_EXTENSION" in none["codes"]
    assert none["result"]["exists"] is False


def test_spectrum_well(capsys):
    status, payload = _json(capsys, ["spectrum", str(DATA / "infinite_well.spec"), "--k", "5"])
    assert status == 0
    ev = np.array(payload["result"]["eigenvalues"])
    assert np.allclose(ev / ev[0], [1, 4, 9, 16, 25], rtol=1e-4)


def test_spectrum_csv(capsys):
    main(["spectrum", str(DATA / "infinite_well.spec"), "--k", "5", "--format", "csv"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,E_n" and len(lines) == 6


def test_spectrum_plot_files(tmp_path, capsys):
    main(["spectrum", str(DATA / "infinite_well.spec"), "--k", "2", "--grid-n", "200", "--plot-dir", str(tmp_path)])
    capsys.readouterr()
    ladder = np.loadtxt(tmp_path / "ladder.dat")
    assert ladder.shape == (2, 2)
    psi = np.loadtxt(tmp_path / "eigenfunction_1.dat")
    assert psi.shape[1] == 2 and psi.shape[0] >= 200


def test_spectrum_non_symmetric_warns(capsys):
    status, payload = _json(capsys, ["spectrum", str(DATA / "momentum_box.spec"), "--grid-n", "50"])
    assert status == 2 and "NOT_OBSERVABLE" in payload["codes"]
    assert payload["result"]["symmetric"] is False


def test_paradox_five_surface_term(capsys):
    status, payload = _json(capsys, ["paradox", "5"])
    assert status == 0
    data = payload["result"]["verdicts"][0]["data"]
    assert abs(data["surface_term_modulus"] - 1.0) <= 1e-6


def test_paradox_seven_text(capsys):
    status = main(["paradox", "7", "--grid-n", "500"])
    out = capsys.readouterr().out
    assert status == 0
    assert "1.875" in out and "fourth derivative" in out


def test_paradox_csv(capsys):
    main(["paradox", "1", "--format", "csv"])
    header = capsys.readouterr().out.splitlines()[0]
    assert header.split(",")[:3] == ["example_id", "role", "status"]


def test_commutator(capsys):
    status, payload = _json(
        capsys, ["commutator", "--op-a", str(DATA / "angular_momentum.spec"), "--op-b", str(DATA / "angle.spec")]
    )
    assert status == 0
    assert payload["result"]["commutator"]["domain"] == ["(1)*f(a) = 0", "(1)*f(b) = 0"]


def test_missing_spec_exits_one(tmp_path, capsys):
    out = tmp_path / "r.json"
    status = main(["classify", str(tmp_path / "nope.spec"), "--format", "json", "-o", str(out)])
    assert status == 1
    payload = json.loads(out.read_text())
    jsonschema.validate(payload, SCHEMA)
    assert payload["status"] == "error" and "ERROR" in payload["codes"]
    assert "error" in capsys.readouterr().err


def test_bad_spec_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text("[expression]\norder = 1\nc1 = hbar/*i\n[interval]\nlower = 0\nupper = 1\n")
    status, payload = _json(capsys, ["classify", str(bad)])
    assert status == 1 and ":3:" in payload["error"]


def test_config_validation():
    with pytest.raises(ValueError):
        CliConfig("paradox", example_id=9)
    with pytest.raises(ValueError):
        CliConfig("classify")
    with pytest.raises(ValueError):
        CliConfig("spectrum", spec_path=DATA / "x.spec", grid_n=1)


def test_quadrature_order_from_environment(monkeypatch):
    monkeypatch.setenv("QDOMAIN_QUAD_ORDER", "24")
    cfg = config_from_args(build_parser().parse_args(["report"]))
    assert cfg.quadrature_order == 24
    cfg = config_from_args(build_parser().parse_args(["report", "--quad-order", "8"]))
    assert cfg.quadrature_order == 8


def test_quadrature_order_exported():
    import os

    cfg = CliConfig("classify", spec_path=DATA / "angle.spec", quadrature_order=12)
    run_command(cfg)
    assert os.environ["QDOMAIN_QUAD_ORDER"] == "12"


def test_report_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["report", "--format", "json", "--grid-n", "400", "-o", str(a)]) == 0
    assert main(["report", "--format", "json", "--grid-n", "400", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    jsonschema.validate(payload, SCHEMA)
    assert [v["example_id"] for v in payload["result"]["verdicts"]] == list(range(1, 8))
