"""``qdomain`` command-line front end.

Exit status is 0 on success, 2 when the result carries a warning code (for
example ``NOT_OBSERVABLE`` for a spec that is not self-adjoint) and 1 on
errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from . import report
from .deficiency import NoSelfAdjointExtension, deficiency_indices, self_adjoint_extensions
from .operator_core import classify, commutator_spec, composite_domain
from .paradoxes import ParadoxConfig, run_all, run_paradox
from .specfile import SpecFileError, parse_spec_file
from .spectral import UnsupportedBoundary, WaveFunction, discretize, eigendecompose
from .spectral.plotdata import write_ladder, write_wavefunction

__all__ = ["CliConfig", "build_parser", "run_command", "emit_report", "main"]

COMMANDS = ("classify", "deficiency", "extensions", "spectrum", "paradox", "report", "commutator")
EXIT_OK, EXIT_ERROR, EXIT_WARNING = 0, 1, 2


@dataclass(frozen=True)
class CliConfig:
    command: str
    spec_path: Path | None = None
    output_format: str = "text"
    grid_n: int = 2000
    truncation: float | None = None
    quadrature_order: int = 16
    example_id: int | None = None
    k: int = 5
    which: str = "auto"
    kappa: float = 1.0
    op_a: Path | None = None
    op_b: Path | None = None
    output: Path | None = None
    plot_dir: Path | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command in ("classify", "deficiency", "extensions", "spectrum") and self.spec_path is None:
            raise ValueError(f"{self.command} needs a spec file")
        if self.command == "paradox" and (self.example_id is None or not 1 <= self.example_id <= 7):
            raise ValueError("paradox needs an example id in 1..7")
        if self.command == "commutator" and (self.op_a is None or self.op_b is None):
            raise ValueError("commutator needs --op-a and --op-b")
        if self.output_format not in ("text", "json", "csv"):
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.grid_n < 4 or self.k < 1 or self.quadrature_order < 1 or self.kappa <= 0:
            raise ValueError("grid size, k, quadrature order and kappa must be positive")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("text", "json", "csv"), default="text")
    common.add_argument("-o", "--output", type=Path, help="write the report here instead of stdout")
    common.add_argument("--grid-n", type=int, default=2000, help="grid points for discretisation")
    common.add_argument("--truncation", type=float, help="cutoff X for infinite intervals")
    common.add_argument("--quad-order", dest="quadrature_order", type=int,
                        default=int(os.environ.get("QDOMAIN_QUAD_ORDER", 16)),
                        help="Gauss-Legendre points per panel (env QDOMAIN_QUAD_ORDER)")
    common.add_argument("--kappa", type=float, default=1.0, help="scale of the deficiency eigenvalues +-i kappa")
    common.add_argument("--plot-dir", type=Path, help="directory for two-column plot data")

    p = argparse.ArgumentParser(prog="qdomain", description="Domain-aware analysis of 1D quantum operators.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (
        ("classify", "Hermitian / self-adjoint verdict"),
        ("deficiency", "deficiency indices with evidence"),
        ("extensions", "self-adjoint extensions"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("spec", type=Path)
    s = sub.add_parser("spectrum", parents=[common], help="discretised eigenvalues")
    s.add_argument("spec", type=Path)
    s.add_argument("--k", type=int, default=5, help="number of eigenvalues")
    s.add_argument("--which", choices=("auto", "smallest", "magnitude"), default="auto")
    s = sub.add_parser("paradox", parents=[common], help="run one of the seven examples")
    s.add_argument("example_id", type=int)
    sub.add_parser("report", parents=[common], help="run all seven examples")
    s = sub.add_parser("commutator", parents=[common], help="domains of AB, BA and [A, B]")
    s.add_argument("--op-a", type=Path, required=True)
    s.add_argument("--op-b", type=Path, required=True)
    return p


def config_from_args(ns: argparse.Namespace) -> CliConfig:
    return CliConfig(
        command=ns.command,
        spec_path=getattr(ns, "spec", None),
        output_format=ns.output_format,
        grid_n=ns.grid_n,
        truncation=ns.truncation,
        quadrature_order=ns.quadrature_order,
        example_id=getattr(ns, "example_id", None),
        k=getattr(ns, "k", 5),
        which=getattr(ns, "which", "auto"),
        kappa=ns.kappa,
        op_a=getattr(ns, "op_a", None),
        op_b=getattr(ns, "op_b", None),
        output=ns.output,
        plot_dir=ns.plot_dir,
    )


def _spectrum(cfg: CliConfig, spec):
    op = discretize(spec, cfg.grid_n, cfg.truncation)
    k = min(cfg.k, op.grid.n)
    if op.symmetric:
        which = cfg.which
        if which == "auto":
            which = "smallest" if spec.expression.order % 2 == 0 else "magnitude"
        dec = eigendecompose(op, k, which)
        if cfg.plot_dir is not None:
            cfg.plot_dir.mkdir(parents=True, exist_ok=True)
            write_ladder(cfg.plot_dir / "ladder.dat", dec.eigenvalues)
            for j in range(len(dec)):
                write_wavefunction(cfg.plot_dir / f"eigenfunction_{j + 1}.dat", WaveFunction(dec.grid, dec.vectors[:, j]))
        return report.spectrum_result(spec, dec.eigenvalues, op.grid.n, True, solver=which)
    vals = scipy.linalg.eigvals(op.dense())
    vals = vals[np.lexsort((vals.imag, np.abs(vals)))][:k]
    return report.spectrum_result(spec, vals, op.grid.n, False, op.warnings, solver="dense non-Hermitian")


def run_command(cfg: CliConfig) -> tuple[int, dict, list | None]:
    """Dispatch ``cfg``; returns ``(exit status, payload, verdicts or None)``."""
    os.environ["QDOMAIN_QUAD_ORDER"] = str(cfg.quadrature_order)
    verdicts = None
    try:
        if cfg.command in ("paradox", "report"):
            pcfg = ParadoxConfig(well_grid_n=cfg.grid_n)
            verdicts = [run_paradox(cfg.example_id, pcfg)] if cfg.command == "paradox" else run_all(pcfg)
            result, codes, warns = report.paradox_result(verdicts, pcfg)
        elif cfg.command == "commutator":
            a, b = parse_spec_file(cfg.op_a), parse_spec_file(cfg.op_b)
            result, codes, warns = report.commutator_result(
                a, b, composite_domain(a, b), composite_domain(b, a), commutator_spec(a, b)
            )
        else:
            spec = parse_spec_file(cfg.spec_path)
            if cfg.command == "classify":
                result, codes, warns = report.classification_result(spec, classify(spec, cfg.kappa))
            elif cfg.command == "deficiency":
                result, codes, warns = report.deficiency_result(spec, deficiency_indices(spec, cfg.kappa))
            elif cfg.command == "extensions":
                try:
                    fam = self_adjoint_extensions(spec, cfg.kappa)
                    result, codes, warns = report.extensions_result(spec, fam)
                except NoSelfAdjointExtension as exc:
                    result, codes, warns = report.extensions_result(spec, None, str(exc))
            else:
                result, codes, warns = _spectrum(cfg, spec)
    except (SpecFileError, UnsupportedBoundary, ValueError, OSError) as exc:
        payload = report.envelope(cfg.command, {}, ("ERROR",), (), error=str(exc))
        return EXIT_ERROR, payload, None
    payload = report.envelope(cfg.command, result, codes, warns)
    return (EXIT_WARNING if codes else EXIT_OK), payload, verdicts


def emit_report(payload: dict, fmt: str, destination: Path | None = None, verdicts=None) -> str:
    """Render and write ``payload``; returns the rendered text."""
    text = report.render(payload, fmt, verdicts)
    if destination is None:
        sys.stdout.write(text)
    else:
        destination = Path(destination)
        destination.parent.mkdir(parents=True, exist_ok=True)
        destination.write_text(text, encoding="utf-8")
    return text


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print(f"qdomain: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    status, payload, verdicts = run_command(cfg)
    try:
        emit_report(payload, cfg.output_format, cfg.output, verdicts)
    except OSError as exc:
        print(f"qdomain: error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if status == EXIT_ERROR and cfg.output is not None:
        print(f"qdomain: error: {payload.get('error')}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
