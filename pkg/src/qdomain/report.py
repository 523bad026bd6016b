"""Report payloads for the command line: build, validate and render.

Every payload is a plain dict ``{"schema_version", "command", "status",
"codes", "warnings", "result"}``; :func:`render` turns it into text, JSON or
CSV. The JSON form validates against ``schemas/report.schema.json``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources

import numpy as np

from .deficiency import DeficiencyResult, ExtensionFamily
from .operator_core import ClassificationReport, OperatorSpec
from .paradoxes import ParadoxVerdict, to_jsonable, render_text

__all__ = [
    "SCHEMA_VERSION",
    "NOT_OBSERVABLE",
    "NOT_PHYSICAL",
    "INCONCLUSIVE",
    "NO_EXTENSION",
    "DOMAIN_VIOLATION",
    "load_schema",
    "envelope",
    "spec_summary",
    "classification_result",
    "deficiency_result",
    "extensions_result",
    "spectrum_result",
    "paradox_result",
    "commutator_result",
    "render",
]

SCHEMA_VERSION = "1.0.0"

NOT_OBSERVABLE = "NOT_OBSERVABLE"
NOT_PHYSICAL = "NOT_PHYSICAL"
INCONCLUSIVE = "INCONCLUSIVE"
NO_EXTENSION = "NO_EXTENSION"
DOMAIN_VIOLATION = "DOMAIN_VIOLATION"


def load_schema() -> dict:
    text = resources.files("qdomain").joinpath("schemas/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def envelope(command: str, result: dict, codes=(), warnings=(), error: str | None = None) -> dict:
    status = "error" if error else ("warning" if codes else "ok")
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "codes": sorted(set(codes)),
        "warnings": list(warnings),
        "result": result,
    }
    if error:
        out["error"] = error
    return out


def _bound(v: float):
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def spec_summary(spec: OperatorSpec) -> dict:
    return {
        "label": spec.label,
        "expression": spec.expression.to_string(),
        "interval": [_bound(spec.interval.lower), _bound(spec.interval.upper)],
        "domain": spec.domain.to_strings(),
        "rapid_decay": spec.rapid_decay,
    }


def classification_result(spec: OperatorSpec, rep: ClassificationReport) -> tuple[dict, list, list]:
    res = {
        "spec": spec_summary(spec),
        "formally_symmetric": rep.formally_symmetric,
        "hermitian": rep.hermitian,
        "self_adjoint": rep.self_adjoint,
        "adjoint_domain": rep.adjoint_domain.to_strings(),
        "maximal_adjoint": rep.maximal_adjoint,
        "everywhere_defined": rep.everywhere_defined,
        "deficiency": list(rep.deficiency) if rep.deficiency is not None else None,
        "spectrum_region": rep.spectrum_region,
        "notes": list(rep.notes),
    }
    codes, warns = [], []
    if not rep.self_adjoint:
        codes.append(NOT_OBSERVABLE)
        warns.append(f"{spec.label} is not self-adjoint and does not represent an observable")
    return res, codes, warns


def deficiency_result(spec: OperatorSpec, res: DeficiencyResult) -> tuple[dict, list, list]:
    sols = []
    for s in res.solutions:
        sols.append({
            "sign": "+" if s.sign > 0 else "-",
            "square_integrable": s.square_integrable,
            "admissible": s.admissible,
            "method": s.method,
            "component": [_bound(s.component[0]), _bound(s.component[1])],
            "endpoints": [
                {"where": w, "verdict": v, "ratios": [float(r) if math.isfinite(r) else repr(float(r)) for r in rs]}
                for w, v, rs in s.endpoint_classification
            ],
        })
    out = {
        "spec": spec_summary(spec),
        "indices": list(res.indices) if res.indices is not None else None,
        "kappa": res.kappa,
        "method": res.method,
        "solutions": sols,
        "notes": list(res.notes),
    }
    codes, warns = [], []
    if res.indices is None:
        codes.append(INCONCLUSIVE)
        warns.extend(res.notes)
    elif res.indices != (0, 0):
        codes.append(NOT_OBSERVABLE)
        warns.append(f"deficiency indices {res.indices}: {spec.label} is not self-adjoint")
    return out, codes, warns


def extensions_result(spec: OperatorSpec, fam: ExtensionFamily | None, reason: str = "") -> tuple[dict, list, list]:
    if fam is None:
        return ({"spec": spec_summary(spec), "exists": False, "reason": reason}, [NO_EXTENSION], [reason])
    out = {
        "spec": spec_summary(spec),
        "exists": True,
        "indices": list(fam.indices),
        "parameter_dimension": fam.parameter_dimension,
        "catalog_name": fam.catalog_name,
        "members": list(fam.members),
    }
    return out, [], []


def spectrum_result(spec: OperatorSpec, eigenvalues, grid_n: int, symmetric: bool,
                    warnings=(), solver: str = "") -> tuple[dict, list, list]:
    ev = np.asarray(eigenvalues)
    if np.iscomplexobj(ev) and np.all(np.abs(ev.imag) <= 1e-12 * max(1.0, float(np.max(np.abs(ev), initial=0.0)))):
        ev = ev.real
    values = [to_jsonable(complex(v)) if np.iscomplexobj(ev) else float(v) for v in ev]
    out = {
        "spec": spec_summary(spec),
        "grid_n": grid_n,
        "symmetric": symmetric,
        "solver": solver,
        "eigenvalues": values,
    }
    codes = [] if symmetric else [NOT_OBSERVABLE]
    return out, codes, list(warnings)


def paradox_result(verdicts: list[ParadoxVerdict], config) -> tuple[dict, list, list]:
    from dataclasses import asdict

    out = {"config": to_jsonable(asdict(config)), "verdicts": [v.to_dict() for v in verdicts]}
    codes, warns = [], []
    for v in verdicts:
        for c in v.claims:
            if c.status == "failed":
                codes.append("CLAIM_FAILED")
                warns.append(f"example {v.example_id}: {c.description}")
            elif c.status == "discrepancy":
                warns.append(f"example {v.example_id}: documented discrepancy: {c.description}")
    return out, codes, warns


def commutator_result(a: OperatorSpec, b: OperatorSpec, ab: OperatorSpec, ba: OperatorSpec,
                      comm: OperatorSpec) -> tuple[dict, list, list]:
    out = {
        "a": spec_summary(a),
        "b": spec_summary(b),
        "ab": spec_summary(ab),
        "ba": spec_summary(ba),
        "commutator": spec_summary(comm),
    }
    return out, [], []


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _yn(v) -> str:
    return "unknown" if v is None else ("yes" if v else "no")


def _text_classify(r: dict) -> list[str]:
    dom = "; ".join(r["adjoint_domain"]) or "maximal (no boundary conditions)"
    d = r["deficiency"]
    return [
        f"Formally symmetric: {_yn(r['formally_symmetric'])}",
        f"Hermitian: {_yn(r['hermitian'])}",
        f"Self-adjoint: {_yn(r['self_adjoint'])}",
        f"Adjoint domain: {dom}",
        f"Deficiency indices: {tuple(d) if d is not None else 'n/a'}",
        f"Spectrum region: {r['spectrum_region'] or 'n/a'}",
    ]


def _text_spec(s: dict) -> list[str]:
    lo, hi = s["interval"]
    return [
        f"Operator: {s['label']}",
        f"Expression: {s['expression']}",
        f"Interval: [{lo}, {hi}]",
        f"Domain: {'; '.join(s['domain']) or 'maximal'}" + (" (rapidly decreasing)" if s["rapid_decay"] else ""),
    ]


def _fmt_value(v) -> str:
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return f"{v['re']:.12g}{v['im']:+.12g}i"
    if isinstance(v, float):
        return f"{v:.12g}"
    return json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else str(v)


def _to_text(p: dict, verdicts: list[ParadoxVerdict] | None = None) -> str:
    cmd, r = p["command"], p["result"]
    if p.get("error"):
        return f"Error: {p['error']}\n"
    lines: list[str] = []
    if "spec" in r:
        lines += _text_spec(r["spec"])
    if cmd == "classify":
        lines += _text_classify(r)
    elif cmd == "commutator":
        for key, name in (("ab", "AB"), ("ba", "BA"), ("commutator", "[A, B]")):
            s = r[key]
            lines.append(f"{name}: {s['expression']}")
            lines.append(f"  domain: {'; '.join(s['domain']) or 'maximal'}")
    elif cmd == "deficiency":
        idx = r["indices"]
        lines.append(f"Deficiency indices: {tuple(idx) if idx is not None else 'inconclusive'}")
        for s in r["solutions"]:
            ends = ", ".join(f"{e['where']}: {e['verdict']}" for e in s["endpoints"]) or "finite ends"
            lines.append(
                f"  {s['sign']}i kappa: square-integrable={_yn(s['square_integrable'])} "
                f"admissible={_yn(s['admissible'])} [{s['method']}] ({ends})"
            )
    elif cmd == "extensions":
        if r["exists"]:
            lines.append(f"Self-adjoint extensions: {r['catalog_name']} ({r['parameter_dimension']} real parameters)")
            lines += [f"  {m}" for m in r["members"]]
        else:
            lines.append(f"Self-adjoint extensions: none ({r['reason']})")
    elif cmd == "spectrum":
        lines.append(f"Grid points: {r['grid_n']}  symmetric: {_yn(r['symmetric'])}  solver: {r['solver']}")
        lines.append("n  E_n")
        lines += [f"{n}  {_fmt_value(v)}" for n, v in enumerate(r["eigenvalues"], 1)]
    elif cmd in ("paradox", "report"):
        if verdicts is not None:
            lines.append(render_text(verdicts).rstrip())
        else:
            for v in r["verdicts"]:
                lines.append(f"Example {v['example_id']}: {v['title']}")
                for c in v["claims"]:
                    lines.append(f"  [{c['status']}] {c['role']}: {c['description']}")
    for c in p["codes"]:
        lines.append(f"Warning code: {c}")
    for w in p["warnings"]:
        lines.append(f"Warning: {w}")
    return "\n".join(lines) + "\n"


def _to_csv(p: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd, r = p["command"], p["result"]
    if p.get("error"):
        w.writerow(["error"])
        w.writerow([p["error"]])
    elif cmd == "spectrum":
        w.writerow(["n", "E_n"])
        for n, v in enumerate(r["eigenvalues"], 1):
            w.writerow([n, _fmt_value(v) if isinstance(v, dict) else repr(float(v))])
    elif cmd in ("paradox", "report"):
        w.writerow(["example_id", "role", "status", "description", "computed", "claimed", "tolerance"])
        for v in r["verdicts"]:
            for c in v["claims"]:
                w.writerow([v["example_id"], c["role"], c["status"], c["description"],
                            _fmt_value(c["computed"]), _fmt_value(c["claimed"]),
                            "" if c["tolerance"] is None else repr(c["tolerance"])])
    elif cmd == "deficiency":
        w.writerow(["sign", "square_integrable", "admissible", "method"])
        for s in r["solutions"]:
            w.writerow([s["sign"], s["square_integrable"], s["admissible"], s["method"]])
    else:
        w.writerow(["key", "value"])
        for k, v in r.items():
            if k == "spec":
                for sk, sv in v.items():
                    w.writerow([f"spec.{sk}", _fmt_value(sv)])
            else:
                w.writerow([k, _fmt_value(v)])
    return buf.getvalue()


def render(payload: dict, fmt: str = "text", verdicts: list[ParadoxVerdict] | None = None) -> str:
    """Render a payload as ``text``, ``json`` or ``csv``."""
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _to_csv(payload)
    if fmt == "text":
        return _to_text(payload, verdicts)
    raise ValueError(f"unknown format {fmt!r}")
