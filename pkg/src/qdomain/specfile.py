"""Reader and writer for operator spec files.

A spec file is a small INI-like document::

    label = P_dirichlet

    [expression]
    order = 1
    hbar = 1
    c1 = hbar/i
    c0 = 0

    [interval]
    lower = 0
    upper = 1

    [boundary]
    f(a) = 0
    f(b) = 0

``c<k>`` is the polynomial coefficient of ``d^k/dx^k``. Coefficients are
written with integers, decimals, ``x``, ``^``, ``*``, ``/``, ``+``, ``-``,
parentheses and the scalars ``hbar``, ``mass``, ``i``, ``pi``. Boundary lines
are linear relations between endpoint jets ``f(a)``, ``f'(a)``, ``f''(b)``,
``f'''(b)``; an endpoint may also be given by its numeric value, so
``f(0) = exp(i*alpha)*f(1)`` is accepted on ``[0, 1]``. Names such as
``alpha`` are bound in an optional ``[parameters]`` section. The key
``decay = rapid`` inside ``[boundary]`` restricts the domain to rapidly
decreasing functions.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import QI, Polynomial, as_qi
from .operator_core import (
    JET,
    BoundaryForm,
    BoundaryFunctional,
    DifferentialExpression,
    ExtendedInterval,
    OperatorSpec,
)

__all__ = [
    "SpecFileError",
    "SpecSyntaxError",
    "SpecSemanticError",
    "parse_spec",
    "parse_spec_file",
    "emit_spec",
]

SECTIONS = ("expression", "interval", "boundary", "parameters")
ENDPOINT_TOL = 1e-12


class SpecFileError(ValueError):
    """Base class; carries the 1-based line and column of the offending text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 hint: str | None = None, source: str = "<spec>"):
        self.message, self.line, self.column, self.hint, self.source = message, line, column, hint, source
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        text = f"{where}: {message}"
        if hint:
            text += f" (hint: {hint})"
        super().__init__(text)


class SpecSyntaxError(SpecFileError):
    pass


class SpecSemanticError(SpecFileError):
    pass


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<jet>f'{0,3}(?=\s*\())"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()=]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int, source: str) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            c = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SpecSyntaxError(f"unexpected character {text[c]!r}", line, col0 + c, source=source)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), col0 + start))
        pos = m.end()
    toks.append(_Tok("end", "", col0 + len(text)))
    return toks


# ---------------------------------------------------------------------------
# values: polynomial part plus linear jet part
# ---------------------------------------------------------------------------

@dataclass
class _Val:
    poly: Polynomial = field(default_factory=Polynomial)
    jets: dict = field(default_factory=dict)
    exact: bool = True

    @classmethod
    def const(cls, c, exact=True) -> "_Val":
        return cls(Polynomial([c]), {}, exact)

    def constant(self) -> QI | None:
        if self.jets or self.poly.degree > 0:
            return None
        return self.poly.coefficient(0)

    def __add__(self, o: "_Val") -> "_Val":
        jets = dict(self.jets)
        for k, v in o.jets.items():
            jets[k] = jets.get(k, QI()) + v
        return _Val(self.poly + o.poly, {k: v for k, v in jets.items() if v}, self.exact and o.exact)

    def scaled(self, c: QI, exact: bool) -> "_Val":
        return _Val(self.poly * c, {k: v * c for k, v in self.jets.items() if v * c}, self.exact and exact)

    def __neg__(self) -> "_Val":
        return self.scaled(as_qi(-1), True)


class _Parser:
    def __init__(self, toks, line, source, env, interval=None, allow_x=True):
        self.toks, self.i = toks, 0
        self.line, self.source = line, source
        self.env, self.interval, self.allow_x = env, interval, allow_x

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None, hint=None, cls=SpecSyntaxError):
        t = tok or self.tok
        return cls(msg, self.line, t.col, hint, self.source)

    def expect(self, text):
        if self.tok.text != text:
            got = self.tok.text or "end of line"
            raise self.error(f"expected {text!r}, got {got!r}")
        self.i += 1

    def parse(self) -> _Val:
        v = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return v

    def expr(self) -> _Val:
        v = self.term()
        while self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            w = self.term()
            v = v + (w if op == "+" else -w)
        return v

    def term(self) -> _Val:
        v = self.unary()
        while self.tok.text in ("*", "/"):
            op, t = self.tok.text, self.tok
            self.i += 1
            w = self.unary()
            if op == "*":
                v = self._mul(v, w, t)
            else:
                c = w.constant()
                if c is None:
                    raise self.error("can only divide by a constant", t)
                if not c:
                    raise self.error("division by zero", t, cls=SpecSemanticError)
                v = v.scaled(QI(1) / c, w.exact)
        return v

    def _mul(self, v: _Val, w: _Val, t) -> _Val:
        cv, cw = v.constant(), w.constant()
        if cv is not None:
            return w.scaled(cv, v.exact)
        if cw is not None:
            return v.scaled(cw, w.exact)
        if v.jets or w.jets:
            raise self.error("a jet value can only be multiplied by a constant", t)
        return _Val(v.poly * w.poly, {}, v.exact and w.exact)

    def unary(self) -> _Val:
        if self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self) -> _Val:
        base = self.atom()
        if self.tok.text == "^":
            t = self.tok
            self.i += 1
            neg = False
            if self.tok.text == "-":
                neg = True
                self.i += 1
            if self.tok.kind != "num" or not self.tok.text.isdigit():
                raise self.error("exponent must be a non-negative integer literal")
            k = int(self.tok.text)
            self.i += 1
            if base.jets:
                raise self.error("cannot raise a jet value to a power", t)
            c = base.constant()
            if neg:
                if c is None or not c:
                    raise self.error("negative powers need a non-zero constant base", t)
                return _Val.const(QI(1) / _qpow(c, k), base.exact)
            if c is not None:
                return _Val.const(_qpow(c, k), base.exact)
            return _Val(base.poly**k, {}, base.exact)
        return base

    def atom(self) -> _Val:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return _Val.const(Fraction(t.text))
        if t.text == "(":
            self.i += 1
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "jet":
            return self.jet()
        if t.kind == "name":
            self.i += 1
            name = t.text
            if name == "x":
                if not self.allow_x:
                    raise self.error("x is not allowed here", t, "boundary relations only involve endpoint jets")
                return _Val(Polynomial([0, 1]))
            if name == "i":
                return _Val.const(QI(Fraction(0), Fraction(1)))
            if name == "pi":
                return _Val.const(math.pi, exact=False)
            if name == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                c = arg.constant()
                if c is None:
                    raise self.error("exp() needs a constant argument", t)
                z = cmath.exp(complex(c))
                return _Val.const(QI.of(z), exact=False)
            if name in self.env:
                val, exact = self.env[name]
                return _Val.const(val, exact)
            raise self.error(f"unknown name {name!r}", t, "bind it in a [parameters] section", SpecSemanticError)
        got = t.text or "end of line"
        raise self.error(f"unexpected {got!r}")

    def jet(self) -> _Val:
        t = self.tok
        k = len(t.text) - 1
        self.i += 1
        self.expect("(")
        pt = self.tok
        if pt.kind == "name" and pt.text in ("a", "b", "lower", "upper"):
            self.i += 1
            end = 0 if pt.text in ("a", "lower") else 1
        else:
            save = self.allow_x
            self.allow_x = False
            v = self.expr()
            self.allow_x = save
            c = v.constant()
            if c is None or c.im != 0:
                raise self.error("endpoint must be a, b or a real number", pt)
            end = self._match_endpoint(float(c.re), pt)
        self.expect(")")
        iv = self.interval
        if iv is not None and not iv.finite(end):
            side = "lower" if end == 0 else "upper"
            raise self.error(
                f"boundary functional at the infinite {side} endpoint",
                pt,
                "infinite ends carry no jet; drop the condition, decay is checked by domain membership",
                SpecSemanticError,
            )
        return _Val(Polynomial(), {(end, k): as_qi(1)})

    def _match_endpoint(self, x: float, tok) -> int:
        iv = self.interval
        for end in (0, 1):
            e = iv.endpoints[end]
            if math.isfinite(e) and abs(x - e) <= ENDPOINT_TOL * max(1.0, abs(e)):
                return end
        raise self.error(
            f"{x:g} is not an endpoint of [{iv.lower:g}, {iv.upper:g}]",
            tok,
            "use a, b or the numeric value of a finite endpoint",
            SpecSemanticError,
        )


def _qpow(c: QI, k: int) -> QI:
    out = as_qi(1)
    for _ in range(k):
        out = out * c
    return out


# ---------------------------------------------------------------------------
# document structure
# ---------------------------------------------------------------------------

@dataclass
class _Entry:
    key: str | None
    value: str
    line: int
    col: int


def _split(text: str, source: str) -> tuple[dict[str | None, list[_Entry]], dict[str, int]]:
    sections: dict[str | None, list[_Entry]] = {None: []}
    where: dict[str, int] = {}
    current: str | None = None
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        s = body.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise SpecSyntaxError("unterminated section header", n, indent + 1, source=source)
            name = s[1:-1].strip().lower()
            if name not in SECTIONS:
                raise SpecSyntaxError(
                    f"unknown section [{name}]", n, indent + 2, f"sections are {', '.join(SECTIONS)}", source
                )
            if name in where:
                raise SpecSyntaxError(f"duplicate section [{name}]", n, indent + 1, source=source)
            where[name] = n
            current = name
            sections[name] = []
            continue
        if current == "boundary" and not re.match(r"\s*(decay)\s*=", s):
            sections[current].append(_Entry(None, s, n, indent + 1))
            continue
        m = re.match(r"([A-Za-z_][A-Za-z_0-9]*)\s*=\s*", s)
        if not m:
            raise SpecSyntaxError("expected 'key = value'", n, indent + 1, source=source)
        sections.setdefault(current, []).append(_Entry(m.group(1), s[m.end():], n, indent + 1 + m.end()))
    return sections, where


def _keyed(entries: list[_Entry], section: str, allowed, source: str) -> dict[str, _Entry]:
    out: dict[str, _Entry] = {}
    for e in entries:
        if allowed is not None and e.key not in allowed:
            raise SpecSemanticError(
                f"unknown key {e.key!r} in [{section}]", e.line, e.col - len(e.key) - 1 if e.key else e.col,
                f"allowed keys: {', '.join(sorted(allowed))}", source,
            )
        if e.key in out:
            raise SpecSemanticError(f"duplicate key {e.key!r}", e.line, e.col, source=source)
        out[e.key] = e
    return out


def _scalar(e: _Entry, env, source, real=True) -> tuple[QI, bool]:
    v = _Parser(_tokenize(e.value, e.line, e.col, source), e.line, source, env, allow_x=False).parse()
    c = v.constant()
    if c is None:
        raise SpecSemanticError(f"{e.key} must be a constant", e.line, e.col, source=source)
    if real and c.im != 0:
        raise SpecSemanticError(f"{e.key} must be real", e.line, e.col, source=source)
    return c, v.exact


def _bound(e: _Entry, env, source) -> float:
    t = e.value.strip().lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    c, _ = _scalar(e, env, source)
    return float(c.re)


def parse_spec(text: str, source: str = "<spec>") -> OperatorSpec:
    """Parse spec-file text into a validated :class:`OperatorSpec`.

    Raises
    ------
    SpecSyntaxError
        Malformed text; carries line and column.
    SpecSemanticError
        Well-formed text describing an invalid operator, e.g. a boundary
        functional at an infinite endpoint.
    """
    sections, where = _split(text, source)
    for name in ("expression", "interval"):
        if name not in where:
            raise SpecSemanticError(f"missing [{name}] section", None, None, source=source)
    top = _keyed(sections[None], "top level", {"label"}, source)
    label = top["label"].value.strip() if "label" in top else Path(source).stem

    env: dict[str, tuple[QI, bool]] = {}
    for e in sections.get("parameters", []):
        if e.key in ("x", "i", "pi", "exp", "hbar", "mass", "m", "a", "b", "f"):
            raise SpecSemanticError(f"cannot rebind reserved name {e.key!r}", e.line, e.col, source=source)
        env[e.key] = _scalar(e, env, source, real=False)

    ex = _keyed(sections["expression"], "expression",
                {"order", "hbar", "mass"} | {f"c{k}" for k in range(JET + 1)}, source)
    hbar = float(_scalar(ex["hbar"], env, source)[0].re) if "hbar" in ex else 1.0
    mass = float(_scalar(ex["mass"], env, source)[0].re) if "mass" in ex else 1.0
    for k, e in (("hbar", ex.get("hbar")), ("mass", ex.get("mass"))):
        if e is not None and (hbar if k == "hbar" else mass) <= 0:
            raise SpecSemanticError(f"{k} must be positive", e.line, e.col, source=source)
    env.update({"hbar": (as_qi(hbar), True), "mass": (as_qi(mass), True), "m": (as_qi(mass), True)})
    coeffs = [Polynomial() for _ in range(JET + 1)]
    for k in range(JET + 1):
        e = ex.get(f"c{k}")
        if e is None:
            continue
        v = _Parser(_tokenize(e.value, e.line, e.col, source), e.line, source, env).parse()
        coeffs[k] = v.poly
    declared = max((k for k in range(JET + 1) if not coeffs[k].is_zero()), default=0)
    if "order" in ex:
        e = ex["order"]
        try:
            order = int(e.value.strip())
        except ValueError:
            raise SpecSyntaxError("order must be an integer", e.line, e.col, source=source) from None
        if not 0 <= order <= JET:
            raise SpecSemanticError(f"order {order} outside 0..{JET}", e.line, e.col, source=source)
        if order != declared:
            raise SpecSemanticError(
                f"order {order} does not match the highest non-zero coefficient c{declared}",
                e.line, e.col, f"set c{order} or change order to {declared}", source,
            )
    expression = DifferentialExpression(tuple(coeffs[: declared + 1]), hbar, mass)

    iv_entries = _keyed(sections["interval"], "interval", {"lower", "upper"}, source)
    for k in ("lower", "upper"):
        if k not in iv_entries:
            raise SpecSemanticError(f"[interval] needs '{k}'", where["interval"], 1, source=source)
    lo, hi = _bound(iv_entries["lower"], env, source), _bound(iv_entries["upper"], env, source)
    try:
        interval = ExtendedInterval(lo, hi)
    except ValueError as exc:
        e = iv_entries["lower"]
        raise SpecSemanticError(str(exc), e.line, e.col, source=source) from None

    functionals, rapid = [], False
    for e in sections.get("boundary", []):
        if e.key == "decay":
            val = e.value.strip().lower()
            if val not in ("rapid", "none"):
                raise SpecSemanticError("decay must be 'rapid' or 'none'", e.line, e.col, source=source)
            rapid = val == "rapid"
            continue
        toks = _tokenize(e.value, e.line, e.col, source)
        eq = [j for j, t in enumerate(toks) if t.text == "="]
        if len(eq) != 1:
            t = toks[eq[1]] if len(eq) > 1 else toks[-1]
            raise SpecSyntaxError("a boundary relation needs exactly one '='", e.line, t.col, source=source)
        j = eq[0]
        lhs = _Parser(toks[:j] + [_Tok("end", "", toks[j].col)], e.line, source, env, interval, False).parse()
        rhs = _Parser(toks[j + 1 :], e.line, source, env, interval, False).parse()
        rel = lhs + (-rhs)
        if rel.constant() is None and not rel.jets:
            raise SpecSemanticError("boundary relation is not linear in the jets", e.line, e.col, source=source)
        c = rel.poly.coefficient(0) if not rel.poly.is_zero() else QI()
        if c:
            raise SpecSemanticError(
                "inhomogeneous boundary relation", e.line, e.col,
                "domains are linear subspaces; move constants out or set them to zero", source,
            )
        if not rel.jets:
            raise SpecSemanticError("boundary relation reduces to 0 = 0", e.line, e.col, source=source)
        functionals.append((BoundaryFunctional.from_terms(rel.jets, rel.exact), e))
    try:
        domain = BoundaryForm(tuple(f for f, _ in functionals))
    except ValueError as exc:
        e = functionals[-1][1]
        raise SpecSemanticError(str(exc), e.line, e.col, "remove redundant conditions", source) from None
    try:
        return OperatorSpec(label, expression, interval, domain, rapid)
    except ValueError as exc:
        raise SpecSemanticError(str(exc), None, None, source=source) from None


def parse_spec_file(path) -> OperatorSpec:
    path = Path(path)
    return parse_spec(path.read_text(encoding="utf-8"), str(path))


def _bound_text(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v))


def emit_spec(spec: OperatorSpec) -> str:
    """Canonical text for ``spec``; :func:`parse_spec` reads it back to an equal spec."""
    ex = spec.expression
    lines = [f"label = {spec.label}", "", "[expression]", f"order = {ex.order}"]
    lines += [f"hbar = {Fraction(ex.hbar)}", f"mass = {Fraction(ex.mass)}"]
    for k, c in enumerate(ex.coefficients):
        if not c.is_zero():
            lines.append(f"c{k} = {c.to_string()}")
    if ex.is_zero():
        lines.append("c0 = 0")
    lines += ["", "[interval]", f"lower = {_bound_text(spec.interval.lower)}",
              f"upper = {_bound_text(spec.interval.upper)}"]
    if spec.domain.functionals or spec.rapid_decay:
        lines += ["", "[boundary]"]
        if spec.rapid_decay:
            lines.append("decay = rapid")
        lines += spec.domain.to_strings()
    return "\n".join(lines) + "\n"
