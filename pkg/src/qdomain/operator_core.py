"""Differential expressions, boundary-form domains, adjoints and classification.

Conventions
-----------
* A :class:`DifferentialExpression` ``L = sum_k c_k(x) d^k/dx^k`` stores the
  ``c_k`` as exact Gaussian-rational polynomials, ``k <= 4``.
* Endpoint jets are ordered ``(f(a), f'(a), f''(a), f'''(a), f(b), ..., f'''(b))``
  with ``a`` the lower and ``b`` the upper endpoint; a
  :class:`BoundaryFunctional` is a coefficient vector over this basis.
* Inner products are antilinear in the first slot. The surface form satisfies
  ``<g, L f> - <L^dagger g, f> = S(g, f) = conj(J g) . S . J f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Literal, Sequence

import numpy as np
import scipy.linalg

from .algebra import QI, ZERO, Polynomial, as_qi, nullspace, rank, row_basis
from .functions import AnalyticFunction, SingularPointError
from .quadrature import classify_shells, integrate, shell_log_masses

__all__ = [
    "JET",
    "MAX_ORDER",
    "ExtendedInterval",
    "DifferentialExpression",
    "BoundaryFunctional",
    "BoundaryForm",
    "OperatorSpec",
    "SurfaceForm",
    "ClassificationReport",
    "DomainCheck",
    "DomainVerdict",
    "formal_adjoint",
    "compose",
    "concomitant",
    "surface_form",
    "adjoint_domain",
    "classify",
    "apply_exact",
    "apply",
    "is_in_domain",
    "composite_domain",
    "sum_spec",
    "commutator_spec",
    "jet_index",
]

JET = 4
MAX_ORDER = 4
SUBSPACE_TOL = 1e-12
BOUNDARY_TOL = 1e-9

SpectrumRegion = Literal["real_subset", "whole_plane", "closed_upper_half", "closed_lower_half"]


def jet_index(end: int, k: int) -> int:
    """Position of ``f^(k)`` at endpoint ``end`` (0 = lower, 1 = upper)."""
    if end not in (0, 1) or not 0 <= k < JET:
        raise ValueError(f"invalid jet entry end={end}, k={k}")
    return JET * end + k


# ---------------------------------------------------------------------------
# intervals and expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtendedInterval:
    """Interval ``(lower, upper)`` with possibly infinite ends."""

    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if np.isnan(lo) or np.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo == np.inf or hi == -np.inf:
            raise ValueError("lower must not be +inf and upper must not be -inf")
        if not lo < hi:
            raise ValueError(f"need lower < upper, got [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def endpoints(self) -> tuple[float, float]:
        return (self.lower, self.upper)

    def finite(self, end: int) -> bool:
        return bool(np.isfinite(self.endpoints[end]))

    @property
    def is_finite(self) -> bool:
        return self.finite(0) and self.finite(1)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def singular_flags(self, expr: "DifferentialExpression") -> tuple[bool, bool]:
        """``(lower_singular, upper_singular)`` for the given expression."""
        lead = expr.leading
        out = []
        for end in (0, 1):
            if not self.finite(end):
                out.append(True)
            else:
                out.append(expr.order > 0 and not lead.exact_at(self.endpoints[end]))
        return tuple(out)  # type: ignore[return-value]

    def interior_singular_points(self, expr: "DifferentialExpression") -> tuple[float, ...]:
        if expr.order == 0:
            return ()
        return tuple(r for r in expr.leading.real_roots() if self.lower < r < self.upper)

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def _as_poly(c) -> Polynomial:
    if isinstance(c, Polynomial):
        return c
    if isinstance(c, (list, tuple)):
        return Polynomial(c)
    return Polynomial([c])


@dataclass(frozen=True)
class DifferentialExpression:
    """``sum_k coefficients[k](x) d^k/dx^k`` with exact polynomial coefficients.

    Trailing zero coefficients are trimmed, so ``order`` is the true order.
    The zero expression is represented with a single zero coefficient.
    """

    coefficients: tuple[Polynomial, ...]
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        cs = [_as_poly(c) for c in self.coefficients]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        if not cs:
            cs = [Polynomial()]
        if len(cs) - 1 > MAX_ORDER:
            raise ValueError(f"order {len(cs) - 1} exceeds the supported maximum {MAX_ORDER}")
        if self.hbar <= 0 or self.mass <= 0:
            raise ValueError("hbar and mass must be positive")
        object.__setattr__(self, "coefficients", tuple(cs))
        object.__setattr__(self, "hbar", float(self.hbar))
        object.__setattr__(self, "mass", float(self.mass))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Polynomial:
        return self.coefficients[-1]

    def coefficient(self, k: int) -> Polynomial:
        return self.coefficients[k] if 0 <= k <= self.order else Polynomial()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def _like(self, coeffs) -> "DifferentialExpression":
        return DifferentialExpression(tuple(coeffs), self.hbar, self.mass)

    def __add__(self, other: "DifferentialExpression") -> "DifferentialExpression":
        n = max(self.order, other.order) + 1
        return self._like(self.coefficient(k) + other.coefficient(k) for k in range(n))

    def __sub__(self, other: "DifferentialExpression") -> "DifferentialExpression":
        return self + other.scale(-1)

    def scale(self, s) -> "DifferentialExpression":
        return self._like(c * as_qi(s) for c in self.coefficients)

    def __matmul__(self, other: "DifferentialExpression") -> "DifferentialExpression":
        return compose(self, other)

    def to_string(self) -> str:
        parts = []
        for k, c in enumerate(self.coefficients):
            if c.is_zero():
                continue
            d = "" if k == 0 else (" d/dx" if k == 1 else f" d^{k}/dx^{k}")
            parts.append(f"[{c.to_string()}]{d}")
        return " + ".join(parts) if parts else "0"


def formal_adjoint(expr: DifferentialExpression) -> DifferentialExpression:
    """Lagrange adjoint ``sum_k (-1)^k d^k (conj(c_k) .)`` in coefficient form.

    ``L^dagger = sum_j [sum_{k>=j} (-1)^k C(k, j) conj(c_k)^(k-j)] d^j``.
    """
    n = expr.order
    out = []
    for j in range(n + 1):
        acc = Polynomial()
        for k in range(j, n + 1):
            term = expr.coefficient(k).conjugate().derivative(k - j) * comb(k, j)
            acc = acc + (term if k % 2 == 0 else -term)
        out.append(acc)
    return expr._like(out)


def compose(a: DifferentialExpression, b: DifferentialExpression) -> DifferentialExpression:
    """Product ``a b`` via ``a_k D^k (b_j D^j) = a_k sum_i C(k,i) b_j^(k-i) D^(i+j)``."""
    n = a.order + b.order
    if n > MAX_ORDER:
        raise ValueError(f"composite order {n} exceeds the supported maximum {MAX_ORDER}")
    out = [Polynomial() for _ in range(n + 1)]
    for k, ak in enumerate(a.coefficients):
        if ak.is_zero():
            continue
        for j, bj in enumerate(b.coefficients):
            for i in range(k + 1):
                out[i + j] = out[i + j] + ak * bj.derivative(k - i) * comb(k, i)
    return DifferentialExpression(tuple(out), a.hbar, a.mass)


# ---------------------------------------------------------------------------
# boundary forms
# ---------------------------------------------------------------------------

_JET_NAMES = ("f", "f'", "f''", "f'''")


@dataclass(frozen=True)
class BoundaryFunctional:
    """Linear functional ``sum_i coefficients[i] * jet[i]`` on endpoint jets.

    ``exact`` records whether every coefficient is known exactly (integers or
    rationals) rather than rounded from a transcendental value; it steers the
    choice between exact and tolerance-based rank tests.
    """

    coefficients: tuple[QI, ...]
    exact: bool = field(default=True, compare=False)

    def __post_init__(self):
        cs = tuple(as_qi(c) for c in self.coefficients)
        if len(cs) != 2 * JET:
            raise ValueError(f"boundary functional needs {2 * JET} coefficients, got {len(cs)}")
        if not any(cs):
            raise ValueError("boundary functional must not be identically zero")
        object.__setattr__(self, "coefficients", cs)

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], object], exact: bool = True) -> "BoundaryFunctional":
        """Build from ``{(end, k): coefficient}``."""
        c = [ZERO] * (2 * JET)
        for (end, k), v in terms.items():
            c[jet_index(end, k)] = c[jet_index(end, k)] + as_qi(v)
        return cls(tuple(c), exact)

    def vector(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coefficients])

    def __call__(self, jet: np.ndarray) -> complex:
        return complex(np.dot(self.vector(), jet))

    def references(self) -> list[tuple[int, int]]:
        return [(i // JET, i % JET) for i, c in enumerate(self.coefficients) if c]

    def to_string(self) -> str:
        parts = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            end, k = divmod(i, JET)
            parts.append(f"({c.to_string()})*{_JET_NAMES[k]}({'ab'[end]})")
        return " + ".join(parts) + " = 0"


@dataclass(frozen=True)
class BoundaryForm:
    """A system of linearly independent boundary functionals.

    The empty system denotes the maximal domain.
    """

    functionals: tuple[BoundaryFunctional, ...] = ()

    def __post_init__(self):
        fs = tuple(self.functionals)
        object.__setattr__(self, "functionals", fs)
        if len(fs) > 2 * JET:
            raise ValueError("more functionals than jet dimensions")
        if fs and _rank_of(fs) != len(fs):
            raise ValueError("boundary functionals are linearly dependent")

    def __len__(self) -> int:
        return len(self.functionals)

    def __iter__(self):
        return iter(self.functionals)

    @property
    def exact(self) -> bool:
        return all(f.exact for f in self.functionals)

    def matrix(self) -> np.ndarray:
        if not self.functionals:
            return np.zeros((0, 2 * JET), dtype=complex)
        return np.array([f.vector() for f in self.functionals])

    def rows(self) -> list[list[QI]]:
        return [list(f.coefficients) for f in self.functionals]

    @classmethod
    def spanning(cls, functionals: Iterable[BoundaryFunctional]) -> "BoundaryForm":
        """Form spanned by possibly dependent functionals (a row basis is kept)."""
        fs = list(functionals)
        if not fs:
            return cls(())
        if all(f.exact for f in fs):
            basis = row_basis([list(f.coefficients) for f in fs], 2 * JET)
            return cls(tuple(BoundaryFunctional(tuple(r), True) for r in basis))
        m = np.array([f.vector() for f in fs])
        basis = _numeric_row_basis(m)
        return cls(tuple(BoundaryFunctional(tuple(QI.of(complex(v)) for v in r), False) for r in basis))

    def same_subspace(self, other: "BoundaryForm") -> bool:
        """True when both systems span the same row space."""
        if len(self) != len(other):
            return False
        if not self.functionals:
            return True
        both = self.functionals + other.functionals
        return _rank_of(both) == len(self)

    def to_strings(self) -> list[str]:
        return [f.to_string() for f in self.functionals]


def _rank_of(fs: Sequence[BoundaryFunctional]) -> int:
    if all(f.exact for f in fs):
        return rank([list(f.coefficients) for f in fs], 2 * JET)
    m = np.array([f.vector() for f in fs])
    return _numeric_rank(m)


def _numeric_rank(m: np.ndarray, tol: float = SUBSPACE_TOL) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def _numeric_row_basis(m: np.ndarray, tol: float = SUBSPACE_TOL) -> np.ndarray:
    if m.size == 0:
        return np.zeros((0, m.shape[1]), dtype=complex)
    u, s, vh = np.linalg.svd(m)
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return vh[:r]


@dataclass(frozen=True)
class OperatorSpec:
    """An operator: expression, interval and domain boundary conditions.

    ``rapid_decay`` additionally restricts the domain to functions whose
    polynomially weighted moduli stay bounded (a Schwartz-type condition that
    boundary forms cannot express).
    """

    label: str
    expression: DifferentialExpression
    interval: ExtendedInterval
    domain: BoundaryForm = BoundaryForm()
    rapid_decay: bool = False

    def __post_init__(self):
        for f in self.domain:
            for end, k in f.references():
                if not self.interval.finite(end):
                    raise ValueError(
                        f"boundary functional references {_JET_NAMES[k]} at the infinite "
                        f"{'lower' if end == 0 else 'upper'} endpoint; decay at infinity is "
                        "decided by square-integrability, remove the condition"
                    )

    @property
    def lower_singular(self) -> bool:
        return self.interval.singular_flags(self.expression)[0]

    @property
    def upper_singular(self) -> bool:
        return self.interval.singular_flags(self.expression)[1]

    @property
    def singular_points(self) -> tuple[float, ...]:
        return self.interval.interior_singular_points(self.expression)

    @property
    def regular(self) -> bool:
        """Finite interval, no singular endpoint, no interior singular point."""
        return not (self.lower_singular or self.upper_singular or self.singular_points)

    def with_domain(self, domain: BoundaryForm, label: str | None = None) -> "OperatorSpec":
        return OperatorSpec(label or self.label, self.expression, self.interval, domain, self.rapid_decay)


# ---------------------------------------------------------------------------
# surface form and adjoint domain
# ---------------------------------------------------------------------------

def concomitant(expr: DifferentialExpression) -> list[list[Polynomial]]:
    """Polynomial matrix ``M`` of the boundary concomitant.

    ``B(g, f)(x) = sum_{i,l} conj(g^(i)(x)) M[i][l](x) f^(l)(x)`` with
    ``B = sum_k sum_{j<k} (-1)^j (c_k conj g)^(j) f^(k-1-j)``.
    """
    m = [[Polynomial() for _ in range(JET)] for _ in range(JET)]
    for k in range(1, expr.order + 1):
        ck = expr.coefficient(k)
        for j in range(k):
            l = k - 1 - j
            for i in range(j + 1):
                term = ck.derivative(j - i) * comb(j, i)
                m[i][l] = m[i][l] + (term if j % 2 == 0 else -term)
    return m


@dataclass(frozen=True)
class SurfaceForm:
    """Sesquilinear form ``S(g, f) = conj(Jg) . matrix . Jf`` on 8-entry jets."""

    matrix: tuple[tuple[QI, ...], ...]

    def numeric(self) -> np.ndarray:
        return np.array([[complex(v) for v in row] for row in self.matrix])

    def evaluate(self, g_jet: np.ndarray, f_jet: np.ndarray) -> complex:
        g = np.nan_to_num(np.asarray(g_jet, dtype=complex))
        f = np.nan_to_num(np.asarray(f_jet, dtype=complex))
        return complex(np.conj(g) @ self.numeric() @ f)

    def is_zero(self) -> bool:
        return not any(v for row in self.matrix for v in row)


def surface_form(expr: DifferentialExpression, interval: ExtendedInterval) -> SurfaceForm:
    """Boundary concomitant evaluated from ``lower`` to ``upper``.

    Infinite endpoints contribute nothing.
    """
    m = concomitant(expr)
    s = [[ZERO] * (2 * JET) for _ in range(2 * JET)]
    for end, sign in ((0, -1), (1, 1)):
        if not interval.finite(end):
            continue
        x = interval.endpoints[end]
        for i in range(JET):
            for l in range(JET):
                v = m[i][l].exact_at(x)
                if v:
                    s[JET * end + i][JET * end + l] = v if sign > 0 else -v
    return SurfaceForm(tuple(tuple(r) for r in s))


def _active(spec: OperatorSpec) -> list[int]:
    return [
        jet_index(end, k)
        for end in (0, 1)
        if spec.interval.finite(end)
        for k in range(min(spec.expression.order, JET))
    ]


@dataclass(frozen=True)
class _JetAnalysis:
    active: tuple[int, ...]
    f_dim: int
    adjoint: BoundaryForm
    hermitian_on_jets: bool
    jet_self_adjoint: bool


def _jet_analysis(spec: OperatorSpec) -> _JetAnalysis:
    act = _active(spec)
    na = len(act)
    s_full = surface_form(spec.expression, spec.interval)
    if na == 0:
        return _JetAnalysis((), 0, BoundaryForm(()), True, True)
    if spec.domain.exact:
        rows = spec.domain.rows()
        null = nullspace(rows, 2 * JET)
        fvecs = [[v[i] for i in act] for v in null]
        fbasis = [list(r) for r in row_basis(fvecs, na)] if fvecs else []
        f_dim = len(fbasis)
        s_act = [[s_full.matrix[i][j] for j in act] for i in act]
        grows = []
        for v in fbasis:
            sv = [sum((s_act[i][j] * v[j] for j in range(na)), ZERO) for i in range(na)]
            grows.append([c.conjugate() for c in sv])
        gbasis = row_basis(grows, na) if grows else []
        herm = all(
            not sum((r[i] * w[i] for i in range(na)), ZERO) for r in gbasis for w in fbasis
        )
        sa = herm and len(gbasis) == na - f_dim
        funcs = []
        for r in gbasis:
            c = [ZERO] * (2 * JET)
            for pos, i in enumerate(act):
                c[i] = r[pos]
            funcs.append(BoundaryFunctional(tuple(c), True))
        return _JetAnalysis(tuple(act), f_dim, BoundaryForm(tuple(funcs)), herm, sa)

    c = spec.domain.matrix()
    null = scipy.linalg.null_space(c, rcond=SUBSPACE_TOL) if c.size else np.eye(2 * JET)
    fproj = null[act, :]
    fb = scipy.linalg.orth(fproj, rcond=SUBSPACE_TOL) if fproj.size else np.zeros((na, 0))
    f_dim = fb.shape[1]
    s_act = s_full.numeric()[np.ix_(act, act)]
    scale = max(1.0, float(np.max(np.abs(s_act))))
    g = (s_act @ fb).conj().T
    gb = _numeric_row_basis(g / scale) if g.size else np.zeros((0, na))
    herm = bool(np.max(np.abs(fb.conj().T @ s_act @ fb), initial=0.0) <= SUBSPACE_TOL * scale * 10)
    sa = herm and gb.shape[0] == na - f_dim
    funcs = []
    for r in gb:
        full = np.zeros(2 * JET, dtype=complex)
        full[act] = r
        funcs.append(BoundaryFunctional(tuple(QI.of(complex(v)) for v in full), False))
    return _JetAnalysis(tuple(act), f_dim, BoundaryForm(tuple(funcs)), herm, sa)


def adjoint_domain(spec: OperatorSpec) -> BoundaryForm:
    """Largest boundary system on ``g`` annihilating ``S(g, f)`` for all ``f`` in the domain.

    An empty result means the adjoint acts on the maximal domain.
    """
    return _jet_analysis(spec).adjoint


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationReport:
    """Verdicts for one operator spec.

    ``deficiency`` and ``spectrum_region`` are ``None`` when the spec is not
    Hermitian or the deficiency computation was inconclusive.
    """

    label: str
    formally_symmetric: bool
    hermitian: bool
    self_adjoint: bool
    adjoint_domain: BoundaryForm
    deficiency: tuple[int, int] | None
    spectrum_region: SpectrumRegion | None
    maximal_adjoint: bool
    everywhere_defined: bool
    notes: tuple[str, ...] = ()


def _check_leading(expr: DifferentialExpression) -> None:
    n = expr.order
    lead = expr.leading.conjugate()
    if n % 2:
        lead = -lead
    if lead != expr.leading:
        raise ValueError(
            f"leading coefficient {expr.leading.to_string()} of an order-{n} expression is not "
            f"formally symmetric: need conj(c_{n}) = {'-' if n % 2 else ''}c_{n}"
        )


def classify(spec: OperatorSpec, kappa: float = 1.0) -> ClassificationReport:
    """Hermitian / self-adjoint classification with deficiency indices.

    Raises
    ------
    ValueError
        If the leading coefficient cannot belong to a formally symmetric
        expression.
    """
    from .deficiency import deficiency_indices, spectrum_region

    expr = spec.expression
    _check_leading(expr)
    sym = formal_adjoint(expr) == expr
    jets = _jet_analysis(spec)
    herm = sym and jets.hermitian_on_jets
    notes: list[str] = []
    deficiency = None
    region = None
    sa = False
    if not sym:
        notes.append("expression is not formally symmetric")
    elif not herm:
        notes.append("surface form does not vanish on the domain")
    else:
        res = deficiency_indices(spec, kappa)
        if res.inconclusive:
            notes.append("deficiency indices inconclusive: " + "; ".join(res.notes))
            sa = jets.jet_self_adjoint and spec.regular
        else:
            deficiency = res.indices
            region = spectrum_region(deficiency)
            sa = jets.jet_self_adjoint and deficiency == (0, 0)
            if jets.jet_self_adjoint and deficiency != (0, 0):
                notes.append("endpoint jets balance but singular behaviour leaves nonzero deficiency")
    maximal = herm and len(jets.adjoint) == 0 and jets.f_dim < len(jets.active)
    if maximal:
        notes.append("maximal-domain adjoint: no boundary condition survives on the adjoint")
    everywhere = expr.order == 0 and (spec.interval.is_finite or expr.leading.is_constant())
    return ClassificationReport(
        spec.label, sym, herm, sa, jets.adjoint, deficiency, region, maximal, everywhere, tuple(notes)
    )


# ---------------------------------------------------------------------------
# pointwise application
# ---------------------------------------------------------------------------

def apply_exact(expr: DifferentialExpression, f: AnalyticFunction, x):
    """``sum_k c_k(x) f^(k)(x)`` using the analytic derivatives of ``f``."""
    if expr.order > f.max_order:
        raise ValueError(f"function provides {f.max_order} derivatives, expression needs {expr.order}")
    x = np.asarray(x, dtype=float)
    acc = np.zeros(x.shape, dtype=complex)
    for k, c in enumerate(expr.coefficients):
        if not c.is_zero():
            acc = acc + c(x) * f.derivative(k, x)
    return acc if acc.ndim else complex(acc)


def apply(expr: DifferentialExpression, f: AnalyticFunction) -> AnalyticFunction:
    """``L f`` as an :class:`AnalyticFunction` (Leibniz rule for its derivatives)."""
    n = f.max_order - expr.order
    if n < 0:
        raise ValueError(f"function provides {f.max_order} derivatives, expression needs {expr.order}")
    cderivs = [[c.derivative(j) for j in range(n + 1)] for c in expr.coefficients]

    def make(m: int):
        def g(x):
            x = np.asarray(x, dtype=float)
            acc = np.zeros(x.shape, dtype=complex)
            for k, cd in enumerate(cderivs):
                for i in range(m + 1):
                    p = cd[m - i]
                    if not p.is_zero():
                        acc = acc + comb(m, i) * p(x) * f.derivatives[k + i](x)
            return acc if acc.ndim else complex(acc)

        return g

    return AnalyticFunction(
        tuple(make(m) for m in range(n + 1)), f.singular_points, f"({f.label} under L)"
    )


# ---------------------------------------------------------------------------
# domain membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainCheck:
    name: str
    passed: bool | None
    residual: float
    detail: str = ""


@dataclass(frozen=True)
class DomainVerdict:
    """``member`` is ``None`` when some check was inconclusive."""

    member: bool | None
    checks: tuple[DomainCheck, ...]

    def failed(self) -> list[DomainCheck]:
        return [c for c in self.checks if c.passed is False]

    def summary(self) -> str:
        if self.member:
            return "in domain"
        bad = self.failed()
        if bad:
            return "not in domain: " + "; ".join(f"{c.name} ({c.detail})" for c in bad)
        return "membership inconclusive"


def _grid_jet(x: np.ndarray, y: np.ndarray, end: int, npts: int = 8, deg: int = 5) -> np.ndarray:
    """One-sided polynomial-fit jet of sampled data at an endpoint."""
    if end == 0:
        xs, ys, x0 = x[:npts], y[:npts], x[0]
    else:
        xs, ys, x0 = x[-npts:], y[-npts:], x[-1]
    deg = min(deg, len(xs) - 1)
    jet = np.zeros(JET, dtype=complex)
    pr = np.polynomial.Polynomial.fit(xs - x0, ys.real, deg)
    pi = np.polynomial.Polynomial.fit(xs - x0, ys.imag, deg)
    for k in range(JET):
        jet[k] = pr.deriv(k)(0.0) + 1j * pi.deriv(k)(0.0) if k else pr(0.0) + 1j * pi(0.0)
    return jet


def _endpoint_jets(spec: OperatorSpec, f) -> np.ndarray:
    jets = np.zeros(2 * JET, dtype=complex)
    for end in (0, 1):
        if not spec.interval.finite(end):
            continue
        if isinstance(f, AnalyticFunction):
            jets[JET * end : JET * (end + 1)] = f.jet(spec.interval.endpoints[end], JET)
        else:
            x, y = f
            jets[JET * end : JET * (end + 1)] = _grid_jet(np.asarray(x), np.asarray(y), end)
    return jets


def _rapid_decay_check(f: AnalyticFunction, interval: ExtendedInterval, max_weight: int = 6) -> DomainCheck:
    """Sample ``|x^k f(x)|`` at dyadic points; it must not grow toward infinity."""
    worst = 0.0
    detail = ""
    for end, sgn in ((0, -1.0), (1, 1.0)):
        if interval.finite(end):
            continue
        xs = sgn * 2.0 ** np.arange(0, 13)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            lf = f.log_modulus(xs)
        for k in range(max_weight + 1):
            s = k * np.log(np.abs(xs)) + lf
            growth = float(s[-1] - s[-5])
            if growth > worst:
                worst = growth
                detail = f"|x^{k} f| grows by a factor {np.exp(growth):.3g} from |x|={abs(xs[-5]):g} to {abs(xs[-1]):g}"
    return DomainCheck("rapid_decay", worst <= 0.0, float(np.exp(worst)) if worst else 0.0, detail or "weighted moduli decrease")


def _l2_check(name: str, g: AnalyticFunction, spec: OperatorSpec) -> DomainCheck:
    iv = spec.interval
    special = sorted(set(p for p in g.singular_points if iv.lower < p < iv.upper) | set(spec.singular_points))
    verdicts = []

    def log_density(x):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return 2.0 * g.log_modulus(x)

    for end, sgn in ((0, -1), (1, 1)):
        if not iv.finite(end):
            anchor = 0.0
            start = max(1.0, 2.0 * max(abs(p) for p in [*special, iv.endpoints[1 - end] if iv.finite(1 - end) else 0.0]))
            lm = shell_log_masses(log_density, anchor, sgn, start, 12, toward_point=False)
            verdicts.append((f"{'-' if sgn < 0 else '+'}inf", classify_shells(lm)))
    for p in special:
        for sgn in (-1, 1):
            lm = shell_log_masses(log_density, p, sgn, 0.5, 12, toward_point=True)
            verdicts.append((f"x={p:g}{'-' if sgn < 0 else '+'}", classify_shells(lm)))
    bad = [w for w, c in verdicts if c.verdict == "divergent"]
    unsure = [w for w, c in verdicts if c.verdict == "inconclusive"]
    # bulk integral on the truncated core
    lo = iv.lower if iv.finite(0) else -64.0
    hi = iv.upper if iv.finite(1) else 64.0
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            mass = float(np.real(integrate(lambda x: np.abs(g(x)) ** 2, lo, hi, breakpoints=tuple(special))))
    except SingularPointError:
        mass = float("nan")
    if bad or not np.isfinite(mass):
        return DomainCheck(name, False, mass, "not square-integrable near " + ", ".join(bad or ["core"]))
    if unsure:
        return DomainCheck(name, None, mass, "tail classification inconclusive near " + ", ".join(unsure))
    return DomainCheck(name, True, mass, "square-integrable")


def is_in_domain(spec: OperatorSpec, f, tol: float = BOUNDARY_TOL) -> DomainVerdict:
    """Check membership of ``f`` in the domain of ``spec``.

    Parameters
    ----------
    f : AnalyticFunction or tuple of arrays
        Closed form, or ``(x, samples)`` on a grid covering the interval.
    """
    checks: list[DomainCheck] = []
    iv = spec.interval
    needs_jets = any(True for _ in spec.domain)
    jets = None
    if needs_jets:
        try:
            jets = _endpoint_jets(spec, f)
        except SingularPointError as exc:
            checks.append(DomainCheck("boundary", None, float("nan"), str(exc)))
    if jets is not None:
        scale = max(1.0, float(np.nanmax(np.abs(jets))) if np.any(np.isfinite(jets)) else 1.0)
        for fn in spec.domain:
            used = [jet_index(e, k) for e, k in fn.references()]
            if np.any(np.isnan(jets[used])):
                checks.append(DomainCheck(f"boundary: {fn.to_string()}", None, float("nan"), "derivative unavailable"))
                continue
            r = abs(fn(np.nan_to_num(jets))) / scale
            checks.append(DomainCheck(f"boundary: {fn.to_string()}", r <= tol, r, f"residual {r:.3g}"))
    if isinstance(f, AnalyticFunction):
        checks.append(_l2_check("f square-integrable", f, spec))
        if f.max_order >= spec.expression.order:
            checks.append(_l2_check("Lf square-integrable", apply(spec.expression, f), spec))
        else:
            checks.append(DomainCheck("Lf square-integrable", None, float("nan"), "not enough derivatives"))
        if spec.rapid_decay and not iv.is_finite:
            checks.append(_rapid_decay_check(f, iv))
    else:
        x, y = (np.asarray(v) for v in f)
        mass = float(np.trapezoid(np.abs(y) ** 2, x))
        checks.append(DomainCheck("f square-integrable", bool(np.isfinite(mass)), mass, "grid trapezoid"))
    states = [c.passed for c in checks]
    member = False if False in states else (None if None in states else True)
    return DomainVerdict(member, tuple(checks))


# ---------------------------------------------------------------------------
# composite domains
# ---------------------------------------------------------------------------

def _jet_map(b: DifferentialExpression, interval: ExtendedInterval) -> tuple[list[list[QI]], set[int]]:
    """Matrix ``T`` with ``J(Bf) = T J(f)`` plus the rows needing ``f^(m)``, ``m >= 4``."""
    t = [[ZERO] * (2 * JET) for _ in range(2 * JET)]
    overflow: set[int] = set()
    for end in (0, 1):
        if not interval.finite(end):
            continue
        x = interval.endpoints[end]
        for k in range(JET):
            row = JET * end + k
            for j, bj in enumerate(b.coefficients):
                for i in range(k + 1):
                    c = bj.derivative(k - i).exact_at(x) * comb(k, i)
                    if not c:
                        continue
                    if i + j >= JET:
                        overflow.add(row)
                    else:
                        t[row][JET * end + i + j] = t[row][JET * end + i + j] + c
    return t, overflow


def composite_domain(a: OperatorSpec, b: OperatorSpec, label: str | None = None) -> OperatorSpec:
    """Spec of ``AB`` on ``{f in D(B) : Bf in D(A)}``."""
    if a.interval != b.interval:
        raise ValueError("composite operators need a common interval")
    t, overflow = _jet_map(b.expression, a.interval)
    pulled = []
    for fn in a.domain:
        row = [ZERO] * (2 * JET)
        for i, c in enumerate(fn.coefficients):
            if not c:
                continue
            if i in overflow:
                raise ValueError("composite domain needs endpoint derivatives beyond the third")
            for jdx in range(2 * JET):
                row[jdx] = row[jdx] + c * t[i][jdx]
        # an identically vanishing pull-back holds for every f
        if any(row):
            pulled.append(BoundaryFunctional(tuple(row), fn.exact))
    dom = BoundaryForm.spanning([*b.domain, *pulled])
    return OperatorSpec(
        label or f"({a.label})({b.label})",
        compose(a.expression, b.expression),
        a.interval,
        dom,
        a.rapid_decay or b.rapid_decay,
    )


def sum_spec(a: OperatorSpec, b: OperatorSpec, label: str | None = None, sign: int = 1) -> OperatorSpec:
    """Spec of ``A + sign*B`` on ``D(A) ∩ D(B)``."""
    if a.interval != b.interval:
        raise ValueError("sum of operators needs a common interval")
    expr = a.expression + b.expression.scale(sign)
    return OperatorSpec(
        label or f"{a.label}{'+' if sign > 0 else '-'}{b.label}",
        expr,
        a.interval,
        BoundaryForm.spanning([*a.domain, *b.domain]),
        a.rapid_decay or b.rapid_decay,
    )


def commutator_spec(a: OperatorSpec, b: OperatorSpec) -> OperatorSpec:
    """Spec of ``[A, B] = AB - BA`` on ``D(AB) ∩ D(BA)``."""
    return sum_spec(composite_domain(a, b), composite_domain(b, a), f"[{a.label},{b.label}]", sign=-1)
