"""Expectation values, dispersions and uncertainty products."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..functions import AnalyticFunction, gaussian
from ..operator_core import (
    DifferentialExpression,
    ExtendedInterval,
    OperatorSpec,
    apply,
    apply_exact,
    commutator_spec,
    is_in_domain,
    surface_form,
)
from ..quadrature import gauss_legendre_nodes, PANELS
from .discretize import DiscretizedOperator
from .grid import Grid, WaveFunction

__all__ = [
    "Expectation",
    "UncertaintyReport",
    "DomainError",
    "expectation",
    "squared_norm",
    "inner",
    "tail_cutoff",
    "uncertainty_product",
    "lphi_bound",
    "approximate_eigenfunction",
]

IMAG_TOL = 1e-10
TAIL_LEVEL = 1e-14


class DomainError(ValueError):
    """A state lies outside the domain an operation requires."""


@dataclass(frozen=True)
class Expectation:
    """``<psi, A psi>``; ``formal`` marks a value computed outside ``D(A)``."""

    value: complex
    formal: bool = False
    violation: str | None = None
    imaginary_residue: bool = False
    interval: tuple[float, float] | None = None

    @property
    def real(self) -> float:
        return self.value.real


def tail_cutoff(psi: AnalyticFunction, interval: ExtendedInterval, level: float = TAIL_LEVEL) -> float:
    """Smallest dyadic ``X`` beyond which ``|psi|^2`` stays below ``level`` of its peak."""
    probe = np.linspace(-64.0, 64.0, 8193)
    probe = probe[(probe > interval.lower) & (probe < interval.upper)]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        peak = float(np.nanmax(2 * psi.log_modulus(probe)))
    for k in range(0, 12):
        x = 2.0**k
        pts = np.concatenate([np.linspace(x, 4 * x, 64), -np.linspace(x, 4 * x, 64)])
        pts = pts[(pts > interval.lower) & (pts < interval.upper)]
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            lv = 2 * psi.log_modulus(pts) if len(pts) else np.array([-np.inf])
        if np.all(lv <= peak + math.log(level)):
            return x
    raise ValueError("state does not decay fast enough to truncate the line")


def _nodes(interval: ExtendedInterval, psi: AnalyticFunction, truncation: float | None):
    lo, hi = interval.lower, interval.upper
    if not interval.is_finite:
        x_cut = truncation if truncation is not None else tail_cutoff(psi, interval)
        lo, hi = max(lo, -x_cut), min(hi, x_cut)
    pts = [lo] + sorted(p for p in psi.singular_points if lo < p < hi) + [hi]
    xs, ws = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        x, w = gauss_legendre_nodes(a, b, PANELS)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws), (lo, hi)


def inner(f: AnalyticFunction, g: AnalyticFunction, interval: ExtendedInterval, truncation: float | None = None) -> complex:
    """``<f, g>`` by composite Gauss-Legendre quadrature."""
    x, w, _ = _nodes(interval, f, truncation)
    return complex(np.sum(w * np.conj(f(x)) * g(x)))


def _as_expr(op) -> tuple[DifferentialExpression, OperatorSpec | None]:
    if isinstance(op, OperatorSpec):
        return op.expression, op
    if isinstance(op, DifferentialExpression):
        return op, None
    raise TypeError(f"unsupported operator type {type(op).__name__}")


def expectation(op, psi, interval: ExtendedInterval | None = None, truncation: float | None = None) -> Expectation:
    """``<psi, A psi>`` by quadrature (closed forms) or grid inner product.

    A value computed for a state outside ``D(A)`` is still returned, flagged
    ``formal`` with the failing checks attached.
    """
    if isinstance(op, DiscretizedOperator):
        if not isinstance(psi, WaveFunction):
            psi = WaveFunction.from_function(op.grid, psi)
        val = psi.inner(WaveFunction(op.grid, op.apply(psi.samples)))
        return Expectation(val, imaginary_residue=abs(val.imag) > IMAG_TOL)
    expr, spec = _as_expr(op)
    iv = spec.interval if spec is not None else interval
    if iv is None:
        raise ValueError("an interval is required for a bare expression")
    formal, violation = False, None
    if spec is not None:
        verdict = is_in_domain(spec, psi)
        if verdict.member is False:
            formal, violation = True, f"formal; state not in D({spec.label}): {verdict.summary()}"
    x, w, span = _nodes(iv, psi, truncation)
    val = complex(np.sum(w * np.conj(psi(x)) * apply_exact(expr, psi, x)))
    return Expectation(val, formal, violation, abs(val.imag) > IMAG_TOL, span)


def squared_norm(op, psi: AnalyticFunction, interval: ExtendedInterval | None = None, truncation: float | None = None) -> float:
    """``|A psi|^2`` by quadrature."""
    expr, spec = _as_expr(op)
    iv = spec.interval if spec is not None else interval
    x, w, _ = _nodes(iv, psi, truncation)
    return float(np.sum(w * np.abs(apply_exact(expr, psi, x)) ** 2))


@dataclass(frozen=True)
class UncertaintyReport:
    """Dispersion product against its two lower bounds.

    ``rhs_commutator`` is ``None`` when the state is outside
    ``D(AB) ∩ D(BA)``; ``commutator_formal`` is then the value the
    commutator form would give regardless. ``surface_contribution`` is the
    exact gap ``Phi - <psi, i[A,B] psi>`` from the boundary concomitants.
    """

    delta_a: float
    delta_b: float
    lhs_product: float
    rhs_sesquilinear: float
    rhs_commutator: float | None
    commutator_formal: complex
    sesquilinear: complex
    surface_contribution: complex
    mean_a: float
    mean_b: float
    interval: tuple[float, float]
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.lhs_product >= self.rhs_sesquilinear - 1e-9


def _jet(f: AnalyticFunction, x: float) -> np.ndarray:
    return f.jet(x, 4)


def _endpoint_jets(f: AnalyticFunction, iv: ExtendedInterval) -> np.ndarray:
    out = np.zeros(8, dtype=complex)
    for end in (0, 1):
        if iv.finite(end):
            out[4 * end : 4 * end + 4] = _jet(f, iv.endpoints[end])
    return out


def uncertainty_product(
    a: OperatorSpec, b: OperatorSpec, psi: AnalyticFunction, truncation: float | None = None
) -> UncertaintyReport:
    """Compare ``Delta A * Delta B`` with the sesquilinear and commutator bounds.

    Raises
    ------
    DomainError
        If ``psi`` is outside ``D(A) ∩ D(B)``.
    """
    if a.interval != b.interval:
        raise ValueError("operators must share an interval")
    iv = a.interval
    notes: list[str] = []
    for spec in (a, b):
        verdict = is_in_domain(spec, psi)
        if verdict.member is False:
            raise DomainError(f"state not in D({spec.label}): {verdict.summary()}")
        if verdict.member is None:
            notes.append(f"membership in D({spec.label}) inconclusive")
    x, w, span = _nodes(iv, psi, truncation)
    f = psi(x)
    af = apply_exact(a.expression, psi, x)
    bf = apply_exact(b.expression, psi, x)
    nrm2 = float(np.sum(w * np.abs(f) ** 2))
    mean_a = float(np.sum(w * np.conj(f) * af).real / nrm2)
    mean_b = float(np.sum(w * np.conj(f) * bf).real / nrm2)
    delta_a = math.sqrt(float(np.sum(w * np.abs(af - mean_a * f) ** 2)) / nrm2)
    delta_b = math.sqrt(float(np.sum(w * np.abs(bf - mean_b * f) ** 2)) / nrm2)
    ab = complex(np.sum(w * np.conj(af) * bf))
    phi = (1j * ab - 1j * np.conj(ab)) / nrm2
    # formal <psi, i[A,B] psi> with the composed expressions
    a_psi, b_psi = apply(a.expression, psi), apply(b.expression, psi)
    abf = apply_exact(a.expression, b_psi, x)
    baf = apply_exact(b.expression, a_psi, x)
    comm = complex(1j * np.sum(w * np.conj(f) * (abf - baf))) / nrm2
    s_a = surface_form(a.expression, iv).evaluate(_endpoint_jets(psi, iv), _endpoint_jets(b_psi, iv))
    s_b = surface_form(b.expression, iv).evaluate(_endpoint_jets(psi, iv), _endpoint_jets(a_psi, iv))
    surface = -1j * (s_a - s_b) / nrm2
    rhs_comm = None
    verdict = is_in_domain(commutator_spec(a, b), psi)
    if verdict.member:
        rhs_comm = 0.5 * abs(comm)
    else:
        notes.append(f"state outside D(AB) ∩ D(BA): {verdict.summary()}")
    return UncertaintyReport(
        delta_a,
        delta_b,
        delta_a * delta_b,
        float(0.5 * abs(phi)),
        rhs_comm,
        comm,
        complex(phi),
        complex(surface),
        mean_a,
        mean_b,
        span,
        tuple(notes),
    )


def lphi_bound(psi: AnalyticFunction, hbar: float = 1.0) -> float:
    """``(hbar/2) |1 - 2 pi |psi(2 pi)|^2|`` for a normalised periodic state on ``[0, 2 pi]``."""
    return 0.5 * hbar * abs(1.0 - 2 * math.pi * abs(complex(psi(2 * math.pi))) ** 2)


def approximate_eigenfunction(
    observable: str, center: float, eps: float, grid: Grid, hbar: float = 1.0
) -> tuple[WaveFunction, float]:
    """Normalised Gaussian approximating an eigenvector of ``Q`` or ``P``.

    For ``observable="position"`` the packet of width ``eps`` sits at
    ``x0 = center`` and the residual ``|(Q - x0) psi| / |psi|`` is
    ``eps/sqrt(2)``. For ``"momentum"`` it carries momentum ``p0 = center``
    around the grid midpoint and the residual ``|(P - p0) psi| / |psi|`` is
    ``hbar/(sqrt(2) eps)``.

    Raises
    ------
    ValueError
        If ``eps`` is below twice the grid spacing or the packet does not
        fit inside the grid.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if eps < 2 * grid.spacing:
        raise ValueError(f"eps={eps:g} is below the grid resolution {2 * grid.spacing:g}")
    lo, hi = grid.interval.lower, grid.interval.upper
    if observable == "position":
        x0, p0 = center, 0.0
        if not lo < x0 < hi:
            raise ValueError(f"x0={x0:g} outside the grid")
    elif observable == "momentum":
        x0, p0 = 0.5 * (lo + hi), center
    else:
        raise ValueError(f"unknown observable {observable!r}")
    if min(x0 - lo, hi - x0) < 8.5 * eps:
        raise ValueError("the packet does not fit inside the grid")
    g = gaussian(x0, eps, p0, hbar)
    wf = WaveFunction.from_function(grid, g)
    nrm = wf.norm()
    wf = WaveFunction(grid, wf.samples / nrm, g)
    if observable == "position":
        resid = (grid.x - x0) * wf.samples
    else:
        resid = (hbar / 1j) * g.first(grid.x) / nrm - p0 * wf.samples
    r = math.sqrt(float(np.sum(grid.weights * np.abs(resid) ** 2)))
    return wf, r
