"""Deficiency indices, self-adjoint extensions and spectrum regions.

The indices of a Hermitian spec are ``n_+- = dim Ker(L^dagger -+ i kappa)``
inside the adjoint domain. Solutions of ``L^dagger phi = lambda phi`` come
from a closed-form catalog when one applies (constant coefficients, the
``PQ^n + Q^n P`` family) and from numerical integration otherwise.
Square-integrability at an infinite or singular end is decided from the
``|phi|^2`` mass of consecutive dyadic shells (see
:func:`qdomain.quadrature.classify_shells`).

Half-plane convention: ``(0, q)`` with ``q > 0`` maps to the closed upper
half-plane and ``(p, 0)`` with ``p > 0`` to the closed lower half-plane.
With ``n_+ = 0`` the range of ``A + i kappa`` is dense, so the open lower
half-plane lies in the resolvent set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import logsumexp

from .algebra import Polynomial
from .catalog import dirichlet, neumann, periodic, quasi_periodic, robin
from .functions import AnalyticFunction, poly_exp, pq_deficiency_solution
from .operator_core import (
    JET,
    BoundaryForm,
    DifferentialExpression,
    OperatorSpec,
    adjoint_domain,
    formal_adjoint,
    jet_index,
)
from .quadrature import ShellVerdict, classify_shells, shell_log_masses

__all__ = [
    "DeficiencySolution",
    "DeficiencyResult",
    "ExtensionFamily",
    "NoSelfAdjointExtension",
    "deficiency_indices",
    "self_adjoint_extensions",
    "spectrum_region",
    "point_spectrum_first_order",
    "EPSILON",
    "RTOL",
    "N_SHELLS",
]

EPSILON = 1e-3
RTOL = 1e-10
ATOL = 1e-12
N_SHELLS = 12
N_SHELLS_ORDER2 = 6
JET_TOL = 1e-9

SpectrumRegion = Literal["real_subset", "whole_plane", "closed_upper_half", "closed_lower_half"]


@dataclass(frozen=True)
class NumericSolution:
    """Sampled numeric solution: ``log|phi|`` and ``arg phi`` on nodes."""

    x: np.ndarray
    log_modulus: np.ndarray
    phase: np.ndarray


@dataclass(frozen=True)
class DeficiencySolution:
    """One candidate solution of ``L^dagger phi = sign * i kappa * phi``.

    ``endpoint_classification`` holds ``(where, verdict, ratios)`` per
    infinite or singular end; finite regular ends need no classification.
    ``admissible`` records whether the solution also meets the adjoint
    boundary conditions. Only solutions that are both square-integrable and
    admissible are counted.
    """

    sign: int
    solution: AnalyticFunction | NumericSolution | None
    square_integrable: bool
    endpoint_classification: tuple[tuple[str, ShellVerdict, tuple[float, ...]], ...]
    method: str
    component: tuple[float, float] = (-math.inf, math.inf)
    admissible: bool = True

    @property
    def counted(self) -> bool:
        return self.square_integrable and self.admissible


@dataclass(frozen=True)
class DeficiencyResult:
    indices: tuple[int, int] | None
    solutions: tuple[DeficiencySolution, ...]
    kappa: float
    method: str
    notes: tuple[str, ...] = ()

    @property
    def inconclusive(self) -> bool:
        return self.indices is None


class _Inconclusive(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _components(spec: OperatorSpec) -> list[tuple[float, float]]:
    pts = [spec.interval.lower, *spec.singular_points, spec.interval.upper]
    return list(zip(pts[:-1], pts[1:]))


def _end_kind(spec: OperatorSpec, x: float) -> str:
    if not np.isfinite(x):
        return "infinite"
    lead = spec.expression.leading
    return "singular" if spec.expression.order > 0 and not lead.exact_at(x) else "regular"


def _classify_log_density(
    log_density: Callable[[np.ndarray], np.ndarray], x: float, inward: int, base: float, kind: str
):
    """Shell classification at end ``x`` (``inward`` points into the component)."""
    if kind == "infinite":
        lm = shell_log_masses(log_density, base, -inward, 1.0, N_SHELLS, toward_point=False)
        where = "+inf" if inward < 0 else "-inf"
    else:
        lm = shell_log_masses(log_density, x, inward, EPSILON, N_SHELLS, toward_point=True)
        where = f"x={x:g}"
    c = classify_shells(lm)
    return where, c.verdict, c.ratios


def _null_dim(m: np.ndarray, ncols: int) -> int:
    if m.size == 0 or m.shape[0] == 0:
        return ncols
    s = np.linalg.svd(m, compute_uv=False)
    r = int(np.sum(s > JET_TOL * max(1.0, s[0])))
    return ncols - r


def _constraint_matrix(adj: BoundaryForm, jets: Sequence[np.ndarray]) -> np.ndarray:
    """Rows ``G`` applied to candidate solutions (columns = candidates)."""
    if len(adj) == 0 or not jets:
        return np.zeros((0, len(jets)), dtype=complex)
    gm = adj.matrix()
    cols = []
    for j in jets:
        scale = max(1.0, float(np.nanmax(np.abs(j))))
        cols.append(np.nan_to_num(j) / scale)
    return gm @ np.array(cols).T


def _is_constant(expr: DifferentialExpression) -> bool:
    return all(c.is_constant() for c in expr.coefficients)


def _pq_family(expr: DifferentialExpression) -> int | None:
    """Return ``n`` if ``expr == c (n x^(n-1) + 2 x^n d/dx)`` with ``c = hbar/i``."""
    if expr.order != 1:
        return None
    c1 = expr.coefficient(1)
    nz = [k for k, c in enumerate(c1.coeffs) if c]
    if len(nz) != 1 or nz[0] < 1:
        return None
    n = nz[0]
    h = c1.coeffs[n] / 2
    if h.re != 0 or float(h.im) != -expr.hbar:
        return None
    expected = Polynomial.monomial(n - 1, h * n)
    return n if expr.coefficient(0) == expected else None


# ---------------------------------------------------------------------------
# order one
# ---------------------------------------------------------------------------

def _order1_closed_form(adj: DifferentialExpression, lam: complex, sign: int, kappa: float):
    """Closed-form solution on every component, or ``None``."""
    if _is_constant(adj):
        c1 = complex(adj.coefficient(1).coefficient(0))
        c0 = complex(adj.coefficient(0).coefficient(0))
        r = (lam - c0) / c1
        return lambda comp: poly_exp([([1.0], [0.0, r])], label=f"exp({r:.6g} x)"), "closed_form:constant"
    n = _pq_family(adj)
    if n is not None and n >= 1:
        g = pq_deficiency_solution(n, sign, kappa, adj.hbar)
        return lambda comp: g, f"closed_form:pq{n}"
    return None


def _order1_numeric(adj: DifferentialExpression, lam: complex, comp: tuple[float, float], kinds):
    """Integrate ``u = log phi`` with ``u' = (lam - c0)/c1`` across one component.

    Returns a log-density callable per non-regular end, jets at regular
    ends, and a sampled solution.
    """
    c1, c0 = adj.coefficient(1), adj.coefficient(0)

    def du(x):
        return (lam - c0(x)) / c1(x)

    lo, hi = comp
    if kinds[0] == "singular":
        x0 = lo + EPSILON
    elif kinds[1] == "singular":
        x0 = hi - EPSILON
    elif np.isfinite(lo) and np.isfinite(hi):
        x0 = 0.5 * (lo + hi)
    elif np.isfinite(lo):
        x0 = lo
    elif np.isfinite(hi):
        x0 = hi
    else:
        x0 = 0.0

    def rhs_x(x, y):
        d = du(x)
        return [d.real, d.imag]

    legs = {}
    samples_x, samples_l, samples_p = [np.array([x0])], [np.array([0.0])], [np.array([0.0])]
    for end, x_end, kind in ((0, lo, kinds[0]), (1, hi, kinds[1])):
        direction = -1 if end == 0 else 1
        if kind == "regular":
            if x_end == x0:
                legs[end] = ("jet", 0j)
                continue
            sol = solve_ivp(rhs_x, (x0, x_end), [0.0, 0.0], method="RK45", rtol=RTOL, atol=ATOL)
            if not sol.success:
                raise _Inconclusive(f"integration failed: {sol.message}")
            legs[end] = ("jet", complex(sol.y[0, -1], sol.y[1, -1]))
            samples_x.append(sol.t)
            samples_l.append(sol.y[0])
            samples_p.append(sol.y[1])
        elif kind == "infinite":
            # u in tau = log(d), d = |x - x0| >= 1; first reach d = 1
            s1 = solve_ivp(rhs_x, (x0, x0 + direction), [0.0, 0.0], rtol=RTOL, atol=ATOL)
            y1 = s1.y[:, -1]

            def rhs_tau(tau, y, direction=direction):
                d = math.exp(tau)
                v = du(x0 + direction * d) * direction * d
                return [v.real, v.imag]

            tmax = math.log(2.0 ** (N_SHELLS + 1))
            sol = solve_ivp(rhs_tau, (0.0, tmax), y1, rtol=RTOL, atol=ATOL, dense_output=True)
            if not sol.success:
                raise _Inconclusive(f"integration failed: {sol.message}")

            def logd(x, sol=sol, direction=direction):
                d = np.abs(np.asarray(x) - x0)
                return 2.0 * sol.sol(np.log(d))[0]

            legs[end] = ("shell", logd, x0)
            samples_x.append(x0 + direction * np.exp(sol.t))
            samples_l.append(sol.y[0])
            samples_p.append(sol.y[1])
        else:  # singular finite end: approach the point in tau = log(delta)
            dist0 = abs(x0 - x_end)

            def rhs_tau(tau, y, x_end=x_end, inward=-direction):
                d = math.exp(tau)
                x = x_end + inward * d
                v = du(x) * (x - x_end)
                return [v.real, v.imag]

            t0 = math.log(dist0)
            t1 = math.log(EPSILON * 2.0 ** -(N_SHELLS + 1))
            if t1 >= t0:
                raise _Inconclusive("component too narrow near a singular point")
            sol = solve_ivp(rhs_tau, (t0, t1), [0.0, 0.0], rtol=RTOL, atol=ATOL, dense_output=True)
            if not sol.success:
                raise _Inconclusive(f"integration failed: {sol.message}")

            def logd(x, sol=sol, x_end=x_end):
                d = np.abs(np.asarray(x) - x_end)
                return 2.0 * sol.sol(np.log(d))[0]

            legs[end] = ("point", logd, x_end)
            samples_x.append(x_end - direction * np.exp(sol.t))
            samples_l.append(sol.y[0])
            samples_p.append(sol.y[1])
    x = np.concatenate(samples_x)
    order = np.argsort(x)
    numeric = NumericSolution(x[order], np.concatenate(samples_l)[order], np.concatenate(samples_p)[order])
    return legs, du, numeric


def _solve_order1(spec: OperatorSpec, adj_expr, adj_form, kappa, method, glue):
    counts = []
    solutions: list[DeficiencySolution] = []
    comps = _components(spec)
    for sign in (+1, -1):
        lam = sign * 1j * kappa
        closed = None if method == "numeric" else _order1_closed_form(adj_expr, lam, sign, kappa)
        pieces = []  # (l2, classes, jets-by-end, solution, method)
        for comp in comps:
            kinds = (_end_kind(spec, comp[0]), _end_kind(spec, comp[1]))
            classes = []
            jets: dict[int, np.ndarray] = {}
            if closed is not None:
                g = closed[0](comp)
                tag = closed[1]
                lo, hi = comp
                base = 0.5 * (lo + hi) if np.isfinite(lo) and np.isfinite(hi) else (
                    lo if np.isfinite(lo) else (hi if np.isfinite(hi) else 0.0)
                )
                for end, x_end, kind in ((0, lo, kinds[0]), (1, hi, kinds[1])):
                    inward = 1 if end == 0 else -1
                    if kind == "regular":
                        jets[end] = g.jet(x_end, JET)
                        continue

                    def logd(x, g=g):
                        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                            return 2.0 * g.log_modulus(x)

                    classes.append(_classify_log_density(logd, x_end, inward, base, kind))
                sol_obj = g
            else:
                tag = "numeric:rk45"
                legs, du, sol_obj = _order1_numeric(adj_expr, lam, comp, kinds)
                for end, x_end, kind in ((0, comp[0], kinds[0]), (1, comp[1], kinds[1])):
                    inward = 1 if end == 0 else -1
                    leg = legs[end]
                    if leg[0] == "jet":
                        phi = np.exp(leg[1])
                        d1 = complex(du(x_end))
                        jets[end] = np.array([phi, d1 * phi, np.nan, np.nan], dtype=complex)
                    else:
                        classes.append(_classify_log_density(leg[1], x_end, inward, leg[2], kind))
            verdicts = [c[1] for c in classes]
            if "inconclusive" in verdicts:
                raise _Inconclusive(
                    f"shell ratios inside the ambiguity band at {[c[0] for c in classes if c[1] == 'inconclusive']}"
                )
            l2 = all(v == "convergent" for v in verdicts)
            pieces.append((l2, tuple(classes), jets, sol_obj, tag, comp))

        def full_jet(piece) -> np.ndarray:
            j = np.zeros(2 * JET, dtype=complex)
            comp, jets = piece[5], piece[2]
            for end in (0, 1):
                if end in jets and comp[end] == spec.interval.endpoints[end]:
                    j[JET * end : JET * (end + 1)] = jets[end]
            return j

        if glue or len(pieces) == 1:
            l2 = all(p[0] for p in pieces)
            jet = sum((full_jet(p) for p in pieces), np.zeros(2 * JET, dtype=complex))
            n = 0
            if l2:
                g = _constraint_matrix(adj_form, [jet])
                n = _null_dim(g, 1)
            classes = tuple(c for p in pieces for c in p[1])
            solutions.append(
                DeficiencySolution(
                    sign, pieces[0][3], l2, classes, pieces[0][4],
                    (spec.interval.lower, spec.interval.upper), admissible=(n == 1) or not l2,
                )
            )
        else:
            good = [p for p in pieces if p[0]]
            g = _constraint_matrix(adj_form, [full_jet(p) for p in good])
            n = _null_dim(g, len(good)) if good else 0
            # the constraint may cut the admissible span below the number of L2 pieces
            if n not in (0, len(good)):
                raise _Inconclusive("boundary constraints couple separated components")
            for p in pieces:
                solutions.append(DeficiencySolution(sign, p[3], p[0], p[1], p[4], p[5], admissible=n > 0 or not p[0]))
        counts.append(n)
    return (counts[0], counts[1]), solutions


# ---------------------------------------------------------------------------
# constant coefficients, any order
# ---------------------------------------------------------------------------

def _solve_constant(spec: OperatorSpec, adj_expr, adj_form, kappa):
    coeffs = [complex(c.coefficient(0)) for c in adj_expr.coefficients]
    n = adj_expr.order
    counts = []
    solutions = []
    iv = spec.interval
    for sign in (+1, -1):
        lam = sign * 1j * kappa
        charpoly = np.array(coeffs, dtype=complex)
        charpoly[0] -= lam
        roots = np.roots(charpoly[::-1])
        if len(roots) != n:
            raise _Inconclusive("degenerate characteristic polynomial")
        # repeated roots need x^j exp(r x) factors
        basis = []
        used: list[complex] = []
        for r in roots:
            mult = sum(1 for u in used if abs(u - r) <= 1e-9 * max(1.0, abs(r)))
            used.append(r)
            basis.append(poly_exp([([0.0] * mult + [1.0], [0.0, r])], max_order=JET, label=f"x^{mult} exp({r:.6g} x)"))
        base = 0.5 * (iv.lower + iv.upper) if iv.is_finite else (
            iv.lower if iv.finite(0) else (iv.upper if iv.finite(1) else 0.0)
        )
        good = []
        records = []
        for g in basis:
            classes = []
            for end, x_end in ((0, iv.lower), (1, iv.upper)):
                if iv.finite(end):
                    continue

                def logd(x, g=g):
                    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                        return 2.0 * g.log_modulus(x)

                classes.append(_classify_log_density(logd, x_end, 1 if end == 0 else -1, base, "infinite"))
            if any(c[1] == "inconclusive" for c in classes):
                raise _Inconclusive("shell ratios inside the ambiguity band")
            l2 = all(c[1] == "convergent" for c in classes)
            jet = np.zeros(2 * JET, dtype=complex)
            for end in (0, 1):
                if iv.finite(end):
                    jet[JET * end : JET * (end + 1)] = g.jet(iv.endpoints[end], JET)
            records.append(DeficiencySolution(sign, g, l2, tuple(classes), "closed_form:constant"))
            if l2:
                good.append(jet)
        gm = _constraint_matrix(adj_form, good)
        k = _null_dim(gm, len(good)) if good else 0
        # records are per basis function; the adjoint conditions keep a k-dimensional span
        seen = 0
        for rec in records:
            if rec.square_integrable:
                rec = replace(rec, admissible=seen < k)
                seen += 1
            solutions.append(rec)
        counts.append(k)
    return (counts[0], counts[1]), solutions


# ---------------------------------------------------------------------------
# order two, numeric
# ---------------------------------------------------------------------------

def _system(adj_expr, lam):
    """First-order system for the 2x2 fundamental matrix (real-split)."""
    c2, c1, c0 = adj_expr.coefficient(2), adj_expr.coefficient(1), adj_expr.coefficient(0)

    def rhs(x, y):
        m = (y[:4] + 1j * y[4:]).reshape(2, 2)
        out = np.empty((2, 2), dtype=complex)
        out[0] = m[1]
        out[1] = (lam - c0(x)) / c2(x) * m[0] - c1(x) / c2(x) * m[1]
        o = out.ravel()
        return np.concatenate([o.real, o.imag])

    return rhs


def _propagate(rhs, x0, x1, m0):
    y0 = np.concatenate([m0.ravel().real, m0.ravel().imag])
    sol = solve_ivp(rhs, (x0, x1), y0, method="RK45", rtol=RTOL, atol=ATOL)
    if not sol.success:
        raise _Inconclusive(f"integration failed: {sol.message}")
    y = sol.y[:, -1]
    return (y[:4] + 1j * y[4:]).reshape(2, 2)


def _shell_masses_from_nodes(nodes: np.ndarray, log_phi: np.ndarray) -> np.ndarray:
    out = []
    for k in range(N_SHELLS_ORDER2):
        lo, hi = 2.0**k, 2.0 ** (k + 1)
        sel = (nodes >= lo - 1e-12) & (nodes <= hi + 1e-12)
        xs, ls = nodes[sel], 2.0 * log_phi[sel]
        h = np.diff(xs)
        out.append(logsumexp(np.logaddexp(ls[:-1], ls[1:]) + np.log(0.5 * h)))
    return np.array(out)


def _step_nodes(rate: Callable[[float], float]) -> np.ndarray:
    """Re-orthonormalisation nodes: each step grows solutions by at most ``e^3``."""
    nodes = [0.0]
    for k in range(-1, N_SHELLS_ORDER2):
        lo, hi = (0.0, 1.0) if k < 0 else (2.0**k, 2.0 ** (k + 1))
        width = hi - lo
        n = max(1, int(math.ceil(width * rate(0.5 * (lo + hi)) / 3.0)))
        n = 1 << int(math.ceil(math.log2(n)))
        nodes.extend(lo + width * np.arange(1, n + 1) / n)
    return np.array(nodes)


def _infinite_end_subspace(rhs, x0, direction, rate):
    """Square-integrable subspace (coefficients at ``x0``) toward an infinite end.

    The fundamental matrix is re-factored as ``Q R`` after every short step.
    The least-growing solution has coefficients ``(R_M ... R_1)^-1 e2``,
    obtained by backward ``R^-1`` products kept in log scale.
    """
    nodes = _step_nodes(lambda d: rate(x0 + direction * d))
    qs = [np.eye(2, dtype=complex)]
    rs = []
    for a, b in zip(nodes[:-1], nodes[1:]):
        q, r = np.linalg.qr(_propagate(rhs, x0 + direction * a, x0 + direction * b, qs[-1]))
        qs.append(q)
        rs.append(r)
    m_last = len(rs)
    # subdominant: W_M = e2, W_m = R_{m+1}^{-1} W_{m+1}; phi(x_m) = Q_m W_m
    w = np.array([0.0, 1.0], dtype=complex)
    scale = 0.0
    log_sub = np.empty(m_last + 1)
    log_sub[m_last] = np.log(abs((qs[m_last] @ w)[0]) + 1e-300)
    for m in range(m_last - 1, -1, -1):
        w = np.linalg.solve(rs[m], w)
        s = np.linalg.norm(w)
        w /= s
        scale += math.log(s)
        log_sub[m] = scale + np.log(abs((qs[m] @ w)[0]) + 1e-300)
    v_sub = w.copy()
    # generic direction e1 forward: phi(x_m) = Q_m R_m ... R_1 e1
    v = np.array([1.0, 0.0], dtype=complex)
    scale = 0.0
    log_dom = np.empty(m_last + 1)
    log_dom[0] = 0.0
    for m in range(m_last):
        v = rs[m] @ v
        s = np.linalg.norm(v)
        v /= s
        scale += math.log(s)
        log_dom[m + 1] = scale + np.log(abs((qs[m + 1] @ v)[0]) + 1e-300)
    c_sub = classify_shells(_shell_masses_from_nodes(nodes, log_sub), run=4)
    c_dom = classify_shells(_shell_masses_from_nodes(nodes, log_dom), run=4)
    where = "+inf" if direction > 0 else "-inf"
    if "inconclusive" in (c_sub.verdict, c_dom.verdict):
        raise _Inconclusive(f"order-2 tail at {where} inside the ambiguity band")
    if c_sub.verdict == "divergent":
        basis = np.zeros((2, 0), dtype=complex)
    elif c_dom.verdict == "convergent":
        basis = np.eye(2, dtype=complex)
    else:
        basis = v_sub.reshape(2, 1)
    return basis, (where, c_sub, c_dom)


def _intersect(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Intersection of two column spaces in C^2."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((2, 0), dtype=complex)
    if a.shape[1] == 2:
        return b
    if b.shape[1] == 2:
        return a
    return a if abs(np.vdot(a[:, 0], b[:, 0])) > 1 - 1e-6 else np.zeros((2, 0), dtype=complex)


def _solve_order2_numeric(spec: OperatorSpec, adj_expr, adj_form, kappa):
    iv = spec.interval
    if spec.singular_points or any(
        iv.finite(e) and _end_kind(spec, iv.endpoints[e]) == "singular" for e in (0, 1)
    ):
        raise _Inconclusive("numeric order-2 path needs a nonvanishing leading coefficient")
    x0 = iv.lower if iv.finite(0) else (iv.upper if iv.finite(1) else 0.0)
    counts, solutions = [], []
    for sign in (+1, -1):
        lam = sign * 1j * kappa
        rhs = _system(adj_expr, lam)
        c2, c1, c0 = (adj_expr.coefficient(k) for k in (2, 1, 0))

        def rate(x, lam=lam):
            a = complex(c2(x))
            return math.sqrt(abs((lam - complex(c0(x))) / a)) + abs(complex(c1(x)) / a) + 1e-3

        space = np.eye(2, dtype=complex)
        tails = []
        for end, direction in ((0, -1), (1, 1)):
            if not iv.finite(end):
                b, info = _infinite_end_subspace(rhs, x0, direction, rate)
                tails.append(info)
                space = _intersect(space, b)
        jets = []
        for col in space.T:
            j = np.full(2 * JET, np.nan, dtype=complex)
            for end in (0, 1):
                if iv.finite(end):
                    xe = iv.endpoints[end]
                    val = col if xe == x0 else _propagate(rhs, x0, xe, np.eye(2, dtype=complex)) @ col
                    j[JET * end : JET * end + 2] = val
            jets.append(j)
        k = _null_dim(_constraint_matrix(adj_form, jets), len(jets)) if jets else 0
        good = tuple((w, "convergent", sub.ratios) for w, sub, _ in tails)
        for i in range(space.shape[1]):
            solutions.append(DeficiencySolution(sign, None, True, good, "numeric:rk45-qr", admissible=i < k))
        # the directions outside the square-integrable subspace
        for _ in range(2 - space.shape[1]):
            bad = tuple(
                (w, c.verdict, c.ratios)
                for w, sub, dom in tails
                for c in ((dom if sub.verdict == "convergent" else sub),)
            )
            solutions.append(DeficiencySolution(sign, None, False, bad, "numeric:rk45-qr", admissible=False))
        counts.append(k)
    return (counts[0], counts[1]), solutions


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

def deficiency_indices(
    spec: OperatorSpec,
    kappa: float = 1.0,
    method: Literal["auto", "closed_form", "numeric"] = "auto",
    glue_singular: bool = True,
) -> DeficiencyResult:
    """Deficiency indices ``(n_+, n_-)`` of a Hermitian spec.

    Parameters
    ----------
    spec : OperatorSpec
        Hermitian operator.
    kappa : float
        Scale of the imaginary eigenvalues ``+- i kappa``.
    method : {"auto", "closed_form", "numeric"}
        ``auto`` uses the closed-form catalog where it applies.
    glue_singular : bool
        With interior singular points the solution on each side is a separate
        candidate. When True, the closed-form solution continued across the
        singular point counts once (square-integrable only if every piece
        is); when False, each piece is counted on its own.

    Returns
    -------
    DeficiencyResult
        ``indices`` is ``None`` when the evidence is inconclusive.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    expr = spec.expression
    adj_expr = formal_adjoint(expr)
    adj_form = adjoint_domain(spec)
    try:
        if expr.order == 0:
            return DeficiencyResult((0, 0), (), kappa, "order_zero",
                                    ("real multiplication: L - i kappa is injective with dense range",))
        if expr.order == 1:
            idx, sols = _solve_order1(spec, adj_expr, adj_form, kappa, method, glue_singular)
            m = sols[0].method if sols else "order1"
            return DeficiencyResult(idx, tuple(sols), kappa, m)
        if _is_constant(expr) and method != "numeric":
            idx, sols = _solve_constant(spec, adj_expr, adj_form, kappa)
            return DeficiencyResult(idx, tuple(sols), kappa, "closed_form:constant")
        if expr.order == 2:
            idx, sols = _solve_order2_numeric(spec, adj_expr, adj_form, kappa)
            return DeficiencyResult(idx, tuple(sols), kappa, "numeric:rk45-qr")
        if method == "numeric":
            raise _Inconclusive("numeric path supports order <= 2")
        raise _Inconclusive(f"no closed form for this order-{expr.order} expression")
    except _Inconclusive as exc:
        band = f"convergent <= 0.75, divergent >= 1.25"
        return DeficiencyResult(None, (), kappa, method, (str(exc), f"band: {band}"))


def spectrum_region(indices: tuple[int, int]) -> SpectrumRegion:
    """Spectrum location implied by the deficiency pair (see module docstring)."""
    p, q = indices
    if p < 0 or q < 0:
        raise ValueError("deficiency indices are non-negative")
    if p == 0 and q == 0:
        return "real_subset"
    if p > 0 and q > 0:
        return "whole_plane"
    return "closed_upper_half" if p == 0 else "closed_lower_half"


class NoSelfAdjointExtension(ValueError):
    """Unequal deficiency indices: no self-adjoint extension exists."""


@dataclass(frozen=True)
class ExtensionFamily:
    """Self-adjoint extensions of a Hermitian spec.

    ``generator`` maps parameters to an :class:`OperatorSpec`. For the
    one-parameter family it takes ``alpha``; for the named catalog it takes
    ``(name, parameter=None)``.
    """

    base_label: str
    indices: tuple[int, int]
    parameter_dimension: int
    generator: Callable[..., OperatorSpec] = field(compare=False)
    catalog_name: str | None = None
    members: tuple[str, ...] = ()


def self_adjoint_extensions(spec: OperatorSpec, kappa: float = 1.0) -> ExtensionFamily:
    """Enumerate self-adjoint extensions.

    Raises
    ------
    NoSelfAdjointExtension
        When ``n_+ != n_-``.
    """
    res = deficiency_indices(spec, kappa)
    if res.indices is None:
        raise ValueError("deficiency indices inconclusive: " + "; ".join(res.notes))
    p, q = res.indices
    if p != q:
        raise NoSelfAdjointExtension(
            f"deficiency indices ({p}, {q}) are unequal: the spectrum fills a closed half-plane "
            "and no self-adjoint extension exists"
        )
    order = spec.expression.order
    if p == 0:
        return ExtensionFamily(spec.label, (0, 0), 0, lambda *args: spec, "trivial", (spec.label,))
    if p == 1 and order == 1 and spec.interval.is_finite:
        def gen(alpha: float) -> OperatorSpec:
            return spec.with_domain(quasi_periodic(alpha), f"{spec.label}[alpha={alpha:g}]")

        return ExtensionFamily(spec.label, (1, 1), 1, gen, "quasi_periodic", ("quasi_periodic(alpha)",))
    if p == 2 and order == 2 and spec.interval.is_finite:
        def gen2(name: str, parameter: float | None = None) -> OperatorSpec:
            if name == "dirichlet":
                dom = dirichlet()
            elif name == "neumann":
                dom = neumann()
            elif name == "periodic":
                dom = periodic(2)
            elif name == "quasi_periodic":
                dom = quasi_periodic(float(parameter or 0.0), 2)
            elif name == "robin":
                dom = robin(float(parameter or 0.0))
            else:
                raise ValueError(f"unknown extension {name!r}")
            tag = name if parameter is None else f"{name}({parameter:g})"
            return spec.with_domain(dom, f"{spec.label}[{tag}]")

        return ExtensionFamily(
            spec.label, (2, 2), 4, gen2, "named_catalog",
            ("dirichlet", "neumann", "periodic", "quasi_periodic(alpha)", "robin(theta)"),
        )
    raise ValueError(f"no extension catalog for indices ({p}, {q}) with an order-{order} expression")


def point_spectrum_first_order(spec: OperatorSpec, z: complex) -> str:
    """Classify ``z`` using the solution of ``L phi = z phi`` on a finite interval.

    Returns ``"eigenvalue_of_spec"`` if ``phi`` satisfies the domain
    conditions, ``"eigenvalue_of_adjoint"`` if it only satisfies the adjoint
    domain conditions, ``"neither"`` otherwise.
    """
    expr = spec.expression
    if expr.order != 1 or not spec.interval.is_finite or not spec.regular:
        raise ValueError("needs a first-order expression on a finite regular interval")
    lo, hi = spec.interval.endpoints
    jet = np.zeros(2 * JET, dtype=complex)
    if _is_constant(expr):
        c1 = complex(expr.coefficient(1).coefficient(0))
        c0 = complex(expr.coefficient(0).coefficient(0))
        r = (z - c0) / c1
        # normalise at the midpoint to keep both endpoint values moderate
        mid = 0.5 * (lo + hi)
        for end, x in ((0, lo), (1, hi)):
            v = np.exp(r * (x - mid))
            jet[JET * end : JET * end + 2] = (v, r * v)
    else:
        c1, c0 = expr.coefficient(1), expr.coefficient(0)

        def rhs(x, y):
            d = (z - c0(x)) / c1(x)
            return [d.real, d.imag]

        mid = 0.5 * (lo + hi)
        for end, x in ((0, lo), (1, hi)):
            s = solve_ivp(rhs, (mid, x), [0.0, 0.0], rtol=RTOL, atol=ATOL)
            u = complex(s.y[0, -1], s.y[1, -1])
            v = np.exp(u)
            jet[JET * end : JET * end + 2] = (v, (z - c0(x)) / c1(x) * v)
    scale = float(np.max(np.abs(jet)))

    def satisfies(form: BoundaryForm) -> bool:
        return all(abs(f(jet)) <= JET_TOL * scale for f in form)

    if satisfies(spec.domain):
        return "eigenvalue_of_spec"
    if satisfies(adjoint_domain(spec)):
        return "eigenvalue_of_adjoint"
    return "neither"
