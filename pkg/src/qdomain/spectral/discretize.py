"""Finite-dimensional realisations of operator specs.

The boundary system picks the grid:

* Dirichlet-type ends (``f = 0``, optionally ``f'' = 0``) and truncated
  infinite ends give an open grid with the endpoint values eliminated;
  beyond-endpoint ghosts of fourth-order stencils use the odd reflection
  that ``f = f'' = 0`` implies.
* Robin or Neumann ends of second-order expressions give a closed grid with
  ghost points fixed by the boundary relation.
* Ends without conditions (maximal domain) use one-sided stencils.
* Quasi-periodic systems give a periodic grid with Fourier differentiation,
  twisted by the boundary phase.

Matrices act on the coordinates ``sqrt(w) f`` so that the grid inner product
is the Euclidean one and Hermitian operators become Hermitian matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from ..operator_core import OperatorSpec, classify, jet_index
from .grid import Grid, truncated

__all__ = ["DiscretizedOperator", "discretize", "boundary_layout", "UnsupportedBoundary"]

HERMITIAN_TOL = 1e-13
NOT_PHYSICAL = "discrete eigenvalues of a non-self-adjoint spec are not physically meaningful"

# centred stencils as {offset: weight} (in units of h**-k)
_CENTRED = {
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}


class UnsupportedBoundary(ValueError):
    """The boundary system has no discretisation rule."""


EndKind = Literal["dirichlet", "simply_supported", "robin", "free", "truncated"]


@dataclass(frozen=True)
class _Layout:
    topology: str
    ends: tuple[EndKind, EndKind]
    robin: tuple[complex, complex]  # f' = -beta f at a Robin end
    twist: complex | None  # f(lower) = twist * f(upper)


def _single_end(spec: OperatorSpec, end: int) -> list[dict[int, complex]]:
    """Functionals touching only ``end``, as ``{k: coefficient}``."""
    out = []
    for fn in spec.domain:
        refs = fn.references()
        if all(e == end for e, _ in refs):
            v = fn.vector()
            out.append({k: complex(v[jet_index(end, k)]) for _, k in refs})
    return out


def _twist(spec: OperatorSpec) -> complex | None:
    order = spec.expression.order
    fns = list(spec.domain)
    if order == 0 or len(fns) != order:
        return None
    seen: dict[int, complex] = {}
    for fn in fns:
        refs = sorted(fn.references())
        if len(refs) != 2 or refs[0][1] != refs[1][1] or (refs[0][0], refs[1][0]) != (0, 1):
            return None
        k = refs[0][1]
        v = fn.vector()
        lo, hi = complex(v[jet_index(0, k)]), complex(v[jet_index(1, k)])
        seen[k] = -hi / lo
    if sorted(seen) != list(range(order)):
        return None
    ws = list(seen.values())
    if any(abs(w - ws[0]) > 1e-12 for w in ws) or abs(abs(ws[0]) - 1.0) > 1e-12:
        return None
    return ws[0]


def boundary_layout(spec: OperatorSpec) -> _Layout:
    """Classify the boundary system into one of the supported layouts."""
    order = spec.expression.order
    w = _twist(spec)
    if w is not None:
        if not spec.interval.is_finite:
            raise UnsupportedBoundary("quasi-periodic conditions need a finite interval")
        return _Layout("periodic", ("free", "free"), (0j, 0j), w)
    n_single = 0
    kinds: list[EndKind] = []
    betas = []
    for end in (0, 1):
        beta = 0j
        if not spec.interval.finite(end):
            kinds.append("truncated")
            betas.append(beta)
            continue
        fns = _single_end(spec, end)
        n_single += len(fns)
        ks = sorted(k for fn in fns for k in fn)
        pure = all(len(fn) == 1 for fn in fns)
        if not fns:
            kind = "free"
        elif pure and ks == [0] and order <= 2:
            kind = "dirichlet"
        elif pure and ks == [0, 2] and order <= 4:
            kind = "simply_supported"
        elif len(fns) == 1 and order == 2 and set(ks) <= {0, 1} and 1 in ks:
            kind = "robin"
            beta = fns[0].get(0, 0j) / fns[0][1]
        else:
            raise UnsupportedBoundary(
                f"no discretisation rule for the conditions at the {'lower' if end == 0 else 'upper'} end"
            )
        kinds.append(kind)
        betas.append(beta)
    if n_single != len(spec.domain):
        raise UnsupportedBoundary("conditions coupling both ends are supported only in quasi-periodic form")
    open_kinds = {"dirichlet", "simply_supported", "truncated"}
    if set(kinds) <= open_kinds:
        if order >= 3 and "dirichlet" in kinds:
            raise UnsupportedBoundary("fourth-order stencils need f = f'' = 0 at Dirichlet-type ends")
        return _Layout("open", tuple(kinds), tuple(betas), None)
    if set(kinds) <= {"robin", "free"}:
        return _Layout("closed", tuple(kinds), tuple(betas), None)
    raise UnsupportedBoundary(f"cannot mix end conditions {kinds[0]} and {kinds[1]} on one grid")


@dataclass(frozen=True, eq=False)
class DiscretizedOperator:
    """Matrix realisation of a spec on a grid.

    Attributes
    ----------
    matrix : scipy.sparse.csr_matrix or numpy.ndarray
        Acts on ``sqrt(w) f``; dense for periodic (Fourier) grids.
    symmetric : bool
        True only when the spec is self-adjoint and the matrix is Hermitian
        to ``1e-13`` relative.
    warnings : tuple of str
    """

    spec: OperatorSpec
    grid: Grid
    matrix: object
    symmetric: bool
    hermitian_defect: float
    warnings: tuple[str, ...] = ()

    def dense(self) -> np.ndarray:
        m = self.matrix
        return m.toarray() if sp.issparse(m) else np.asarray(m)

    @property
    def bandwidth(self) -> int:
        m = sp.coo_matrix(self.matrix)
        return int(np.max(np.abs(m.row - m.col))) if m.nnz else 0

    def apply(self, samples: np.ndarray) -> np.ndarray:
        """Apply the operator to function samples on the grid."""
        s = np.sqrt(self.grid.weights)
        return (self.matrix @ (s * np.asarray(samples, dtype=complex))) / s


def _fd_weights(offsets: np.ndarray, k: int) -> np.ndarray:
    """Finite-difference weights for ``d^k/dx^k`` at offset 0 (unit spacing)."""
    p = len(offsets)
    v = np.vander(offsets.astype(float), p, increasing=True).T
    rhs = np.zeros(p)
    rhs[k] = math.factorial(k)
    return np.linalg.solve(v, rhs)


def _open_derivative(n: int, h: float, k: int, ends) -> sp.csr_matrix:
    """``d^k`` on interior points, endpoint values zero, odd reflection beyond."""
    rows, cols, vals = [], [], []
    top = n + 1
    for j in range(1, n + 1):
        for off, wgt in _CENTRED[k].items():
            g = j + off
            sign = 1.0
            if g < 0:
                if ends[0] not in ("simply_supported", "truncated"):
                    raise UnsupportedBoundary("stencil reaches beyond a Dirichlet end")
                g, sign = -g, -1.0
            elif g > top:
                if ends[1] not in ("simply_supported", "truncated"):
                    raise UnsupportedBoundary("stencil reaches beyond a Dirichlet end")
                g, sign = 2 * top - g, -1.0
            if g == 0 or g == top:
                continue
            rows.append(j - 1)
            cols.append(g - 1)
            vals.append(sign * wgt / h**k)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _closed_derivative(n: int, h: float, k: int, ends, betas) -> sp.csr_matrix:
    """``d^k`` on a closed grid; Robin ghosts or one-sided stencils at the ends."""
    mat = sp.lil_matrix((n, n), dtype=complex)
    r = 1 if k <= 2 else 2
    for j in range(n):
        if r <= j <= n - 1 - r:
            for off, wgt in _CENTRED[k].items():
                mat[j, j + off] += wgt / h**k
            continue
        end = 0 if j < r else 1
        if ends[end] == "robin":
            # ghost from (f_1 - f_-1)/2h = -beta f_0 and its mirror image
            beta = betas[end]
            for off, wgt in _CENTRED[k].items():
                g = j + off
                c = wgt / h**k
                if g == -1:
                    mat[j, 1] += c
                    mat[j, 0] += 2 * h * beta * c
                elif g == n:
                    mat[j, n - 2] += c
                    mat[j, n - 1] += -2 * h * beta * c
                else:
                    mat[j, g] += c
            continue
        p = k + 2
        s = min(max(j - p // 2, 0), n - p)
        offs = np.arange(s, s + p) - j
        for off, wgt in zip(offs, _fd_weights(offs, k)):
            mat[j, j + off] += wgt / h**k
    return mat.tocsr()


def _fourier_derivatives(grid: Grid, twist: complex, order: int) -> list[np.ndarray]:
    """Dense ``d^k`` (``k <= order``) for ``f(lower) = twist * f(upper)``."""
    n, length = grid.n, grid.interval.length
    alpha = cmath.phase(twist)
    kappa = 2 * np.pi * np.fft.fftfreq(n, d=length / n) - alpha / length
    f = np.fft.fft(np.eye(n), axis=0)
    finv = np.conj(f).T / n
    t = np.exp(-1j * alpha * (grid.x - grid.interval.lower) / length)
    out = [np.eye(n, dtype=complex)]
    for k in range(1, order + 1):
        d = finv @ (((1j * kappa) ** k)[:, None] * f)
        out.append(t[:, None] * d * np.conj(t)[None, :])
    return out


def discretize(spec: OperatorSpec, n: int, truncation: float | None = None) -> DiscretizedOperator:
    """Matrix of ``spec`` on ``n`` grid points.

    Parameters
    ----------
    truncation : float, optional
        Required for infinite intervals: infinite ends are cut at
        ``-truncation`` / ``+truncation`` and treated as Dirichlet ends.
    """
    expr = spec.expression
    layout = boundary_layout(spec)
    iv = truncated(spec.interval, truncation)
    grid = Grid(iv, n, layout.topology, truncation if not spec.interval.is_finite else None)
    x = grid.x
    coeffs = [np.asarray(c(x), dtype=complex) for c in expr.coefficients]
    if layout.topology == "periodic":
        ds = _fourier_derivatives(grid, layout.twist, expr.order)
        a = sum(c[:, None] * d for c, d in zip(coeffs, ds))
        a = np.asarray(a, dtype=complex) if np.ndim(a) else np.zeros((n, n), dtype=complex)
    else:
        a = sp.csr_matrix((n, n), dtype=complex)
        for k, c in enumerate(coeffs):
            if not np.any(c):
                continue
            if k == 0:
                d = sp.identity(n, format="csr")
            elif layout.topology == "open":
                d = _open_derivative(n, grid.spacing, k, layout.ends)
            else:
                d = _closed_derivative(n, grid.spacing, k, layout.ends, layout.robin)
            a = a + sp.diags(c) @ d
        if layout.topology == "closed":
            s = np.sqrt(grid.weights)
            a = sp.diags(s) @ a @ sp.diags(1.0 / s)
        a = sp.csr_matrix(a)
    warnings: list[str] = []
    try:
        sa = classify(spec).self_adjoint
    except ValueError as exc:
        sa = False
        warnings.append(str(exc))
    if sa:
        a = 0.5 * (a + a.conj().T)
        if sp.issparse(a):
            a = sp.csr_matrix(a)
    if sp.issparse(a):
        defect_abs = abs(a - a.conj().T).max() if a.nnz else 0.0
        scale = abs(a).max() if a.nnz else 0.0
    else:
        defect_abs = float(np.max(np.abs(a - a.conj().T)))
        scale = float(np.max(np.abs(a)))
    defect = float(defect_abs / scale) if scale else 0.0
    symmetric = bool(sa and defect <= HERMITIAN_TOL)
    if not sa:
        warnings.append(NOT_PHYSICAL)
    if truncation is not None and not spec.interval.is_finite:
        warnings.append(f"infinite ends truncated at |x| = {truncation:g}")
    return DiscretizedOperator(spec, grid, a, symmetric, defect, tuple(warnings))
