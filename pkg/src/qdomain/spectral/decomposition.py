"""Eigendecompositions, functions of operators and spectral moments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ..functions import AnalyticFunction
from ..quadrature import integrate
from .discretize import DiscretizedOperator
from .grid import Grid, WaveFunction

__all__ = [
    "NonSymmetricOperator",
    "EigensolverError",
    "SpectralDecomposition",
    "SpectralFunction",
    "MomentEstimate",
    "eigendecompose",
    "operator_function",
    "moment_via_spectrum",
    "NORMALIZATION_TOL",
]

NORMALIZATION_TOL = 1e-10
TRUNCATION_WARN = 1e-6
SIGNIFICANT = 1e-12


class NonSymmetricOperator(ValueError):
    """Raised when asked to eigendecompose a matrix not flagged symmetric."""


class EigensolverError(RuntimeError):
    pass


State = WaveFunction | AnalyticFunction


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues plus a way to project states on the eigenvectors.

    Grid decompositions carry eigenvector samples (columns of ``vectors``,
    orthonormal in the grid inner product). Closed-form decompositions carry
    ``amplitude_fn`` and ``norm_fn`` instead.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray | None = None
    grid: Grid | None = None
    amplitude_fn: Callable[[State], np.ndarray] | None = None
    norm_fn: Callable[[State], float] | None = None
    label: str = ""

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def _samples(self, psi: State) -> np.ndarray:
        if isinstance(psi, WaveFunction):
            if psi.grid != self.grid:
                raise ValueError("state lives on a different grid")
            return psi.samples
        return np.asarray(psi(self.grid.x), dtype=complex)

    def amplitudes(self, psi: State) -> np.ndarray:
        """``<phi_n, psi>`` for every stored eigenvector."""
        if self.vectors is None:
            return np.asarray(self.amplitude_fn(psi))
        w = self.grid.weights
        return np.conj(self.vectors).T @ (w * self._samples(psi))

    def weights(self, psi: State) -> np.ndarray:
        """Projector weights ``p_n = |<phi_n, psi>|^2``."""
        return np.abs(self.amplitudes(psi)) ** 2

    def norm_squared(self, psi: State) -> float:
        if self.vectors is None:
            return float(self.norm_fn(psi)) ** 2
        s = self._samples(psi)
        return float(np.sum(self.grid.weights * np.abs(s) ** 2))

    def gram(self) -> np.ndarray:
        if self.vectors is None:
            raise ValueError("closed-form decomposition has no stored vectors")
        v = self.vectors
        return np.conj(v).T @ (self.grid.weights[:, None] * v)

    def project(self, n: int, psi: State) -> WaveFunction:
        """``P_n psi`` on the grid."""
        if self.vectors is None:
            raise ValueError("closed-form decomposition has no stored vectors")
        a = self.amplitudes(psi)[n]
        return WaveFunction(self.grid, a * self.vectors[:, n])


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Make the first significant component positive real."""
    idx = int(np.argmax(np.abs(v) > 1e-8 * np.max(np.abs(v))))
    return v * (abs(v[idx]) / v[idx])


def _banded_upper(m: sp.spmatrix, b: int) -> np.ndarray:
    n = m.shape[0]
    ab = np.zeros((b + 1, n), dtype=complex)
    coo = sp.triu(m).tocoo()
    ab[b + coo.row - coo.col, coo.col] = coo.data
    return ab


def eigendecompose(
    op: DiscretizedOperator, k: int, which: str = "smallest"
) -> SpectralDecomposition:
    """``k`` eigenpairs of a symmetric discretisation.

    Parameters
    ----------
    which : {"smallest", "magnitude"}
        Lowest eigenvalues, or those closest to zero (for operators like
        ``P`` whose spectrum is unbounded below).

    Raises
    ------
    NonSymmetricOperator
        If ``op.symmetric`` is false; its warnings are attached.
    EigensolverError
        If LAPACK fails to converge.
    """
    if not op.symmetric:
        raise NonSymmetricOperator(
            f"{op.spec.label}: refusing to eigendecompose a non-symmetric discretisation ("
            + "; ".join(op.warnings)
            + ")"
        )
    n = op.grid.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    if which not in ("smallest", "magnitude"):
        raise ValueError(f"unknown selection {which!r}")
    subset = (0, k - 1) if which == "smallest" else None
    try:
        if sp.issparse(op.matrix) and op.bandwidth <= 4:
            b = max(op.bandwidth, 1)
            ab = _banded_upper(op.matrix, b)
            if np.all(ab.imag == 0):
                ab = ab.real
            if subset:
                vals, vecs = scipy.linalg.eig_banded(ab, select="i", select_range=subset)
            else:
                vals, vecs = scipy.linalg.eig_banded(ab)
        else:
            vals, vecs = scipy.linalg.eigh(op.dense(), subset_by_index=subset)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"eigensolver failed for {op.spec.label}: {exc}") from exc
    if which == "magnitude":
        keep = np.sort(np.argsort(np.abs(vals), kind="stable")[:k])
        vals, vecs = vals[keep], vecs[:, keep]
    vecs = np.column_stack([_fix_phase(vecs[:, j].astype(complex)) for j in range(vecs.shape[1])])
    scale = max(1.0, float(np.max(np.abs(vals))))
    order = sorted(
        range(len(vals)),
        key=lambda j: (round(float(vals[j]) / (1e-10 * scale)), tuple(-np.round(vecs[:, j].real, 12))),
    )
    vals, vecs = vals[order], vecs[:, order]
    samples = vecs / np.sqrt(op.grid.weights)[:, None]
    return SpectralDecomposition(np.asarray(vals, dtype=float), samples, op.grid, label=op.spec.label)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """``f(A)`` as mapped eigenvalues over the projectors of ``A``."""

    decomposition: SpectralDecomposition
    values: np.ndarray

    def expectation(self, psi: State) -> float:
        """``sum_n f(E_n) p_n``."""
        return float(np.sum(self.values * self.decomposition.weights(psi)))

    def truncation_residual(self, psi: State) -> float:
        """``|psi|^2 - sum_n p_n``: weight outside the stored eigenvectors."""
        d = self.decomposition
        return d.norm_squared(psi) - float(np.sum(d.weights(psi)))

    def apply(self, psi: State) -> WaveFunction:
        d = self.decomposition
        if d.vectors is None:
            raise ValueError("applying f(A) needs a grid decomposition")
        return WaveFunction(d.grid, d.vectors @ (self.values * d.amplitudes(psi)))

    def warning(self, psi: State, threshold: float = TRUNCATION_WARN) -> str | None:
        r = self.truncation_residual(psi)
        if abs(r) > threshold:
            return f"truncation residual {r:.3g} exceeds {threshold:g}"
        return None

    def matrix(self) -> np.ndarray:
        """Matrix on the grid coordinates ``sqrt(w) f``."""
        d = self.decomposition
        if d.vectors is None:
            raise ValueError("closed-form decomposition has no matrix")
        y = d.vectors * np.sqrt(d.grid.weights)[:, None]
        return (y * self.values[None, :]) @ np.conj(y).T


def operator_function(dec: SpectralDecomposition, f: Callable[[np.ndarray], np.ndarray]) -> SpectralFunction:
    """Spectral form of ``f(A)``: same projectors, eigenvalues ``f(E_n)``."""
    vals = np.asarray(f(np.asarray(dec.eigenvalues)), dtype=float)
    if vals.shape != dec.eigenvalues.shape:
        vals = np.broadcast_to(vals, dec.eigenvalues.shape).astype(float)
    return SpectralFunction(dec, vals)


@dataclass(frozen=True)
class MomentEstimate:
    """Partial sum ``sum_{n <= n_terms} E_n^power p_n`` and an estimate of the rest.

    The tail extrapolates the power law ``E_n^power p_n ~ C n^-s`` fitted to
    the last terms; ``decay_exponent`` is ``s``.
    """

    value: float
    tail: float
    n_terms: int
    decay_exponent: float

    @property
    def total(self) -> float:
        return self.value + self.tail


def _tail(terms: np.ndarray) -> tuple[float, float]:
    """Power-law envelope ``C n^-s`` fitted to the significant terms of the upper half.

    Terms that vanish by symmetry (e.g. every other one) are skipped; their
    effect enters through the mean gap between significant indices.
    """
    n = len(terms)
    idx = np.arange(1, n + 1)
    upper = idx > n // 2
    big = upper & (np.abs(terms) > SIGNIFICANT * np.max(np.abs(terms[upper]), initial=0.0))
    if np.count_nonzero(big) < 3:
        return 0.0, float("inf")
    ns, ts = idx[big], np.abs(terms[big])
    slope, logc = np.polyfit(np.log(ns), np.log(ts), 1)
    s = -float(slope)
    if s <= 1.0:
        return float("inf"), s
    gap = (ns[-1] - ns[0]) / (len(ns) - 1)
    start = ns[-1] + 0.5 * gap
    return float(math.exp(logc) * start ** (1.0 - s) / ((s - 1.0) * gap)), s


def moment_via_spectrum(
    dec: SpectralDecomposition, psi: State, power: int, n_max: int | None = None
) -> MomentEstimate:
    """``sum_{n <= n_max} E_n^power p_n`` with a tail estimate.

    Raises
    ------
    ValueError
        If ``psi`` is not normalised to within ``1e-10``.
    """
    nrm = dec.norm_squared(psi)
    if abs(nrm - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"state must be normalised (|psi|^2 = {nrm:.12g})")
    n = len(dec) if n_max is None else min(n_max, len(dec))
    p = dec.weights(psi)[:n]
    terms = dec.eigenvalues[:n] ** power * p
    tail, s = _tail(terms)
    return MomentEstimate(float(np.sum(terms)), tail, n, s)


def closed_form_norm(f: AnalyticFunction, lower: float, upper: float) -> float:
    return math.sqrt(float(np.real(integrate(lambda x: np.abs(f(x)) ** 2, lower, upper))))
