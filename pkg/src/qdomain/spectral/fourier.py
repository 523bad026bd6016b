"""Unitary Fourier transform on uniform grids and the Weyl relation."""

from __future__ import annotations

import math

import numpy as np

from ..operator_core import ExtendedInterval
from .grid import Grid, WaveFunction

__all__ = ["fourier_transform", "momentum_grid", "weyl_check", "unitary_dft_eigenvalues"]


def momentum_grid(grid: Grid, hbar: float = 1.0) -> Grid:
    """Periodic grid of the ``N`` momenta ``2 pi hbar k / (N h)``, ``k`` centred on 0."""
    n, h = grid.n, grid.spacing
    dp = 2 * math.pi * hbar / (n * h)
    p0 = -(n // 2) * dp
    return Grid(ExtendedInterval(p0, p0 + n * dp), n, "periodic")


def fourier_transform(psi: WaveFunction, hbar: float = 1.0) -> WaveFunction:
    """``(F psi)(p) = (2 pi hbar)^(-1/2) int psi(x) exp(-i p x / hbar) dx`` on the grid.

    The rectangle rule makes the map exactly unitary between the grid inner
    products, so Parseval holds to rounding.

    Raises
    ------
    ValueError
        For closed grids, whose trapezoid weights are not uniform.
    """
    grid = psi.grid
    if not grid.uniform_weights:
        raise ValueError("the transform needs a uniform-weight (open or periodic) grid")
    n, h, x0 = grid.n, grid.spacing, grid.x[0]
    pg = momentum_grid(grid, hbar)
    p = np.fft.fftshift(2 * math.pi * hbar * np.fft.fftfreq(n, d=h))
    spec = np.fft.fftshift(np.fft.fft(psi.samples))
    vals = h / math.sqrt(2 * math.pi * hbar) * np.exp(-1j * p * x0 / hbar) * spec
    return WaveFunction(pg, vals)


def weyl_check(a: float, b: float, psi: WaveFunction, hbar: float = 1.0) -> float:
    """``|U_a V_b psi - e^{-iab/hbar} V_b U_a psi|`` on a periodic grid.

    ``U_a`` multiplies by ``exp(-i a x / hbar)``, ``V_b`` translates by ``b``.

    Raises
    ------
    ValueError
        If the grid is not periodic, ``b`` is not a multiple of the spacing,
        or ``U_a`` is not single-valued on the circle (``a L / (2 pi hbar)``
        not an integer).
    """
    grid = psi.grid
    if grid.topology != "periodic":
        raise ValueError("the Weyl check needs a periodic grid")
    m = b / grid.spacing
    if abs(m - round(m)) > 1e-9:
        raise ValueError(f"b={b:g} is not a multiple of the grid spacing {grid.spacing:g}")
    winding = a * grid.interval.length / (2 * math.pi * hbar)
    if abs(winding - round(winding)) > 1e-9:
        raise ValueError(f"a={a:g} is incompatible with the period: a L/(2 pi hbar) = {winding:g}")
    m = int(round(m))
    u = np.exp(-1j * a * grid.x / hbar)

    def shift(v):
        return np.roll(v, m)

    lhs = u * shift(psi.samples)
    rhs = np.exp(-1j * a * b / hbar) * shift(u * psi.samples)
    d = lhs - rhs
    return math.sqrt(float(np.sum(grid.weights * np.abs(d) ** 2)))


def unitary_dft_eigenvalues(n: int) -> np.ndarray:
    """Eigenvalues of the unitary ``n``-point DFT, all in ``{1, -1, i, -i}``."""
    f = np.fft.fft(np.eye(n)) / math.sqrt(n)
    return np.linalg.eigvals(f)
