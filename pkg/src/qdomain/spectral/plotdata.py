"""Two-column ``x value`` text files for plotting."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .grid import WaveFunction

__all__ = ["write_xy", "write_wavefunction", "write_ladder", "write_residuals"]


def write_xy(path, x, y, header: str = "") -> Path:
    path = Path(path)
    data = np.column_stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
    np.savetxt(path, data, fmt="%.17g", header=header, comments="# ")
    return path


def write_wavefunction(path, psi: WaveFunction, part: str = "density") -> Path:
    """``part`` is one of ``density``, ``real``, ``imag``, ``abs``."""
    s = psi.samples
    values = {"density": np.abs(s) ** 2, "real": s.real, "imag": s.imag, "abs": np.abs(s)}
    if part not in values:
        raise ValueError(f"unknown part {part!r}")
    return write_xy(path, psi.x, values[part], f"x {part}")


def write_ladder(path, eigenvalues) -> Path:
    ev = np.asarray(eigenvalues, dtype=float)
    return write_xy(path, np.arange(1, len(ev) + 1), ev, "n E_n")


def write_residuals(path, eps, residuals) -> Path:
    return write_xy(path, eps, residuals, "eps residual")
