"""Uniform grids and sampled wave functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..functions import AnalyticFunction
from ..operator_core import ExtendedInterval

__all__ = ["Topology", "Grid", "WaveFunction", "truncated"]

Topology = Literal["open", "closed", "periodic"]


def truncated(interval: ExtendedInterval, cutoff: float | None) -> ExtendedInterval:
    """Clip infinite ends of ``interval`` to ``[-cutoff, cutoff]``."""
    if interval.is_finite:
        return interval
    if cutoff is None:
        raise ValueError(
            f"interval [{interval.lower}, {interval.upper}] is infinite; pass a truncation cutoff"
        )
    if cutoff <= 0:
        raise ValueError("truncation cutoff must be positive")
    lo = interval.lower if interval.finite(0) else -float(cutoff)
    hi = interval.upper if interval.finite(1) else float(cutoff)
    return ExtendedInterval(lo, hi)


@dataclass(frozen=True)
class Grid:
    """Uniform grid on a finite interval.

    ``open`` grids hold the ``n`` interior points of ``n + 1`` equal cells,
    ``closed`` grids include both endpoints, and ``periodic`` grids include
    the lower endpoint only.

    Attributes
    ----------
    truncation : float or None
        Cutoff used to make an infinite interval finite, for the record.
    """

    interval: ExtendedInterval
    n: int
    topology: Topology = "open"
    truncation: float | None = None
    x: np.ndarray = field(init=False, repr=False, compare=False)
    spacing: float = field(init=False)

    def __post_init__(self):
        iv = self.interval
        if not iv.is_finite:
            raise ValueError("grids need a finite interval; truncate infinite ends first")
        if self.topology not in ("open", "closed", "periodic"):
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.n < 2:
            raise ValueError("a grid needs at least 2 points")
        length = iv.length
        if self.topology == "open":
            h = length / (self.n + 1)
            x = iv.lower + h * np.arange(1, self.n + 1)
        elif self.topology == "closed":
            h = length / (self.n - 1)
            x = iv.lower + h * np.arange(self.n)
        else:
            h = length / self.n
            x = iv.lower + h * np.arange(self.n)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "spacing", h)

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights: trapezoid on closed grids, uniform otherwise."""
        w = np.full(self.n, self.spacing)
        if self.topology == "closed":
            w[0] = w[-1] = 0.5 * self.spacing
        return w

    @property
    def uniform_weights(self) -> bool:
        return self.topology != "closed"

    @classmethod
    def for_interval(
        cls,
        interval: ExtendedInterval,
        n: int,
        topology: Topology = "open",
        truncation: float | None = None,
    ) -> "Grid":
        iv = truncated(interval, truncation)
        return cls(iv, n, topology, truncation if not interval.is_finite else None)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex samples on a grid, optionally tagged with their closed form."""

    grid: Grid
    samples: np.ndarray
    source: AnalyticFunction | None = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("wave function samples must be finite")
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid: Grid, f: AnalyticFunction) -> "WaveFunction":
        return cls(grid, np.asarray(f(grid.x), dtype=complex), f)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def inner(self, other: "WaveFunction") -> complex:
        """``<self, other>``, antilinear in ``self``."""
        if other.grid is not self.grid and other.grid != self.grid:
            raise ValueError("inner product of wave functions on different grids")
        return complex(np.sum(self.grid.weights * np.conj(self.samples) * other.samples))

    def norm(self) -> float:
        return math.sqrt(max(self.inner(self).real, 0.0))

    def normalized(self) -> "WaveFunction":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalise the zero function")
        return WaveFunction(self.grid, self.samples / nrm, self.source)

    def coordinates(self) -> np.ndarray:
        """Samples scaled by ``sqrt(weights)``: the grid inner product becomes the l2 one."""
        return np.sqrt(self.grid.weights) * self.samples

    @classmethod
    def from_coordinates(cls, grid: Grid, y: np.ndarray) -> "WaveFunction":
        return cls(grid, np.asarray(y) / np.sqrt(grid.weights))
