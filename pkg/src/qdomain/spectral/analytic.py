"""Closed-form spectra: infinite well, ``L_z`` on the circle, twisted momentum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.fft

from ..functions import AnalyticFunction, circle_mode, poly_exp
from .decomposition import SpectralDecomposition, closed_form_norm

__all__ = ["AnalyticSpectrum", "analytic_spectrum", "well_decomposition", "CATALOG"]

DST_POINTS = 2**17


@dataclass(frozen=True, eq=False)
class AnalyticSpectrum:
    """Eigenvalue formula and eigenfunctions indexed by quantum number.

    ``indices`` describes the admissible quantum numbers: ``"positive"``
    (``n >= 1``) or ``"integer"``.
    """

    key: str
    params: dict = field(default_factory=dict)
    eigenvalue: Callable[[int], float] = None
    eigenfunction: Callable[[int], AnalyticFunction] = None
    indices: str = "integer"

    def _check(self, n: int) -> None:
        if int(n) != n:
            raise ValueError("quantum numbers are integers")
        if self.indices == "positive" and n < 1:
            raise ValueError(f"{self.key} quantum numbers start at 1")

    def value(self, n: int) -> float:
        self._check(n)
        return self.eigenvalue(int(n))

    def values(self, ns) -> np.ndarray:
        return np.array([self.value(n) for n in ns])

    def function(self, n: int) -> AnalyticFunction:
        self._check(n)
        return self.eigenfunction(int(n))

    def within(self, lo: float, hi: float) -> list[float]:
        """Sorted eigenvalues in ``[lo, hi]`` (monotone formulas only)."""
        out = []
        n = 1 if self.indices == "positive" else 0
        if self.indices == "positive":
            while self.value(n) <= hi:
                if self.value(n) >= lo:
                    out.append(self.value(n))
                n += 1
            return out
        # integer-indexed formulas are affine in n
        e0, e1 = self.value(0), self.value(1)
        step = e1 - e0
        k_lo = math.ceil((lo - e0) / step - 1e-12) if step > 0 else math.ceil((hi - e0) / step - 1e-12)
        k_hi = math.floor((hi - e0) / step + 1e-12) if step > 0 else math.floor((lo - e0) / step + 1e-12)
        return sorted(self.value(k) for k in range(k_lo, k_hi + 1))


def _sine_mode(k: float, shift: float, amp: float) -> AnalyticFunction:
    """``amp * sin(k (x + shift))`` built from two complex exponentials."""
    c = amp / 2j
    return poly_exp(
        [([c], [1j * k * shift, 1j * k]), ([-c], [-1j * k * shift, -1j * k])],
        label=f"sin({k:g}(x+{shift:g}))",
    )


def _infinite_well(a: float = 1.0, hbar: float = 1.0, mass: float = 1.0) -> AnalyticSpectrum:
    if a <= 0:
        raise ValueError("well half-width must be positive")

    def energy(n: int) -> float:
        return math.pi**2 * hbar**2 * n * n / (8.0 * mass * a * a)

    def mode(n: int) -> AnalyticFunction:
        # sin(n pi (x + a) / 2a) / sqrt(a): cos for odd n, sin for even n, up to sign
        return _sine_mode(n * math.pi / (2 * a), a, 1.0 / math.sqrt(a))

    return AnalyticSpectrum("infinite_well", {"a": a, "hbar": hbar, "mass": mass}, energy, mode, "positive")


def _circle_lz(hbar: float = 1.0) -> AnalyticSpectrum:
    return AnalyticSpectrum("circle_Lz", {"hbar": hbar}, lambda m: m * hbar, circle_mode, "integer")


def _momentum_twisted(alpha: float = 0.0, hbar: float = 1.0, length: float = 1.0) -> AnalyticSpectrum:
    """``p_n = hbar (2 pi n - alpha) / length`` from ``e^{i(alpha + p length/hbar)} = 1``."""

    def value(n: int) -> float:
        return hbar * (2 * math.pi * n - alpha) / length

    def mode(n: int) -> AnalyticFunction:
        p = value(n)
        return poly_exp([([1.0 / math.sqrt(length)], [0.0, 1j * p / hbar])], label=f"exp(i {p:g} x/hbar)")

    return AnalyticSpectrum(
        "momentum_twisted", {"alpha": alpha, "hbar": hbar, "length": length}, value, mode, "integer"
    )


CATALOG: dict[str, Callable[..., AnalyticSpectrum]] = {
    "infinite_well": _infinite_well,
    "circle_Lz": _circle_lz,
    "momentum_twisted": _momentum_twisted,
}


def analytic_spectrum(key: str, **params) -> AnalyticSpectrum:
    """Look up a closed-form spectrum.

    Raises
    ------
    KeyError
        For keys outside ``infinite_well``, ``circle_Lz``, ``momentum_twisted``.
    """
    try:
        builder = CATALOG[key]
    except KeyError:
        raise KeyError(f"unknown analytic spectrum {key!r}; choose from {sorted(CATALOG)}") from None
    return builder(**params)


def well_decomposition(
    n_max: int, a: float = 1.0, hbar: float = 1.0, mass: float = 1.0, points: int = DST_POINTS
) -> SpectralDecomposition:
    """Closed-form well spectrum with overlaps from one discrete sine transform.

    ``<phi_n, psi>`` for ``n <= n_max`` is the trapezoid rule on ``points``
    cells of ``[-a, a]``, which is what a type-I DST evaluates.
    """
    if not 1 <= n_max < points:
        raise ValueError(f"n_max must lie in 1..{points - 1}")
    spec = _infinite_well(a, hbar, mass)
    h = 2 * a / points
    y = h * np.arange(1, points)

    def amplitudes(psi: AnalyticFunction) -> np.ndarray:
        s = np.asarray(psi(y - a), dtype=complex)
        tr = scipy.fft.dst(s.real, type=1) + 1j * scipy.fft.dst(s.imag, type=1)
        return (h / (2 * math.sqrt(a))) * tr[:n_max]

    energies = spec.values(range(1, n_max + 1))
    return SpectralDecomposition(
        energies,
        amplitude_fn=amplitudes,
        norm_fn=lambda psi: closed_form_norm(psi, -a, a),
        label="infinite_well(closed form)",
    )
