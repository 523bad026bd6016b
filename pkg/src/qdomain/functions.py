"""Closed-form test functions with analytic derivatives.

An :class:`AnalyticFunction` carries its value and a finite tower of
derivatives as vectorised callables. Two builders cover every closed form the
workbench needs:

* :func:`poly_exp` for sums ``sum_j p_j(x) exp(q_j(x))`` with complex
  polynomials ``p_j, q_j`` (Gaussians, plane waves, parabolas, ...);
* :func:`power_exp` for ``C |x|**beta * exp(sum_p c_p x**p)`` with Laurent
  exponents, singular at ``x = 0`` (the ``PQ^n + Q^n P`` family).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, pi, sqrt
from typing import Callable, Mapping, Sequence

import numpy as np
from numpy.polynomial import Polynomial as NPoly

__all__ = [
    "AnalyticFunction",
    "SingularPointError",
    "poly_exp",
    "power_exp",
    "parabola",
    "plane_wave",
    "circle_mode",
    "gaussian",
    "pq_eigenfunction",
    "pq_deficiency_solution",
    "random_circle_state",
    "random_line_state",
]

Array = np.ndarray


class SingularPointError(ValueError):
    """Raised when a function is evaluated at one of its declared singular points."""


@dataclass(frozen=True, eq=False)
class AnalyticFunction:
    """Function with ``len(derivatives) - 1`` analytic derivatives.

    Parameters
    ----------
    derivatives : tuple of callables
        ``derivatives[k](x)`` evaluates ``f^(k)`` on an array.
    singular_points : tuple of float
        Points where the closed form is not evaluable.
    label : str
        Human-readable tag used in reports.
    log_abs : callable, optional
        ``log|f(x)|``; used where ``|f|`` under- or overflows.
    """

    derivatives: tuple[Callable[[Array], Array], ...]
    singular_points: tuple[float, ...] = ()
    label: str = ""
    log_abs: Callable[[Array], Array] | None = field(default=None)

    @property
    def max_order(self) -> int:
        return len(self.derivatives) - 1

    @property
    def value(self) -> Callable[[Array], Array]:
        return self.derivatives[0]

    @property
    def first(self) -> Callable[[Array], Array]:
        return self.derivatives[1]

    @property
    def second(self) -> Callable[[Array], Array]:
        return self.derivatives[2]

    def _check(self, x) -> None:
        xa = np.asarray(x, dtype=float)
        for s in self.singular_points:
            if np.any(xa == s):
                raise SingularPointError(f"{self.label or 'function'} is singular at x={s}")

    def derivative(self, k: int, x):
        """Evaluate ``f^(k)(x)``."""
        if k > self.max_order:
            raise ValueError(f"only {self.max_order} derivatives available, requested {k}")
        self._check(x)
        return self.derivatives[k](np.asarray(x, dtype=float))

    def __call__(self, x):
        return self.derivative(0, x)

    def jet(self, x: float, order: int = 4) -> np.ndarray:
        """``(f(x), f'(x), ..., f^(order-1)(x))``; missing derivatives are NaN."""
        out = np.full(order, np.nan, dtype=complex)
        for k in range(min(order, self.max_order + 1)):
            out[k] = complex(self.derivative(k, float(x)))
        return out

    def log_modulus(self, x):
        """``log|f(x)|`` (``-inf`` at zeros)."""
        self._check(x)
        x = np.asarray(x, dtype=float)
        if self.log_abs is not None:
            return self.log_abs(x)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.derivatives[0](x)))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _npoly(c) -> NPoly:
    if isinstance(c, NPoly):
        return NPoly(np.asarray(c.coef, dtype=complex))
    return NPoly(np.atleast_1d(np.asarray(c, dtype=complex)))


def poly_exp(
    terms: Sequence[tuple[object, object]],
    max_order: int = 6,
    label: str = "",
) -> AnalyticFunction:
    """Build ``f = sum_j p_j exp(q_j)`` from ``(p_j, q_j)`` coefficient arrays.

    Coefficients are in increasing-degree order, as for
    :class:`numpy.polynomial.Polynomial`.
    """
    base = [(_npoly(p), _npoly(q)) for p, q in terms]
    tower: list[list[tuple[NPoly, NPoly]]] = [base]
    for _ in range(max_order):
        prev = tower[-1]
        tower.append([(p.deriv() + p * q.deriv(), q) for p, q in prev])

    def make(level: list[tuple[NPoly, NPoly]]) -> Callable[[Array], Array]:
        def f(x):
            x = np.asarray(x, dtype=float)
            acc = np.zeros(x.shape, dtype=complex)
            for p, q in level:
                acc = acc + p(x) * np.exp(q(x))
            return acc if acc.ndim else complex(acc)

        return f

    log_abs = None
    if len(base) == 1:
        p0, q0 = base[0]

        def log_abs(x):
            x = np.asarray(x, dtype=float)
            with np.errstate(divide="ignore"):
                return np.log(np.abs(p0(x))) + q0(x).real

    return AnalyticFunction(tuple(make(lv) for lv in tower), (), label, log_abs)


class _Laurent:
    """Finite Laurent polynomial ``sum c_p x**p`` (integer ``p``)."""

    def __init__(self, coeffs: Mapping[int, complex]):
        self.c = {int(p): complex(v) for p, v in coeffs.items() if v != 0}

    def deriv(self) -> "_Laurent":
        return _Laurent({p - 1: p * v for p, v in self.c.items() if p != 0})

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros(x.shape, dtype=complex)
        for p, v in self.c.items():
            acc = acc + v * x ** float(p)
        return acc


def power_exp(
    beta: float,
    exponent: Mapping[int, complex],
    const: complex = 1.0,
    max_order: int = 4,
    label: str = "",
) -> AnalyticFunction:
    """Build ``f = const * |x|**beta * exp(sum_p c_p x**p)``, singular at 0.

    Derivatives follow from ``f' = u' f`` with ``u' = beta/x + (sum c_p x^p)'``
    and ``f^(k+1) = sum_j C(k, j) u^(j+1) f^(k-j)``.
    """
    lau = _Laurent(exponent)
    # the derivative of a Laurent polynomial has no x**-1 term
    du = [_Laurent({-1: beta, **lau.deriv().c})]
    for _ in range(max_order):
        du.append(du[-1].deriv())

    def value(x):
        x = np.asarray(x, dtype=float)
        return const * np.abs(x) ** beta * np.exp(lau(x))

    def log_abs(x):
        x = np.asarray(x, dtype=float)
        return np.log(abs(const)) + beta * np.log(np.abs(x)) + lau(x).real

    def make(k: int) -> Callable[[Array], Array]:
        def f(x):
            x = np.asarray(x, dtype=float)
            vals = [value(x)]
            dus = [d(x) for d in du[:k]]
            for m in range(k):
                vals.append(sum(comb(m, j) * dus[j] * vals[m - j] for j in range(m + 1)))
            return vals[k]

        return f

    return AnalyticFunction(
        tuple(make(k) for k in range(max_order + 1)), (0.0,), label, log_abs
    )


def parabola(a: float = 1.0) -> AnalyticFunction:
    """Normalised ``sqrt(15)/(4 a^(5/2)) (a^2 - x^2)`` on ``[-a, a]``."""
    c = sqrt(15.0) / (4.0 * a**2.5)
    return poly_exp([([c * a * a, 0.0, -c], [0.0])], label=f"parabola(a={a:g})")


def plane_wave(z: complex, hbar: float = 1.0, scale: complex = 1.0) -> AnalyticFunction:
    """``scale * exp(i z x / hbar)``, with ``z`` allowed complex."""
    return poly_exp([([scale], [0.0, 1j * z / hbar])], label=f"exp(i*{z}*x/hbar)")


def circle_mode(m: int) -> AnalyticFunction:
    """Normalised ``exp(i m phi) / sqrt(2 pi)`` on ``[0, 2 pi]``."""
    return poly_exp([([1.0 / sqrt(2 * pi)], [0.0, 1j * m])], label=f"psi_{m}")


def gaussian(
    x0: float = 0.0, eps: float = 1.0, p0: float = 0.0, hbar: float = 1.0
) -> AnalyticFunction:
    """Normalised ``(pi eps^2)^(-1/4) exp(-(x-x0)^2/(2 eps^2) + i p0 x/hbar)``."""
    c = (pi * eps * eps) ** -0.25
    s = 1.0 / (2 * eps * eps)
    q = [-s * x0 * x0, 2 * s * x0 + 1j * p0 / hbar, -s]
    return poly_exp([([c], q)], label=f"gaussian(x0={x0:g}, eps={eps:g}, p0={p0:g})")


def pq_eigenfunction() -> AnalyticFunction:
    """``|x|^(-3/2) exp(-1/(4 x^2)) / sqrt(2)``, an eigenfunction of the adjoint of ``PQ^3+Q^3P``."""
    return power_exp(-1.5, {-2: -0.25}, 1.0 / sqrt(2.0), label="pq3_eigenfunction")


def pq_deficiency_solution(n: int, sign: int, kappa: float = 1.0, hbar: float = 1.0) -> AnalyticFunction:
    """Solution of ``A^dagger g = sign*i*kappa g`` for ``A = P Q^n + Q^n P``.

    For ``n >= 2`` this is ``|x|^(-n/2) exp(s x^(1-n))`` with
    ``s = sign*kappa / (2 hbar (n-1))``; for ``n = 1`` it is the pure power
    ``|x|^(-1/2 - sign*kappa/(2 hbar))``.
    """
    if n < 1:
        raise ValueError("the singular family needs n >= 1")
    if n == 1:
        return power_exp(-0.5 - sign * kappa / (2 * hbar), {}, label=f"g{'+' if sign > 0 else '-'}")
    s = sign * kappa / (2 * hbar * (n - 1))
    return power_exp(-n / 2.0, {1 - n: s}, label=f"g{'+' if sign > 0 else '-'}")


def random_circle_state(rng: np.random.Generator, mmax: int = 3) -> AnalyticFunction:
    """Random smooth periodic state ``sum_m c_m e^{i m phi}``, normalised on ``[0, 2 pi]``."""
    ms = np.arange(-mmax, mmax + 1)
    c = rng.normal(size=ms.size) + 1j * rng.normal(size=ms.size)
    c /= np.linalg.norm(c)
    return poly_exp(
        [([cm / sqrt(2 * pi)], [0.0, 1j * m]) for m, cm in zip(ms, c)], label="random_circle_state"
    )


def random_line_state(
    rng: np.random.Generator, n_terms: int = 3, hbar: float = 1.0
) -> tuple[AnalyticFunction, float]:
    """Random sum of Gaussian wave packets on the line.

    Returns the (unnormalised) function and a half-width ``X`` beyond which
    every packet is below ``1e-16`` of its peak.
    """
    terms = []
    reach = 0.0
    for _ in range(n_terms):
        x0 = rng.uniform(-2.0, 2.0)
        eps = rng.uniform(0.4, 1.2)
        p0 = rng.uniform(-2.0, 2.0)
        amp = complex(rng.normal(), rng.normal())
        s = 1.0 / (2 * eps * eps)
        terms.append(([amp], [-s * x0 * x0, 2 * s * x0 + 1j * p0 / hbar, -s]))
        reach = max(reach, abs(x0) + 9.0 * eps)
    return poly_exp(terms, label="random_line_state"), reach
