"""Standard expressions, boundary systems and operator specs."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .algebra import QI, Polynomial, as_qi
from .operator_core import (
    BoundaryForm,
    BoundaryFunctional,
    DifferentialExpression,
    ExtendedInterval,
    OperatorSpec,
)

__all__ = [
    "hbar_over_i",
    "momentum",
    "position",
    "multiplication",
    "kinetic",
    "kinetic_squared",
    "pq_symmetrized",
    "dirichlet",
    "neumann",
    "robin",
    "periodic",
    "quasi_periodic",
    "simply_supported",
    "momentum_box",
    "momentum_twisted",
    "momentum_line",
    "momentum_half_line",
    "pq3_line",
    "angular_momentum",
    "angle",
    "infinite_well",
    "infinite_well_squared",
    "hamiltonian_line",
    "position_line",
    "SPECS",
]

TWO_PI = 2.0 * math.pi


def hbar_over_i(hbar: float = 1.0) -> QI:
    """``hbar / i = -i hbar`` as an exact Gaussian rational."""
    return QI(Fraction(0), -Fraction(hbar))


def momentum(hbar: float = 1.0) -> DifferentialExpression:
    """``P = (hbar/i) d/dx``."""
    return DifferentialExpression((Polynomial(), Polynomial([hbar_over_i(hbar)])), hbar)


def position(hbar: float = 1.0) -> DifferentialExpression:
    """``Q``: multiplication by ``x``."""
    return DifferentialExpression((Polynomial([0, 1]),), hbar)


def multiplication(poly: Polynomial, hbar: float = 1.0) -> DifferentialExpression:
    return DifferentialExpression((poly,), hbar)


def kinetic(hbar: float = 1.0, mass: float = 1.0) -> DifferentialExpression:
    """``H = -hbar^2/(2m) d^2/dx^2``."""
    c = -Fraction(hbar) ** 2 / (2 * Fraction(mass))
    return DifferentialExpression((Polynomial(), Polynomial(), Polynomial([c])), hbar, mass)


def kinetic_squared(hbar: float = 1.0, mass: float = 1.0) -> DifferentialExpression:
    """``H^2 = hbar^4/(4 m^2) d^4/dx^4``."""
    c = Fraction(hbar) ** 4 / (4 * Fraction(mass) ** 2)
    z = Polynomial()
    return DifferentialExpression((z, z, z, z, Polynomial([c])), hbar, mass)


def pq_symmetrized(n: int, hbar: float = 1.0) -> DifferentialExpression:
    """``P Q^n + Q^n P = (hbar/i)(n x^(n-1) + 2 x^n d/dx)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    h = hbar_over_i(hbar)
    c0 = Polynomial.monomial(n - 1, h * n) if n >= 1 else Polynomial()
    c1 = Polynomial.monomial(n, h * 2)
    return DifferentialExpression((c0, c1), hbar)


# ---------------------------------------------------------------------------
# boundary systems (end 0 = lower, end 1 = upper)
# ---------------------------------------------------------------------------

def _fn(terms, exact=True) -> BoundaryFunctional:
    return BoundaryFunctional.from_terms(terms, exact)


def dirichlet() -> BoundaryForm:
    return BoundaryForm((_fn({(0, 0): 1}), _fn({(1, 0): 1})))


def neumann() -> BoundaryForm:
    return BoundaryForm((_fn({(0, 1): 1}), _fn({(1, 1): 1})))


def robin(theta: float) -> BoundaryForm:
    """``cos(theta) f + sin(theta) f' = 0`` at both ends."""
    c, s = math.cos(theta), math.sin(theta)
    exact = theta == 0.0
    return BoundaryForm(
        (_fn({(0, 0): c, (0, 1): s}, exact), _fn({(1, 0): c, (1, 1): s}, exact))
    )


def _phase(alpha: float) -> tuple[QI, bool]:
    if alpha == 0.0:
        return as_qi(1), True
    return QI.of(cmath.exp(1j * alpha)), False


def periodic(order: int = 1) -> BoundaryForm:
    return quasi_periodic(0.0, order)


def quasi_periodic(alpha: float, order: int = 1) -> BoundaryForm:
    """``f^(k)(lower) = e^{i alpha} f^(k)(upper)`` for ``k < order``."""
    w, exact = _phase(alpha)
    return BoundaryForm(tuple(_fn({(0, k): 1, (1, k): -w}, exact) for k in range(order)))


def simply_supported() -> BoundaryForm:
    """``f = 0 = f''`` at both ends (the domain of ``H^2`` on a box)."""
    return BoundaryForm(
        (_fn({(0, 0): 1}), _fn({(0, 2): 1}), _fn({(1, 0): 1}), _fn({(1, 2): 1}))
    )


# ---------------------------------------------------------------------------
# ready-made specs
# ---------------------------------------------------------------------------

def momentum_box(hbar: float = 1.0) -> OperatorSpec:
    """``P`` on ``[0, 1]`` with ``f(0) = 0 = f(1)``."""
    return OperatorSpec("P_dirichlet", momentum(hbar), ExtendedInterval(0.0, 1.0), dirichlet())


def momentum_twisted(alpha: float, hbar: float = 1.0) -> OperatorSpec:
    """``P_alpha`` on ``[0, 1]`` with ``f(0) = e^{i alpha} f(1)``."""
    return OperatorSpec(
        f"P_alpha={alpha:g}", momentum(hbar), ExtendedInterval(0.0, 1.0), quasi_periodic(alpha)
    )


def momentum_line(hbar: float = 1.0) -> OperatorSpec:
    return OperatorSpec("P_line", momentum(hbar), ExtendedInterval(-math.inf, math.inf))


def momentum_half_line(hbar: float = 1.0) -> OperatorSpec:
    return OperatorSpec(
        "P_half_line",
        momentum(hbar),
        ExtendedInterval(0.0, math.inf),
        BoundaryForm((_fn({(0, 0): 1}),)),
    )


def pq3_line(hbar: float = 1.0) -> OperatorSpec:
    """``A = PQ^3 + Q^3 P`` on the line, restricted to rapidly decreasing functions."""
    return OperatorSpec(
        "A_pq3", pq_symmetrized(3, hbar), ExtendedInterval(-math.inf, math.inf), rapid_decay=True
    )


def angular_momentum(hbar: float = 1.0) -> OperatorSpec:
    """``L_z = (hbar/i) d/dphi`` on ``[0, 2 pi]`` with periodic conditions."""
    return OperatorSpec("L_z", momentum(hbar), ExtendedInterval(0.0, TWO_PI), periodic())


def angle(hbar: float = 1.0) -> OperatorSpec:
    """Multiplication by ``phi`` on ``[0, 2 pi]`` (bounded, defined everywhere)."""
    return OperatorSpec("phi", position(hbar), ExtendedInterval(0.0, TWO_PI))


def infinite_well(a: float = 1.0, hbar: float = 1.0, mass: float = 1.0) -> OperatorSpec:
    """``H`` on ``[-a, a]`` with Dirichlet conditions."""
    return OperatorSpec("H_well", kinetic(hbar, mass), ExtendedInterval(-a, a), dirichlet())


def infinite_well_squared(a: float = 1.0, hbar: float = 1.0, mass: float = 1.0) -> OperatorSpec:
    """``H^2`` on ``[-a, a]`` with ``f(+-a) = 0 = f''(+-a)``."""
    return OperatorSpec(
        "H2_well", kinetic_squared(hbar, mass), ExtendedInterval(-a, a), simply_supported()
    )


def hamiltonian_line(hbar: float = 1.0, mass: float = 1.0) -> OperatorSpec:
    return OperatorSpec("H_line", kinetic(hbar, mass), ExtendedInterval(-math.inf, math.inf))


def position_line(hbar: float = 1.0) -> OperatorSpec:
    return OperatorSpec("Q_line", position(hbar), ExtendedInterval(-math.inf, math.inf))


SPECS = {
    "momentum_box": momentum_box,
    "momentum_periodic": lambda hbar=1.0: momentum_twisted(0.0, hbar),
    "momentum_line": momentum_line,
    "momentum_half_line": momentum_half_line,
    "pq3_line": pq3_line,
    "angular_momentum": angular_momentum,
    "angle": angle,
    "infinite_well": infinite_well,
    "infinite_well_squared": infinite_well_squared,
    "hamiltonian_line": hamiltonian_line,
    "position_line": position_line,
}
