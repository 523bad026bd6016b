"""Exact arithmetic used by the operator layer.

Coefficients of differential expressions and boundary functionals are kept
as Gaussian rationals so that adjoints, surface forms and rank tests can be
carried out without rounding. Floats are converted through their exact
binary value, so arithmetic on them is still exact (just not "nice").
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

__all__ = ["QI", "Polynomial", "as_qi", "rank", "nullspace", "row_basis"]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, numbers.Integral):
        return Fraction(int(v))
    if isinstance(v, (float, np.floating)):
        if not np.isfinite(v):
            raise ValueError(f"non-finite value {v!r} has no exact representation")
        return Fraction(float(v))
    if isinstance(v, numbers.Rational):
        return Fraction(v.numerator, v.denominator)
    raise TypeError(f"cannot convert {type(v).__name__} to Fraction")


@dataclass(frozen=True)
class QI:
    """Gaussian rational ``re + i*im`` with Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, v) -> "QI":
        if isinstance(v, QI):
            return v
        if isinstance(v, (complex, np.complexfloating)):
            return cls(_frac(v.real), _frac(v.imag))
        return cls(_frac(v), Fraction(0))

    def __add__(self, other) -> "QI":
        o = as_qi(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "QI":
        o = as_qi(other)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "QI":
        return as_qi(other) - self

    def __mul__(self, other) -> "QI":
        o = as_qi(other)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QI":
        o = as_qi(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other) -> "QI":
        return as_qi(other) / self

    def __neg__(self) -> "QI":
        return QI(-self.re, -self.im)

    def __pos__(self) -> "QI":
        return self

    def __eq__(self, other) -> bool:
        try:
            o = as_qi(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self) -> str:
        return f"QI({self.to_string()})"

    def to_string(self) -> str:
        """Canonical text, parseable by the spec-file grammar."""
        re, im = self.re, self.im
        if im == 0:
            return _fmt(re)
        if re == 0:
            return f"{_fmt(im)}*i"
        sign = "+" if im > 0 else "-"
        return f"{_fmt(re)} {sign} {_fmt(abs(im))}*i"


def _fmt(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_qi(v) -> QI:
    return v if isinstance(v, QI) else QI.of(v)


ZERO = QI()
ONE = QI(Fraction(1))
I = QI(Fraction(0), Fraction(1))


class Polynomial:
    """Polynomial in ``x`` with Gaussian-rational coefficients.

    ``coeffs[k]`` multiplies ``x**k``; trailing zeros are trimmed so the zero
    polynomial has an empty coefficient tuple and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_qi(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    def coefficient(self, k: int) -> QI:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __add__(self, other) -> "Polynomial":
        o = _as_poly(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial(self.coefficient(k) + o.coefficient(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Polynomial":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Polynomial":
        o = _as_poly(other)
        if self.is_zero() or o.is_zero():
            return Polynomial()
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Polynomial":
        s = as_qi(scalar)
        return Polynomial(c / s for c in self.coeffs)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            o = _as_poly(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def derivative(self, k: int = 1) -> "Polynomial":
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [c * j for j, c in enumerate(cs)][1:]
        return Polynomial(cs)

    def conjugate(self) -> "Polynomial":
        return Polynomial(c.conjugate() for c in self.coeffs)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coeffs)

    def exact_at(self, x) -> QI:
        """Exact value at a rational (or float, via its binary value) point."""
        xq = as_qi(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * xq + c
        return acc

    def __call__(self, x):
        """Numeric evaluation (Horner) for scalars or arrays."""
        x = np.asarray(x)
        if not self.coeffs:
            return np.zeros_like(x, dtype=complex) if x.ndim else 0j
        acc = np.zeros_like(x, dtype=complex) if x.ndim else 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    def numpy_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def real_roots(self, tol: float = 1e-12) -> list[float]:
        """Real roots, used to locate singular points of a leading coefficient."""
        if self.degree <= 0:
            return []
        # x = 0 roots are exact: count leading zero coefficients
        roots: list[float] = []
        k = 0
        while not self.coeffs[k]:
            k += 1
        if k:
            roots.append(0.0)
        rest = self.numpy_coeffs()[k:]
        if len(rest) > 1:
            for r in np.roots(rest[::-1]):
                if abs(r.imag) <= tol * max(1.0, abs(r)):
                    roots.append(float(r.real))
        return sorted(set(roots))

    def to_string(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("*x" if k == 1 else f"*x^{k}")
            parts.append(f"({c.to_string()}){mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()})"


def _as_poly(v) -> Polynomial:
    if isinstance(v, Polynomial):
        return v
    return Polynomial([v])


def leibniz(k: int, i: int) -> int:
    return comb(k, i)


# ---------------------------------------------------------------------------
# exact linear algebra over QI
# ---------------------------------------------------------------------------

def _rref(rows: Sequence[Sequence[QI]], ncols: int) -> tuple[list[list[QI]], list[int]]:
    m = [[as_qi(v) for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [v / piv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[QI]], ncols: int) -> int:
    return len(_rref(rows, ncols)[1]) if rows else 0


def row_basis(rows: Sequence[Sequence[QI]], ncols: int) -> list[list[QI]]:
    return _rref(rows, ncols)[0] if rows else []


def nullspace(rows: Sequence[Sequence[QI]], ncols: int) -> list[list[QI]]:
    """Basis (as column vectors) of ``{v : rows @ v = 0}``."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, piv = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis
