"""Composite Gauss-Legendre quadrature and tail classification.

Default rule: 64 equal panels of 16 Legendre nodes each, which integrates
polynomials of degree < 32 exactly on every panel. Infinite ranges are mapped
to finite ones with ``x = c + t / (1 - t)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal

import numpy as np
from scipy.special import logsumexp

__all__ = [
    "default_order",
    "gauss_legendre_nodes",
    "integrate",
    "integrate_adaptive",
    "shell_log_masses",
    "classify_shells",
    "ShellVerdict",
    "CONVERGENT_RATIO",
    "DIVERGENT_RATIO",
    "SHELL_RUN",
]

PANELS = 64
ORDER = 16

CONVERGENT_RATIO = 0.75
DIVERGENT_RATIO = 1.25
SHELL_RUN = 5

ShellVerdict = Literal["convergent", "divergent", "inconclusive"]


def default_order() -> int:
    """Per-panel order, overridable through ``QDOMAIN_QUAD_ORDER``."""
    env = os.environ.get("QDOMAIN_QUAD_ORDER")
    if env:
        try:
            val = int(env)
        except ValueError as exc:
            raise ValueError(f"QDOMAIN_QUAD_ORDER must be an integer, got {env!r}") from exc
        if val < 1:
            raise ValueError("QDOMAIN_QUAD_ORDER must be positive")
        return val
    return ORDER


@lru_cache(maxsize=64)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def gauss_legendre_nodes(
    a: float, b: float, panels: int = PANELS, order: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule on a finite ``[a, b]``."""
    order = default_order() if order is None else order
    t, w = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    return x, wx


def _mapped_nodes(a: float, b: float, panels: int, order: int | None):
    """Nodes on a possibly infinite interval via ``x = c +- t/(1-t)``."""
    if np.isfinite(a) and np.isfinite(b):
        return gauss_legendre_nodes(a, b, panels, order)
    if np.isfinite(a):
        t, w = gauss_legendre_nodes(0.0, 1.0, panels, order)
        return a + t / (1 - t), w / (1 - t) ** 2
    if np.isfinite(b):
        t, w = gauss_legendre_nodes(0.0, 1.0, panels, order)
        return b - t / (1 - t), w / (1 - t) ** 2
    xl, wl = _mapped_nodes(-np.inf, 0.0, panels, order)
    xr, wr = _mapped_nodes(0.0, np.inf, panels, order)
    return np.concatenate([xl[::-1], xr]), np.concatenate([wl[::-1], wr])


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    panels: int = PANELS,
    order: int | None = None,
    breakpoints: tuple[float, ...] = (),
):
    """Composite Gauss-Legendre integral of a vectorised ``f`` over ``[a, b]``.

    ``breakpoints`` inside ``(a, b)`` split the range so that integrable
    singularities sit on panel edges (Gauss nodes never touch them).
    """
    pts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        x, w = _mapped_nodes(lo, hi, panels, order)
        total = total + np.sum(w * f(x))
    return total


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    order: int = 16,
    tol: float = 1e-13,
    max_depth: int = 40,
):
    """Adaptive Gauss-Legendre on a finite interval (panel bisection)."""
    t, w = _leggauss(order)
    t2, w2 = _leggauss(order + 8)

    def rule(lo, hi, tt, ww):
        h = 0.5 * (hi - lo)
        return h * np.sum(ww * f(0.5 * (hi + lo) + h * tt))

    stack = [(a, b, 0)]
    total = 0.0
    scale = abs(rule(a, b, t2, w2)) or 1.0
    while stack:
        lo, hi, depth = stack.pop()
        coarse = rule(lo, hi, t, w)
        fine = rule(lo, hi, t2, w2)
        if abs(fine - coarse) <= tol * scale or depth >= max_depth:
            total = total + fine
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, depth + 1))
            stack.append((mid, hi, depth + 1))
    return total


# ---------------------------------------------------------------------------
# dyadic shells
# ---------------------------------------------------------------------------

def shell_log_masses(
    log_density: Callable[[np.ndarray], np.ndarray],
    anchor: float,
    direction: int,
    start: float,
    n_shells: int,
    toward_point: bool,
    order: int = 16,
) -> np.ndarray:
    """``log`` of ``int |phi|^2`` over consecutive dyadic shells.

    ``log_density(x)`` returns ``log|phi(x)|^2``. Shells are
    ``anchor + direction*[start*2^k, start*2^(k+1)]`` for an infinite end
    (``toward_point=False``), or ``anchor + direction*[start*2^-(k+1),
    start*2^-k]`` toward a finite singular point.
    """
    t, w = _leggauss(order)
    out = np.empty(n_shells)
    for k in range(n_shells):
        if toward_point:
            lo, hi = start * 2.0 ** -(k + 1), start * 2.0**-k
        else:
            lo, hi = start * 2.0**k, start * 2.0 ** (k + 1)
        # 4 sub-panels per shell
        edges = np.linspace(lo, hi, 5)
        vals = []
        for p0, p1 in zip(edges[:-1], edges[1:]):
            h = 0.5 * (p1 - p0)
            d = 0.5 * (p0 + p1) + h * t
            x = anchor + direction * d
            vals.append(np.log(h * w) + np.real(log_density(x)))
        out[k] = logsumexp(np.concatenate(vals))
    return out


@dataclass(frozen=True)
class ShellClassification:
    verdict: ShellVerdict
    ratios: tuple[float, ...]


def classify_shells(log_masses: np.ndarray, run: int = SHELL_RUN) -> ShellClassification:
    """Classify a shell sequence by the last ``run`` consecutive mass ratios.

    Convergent if every ratio is ``<= 0.75``, divergent if every ratio is
    ``>= 1.25``, otherwise inconclusive.
    """
    lm = np.asarray(log_masses, dtype=float)
    if lm.size < run + 1:
        raise ValueError(f"need at least {run + 1} shells")
    with np.errstate(invalid="ignore", over="ignore"):
        lr = np.diff(lm)[-run:]
        tail = lm[-run - 1 :]
        # empty shells following empty shells keep shrinking; overflowing ones keep growing
        lr = np.where(np.isneginf(tail[1:]) & np.isneginf(tail[:-1]), -np.inf, lr)
        lr = np.where(np.isposinf(tail[1:]) & np.isposinf(tail[:-1]), np.inf, lr)
        ratios = tuple(float(r) for r in np.exp(np.clip(lr, -700.0, 700.0)))
    if np.all(lr <= np.log(CONVERGENT_RATIO)):
        return ShellClassification("convergent", ratios)
    if np.all(lr >= np.log(DIVERGENT_RATIO)):
        return ShellClassification("divergent", ratios)
    return ShellClassification("inconclusive", ratios)
