"""Adaptive composite Gauss-Legendre integration on an interval."""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)
_EPS = np.finfo(float).eps

RTOL_ENV = "QCG_QUAD_RTOL"


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2**20
    angular_nodes_initial: int = 16

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 2 or self.angular_nodes_initial < 2:
            raise ValueError("node and subdivision counts must be >= 2")

    @classmethod
    def from_env(cls, **overrides) -> "QuadratureSettings":
        """Defaults, with rel_tol taken from $QCG_QUAD_RTOL when set."""
        settings = cls(**overrides)
        raw = os.environ.get(RTOL_ENV)
        if raw:
            settings = replace(settings, rel_tol=float(raw))
        return settings


def _panel(f, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(f(mid + half * _NODES), dtype=float)
    return half * float(np.dot(_WEIGHTS, vals))


def _split(f, a, b):
    m = 0.5 * (a + b)
    left, right = _panel(f, a, m), _panel(f, m, b)
    return m, left, right


def integrate(f, a: float, b: float, settings: QuadratureSettings = QuadratureSettings(),
              breakpoints=()) -> tuple:
    """Integrate vectorized ``f`` over [a, b]; returns (value, error_estimate).

    Every panel is compared against its two halves and the panel with the
    largest discrepancy is bisected until the summed discrepancy is within
    max(abs_tol, rel_tol * |value|).  Interior ``breakpoints`` seed the
    initial partition so kinks never sit inside a panel.
    """
    if not (a < b):
        raise ValueError(f"integration limits must satisfy a < b, got {a}, {b}")
    cuts = [a] + sorted(p for p in set(breakpoints) if a < p < b) + [b]

    # heap entries: (-err, a, b, whole, left, right)
    heap = []
    for lo, hi in zip(cuts, cuts[1:]):
        whole = _panel(f, lo, hi)
        m, left, right = _split(f, lo, hi)
        heapq.heappush(heap, (-abs(whole - left - right), lo, hi, left, right))
    panels = len(heap)
    settled = []  # panels whose discrepancy is at roundoff level

    def totals():
        items = heap + settled
        # fixed summation order so repeated runs are bit-identical
        items = sorted(items, key=lambda e: e[1])
        value = math.fsum(e[3] + e[4] for e in items)
        error = math.fsum(-e[0] for e in items)
        return value, error

    value, error = totals()
    while error > max(settings.abs_tol, settings.rel_tol * abs(value)):
        if not heap:
            break
        if panels >= settings.max_subdivisions:
            raise ConvergenceError(
                f"quadrature on [{a}, {b}] did not reach tolerance within "
                f"{settings.max_subdivisions} panels",
                estimate=value, error_bound=error,
            )
        negerr, lo, hi, left, right = heapq.heappop(heap)
        if -negerr <= 50 * _EPS * (abs(left) + abs(right)) or hi - lo <= 4 * _EPS * abs(hi):
            settled.append((negerr, lo, hi, left, right))
            value, error = totals()
            continue
        m = 0.5 * (lo + hi)
        for sub_lo, sub_hi, whole in ((lo, m, left), (m, hi, right)):
            _, l2, r2 = _split(f, sub_lo, sub_hi)
            heapq.heappush(heap, (-abs(whole - l2 - r2), sub_lo, sub_hi, l2, r2))
        panels += 1
        value, error = totals()
    return value, error
