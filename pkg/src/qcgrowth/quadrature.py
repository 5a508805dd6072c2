"""Integrals of dilatation fields over annuli and circles.

Annulus integrals are evaluated in polar form: the radial direction uses the
adaptive Gauss-Legendre scheme of ``_gauss`` on log-radius panels, and every
radial node carries a periodic trapezoid rule in the angle that doubles its
node count until successive estimates agree.
"""

from __future__ import annotations

import math

import numpy as np

from ._gauss import QuadratureSettings, integrate
from .core import AnnulusSpec, CircleSpec, CoefficientField
from .errors import ConvergenceError, DomainError
from .weights import WeightSpec, log_radial_integral, lower_limit

__all__ = ["QuadratureSettings", "integrate", "angular_mean", "annulus_integral",
           "circle_average"]


def angular_mean(field: CoefficientField, center: complex, radii,
                 quad: QuadratureSettings, failures: list = None) -> np.ndarray:
    """(1/2pi) * contour integral of K over the circles |z - center| = r, per radius.

    When ``failures`` is given, non-convergence appends the offending radii
    to it and returns the last estimate instead of raising.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    n = quad.angular_nodes_initial
    theta = 2 * np.pi * np.arange(n) / n
    pts = center + radii[:, None] * np.exp(1j * theta)[None, :]
    prev = field.evaluate(pts).mean(axis=1)
    change = math.inf
    while True:
        if 2 * n > max(quad.max_subdivisions, quad.angular_nodes_initial):
            if failures is not None:
                failures.extend(radii.tolist())
                return prev
            raise ConvergenceError("angular trapezoid rule did not converge",
                                   estimate=prev, error_bound=change)
        # the doubled rule reuses the old nodes and adds the midpoints
        mid = 2 * np.pi * (np.arange(n) + 0.5) / n
        pts = center + radii[:, None] * np.exp(1j * mid)[None, :]
        cur = 0.5 * (prev + field.evaluate(pts).mean(axis=1))
        n *= 2
        diff = np.abs(cur - prev)
        change = float(diff.max())
        if np.all(diff <= quad.rel_tol * np.abs(cur) + quad.abs_tol):
            return cur
        prev = cur


def annulus_integral(field: CoefficientField, w: WeightSpec, ann: AnnulusSpec,
                     quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Integral over the annulus of K(z) * psi(|z - z0|)^2 dm(z)."""
    field.check_center(ann.center)
    lo_f, hi_f = field.radius_range
    if ann.r_inner < lo_f * (1 - 1e-12) or ann.r_outer > hi_f * (1 + 1e-12):
        raise DomainError(f"annulus ({ann.r_inner}, {ann.r_outer}) leaves the field's domain")
    c = complex(ann.center)
    lo = lower_limit(w, ann.r_inner)

    failures = []

    def radial(t):
        return 2 * np.pi * angular_mean(field, c, t, quad, failures) * w(t) ** 2 * t

    bps = tuple(field.breakpoints()) + tuple(w.breakpoints())
    value, err = log_radial_integral(radial, lo, ann.r_outer, quad, bps)
    if failures:
        raise ConvergenceError(
            f"angular rule did not converge at {len(failures)} radial nodes",
            estimate=max(value, 0.0), error_bound=err,
        )
    return max(value, 0.0)


def circle_average(field: CoefficientField, circ: CircleSpec,
                   quad: QuadratureSettings = QuadratureSettings()) -> float:
    """(1 / 2 pi R) times the integral of K over |z - z0| = R with respect to |dz|."""
    field.check_center(circ.center)
    return float(angular_mean(field, complex(circ.center), circ.radius, quad)[0])
