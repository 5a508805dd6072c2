"""Growth envelopes at infinity and the inequalities behind them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._gauss import QuadratureSettings
from .core import AnnulusSpec, CircleSpec, CoefficientField, PlanePoint
from .errors import (
    AdmissibilityError,
    ConvergenceError,
    DegenerateCondenserError,
    HypothesisViolationError,
    InsufficientGridError,
)
from .families import RadialProfile, family_max_modulus, family_ring_modulus, field_of
from .quadrature import annulus_integral, circle_average
from .weights import WeightSpec, iterated_log, normalization_integral

TWO_PI = 2 * math.pi

DEFAULT_TAIL_FRACTION = 0.25
ABSOLUTE_THRESHOLD = 1e-6
MIN_REPORTS = 8


@dataclass(frozen=True)
class RadialTestFunction:
    """A candidate eta on (r1, r2) for the ring inequality, stored as a weight."""

    weight: WeightSpec
    r1: float
    r2: float
    label: str = ""

    def integral(self, quad: QuadratureSettings = QuadratureSettings()) -> float:
        return normalization_integral(self.weight, self.r1, self.r2, quad)


@dataclass(frozen=True)
class GrowthReport:
    R: float
    M_R: float
    I_R: float
    Lambda_R: float
    envelope: float
    ratio: float
    floor: Optional[float] = None
    converged: bool = True

    def __post_init__(self):
        values = (self.R, self.M_R, self.I_R, self.Lambda_R, self.envelope, self.ratio)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"non-finite entry in growth report at R = {self.R}")
        if not self.Lambda_R > 0:
            raise ValueError("Lambda_R must be positive")


@dataclass(frozen=True)
class Verdict:
    kind: str  # bounded-below | tends-to-zero | inconclusive
    tail_min: float
    threshold: float
    tail_size: int = 0


def lambda_bound(field: CoefficientField, w: WeightSpec, z0: PlanePoint, r0: float, R: float,
                 quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Modulus majorant: weighted annulus integral of K over I(R)^2."""
    I = normalization_integral(w, r0, R, quad)
    area = annulus_integral(field, w, AnnulusSpec(z0, r0, R), quad)
    return area / I**2


def capacity_lower_bound(area_A: float, area_C: float) -> float:
    """4 pi / ln(m(A)/m(C)) for a condenser (A, C)."""
    if not (area_A > area_C > 0):
        raise DegenerateCondenserError(
            f"need area_A > area_C > 0, got {area_A!r}, {area_C!r}"
        )
    return 4 * math.pi / math.log(area_A / area_C)


def lemma3_envelope(M_R: float, Lambda_R: float) -> float:
    if not Lambda_R > 0:
        raise ValueError("Lambda_R must be positive")
    return M_R * math.exp(-TWO_PI / Lambda_R)


def lemma3_floor(p: RadialProfile, r0: float) -> float:
    """sqrt(m(f B_r0)/pi), the R-independent lower bound on the envelope."""
    return float(p.rho(r0))


def lemma4_envelope(M_R: float, I_R: float, c: float, p: float) -> float:
    if p > 2:
        raise HypothesisViolationError(f"exponent p must be <= 2, got {p}")
    if not (c > 0 and I_R > 0):
        raise ValueError("c and I_R must be positive")
    return M_R * math.exp(-(TWO_PI / c) * I_R ** (2 - p))


def theorem2_ratio(M_R: float, R: float, N: int, gamma: float) -> float:
    return M_R / iterated_log(N, R) ** gamma


def corollary_ratio(M_R: float, R: float, exponent: float) -> float:
    if not R > 0:
        raise ValueError("R must be positive")
    return M_R / R**exponent


def extremal_eta(r1: float, r2: float) -> RadialTestFunction:
    """eta(t) = 1/(t ln(r2/r1)), which minimizes the conformal ring integral."""
    return RadialTestFunction(WeightSpec.reciprocal(1 / math.log(r2 / r1)), r1, r2, "extremal")


def random_admissible_eta(r1: float, r2: float, rng: np.random.Generator,
                          min_knots: int = 4, max_knots: int = 16) -> RadialTestFunction:
    """Nonnegative piecewise-linear eta on [r1, r2] with integral exactly 1."""
    n = int(rng.integers(min_knots, max_knots + 1))
    interior = np.sort(rng.uniform(r1, r2, n - 2))
    ts = np.concatenate([[r1], interior, [r2]])
    vals = rng.uniform(0.0, 1.0, n)
    total = float(np.trapezoid(vals, ts))
    return RadialTestFunction(WeightSpec.tabulated(ts, vals / total), r1, r2, "random")


def ring_inequality_check(p: RadialProfile, ann: AnnulusSpec,
                          etas: Sequence[RadialTestFunction],
                          quad: QuadratureSettings = QuadratureSettings()) -> list:
    """[(lhs, rhs, holds)] for image-ring modulus <= integral of K eta^2."""
    tol = 10 * quad.rel_tol
    for i, eta in enumerate(etas):
        if not (math.isclose(eta.r1, ann.r_inner) and math.isclose(eta.r2, ann.r_outer)):
            raise AdmissibilityError(f"eta #{i} is not defined on the annulus radii", i)
        total = eta.integral(quad)
        if total < 1 - tol:
            raise AdmissibilityError(f"eta #{i} integrates to {total!r} < 1", i)
    lhs = family_ring_modulus(p, ann.r_inner, ann.r_outer)
    fld = field_of(p)
    rows = []
    for eta in etas:
        rhs = annulus_integral(fld, eta.weight, ann, quad)
        rows.append((lhs, rhs, lhs <= rhs * (1 + tol)))
    return rows


def liminf_verdict(reports: Sequence[GrowthReport], tail_fraction: float = DEFAULT_TAIL_FRACTION,
                   floor: Optional[float] = None, quantity: str = "envelope") -> Verdict:
    """Estimate the liminf of a growth quantity from a finite, increasing R grid.

    A strictly decreasing tail that has dropped below 1e-3 of the first
    value is reported as decay; otherwise the tail minimum is compared
    with half the theoretical floor (or 1e-6 without one).
    """
    if len(reports) < MIN_REPORTS:
        raise InsufficientGridError(f"need at least {MIN_REPORTS} reports, got {len(reports)}")
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    Rs = [r.R for r in reports]
    if any(b <= a for a, b in zip(Rs, Rs[1:])):
        raise ValueError("reports must be sorted by strictly increasing R")
    values = [getattr(r, quantity) for r in reports]
    n_tail = math.ceil(tail_fraction * len(values))
    tail = values[-n_tail:]
    tail_min = min(tail)
    threshold = 0.5 * floor if floor is not None else ABSOLUTE_THRESHOLD
    decreasing = all(b < a for a, b in zip(tail, tail[1:]))
    if decreasing and tail_min < 1e-3 * values[0]:
        kind = "tends-to-zero"
    elif tail_min >= threshold:
        kind = "bounded-below"
    else:
        kind = "inconclusive"
    return Verdict(kind, tail_min, threshold, n_tail)


def geometric_grid(R_min: float, R_max: float, count: int) -> np.ndarray:
    if not (0 < R_min < R_max) or count < 2:
        raise ValueError("geometric grid needs 0 < R_min < R_max and count >= 2")
    grid = np.geomspace(R_min, R_max, count)
    grid[0], grid[-1] = R_min, R_max
    return grid


def fit_hypothesis_constant(field: CoefficientField, w: WeightSpec, z0: PlanePoint, r0: float,
                            radii: Sequence[float], p: float = 1.0,
                            quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Smallest c with annulus integral <= c I(R)^p on the given radii."""
    best = 0.0
    for R in radii:
        area = annulus_integral(field, w, AnnulusSpec(z0, r0, R), quad)
        best = max(best, area / normalization_integral(w, r0, R, quad) ** p)
    return best


def fit_circle_bound(field: CoefficientField, z0: PlanePoint, radii: Sequence[float],
                     quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Largest circle average of K over the given radii."""
    return max(circle_average(field, CircleSpec(z0, R), quad) for R in radii)


THEOREMS = ("lemma3", "lemma4", "thm2", "cor1", "cor2")


@dataclass(frozen=True)
class SweepResult:
    reports: tuple
    theorem: str
    constant: Optional[float]  # c for lemma4/thm2/cor1, K for cor2
    floor: Optional[float]

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.reports)


def sweep(profile: RadialProfile, w: WeightSpec, r0: float, radii: Sequence[float],
          theorem: str = "lemma3", c: Optional[float] = None, p: float = 1.0,
          K: Optional[float] = None, field: Optional[CoefficientField] = None,
          quad: QuadratureSettings = QuadratureSettings()) -> SweepResult:
    """One GrowthReport per radius, in increasing order of R.

    ``ratio`` holds the quantity the selected theorem forbids from
    vanishing.  Hypothesis constants that are not supplied are fitted on
    the same grid.  Radii whose quadrature missed its tolerance keep the
    best estimate and are marked ``converged=False``.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    field = field if field is not None else field_of(profile)
    z0 = profile.center
    radii = [float(R) for R in radii]

    rows = []
    for R in radii:
        ok = True
        try:
            I = normalization_integral(w, r0, R, quad)
        except ConvergenceError as exc:
            I, ok = exc.estimate, False
        try:
            area = annulus_integral(field, w, AnnulusSpec(z0, r0, R), quad)
        except ConvergenceError as exc:
            area, ok = exc.estimate, False
        rows.append((R, family_max_modulus(profile, R), I, area, ok))

    floor = lemma3_floor(profile, r0) if theorem in ("lemma3", "lemma4") else None
    constant = None
    if theorem in ("lemma4", "thm2", "cor1"):
        constant = c if c is not None else max(area / I**p for _, _, I, area, _ in rows)
    elif theorem == "cor2":
        constant = K if K is not None else fit_circle_bound(field, z0, radii, quad)

    reports = []
    for R, M, I, area, ok in rows:
        Lam = area / I**2
        env = lemma3_envelope(M, Lam)
        if theorem == "lemma3":
            ratio = env
        elif theorem == "lemma4":
            ratio = lemma4_envelope(M, I, constant, p)
        elif theorem == "thm2":
            if w.kind != "canonical":
                raise ValueError("thm2 needs a canonical iterated-log weight")
            ratio = theorem2_ratio(M, R, w.N, TWO_PI / constant)
        elif theorem == "cor1":
            ratio = corollary_ratio(M, R, TWO_PI / constant)
        else:
            ratio = corollary_ratio(M, R, 1.0 / constant)
        reports.append(GrowthReport(R, M, I, Lam, env, ratio,
                                    lemma3_floor(profile, r0), ok))
    return SweepResult(tuple(reports), theorem, constant, floor)
