"""Points, annuli, Beltrami coefficients and radial dilatation fields."""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CenterMismatchError,
    DegenerateCoefficientError,
    DilatationOverflowError,
    DomainError,
    InvalidDilatationError,
)

EPS_DEGENERATE = 1e-12
K_MAX = 1e12

# slack used when deciding whether a radius sits on a table end node
_EDGE_RTOL = 1e-12


@dataclass(frozen=True)
class PlanePoint:
    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite point ({self.re}, {self.im})")

    @classmethod
    def from_complex(cls, z: complex) -> "PlanePoint":
        return cls(float(z.real), float(z.imag))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


ORIGIN = PlanePoint(0.0, 0.0)


@dataclass(frozen=True)
class AnnulusSpec:
    """Open ring r_inner < |z - center| < r_outer."""

    center: PlanePoint
    r_inner: float
    r_outer: float

    def __post_init__(self):
        if not (0 < self.r_inner < self.r_outer < math.inf):
            raise ValueError(
                f"annulus needs 0 < r_inner < r_outer < inf, got {self.r_inner}, {self.r_outer}"
            )


@dataclass(frozen=True)
class CircleSpec:
    center: PlanePoint
    radius: float

    def __post_init__(self):
        if not (0 < self.radius < math.inf):
            raise ValueError(f"circle radius must be positive and finite, got {self.radius}")


@dataclass(frozen=True)
class BeltramiValue:
    """A value of the complex coefficient mu, |mu| < 1.

    ``gap`` holds 1 - |mu|.  When the producer knows it in closed form it
    should pass it, since recomputing it from ``re``/``im`` cancels
    catastrophically once |mu| is close to 1.
    """

    re: float
    im: float = 0.0
    gap: Optional[float] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("non-finite Beltrami coefficient")
        if self.gap is None:
            object.__setattr__(self, "gap", 1.0 - math.hypot(self.re, self.im))
        if self.gap <= 0:
            raise DegenerateCoefficientError(f"|mu| >= 1 (mu = {self.re}+{self.im}i)")

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


def dilatation_from_mu(mu: BeltramiValue, eps_degenerate: float = EPS_DEGENERATE) -> float:
    """K = (1 + |mu|) / (1 - |mu|)."""
    gap = mu.gap
    if gap <= eps_degenerate:
        raise DegenerateCoefficientError(
            f"|mu| = {abs(mu)!r} is within {eps_degenerate:g} of 1"
        )
    # 1 + 2|mu|/(1-|mu|) keeps K > 1 for tiny nonzero mu
    return 1.0 + 2.0 * (1.0 - gap) / gap


def mu_from_dilatation(K: float, phase: float = 0.0) -> BeltramiValue:
    if not (K >= 1.0) or not math.isfinite(K):
        raise InvalidDilatationError(f"dilatation must be finite and >= 1, got {K!r}")
    if not math.isfinite(phase):
        raise ValueError("phase must be finite")
    modulus = (K - 1.0) / (K + 1.0)
    if modulus == 0.0:
        return BeltramiValue(0.0, 0.0, gap=1.0)
    w = cmath.rect(modulus, phase)
    return BeltramiValue(w.real, w.imag, gap=2.0 / (K + 1.0))


def _as_complex_array(z) -> np.ndarray:
    if isinstance(z, PlanePoint):
        return np.asarray(complex(z))
    return np.asarray(z, dtype=complex)


@dataclass(frozen=True)
class CoefficientField:
    """A radial dilatation field K(z) = scale * k(|z - center|).

    kind is one of ``"constant"``, ``"from-radial-profile"`` and
    ``"tabulated-radial"``.  Build instances through the classmethods.
    """

    kind: str
    center: PlanePoint = ORIGIN
    value: float = 1.0
    profile: object = None
    radii: tuple = ()
    k_values: tuple = ()
    scale: float = 1.0
    k_max: float = K_MAX

    def __post_init__(self):
        if self.kind not in ("constant", "from-radial-profile", "tabulated-radial"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if not (self.scale >= 1.0 and math.isfinite(self.scale)):
            raise InvalidDilatationError(f"scale must be >= 1, got {self.scale}")
        if self.kind == "constant" and not (1.0 <= self.value < math.inf):
            raise InvalidDilatationError(f"constant dilatation must be >= 1, got {self.value}")
        if self.kind == "tabulated-radial":
            r = np.asarray(self.radii, dtype=float)
            k = np.asarray(self.k_values, dtype=float)
            if r.ndim != 1 or r.size < 2 or r.shape != k.shape:
                raise ValueError("tabulated field needs at least two (radius, K) pairs")
            if not np.all(np.isfinite(r)) or not np.all(np.isfinite(k)):
                raise ValueError("tabulated field contains non-finite entries")
            if r[0] <= 0 or np.any(np.diff(r) <= 0):
                raise ValueError("tabulated radii must be positive and strictly increasing")
            if np.any(k < 1.0):
                raise InvalidDilatationError("tabulated K values must be >= 1")
            object.__setattr__(self, "_log_r", np.log(r))
            object.__setattr__(self, "_k", k)
        if self.kind == "from-radial-profile" and self.profile is None:
            raise ValueError("from-radial-profile field needs a profile")

    @classmethod
    def constant(cls, K: float, center: PlanePoint = ORIGIN) -> "CoefficientField":
        return cls("constant", center=center, value=float(K))

    @classmethod
    def tabulated(cls, radii: Sequence[float], k_values: Sequence[float],
                  center: PlanePoint = ORIGIN) -> "CoefficientField":
        return cls("tabulated-radial", center=center,
                   radii=tuple(float(r) for r in radii),
                   k_values=tuple(float(k) for k in k_values))

    @classmethod
    def from_profile(cls, profile) -> "CoefficientField":
        return cls("from-radial-profile", center=profile.center, profile=profile)

    def scaled(self, factor: float) -> "CoefficientField":
        """Same field with K multiplied by ``factor`` >= 1."""
        kwargs = {k: getattr(self, k) for k in
                  ("kind", "center", "value", "profile", "radii", "k_values", "k_max")}
        return CoefficientField(scale=self.scale * factor, **kwargs)

    @property
    def radius_range(self) -> tuple:
        """Closed radius interval on which the field may be evaluated."""
        if self.kind == "tabulated-radial":
            return self.radii[0], self.radii[-1]
        return 0.0, math.inf

    def breakpoints(self) -> tuple:
        """Radii where the radial profile of K is not smooth."""
        if self.kind == "tabulated-radial":
            return self.radii
        if self.kind == "from-radial-profile":
            return tuple(self.profile.breakpoints())
        return ()

    def check_center(self, center: PlanePoint) -> None:
        if self.kind != "constant" and center != self.center:
            raise CenterMismatchError(
                f"field centered at {self.center} used with annulus/circle centered at {center}"
            )

    def radial(self, r) -> np.ndarray:
        """K as a function of the distance to the center (vectorized)."""
        r = np.asarray(r, dtype=float)
        if self.kind == "constant":
            k = np.full(r.shape, self.value)
        elif self.kind == "tabulated-radial":
            lo, hi = self.radii[0], self.radii[-1]
            if np.any(r < lo * (1 - _EDGE_RTOL)) or np.any(r > hi * (1 + _EDGE_RTOL)):
                raise DomainError(f"radius outside tabulated range [{lo}, {hi}]")
            lr = np.log(np.clip(r, lo, hi))
            k = np.interp(lr, self._log_r, self._k)
        else:
            if np.any(r <= 0):
                raise DomainError("dilatation of a radial map is undefined at its center")
            k = np.asarray(self.profile.dilatation(r), dtype=float)
        k = self.scale * k
        if np.any(k > self.k_max) or not np.all(np.isfinite(k)):
            raise DilatationOverflowError(f"dilatation exceeds K_max = {self.k_max:g}")
        return k

    def evaluate(self, z) -> np.ndarray:
        """K at complex point(s) z."""
        z = _as_complex_array(z)
        return self.radial(np.abs(z - complex(self.center)))


def eval_dilatation(field_: CoefficientField, z: PlanePoint) -> float:
    return float(field_.evaluate(z))


def load_radial_table(path, center: PlanePoint = ORIGIN) -> CoefficientField:
    """Load a tabulated radial field from a two-column (radius, K) CSV."""
    radii, ks = read_two_column_csv(path)
    return CoefficientField.tabulated(radii, ks, center=center)


def read_two_column_csv(path) -> tuple:
    xs, ys = [], []
    with Path(path).open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns, got {len(row)}")
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError:
                if lineno == 1 and not xs:
                    continue  # header
                raise ValueError(f"{path}:{lineno}: non-numeric entry {row!r}") from None
            xs.append(x)
            ys.append(y)
    if len(xs) < 2:
        raise ValueError(f"{path}: need at least two data rows")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError(f"{path}: first column must be strictly increasing")
    return xs, ys
