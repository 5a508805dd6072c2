"""Radial stretch maps f(z) = rho(|z - z0|) (z - z0)/|z - z0| + f(z0).

These solve the Beltrami equation exactly, so every quantity the bounds
module needs (dilatation, maximum modulus, image areas, ring moduli) is
available in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ORIGIN, BeltramiValue, CoefficientField, PlanePoint
from .errors import DomainError

E = math.e

KINDS = ("identity", "power", "log-stretch", "integrated")


@dataclass(frozen=True)
class RadialProfile:
    """Strictly increasing radial stretch rho with rho(0) = 0.

    ``param`` is alpha for ``power`` and gamma for ``log-stretch``; both
    lie in (0, 1].  ``integrated`` profiles wrap a tabulated field and
    solve r rho'/rho = 1/K(r) by quadrature (see ``profile_from_field``).
    """

    kind: str
    param: float = 1.0
    center: PlanePoint = ORIGIN
    field: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family {self.kind!r}; choose from {KINDS}")
        if self.kind in ("power", "log-stretch") and not (0 < self.param <= 1):
            raise ValueError(f"{self.kind} parameter must lie in (0, 1], got {self.param}")
        if self.kind == "integrated":
            if self.field is None or self.field.kind != "tabulated-radial":
                raise ValueError("integrated profile needs a tabulated field")
            r = np.asarray(self.field.radii)
            k = self.field.scale * np.asarray(self.field.k_values)
            # exact integral of dt/(t K) for K linear in ln t on each cell
            lr = np.log(r)
            dk = np.diff(k)
            with np.errstate(divide="ignore", invalid="ignore"):
                cell = np.where(np.abs(dk) > 1e-14 * k[:-1],
                                np.diff(lr) * np.log(k[1:] / k[:-1]) / dk,
                                np.diff(lr) / k[:-1])
            object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(cell)]))

    @classmethod
    def identity(cls, center: PlanePoint = ORIGIN) -> "RadialProfile":
        return cls("identity", 1.0, center)

    @classmethod
    def power(cls, alpha: float, center: PlanePoint = ORIGIN) -> "RadialProfile":
        return cls("power", alpha, center)

    @classmethod
    def log_stretch(cls, gamma: float, center: PlanePoint = ORIGIN) -> "RadialProfile":
        return cls("log-stretch", gamma, center)

    def breakpoints(self) -> tuple:
        if self.kind == "log-stretch":
            return (E,)
        if self.kind == "integrated":
            return self.field.radii
        return ()

    def rho(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise DomainError("profile evaluated at a negative radius")
        if self.kind == "identity":
            return r.copy()
        if self.kind == "power":
            return r ** self.param
        if self.kind == "log-stretch":
            inner = r / E
            with np.errstate(divide="ignore", invalid="ignore"):
                outer = np.log(np.maximum(r, E)) ** self.param
            return np.where(r <= E, inner, outer)
        return self._rho_integrated(r)

    def _rho_integrated(self, r):
        radii = self.field.radii
        lo, hi = radii[0], radii[-1]
        if np.any(r > hi * (1 + 1e-12)):
            raise DomainError(f"integrated profile only defined up to r = {hi}")
        lr = np.log(np.clip(r, lo, hi))
        idx = np.clip(np.searchsorted(np.log(radii), lr, side="right") - 1, 0, len(radii) - 2)
        lr_nodes = np.log(np.asarray(radii))
        k_nodes = self.field.scale * np.asarray(self.field.k_values)
        k0, k1 = k_nodes[idx], k_nodes[idx + 1]
        h = lr_nodes[idx + 1] - lr_nodes[idx]
        x = lr - lr_nodes[idx]
        slope = (k1 - k0) / h
        kx = k0 + slope * x
        with np.errstate(divide="ignore", invalid="ignore"):
            partial = np.where(np.abs(slope) * h > 1e-14 * k0,
                               np.log(kx / k0) / slope, x / k0)
        log_rho = math.log(lo) + self._cum[idx] + partial
        return np.where(r < lo, r, np.exp(log_rho))

    def log_derivative(self, r) -> np.ndarray:
        """r rho'(r) / rho(r); the right limit at the log-stretch splice."""
        r = np.asarray(r, dtype=float)
        if self.kind == "identity":
            return np.ones_like(r)
        if self.kind == "power":
            return np.full(r.shape, self.param)
        if self.kind == "log-stretch":
            with np.errstate(divide="ignore"):
                outer = self.param / np.log(np.maximum(r, E))
            return np.where(r < E, 1.0, outer)
        lo = self.field.radii[0]
        inside = np.clip(r, lo, self.field.radii[-1])
        return np.where(r < lo, 1.0, 1.0 / self.field.radial(inside))

    def dilatation(self, r) -> np.ndarray:
        a = self.log_derivative(r)
        return np.maximum(a, 1.0 / a)


def profile_from_field(field: CoefficientField) -> RadialProfile:
    """Radial map whose dilatation is a given tabulated field.

    Below the first table radius the map is the identity; on the table it
    solves r rho'/rho = 1/K(r) exactly for K linear in ln r.
    """
    return RadialProfile("integrated", 1.0, field.center, field)


def field_of(p: RadialProfile) -> CoefficientField:
    if p.kind == "integrated":
        return p.field
    return CoefficientField.from_profile(p)


def profile_value(p: RadialProfile, r: float) -> float:
    return float(p.rho(r))


def family_mu(p: RadialProfile, z: PlanePoint) -> BeltramiValue:
    dz = complex(z) - complex(p.center)
    r = abs(dz)
    if r == 0:
        raise DomainError("mu of a radial stretch is undefined at the center")
    a = float(p.log_derivative(r))
    mu = (dz / dz.conjugate()) * (a - 1) / (a + 1)
    m = min(a, 1 / a)
    return BeltramiValue(mu.real, mu.imag, gap=2 * m / (1 + m))


def family_dilatation(p: RadialProfile, r: float) -> float:
    if r <= 0:
        raise DomainError("radius must be positive")
    return float(p.dilatation(r))


def family_max_modulus(p: RadialProfile, R: float) -> float:
    """M(R, f); every point of |z - z0| = R attains it."""
    return float(p.rho(R))


def family_image_area(p: RadialProfile, r: float) -> float:
    """Lebesgue measure of f(B(z0, r)), the disk of radius rho(r)."""
    return math.pi * float(p.rho(r)) ** 2


def family_ring_modulus(p: RadialProfile, r1: float, r2: float) -> float:
    """2 pi / ln(rho(r2)/rho(r1)): modulus of the curves joining the image circles."""
    if not (0 < r1 < r2):
        raise ValueError(f"need 0 < r1 < r2, got {r1}, {r2}")
    return 2 * math.pi / math.log(float(p.rho(r2)) / float(p.rho(r1)))


def make_profile(name: str, param: float = None, center: PlanePoint = ORIGIN) -> RadialProfile:
    name = name.lower().replace("_", "-")
    if name == "identity":
        return RadialProfile.identity(center)
    if name == "power":
        return RadialProfile.power(0.5 if param is None else param, center)
    if name in ("log-stretch", "logstretch"):
        return RadialProfile.log_stretch(0.5 if param is None else param, center)
    raise ValueError(f"unknown family {name!r}")


CATALOG = (
    ("identity", "rho(r) = r", "K = 1"),
    ("power", "rho(r) = r**alpha, 0 < alpha <= 1", "K = 1/alpha"),
    ("log-stretch", "rho(r) = r/e (r <= e), (ln r)**gamma (r >= e), 0 < gamma <= 1",
     "K = 1 (r < e), ln(r)/gamma (r >= e)"),
)
