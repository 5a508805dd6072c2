"""Iterated exponentials and logarithms, radial weights and their integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._gauss import QuadratureSettings, integrate
from .errors import ConditionIViolation, DomainError, IterationOverflowError

MAX_CANONICAL_N = 3


def iterated_exp(k: int) -> float:
    """e_0 = 1, e_{k+1} = exp(e_k)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    value = 1.0
    for _ in range(k):
        try:
            value = math.exp(value)
        except OverflowError:
            raise IterationOverflowError(f"e_{k} is not representable as a float") from None
    return value


def _domain_edge(k: int) -> float:
    """Infimum of the domain of ln_k (exclusive); -inf for k = 0."""
    if k == 0:
        return -math.inf
    if k == 1:
        return 0.0
    return iterated_exp(k - 2)


def iterated_log(k: int, t: float) -> float:
    """k-fold logarithm, ln_0 t = t."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not math.isfinite(t):
        raise DomainError(f"ln_{k} needs a finite argument")
    if not t > _domain_edge(k):
        raise DomainError(f"ln_{k}({t!r}) is undefined (need t > {_domain_edge(k)!r})")
    value = float(t)
    for _ in range(k):
        value = math.log(value)
    return value


def _iterated_log_array(k: int, t: np.ndarray) -> np.ndarray:
    out = np.array(t, dtype=float)
    for _ in range(k):
        out = np.log(out)
    return out


@dataclass(frozen=True)
class WeightSpec:
    """Radial weight psi(t) >= 0, times a nonnegative ``scale``.

    Kinds: ``canonical`` (psi = 1/prod_{k<=N} ln_k t), ``reciprocal``
    (1/t), ``constant`` and ``tabulated`` (linear interpolation in t).
    """

    kind: str
    N: int = 0
    value: float = 1.0
    ts: tuple = ()
    psis: tuple = ()
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("canonical", "reciprocal", "constant", "tabulated"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.scale < 0 or not math.isfinite(self.scale):
            raise ValueError("weight scale must be finite and nonnegative")
        if self.kind == "canonical" and not (0 <= self.N <= MAX_CANONICAL_N):
            raise ValueError(f"canonical weight order must be in 0..{MAX_CANONICAL_N}")
        if self.kind == "constant" and not (self.value > 0 and math.isfinite(self.value)):
            raise ValueError("constant weight must be positive")
        if self.kind == "tabulated":
            ts = np.asarray(self.ts, dtype=float)
            ps = np.asarray(self.psis, dtype=float)
            if ts.size < 2 or ts.shape != ps.shape:
                raise ValueError("tabulated weight needs at least two (t, psi) samples")
            if np.any(np.diff(ts) <= 0) or ts[0] <= 0:
                raise ValueError("tabulated weight abscissae must be positive and increasing")
            if np.any(ps < 0) or not np.all(np.isfinite(ps)):
                raise ValueError("tabulated weight values must be finite and nonnegative")

    @classmethod
    def canonical(cls, N: int) -> "WeightSpec":
        return cls("canonical", N=N)

    @classmethod
    def reciprocal(cls, scale: float = 1.0) -> "WeightSpec":
        return cls("reciprocal", scale=scale)

    @classmethod
    def constant(cls, value: float) -> "WeightSpec":
        return cls("constant", value=value)

    @classmethod
    def tabulated(cls, ts: Sequence[float], psis: Sequence[float]) -> "WeightSpec":
        return cls("tabulated", ts=tuple(map(float, ts)), psis=tuple(map(float, psis)))

    @property
    def lower_edge(self) -> float:
        """Exclusive lower end of the domain."""
        if self.kind == "canonical":
            return _domain_edge(self.N + 1) if self.N >= 1 else 0.0
        if self.kind == "tabulated":
            return self.ts[0]
        return 0.0

    @property
    def upper_edge(self) -> float:
        return self.ts[-1] if self.kind == "tabulated" else math.inf

    def breakpoints(self) -> tuple:
        return self.ts if self.kind == "tabulated" else ()

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "tabulated":
            lo, hi = self.ts[0], self.ts[-1]
            if np.any(t < lo * (1 - 1e-12)) or np.any(t > hi * (1 + 1e-12)):
                raise DomainError(f"weight evaluated outside its table [{lo}, {hi}]")
            return self.scale * np.interp(t, self.ts, self.psis)
        if np.any(t <= self.lower_edge) or not np.all(np.isfinite(t)):
            raise DomainError(f"{self.kind} weight needs t > {self.lower_edge!r}")
        if self.kind == "constant":
            return np.full(t.shape, self.scale * self.value)
        if self.kind == "reciprocal":
            return self.scale / t
        prod = np.ones_like(t)
        for k in range(self.N + 1):
            prod = prod * _iterated_log_array(k, t)
        return self.scale / prod


def eval_weight(w: WeightSpec, t: float) -> float:
    return float(w(t))


def lower_limit(w: WeightSpec, r0: float) -> float:
    """r0, nudged inward by 1e-14 relative when the weight blows up exactly there."""
    try:
        v = float(w(r0))
    except DomainError:
        v = math.inf
    if math.isfinite(v):
        return r0
    nudged = r0 * (1 + 1e-14)
    float(w(nudged))  # raises DomainError if still outside
    return nudged


def log_radial_integral(g, lo: float, hi: float, quad: QuadratureSettings,
                        breakpoints=()) -> tuple:
    """Integrate g(t) dt over [lo, hi] with panels in s = ln t."""
    def in_s(s):
        t = np.exp(s)
        return g(t) * t
    bps = [math.log(b) for b in breakpoints if b > 0]
    return integrate(in_s, math.log(lo), math.log(hi), quad, bps)


def normalization_integral(w: WeightSpec, r0: float, R: float,
                           quad: QuadratureSettings = QuadratureSettings()) -> float:
    """I(R) = integral of psi over [r0, R]."""
    if not (0 < r0 < R):
        raise ValueError(f"need 0 < r0 < R, got r0={r0}, R={R}")
    if R > w.upper_edge * (1 + 1e-12):
        raise DomainError(f"R = {R} beyond the weight's domain")
    lo = lower_limit(w, r0)
    value, _ = log_radial_integral(w, lo, R, quad, w.breakpoints())
    if not (value > 0 and math.isfinite(value)):
        raise ConditionIViolation(f"weight integral over [{r0}, {R}] is {value!r}")
    return value


def lemma5_check(N: int, R: float, quad: QuadratureSettings = QuadratureSettings()) -> tuple:
    """(quadrature, ln_{N+1} R, |difference|) for the canonical weight on [e_N, R]."""
    if not (0 <= N <= MAX_CANONICAL_N):
        raise ValueError(f"N must be in 0..{MAX_CANONICAL_N}")
    eN = iterated_exp(N)
    if not R > eN:
        raise DomainError(f"R must exceed e_{N} = {eN!r}")
    numeric = normalization_integral(WeightSpec.canonical(N), eN, R, quad)
    closed = iterated_log(N + 1, R)
    return numeric, closed, abs(numeric - closed)
