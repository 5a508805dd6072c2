import math

import mpmath
import numpy as np
import pytest

from qcgrowth import QuadratureSettings
from qcgrowth.errors import DomainError, IterationOverflowError
from qcgrowth.weights import (
    WeightSpec,
    eval_weight,
    iterated_exp,
    iterated_log,
    lemma5_check,
    lower_limit,
    normalization_integral,
)

E = math.e


def mp_canonical_integral(N, a, b):
    """Independent oracle: arbitrary-precision quadrature of 1/prod ln_k t."""
    mpmath.mp.dps = 30

    def psi(t):
        prod, v = mpmath.mpf(1), mpmath.mpf(t)
        for _ in range(N + 1):
            prod *= v
            v = mpmath.log(v)
        return 1 / prod

    # integrate in s = ln t to keep the tail tame
    return float(mpmath.quad(lambda s: psi(mpmath.exp(s)) * mpmath.exp(s),
                             [mpmath.log(a), mpmath.log(b)]))


def test_iterated_exp_values():
    assert iterated_exp(0) == 1.0
    assert iterated_exp(1) == pytest.approx(2.718281828459045, rel=1e-15)
    assert iterated_exp(2) == pytest.approx(float(mpmath.exp(mpmath.e)), rel=1e-15)
    assert iterated_exp(2) == pytest.approx(15.15426224, abs=1e-8)
    assert iterated_exp(3) == pytest.approx(3814279.1047602, rel=1e-12)


def test_iterated_exp_overflow():
    with pytest.raises(IterationOverflowError):
        iterated_exp(4)


@pytest.mark.parametrize("k, t, expected", [
    (0, 7.0, 7.0),
    (0, -3.5, -3.5),
    (1, E, 1.0),
    (2, E**E, 1.0),
    (3, iterated_exp(3), 1.0),
])
def test_iterated_log_values(k, t, expected):
    assert iterated_log(k, t) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("k, t", [(1, 0.0), (1, -1.0), (2, 1.0), (2, 0.5), (3, E), (3, 2.0)])
def test_iterated_log_domain(k, t):
    with pytest.raises(DomainError):
        iterated_log(k, t)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_iterated_log_increasing(k):
    lo = 0.0 if k == 1 else iterated_exp(k - 2)
    ts = np.geomspace(lo + 1e-3 if lo == 0 else lo * 1.001, 1e12, 200)
    vals = [iterated_log(k, t) for t in ts]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_eval_weight_examples():
    assert eval_weight(WeightSpec.canonical(0), 2.0) == 0.5
    assert eval_weight(WeightSpec.canonical(1), E**2) == pytest.approx(1 / (2 * E**2), rel=1e-15)
    assert eval_weight(WeightSpec.constant(1.0), 123.0) == 1.0
    assert eval_weight(WeightSpec.reciprocal(), 4.0) == 0.25
    assert eval_weight(WeightSpec.tabulated([1, 3], [0, 2]), 2.0) == 1.0


def test_canonical_domain_guard():
    # N = 2 is defined for t > e_1 = e, including below r0 = e_2
    assert eval_weight(WeightSpec.canonical(2), 3.0) > 0
    with pytest.raises(DomainError):
        eval_weight(WeightSpec.canonical(2), E)
    with pytest.raises(DomainError):
        eval_weight(WeightSpec.canonical(1), 1.0)
    with pytest.raises(ValueError):
        WeightSpec.canonical(4)


@pytest.mark.parametrize("w, r0, R, expected", [
    (WeightSpec.constant(1.0), 1.0, 3.0, 2.0),
    (WeightSpec.canonical(0), 1.0, E, 1.0),
    (WeightSpec.canonical(1), E, E**E, 1.0),
    (WeightSpec.reciprocal(), 2.0, 8.0, math.log(4.0)),
])
def test_normalization_integral_examples(w, r0, R, expected):
    assert normalization_integral(w, r0, R) == pytest.approx(expected, rel=1e-12)


def test_normalization_singular_lower_limit_is_nudged():
    w = WeightSpec.canonical(1)
    assert lower_limit(w, 1.0) == 1.0 + 1e-14
    assert lower_limit(w, E) == E
    # 1/(t ln t) is not integrable at 1; the nudged limit still yields a finite
    # value near -ln ln(1 + 1e-14) ~ 32.2 instead of a domain error
    value = normalization_integral(w, 1.0, E)
    assert math.isfinite(value) and value == pytest.approx(32.24, rel=1e-3)


def test_normalization_tabulated_is_exact_trapezoid():
    ts = [1.0, 1.5, 4.0, 9.0]
    ps = [0.2, 1.0, 0.0, 3.0]
    w = WeightSpec.tabulated(ts, ps)
    assert normalization_integral(w, 1.0, 9.0) == pytest.approx(np.trapezoid(ps, ts), rel=1e-13)


@pytest.mark.parametrize("N, R, tol", [
    (0, E, 1e-10),
    (1, E**E, 1e-8),
    (2, iterated_exp(3), 1e-6),
])
def test_lemma5_examples(N, R, tol):
    numeric, closed, err = lemma5_check(N, R)
    assert closed == pytest.approx(1.0, rel=1e-12)
    assert err <= tol
    assert numeric == pytest.approx(1.0, abs=tol)


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_lemma5_against_mpmath(N):
    eN = iterated_exp(N)
    for R in (eN * 1.7, eN * 50.0, eN * 1e4):
        numeric, closed, _ = lemma5_check(N, R)
        oracle = mp_canonical_integral(N, eN, R)
        assert numeric == pytest.approx(oracle, rel=1e-10)
        assert closed == pytest.approx(oracle, rel=1e-12)


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_lemma5_substitution_identity(N):
    rng = np.random.default_rng(100 + N)
    eN = iterated_exp(N)
    upper = 10 * iterated_exp(N + 1) if N < 3 else 1e300
    for R in np.exp(rng.uniform(math.log(eN), math.log(upper), 20)):
        _, closed, err = lemma5_check(N, float(R))
        assert err <= max(1e-8, 1e-8 * closed)


def test_lemma5_domain():
    with pytest.raises(DomainError):
        lemma5_check(1, E)
    with pytest.raises(ValueError):
        lemma5_check(4, 1e10)


@pytest.mark.parametrize("w, r0", [
    (WeightSpec.canonical(0), 1.0),
    (WeightSpec.canonical(2), iterated_exp(2)),
    (WeightSpec.constant(0.3), 0.5),
])
def test_monotone_and_additive(w, r0):
    grid = np.geomspace(r0 * 1.1, r0 * 1e5, 15)
    vals = [normalization_integral(w, r0, R) for R in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    R1, R2 = grid[4], grid[11]
    split = normalization_integral(w, r0, R1) + normalization_integral(w, R1, R2)
    assert split == pytest.approx(normalization_integral(w, r0, R2), rel=1e-9)


def test_env_rtol_override(monkeypatch):
    monkeypatch.setenv("QCG_QUAD_RTOL", "1e-6")
    assert QuadratureSettings.from_env().rel_tol == 1e-6
    monkeypatch.delenv("QCG_QUAD_RTOL")
    assert QuadratureSettings.from_env().rel_tol == 1e-9
