import math

import numpy as np
import pytest

from qcgrowth.core import ORIGIN, AnnulusSpec, CoefficientField, PlanePoint, dilatation_from_mu
from qcgrowth.errors import DomainError
from qcgrowth.families import (
    RadialProfile,
    family_dilatation,
    family_image_area,
    family_max_modulus,
    family_mu,
    family_ring_modulus,
    field_of,
    make_profile,
    profile_from_field,
    profile_value,
)

E = math.e

IDENTITY = RadialProfile.identity()
POWER = RadialProfile.power(0.5)
LOG = RadialProfile.log_stretch(0.5)
FAMILIES = [IDENTITY, POWER, LOG, RadialProfile.power(0.2), RadialProfile.log_stretch(1.0)]


def numeric_mu(p, z, h=1e-6):
    """Finite-difference oracle: mu = f_zbar / f_z of f(z) = rho(|z|) z/|z|."""
    def f(w):
        r = abs(w)
        return float(p.rho(r)) * w / r
    fx = (f(z + h) - f(z - h)) / (2 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)
    f_z = 0.5 * (fx - 1j * fy)
    f_zbar = 0.5 * (fx + 1j * fy)
    return f_zbar / f_z


@pytest.mark.parametrize("p, r, expected", [
    (IDENTITY, 5.0, 5.0),
    (POWER, 4.0, 2.0),
    (LOG, E**4, 2.0),
    (LOG, 1.0, 1 / E),
    (LOG, E, 1.0),
])
def test_profile_value(p, r, expected):
    assert profile_value(p, r) == pytest.approx(expected, rel=1e-15)


def test_mu_examples():
    assert complex(family_mu(IDENTITY, PlanePoint(2.0, -1.0))) == 0
    assert complex(family_mu(POWER, PlanePoint(1.0, 0.0))) == pytest.approx(-1 / 3, abs=1e-16)
    assert complex(family_mu(LOG, PlanePoint(1.0, 1.0))) == 0
    with pytest.raises(DomainError):
        family_mu(POWER, ORIGIN)


@pytest.mark.parametrize("p", FAMILIES)
@pytest.mark.parametrize("z", [0.7 + 0.2j, -3.0 + 4.0j, 40.0 - 90.0j, 1e3 + 1e3j])
def test_mu_matches_finite_differences(p, z):
    if p.kind == "log-stretch" and abs(abs(z) - E) < 1e-3:
        pytest.skip("splice radius")
    mu = complex(family_mu(p, PlanePoint.from_complex(z)))
    assert mu == pytest.approx(numeric_mu(p, z), abs=1e-6)


@pytest.mark.parametrize("p", FAMILIES)
def test_mu_dilatation_consistency(p):
    for r in np.geomspace(1e-3, 1e6, 20):
        z = PlanePoint.from_complex(r * np.exp(0.37j))
        K = dilatation_from_mu(family_mu(p, z))
        assert K == pytest.approx(family_dilatation(p, r), rel=1e-12)


@pytest.mark.parametrize("p, r, expected", [
    (IDENTITY, 3.0, 1.0),
    (POWER, 17.0, 2.0),
    (LOG, E**3, 6.0),
    (LOG, 2.0, 1.0),
    (LOG, E, 2.0),  # right limit at the splice
])
def test_dilatation_examples(p, r, expected):
    assert family_dilatation(p, r) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("p, R, expected", [
    (IDENTITY, 100.0, 100.0),
    (POWER, 1e4, 100.0),
    (LOG, E**9, 3.0),
])
def test_max_modulus_examples(p, R, expected):
    assert family_max_modulus(p, R) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("p", FAMILIES)
def test_max_modulus_is_max_over_circle(p):
    for R in (0.5, 3.0, 1e3):
        theta = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        z = R * np.exp(1j * theta)
        image = np.array([float(p.rho(abs(w))) * w / abs(w) for w in z])
        assert family_max_modulus(p, R) == pytest.approx(np.abs(image).max(), rel=1e-14)


@pytest.mark.parametrize("p, r, expected", [
    (IDENTITY, 1.0, math.pi),
    (POWER, 4.0, 4 * math.pi),
    (LOG, E**4, 4 * math.pi),
])
def test_image_area_examples(p, r, expected):
    assert family_image_area(p, r) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("p", FAMILIES)
def test_area_equals_pi_max_modulus_squared(p):
    for r in np.geomspace(0.1, 1e5, 20):
        assert family_image_area(p, r) == pytest.approx(math.pi * family_max_modulus(p, r) ** 2,
                                                       rel=1e-15)


@pytest.mark.parametrize("p, r1, r2, expected", [
    (IDENTITY, 1.0, E, 2 * math.pi),
    (POWER, 1.0, E**2, 2 * math.pi),
    (IDENTITY, 1.0, 2.0, 2 * math.pi / math.log(2.0)),
])
def test_ring_modulus_examples(p, r1, r2, expected):
    assert family_ring_modulus(p, r1, r2) == pytest.approx(expected, rel=1e-14)
    assert family_ring_modulus(IDENTITY, 1.0, 2.0) == pytest.approx(9.0647, abs=1e-4)


@pytest.mark.parametrize("p", FAMILIES)
def test_profile_strictly_increasing(p):
    r = np.geomspace(1e-4, 1e8, 2000)
    rho = p.rho(r)
    assert np.all(np.diff(rho) > 0)


def test_parameter_range_enforced():
    with pytest.raises(ValueError):
        RadialProfile.power(1.5)
    with pytest.raises(ValueError):
        RadialProfile.log_stretch(0.0)
    with pytest.raises(ValueError):
        make_profile("spiral")


def test_integrated_profile_matches_power():
    # K = 2 throughout the table -> rho(r) = r0 (r/r0)^(1/2) on the table
    table = CoefficientField.tabulated([1.0, 10.0, 1e4], [2.0, 2.0, 2.0])
    p = profile_from_field(table)
    assert family_max_modulus(p, 1e4) == pytest.approx(100.0, rel=1e-14)
    assert family_max_modulus(p, 0.5) == 0.5
    assert family_dilatation(p, 30.0) == pytest.approx(2.0)
    assert field_of(p) is table


def test_integrated_profile_matches_log_stretch_tail():
    # K(r) = 2 ln r is linear in ln r, so the table reproduces log-stretch exactly
    radii = [E, E**2, E**5, E**9]
    table = CoefficientField.tabulated(radii, [2 * math.log(r) for r in radii])
    p = profile_from_field(table)
    for r in (E**1.5, E**4, E**9):
        # rho(e) = e in the integrated map, 1 for log-stretch: ratio is constant
        assert float(p.rho(r)) / E == pytest.approx(float(LOG.rho(r)), rel=1e-13)
    with pytest.raises(DomainError):
        p.rho(E**10)
    z = PlanePoint(E**3, 0.0)
    assert dilatation_from_mu(family_mu(p, z)) == pytest.approx(6.0, rel=1e-13)
