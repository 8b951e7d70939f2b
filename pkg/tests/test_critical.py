import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings

from critblaschke.critical import (
    critical_polynomial,
    forward_phi,
    interior_symmetric,
    multiplicity_profile,
    power_sums_to_symmetric,
    quadrature_contour,
)
from critblaschke.disk import BlaschkeProduct, PointMultiset
from critblaschke.errors import IndecisiveRoot
from conftest import random_zeros
from oracles import critical_points_mp, symmetric_values
from strategies import zero_lists

C1 = 2 - np.sqrt(3)  # (1 - sqrt(1 - a^2)) / a at a = 0.5
C2 = np.sqrt((2.9375 - np.sqrt(2.9375**2 - 0.25)) / 0.5)


def _proportional(c, ref):
    c, ref = np.asarray(c), np.asarray(ref, dtype=complex)
    k = np.argmax(np.abs(ref))
    npt.assert_allclose(c / c[k] * ref[k], ref, atol=1e-14)


def test_critical_polynomial_examples():
    _proportional(critical_polynomial([0.5]).coeffs, [0.5, -2, 0.5])
    for d in range(1, 5):
        c = critical_polynomial([0] * d).coeffs
        ref = np.zeros(d + 1)
        ref[d] = d + 1
        _proportional(c, ref)
    _proportional(critical_polynomial([0.5, -0.5]).coeffs, [-0.25, 0, 2.9375, 0, -0.25])


def test_forward_examples():
    npt.assert_allclose(forward_phi([0.5]).critical_points.as_array(), [C1], atol=1e-15)
    res = forward_phi([0, 0])
    assert res.critical_points.points == (0, 0)
    assert res.reflected_partners == (complex(np.inf), complex(np.inf))
    npt.assert_allclose(forward_phi([0.5, -0.5]).critical_points.as_array(), [-C2, C2], atol=1e-15)
    npt.assert_allclose(C2, 0.2928, atol=5e-5)
    assert forward_phi([]).critical_points == PointMultiset()


def test_multiplicity_profile_examples():
    assert multiplicity_profile([0, 0]) == [(0, 2)]
    (c, m), = multiplicity_profile([0.5])
    assert m == 1 and abs(c - C1) < 1e-15
    assert [m for _, m in multiplicity_profile([0.5, -0.5])] == [1, 1]


@settings(max_examples=40, deadline=None)
@given(zero_lists(min_size=1, max_size=6))
def test_forward_against_mpmath(zeros):
    got = forward_phi(zeros)
    ref = critical_points_mp(zeros)
    assert len(got.critical_points) == len(zeros) == len(ref)
    npt.assert_allclose(
        interior_symmetric(zeros), symmetric_values(ref), atol=1e-12
    )
    f = BlaschkeProduct.from_zeros(zeros)
    assert max(got.residuals) <= 1e-9
    for c in got.critical_points:
        assert abs(f.derivative(c)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(zero_lists(min_size=1, max_size=6))
def test_permutation_invariance(zeros):
    a = forward_phi(zeros).critical_points
    b = forward_phi(zeros[::-1]).critical_points
    npt.assert_allclose(a.as_array(), b.as_array(), atol=1e-12)


def test_interior_symmetric_matches_roots(rng):
    for _ in range(30):
        z = random_zeros(rng, rng.integers(1, 8))
        crit = forward_phi(z).critical_points
        npt.assert_allclose(interior_symmetric(z), symmetric_values(crit), atol=1e-12)


def test_near_circle_contour_moves():
    c = 0.999
    a = 2 * c / (1 + c * c)
    radius, n = quadrature_contour([a], 1)
    assert c < radius < 1 / c and radius != 1.0
    npt.assert_allclose(interior_symmetric([a]), [c], atol=1e-12)


def test_power_sums_to_symmetric():
    pts = np.array([0.1, -0.3j, 0.2 + 0.2j])
    ps = np.array([np.sum(pts**k) for k in range(4)])
    npt.assert_allclose(power_sums_to_symmetric(ps, 3), symmetric_values(pts), atol=1e-15)


def test_indecisive_when_zero_on_circle_limit():
    with pytest.raises(IndecisiveRoot):
        interior_symmetric([1 - 1e-15, -(1 - 1e-15)])


def test_double_critical_cluster():
    # z^3 has a double critical point at the origin
    res = forward_phi([0, 0])
    assert res.clusters == ((0j, 2),)
