import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings

from critblaschke.critical import forward_phi
from critblaschke.disk import BlaschkeProduct, Composition, DiskAutomorphism
from critblaschke.errors import SlopeAmbiguous
from critblaschke.metrics import (
    boundary_limit_scan,
    boundary_rate,
    composition_check,
    curvature_residual,
    default_exclusion,
    distance_ratio,
    metric_grid,
    sigma_eval,
    single_zero_rate,
    vanishing_order,
)
from oracles import ratio_mp
from strategies import disk_points, zero_lists

IDENTITY = BlaschkeProduct()
SQUARE = BlaschkeProduct.from_zeros([0])


def test_sigma_examples():
    npt.assert_allclose(sigma_eval(IDENTITY, 0), 2.0)
    assert sigma_eval(SQUARE, 0) == 0
    npt.assert_allclose(sigma_eval(SQUARE, 0.5), 2 / (1 - 0.0625))


def test_ratio_examples():
    z = np.array([0, 0.3j, -0.9 + 0.1j])
    npt.assert_allclose(distance_ratio(IDENTITY, z), 1.0)
    npt.assert_allclose(distance_ratio(DiskAutomorphism(0.4 - 0.2j, 1.0), z), 1.0, atol=1e-15)
    npt.assert_allclose(distance_ratio(SQUARE, 0.5), 0.8)
    assert distance_ratio(SQUARE, 0) == 0


@settings(max_examples=30, deadline=None)
@given(zero_lists(max_size=4), disk_points(0.99))
def test_ratio_against_mpmath(zeros, z):
    f = BlaschkeProduct.from_zeros(zeros)
    npt.assert_allclose(distance_ratio(f, z), ratio_mp(zeros, z), rtol=1e-10, atol=1e-13)


@given(zero_lists(max_size=6), disk_points(0.9999))
def test_schwarz_pick_bound(zeros, z):
    f = BlaschkeProduct.from_zeros(zeros)
    assert distance_ratio(f, z) <= 1 + 1e-12


def test_composition_examples():
    f = BlaschkeProduct.from_zeros([0.3, -0.5j])
    z = 0.2 + 0.4j
    lhs, rhs = composition_check(f, IDENTITY, z)
    npt.assert_allclose([lhs, rhs], distance_ratio(f, z), rtol=1e-14)
    tau = DiskAutomorphism(0.6j, -0.4)
    lhs, rhs = composition_check(tau, f, z)
    npt.assert_allclose([lhs, rhs], distance_ratio(f, z), rtol=1e-12)
    lhs, rhs = composition_check(SQUARE, SQUARE, 0.3)
    npt.assert_allclose(lhs, rhs, rtol=1e-14)
    npt.assert_allclose(lhs, distance_ratio(BlaschkeProduct.from_zeros([0, 0, 0]), 0.3), rtol=1e-14)


@settings(max_examples=50, deadline=None)
@given(zero_lists(max_size=3), zero_lists(max_size=3), disk_points(0.99))
def test_composition_identity(fz, gz, z):
    f, g = BlaschkeProduct.from_zeros(fz), BlaschkeProduct.from_zeros(gz)
    lhs, rhs = composition_check(f, g, z)
    npt.assert_allclose(lhs, rhs, atol=1e-11)


def test_vanishing_order_examples():
    assert vanishing_order(SQUARE, 0) == 1
    assert vanishing_order(BlaschkeProduct.from_zeros([0, 0]), 0) == 2
    assert vanishing_order(BlaschkeProduct.from_zeros([0.5]), 2 - np.sqrt(3)) == 1
    with pytest.raises(ValueError):
        vanishing_order(SQUARE, 0.3)


def test_vanishing_order_ambiguous():
    # critical points at 0 and 2e-4: the sampling circles see two, then one
    f = BlaschkeProduct.from_zeros([0, 3e-4])
    with pytest.raises(SlopeAmbiguous):
        vanishing_order(f, 0)
    assert vanishing_order(f, 0, radii=(1e-5, 1e-6, 1e-7)) == 1


def test_vanishing_order_through_composition():
    g = Composition(BlaschkeProduct.from_zeros([0, 0]), DiskAutomorphism(0.0, 0.3))
    assert vanishing_order(g, 0) == 2


def test_curvature_identity_second_order():
    res = [curvature_residual(IDENTITY, h, critical_points=()).max_residual for h in (4e-3, 2e-3, 1e-3)]
    assert res[-1] <= 1e-3
    for h, r in zip((4e-3, 2e-3, 1e-3), res):
        assert r <= 50 * h**2
    assert 0.2 < res[1] / res[0] < 0.3 and 0.2 < res[2] / res[1] < 0.3


def test_curvature_square_and_pair():
    r = [curvature_residual(SQUARE, h).max_residual for h in (8e-3, 4e-3)]
    npt.assert_allclose(r[1] / r[0], 0.25, atol=0.05)
    f = BlaschkeProduct.from_zeros([0.5, 0.3j])
    reps = [curvature_residual(f, h) for h in (4e-3, 2e-3, 1e-3)]
    ratios = [b.max_residual / a.max_residual for a, b in zip(reps, reps[1:])]
    assert all(0.15 <= q <= 0.4 for q in ratios)
    C = [rep.max_residual / rep.grid_spacing**2 for rep in reps]
    assert max(C) / min(C) < 1.6
    assert reps[0].excluded_radius == default_exclusion(4e-3)
    assert reps[-1].points_checked > reps[0].points_checked


def test_curvature_spacing_range():
    with pytest.raises(ValueError):
        curvature_residual(IDENTITY, 0.05)


def test_boundary_scan_examples():
    npt.assert_allclose(boundary_limit_scan(IDENTITY, [0.9, 0.99]), 0, atol=1e-15)
    r = np.array([0.9, 0.99, 0.999])
    npt.assert_allclose(boundary_limit_scan(SQUARE, r), (1 - r) ** 2 / (1 + r**2), rtol=1e-9)
    npt.assert_allclose((1 - r) ** 2 / (1 + r**2), [0.00552, 0.0000503, 5.0e-7], rtol=5e-3)
    f = BlaschkeProduct.from_zeros([0.5])
    assert boundary_limit_scan(f, [1 - 1e-4])[0] <= 1e-3
    with pytest.raises(ValueError):
        boundary_limit_scan(f, [0.99, 0.9])


def test_boundary_rate_single_zero_closed_form():
    for a in (0.5, 0.3j, -0.8 + 0.1j):
        f = BlaschkeProduct.from_zeros([a])
        theta = np.linspace(0, 2 * np.pi, 20001)
        npt.assert_allclose(boundary_rate(f, theta).max(), single_zero_rate(a), rtol=1e-6)
        r = 1 - 1e-4
        dev = boundary_limit_scan(f, [r], angles=4096)[0]
        npt.assert_allclose(dev / (single_zero_rate(a) * np.log(r) ** 2), 1.0, rtol=1e-3)


def test_boundary_rate_power_map():
    # z^(d+1) has P = d + 1 and no Schwarzian term
    for d in (1, 2, 3):
        f = BlaschkeProduct.from_zeros([0] * d)
        npt.assert_allclose(boundary_rate(f, [0.0, 1.0]), ((d + 1) ** 2 - 1) / 6)


def test_metric_grid():
    samples = metric_grid(BlaschkeProduct.from_zeros([0.5]), 41)
    t = np.linspace(-0.95, 0.95, 41)
    inside = np.sum(t[None, :] ** 2 + t[:, None] ** 2 < 1)
    assert len(samples) == inside
    assert all(0 <= s.ratio <= 1 for s in samples)
    with pytest.raises(ValueError):
        metric_grid(IDENTITY, 4)


def test_critical_points_are_ratio_zeros():
    f = BlaschkeProduct.from_zeros([0.4, -0.2 + 0.6j])
    for c in forward_phi(f.zeros).critical_points:
        assert distance_ratio(f, c) < 1e-12
