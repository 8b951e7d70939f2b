import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critblaschke.disk import (
    BlaschkeProduct,
    Composition,
    DiskAutomorphism,
    PointMultiset,
    automorphism_eval,
    beta_eval,
    blaschke_derivative,
    blaschke_eval,
    check_disk_point,
    degeneration_limit,
    log_derivative_on_circle,
)
from oracles import blaschke_mp
from strategies import disk_points, zero_lists


def test_beta_examples():
    a = 0.3 - 0.4j
    assert abs(beta_eval(a, a)) == 0.0
    npt.assert_allclose(beta_eval(a, 1.0), 1.0, atol=1e-15)
    npt.assert_allclose(beta_eval(0, 0.2 + 0.7j), 0.2 + 0.7j)


def test_check_disk_point_rejects():
    for bad in (1.0, 1j, 2.0, complex(np.nan, 0), complex(np.inf, 0), 1 - 1e-16):
        with pytest.raises(ValueError):
            check_disk_point(bad)
    assert check_disk_point(0.999) == 0.999


def test_blaschke_examples():
    npt.assert_allclose(blaschke_eval(BlaschkeProduct(), 0.3 + 0.1j), 0.3 + 0.1j)
    npt.assert_allclose(blaschke_eval(BlaschkeProduct.from_zeros([0]), 0.5), 0.25)
    npt.assert_allclose(blaschke_eval(BlaschkeProduct.from_zeros([0.5]), 1.0), 1.0)
    npt.assert_allclose(blaschke_derivative(BlaschkeProduct.from_zeros([0]), 0.5), 1.0)
    npt.assert_allclose(abs(blaschke_derivative(BlaschkeProduct.from_zeros([0.5]), 1.0)), 4.0)
    npt.assert_allclose(blaschke_derivative(BlaschkeProduct(), np.array([0.1, -0.7j])), [1.0, 1.0])


def test_log_derivative_examples():
    z = np.exp(1j * np.linspace(0, 6, 7))
    npt.assert_allclose(log_derivative_on_circle(BlaschkeProduct.from_zeros([0, 0, 0]), z), 4.0)
    npt.assert_allclose(log_derivative_on_circle(BlaschkeProduct.from_zeros([0.5]), 1.0), 4.0)
    npt.assert_allclose(log_derivative_on_circle(BlaschkeProduct(), z), 1.0)
    with pytest.raises(ValueError):
        log_derivative_on_circle(BlaschkeProduct(), 0.5)


def test_multiset_canonical_and_pairs():
    m = PointMultiset((0.5j, -0.1, 0.5j, 0.2))
    assert m.points == (-0.1, 0.5j, 0.5j, 0.2)
    assert PointMultiset.from_pairs(m.to_pairs()) == m
    assert PointMultiset((0.2, -0.1)) == PointMultiset((-0.1, 0.2))
    with pytest.raises(ValueError):
        PointMultiset((1.2,))


def test_automorphism_examples():
    npt.assert_allclose(automorphism_eval(DiskAutomorphism(0, 0), 0.3j), 0.3j)
    t = DiskAutomorphism.normalized(0.5)
    npt.assert_allclose(t(0.5), 0, atol=1e-16)
    npt.assert_allclose(t(1.0), 1.0)
    npt.assert_allclose(np.abs(t(np.exp(1j * np.linspace(0, 6, 50)))), 1.0)


@given(disk_points(), st.floats(-np.pi, np.pi), disk_points(0.99))
def test_automorphism_inverse(a, theta, z):
    t = DiskAutomorphism(a, theta)
    npt.assert_allclose(t.inverse()(t(z)), z, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(zero_lists(max_size=4), disk_points(0.99))
def test_blaschke_against_mpmath(zeros, z):
    f = BlaschkeProduct.from_zeros(zeros)
    npt.assert_allclose(f(z), complex(blaschke_mp(zeros, z)), atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(zero_lists(max_size=5), disk_points(0.9))
def test_derivative_finite_difference(zeros, z):
    f = BlaschkeProduct.from_zeros(zeros)
    h = 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    npt.assert_allclose(f.derivative(z), fd, rtol=1e-6, atol=1e-8)


@given(zero_lists(max_size=5), disk_points(0.999))
def test_one_minus_abs2_matches_direct(zeros, z):
    f = BlaschkeProduct.from_zeros(zeros)
    direct = 1 - abs(f(z)) ** 2
    npt.assert_allclose(f.one_minus_abs2(z), direct, rtol=1e-8, atol=1e-14)


@given(zero_lists(max_size=5), st.floats(0, 2 * np.pi))
def test_modulus_one_on_circle_and_normalization(zeros, theta):
    f = BlaschkeProduct.from_zeros(zeros)
    npt.assert_allclose(abs(f(np.exp(1j * theta))), 1.0, atol=1e-12)
    npt.assert_allclose(f(1.0), 1.0, atol=1e-12)
    assert f(0.0) == 0


@given(zero_lists(max_size=5), st.floats(0, 2 * np.pi))
def test_circle_identity(zeros, theta):
    f = BlaschkeProduct.from_zeros(zeros)
    z = np.exp(1j * theta)
    npt.assert_allclose(abs(f.derivative(z)), log_derivative_on_circle(f, z), rtol=1e-10)


def test_composition_chain_rule():
    f = BlaschkeProduct.from_zeros([0.3, -0.2j])
    g = DiskAutomorphism(0.4 + 0.1j, 0.7)
    h = Composition(f, g)
    z, eps = 0.2 - 0.3j, 1e-6
    npt.assert_allclose(h.derivative(z), (h(z + eps) - h(z - eps)) / (2 * eps), rtol=1e-8)
    npt.assert_allclose(h.one_minus_abs2(z), 1 - abs(h(z)) ** 2, rtol=1e-12)


def test_normalization_pins_the_zero_set():
    # beta_b o f solves f(z) = b: a different zero set, same critical points
    from critblaschke.critical import forward_phi
    from critblaschke.poly import ComplexPolynomial, find_roots

    zeros = [0.4, -0.3 + 0.2j]
    f = BlaschkeProduct.from_zeros(zeros)
    b = 0.25 + 0.1j
    # f(z) = b  <=>  lam N(z) - b D(z) = 0
    lam = complex(f(1.0))
    from critblaschke.critical import monic_coefficients

    N = np.concatenate([[0], monic_coefficients(zeros)])
    D = np.concatenate([np.conj(monic_coefficients(zeros)[::-1]), [0]])
    scale = np.prod([(1 - np.conj(a)) / (1 - a) for a in zeros])
    pre = find_roots(ComplexPolynomial(scale * N - b * D))
    pre = pre[np.abs(pre) < 1]
    npt.assert_allclose(f(pre), b, atol=1e-12)
    assert np.min(np.abs(pre)) > 0.01
    g = Composition(DiskAutomorphism.normalized(b), f)
    npt.assert_allclose(np.abs(g(pre)), 0, atol=1e-12)
    for c in forward_phi(zeros).critical_points:
        assert abs(g.derivative(c)) < 1e-12
    assert lam is not None


def test_degeneration():
    k = np.arange(1, 41)
    seq = list((1 - 2.0 ** -k) * np.exp(1j * np.pi / 3))
    vals = [abs(degeneration_limit(seq[:n], 0)) for n in range(1, 41)]
    assert np.all(np.diff(vals[1:]) > 0)
    npt.assert_allclose(vals, np.abs(seq), rtol=1e-14)
    n = np.arange(2, 10**4)
    npt.assert_allclose(degeneration_limit(list(-1 + 1 / n), 0), 1, atol=1e-3)
    npt.assert_allclose(degeneration_limit([1 - 2.0**-40], 0), -1, atol=1e-6)
    with pytest.raises(ValueError):
        degeneration_limit([], 0)
