import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bwh.exceptions import DomainError
from bwh.specfun import (bessel_j0, bessel_j1, bessel_y0, bessel_y1, hankel2_0, hankel2_1, kappa_branch,
                         kappa_minus, kappa_plus)

XS = np.concatenate([np.linspace(0.05, 12, 40), np.linspace(12.01, 60, 40)])


@pytest.mark.parametrize("ours,ref", [(bessel_j0, mpmath.besselj), (bessel_y0, mpmath.bessely)])
def test_order0_against_mpmath(ours, ref):
    got = ours(XS)
    want = np.array([float(ref(0, x)) for x in XS])
    assert np.max(np.abs(got - want)) < 1e-11


@pytest.mark.parametrize("ours,ref", [(bessel_j1, mpmath.besselj), (bessel_y1, mpmath.bessely)])
def test_order1_against_mpmath(ours, ref):
    got = ours(XS)
    want = np.array([float(ref(1, x)) for x in XS])
    assert np.max(np.abs(got - want)) < 1e-11


def test_hankel_at_one():
    want = complex(mpmath.hankel2(0, 1))
    assert abs(hankel2_0(1.0) - want) < 1e-9 * abs(want)


@pytest.mark.parametrize("z", [0.3 - 0.01j, 5 - 0.05j, 11.9 - 0.2j, 12.5 - 0.02j, 40 - 1j, 200 - 0.5j])
def test_hankel_complex_argument(z):
    for ours, n in ((hankel2_0, 0), (hankel2_1, 1)):
        want = complex(mpmath.hankel2(n, z))
        assert abs(ours(z) - want) < 1e-11 * abs(want)


def test_asymptotic_band_bound():
    xs = np.linspace(20, 200, 50)
    got = hankel2_0(xs)
    lead = np.sqrt(2 / (np.pi * xs)) * np.exp(-1j * (xs - np.pi / 4))
    want = np.array([complex(mpmath.hankel2(0, x)) for x in xs])
    assert np.all(np.abs(got - want) / np.abs(want) < 1e-12)
    assert np.all(np.abs(lead - want) / np.abs(want) <= 1 / (4 * xs))


def test_parity_and_zero():
    assert bessel_j0(0.0) == 1.0 and bessel_j1(0.0) == 0.0
    assert bessel_j1(-2.5) == pytest.approx(-bessel_j1(2.5))
    assert bessel_j0(-2.5) == pytest.approx(bessel_j0(2.5))


def test_domain_errors():
    with pytest.raises(DomainError):
        hankel2_0(0.0)
    with pytest.raises(DomainError):
        bessel_y0(-1.0)
    with pytest.raises(DomainError):
        bessel_y1(0.0)


K = complex(np.sqrt(3), -0.02)
finite = st.floats(-50, 50)


@settings(max_examples=200, deadline=None)
@given(finite, st.floats(-5, 5))
def test_kappa_properties(re, im):
    xi = complex(re, im)
    kap = kappa_branch(xi, K)
    assert abs(kap ** 2 - (K ** 2 - xi ** 2)) <= 1e-12 * max(1.0, abs(xi) ** 2)
    assert kappa_branch(-xi, K) == kap
    assert abs(kappa_plus(xi, K) * kappa_minus(xi, K) - kap) <= 1e-12 * max(1.0, abs(kap))


@settings(max_examples=200, deadline=None)
@given(finite)
def test_kappa_decays_on_real_axis(x):
    assert kappa_branch(x, K).imag <= 0


def test_kappa_lossless_values():
    assert kappa_branch(0.0, 2.0) == pytest.approx(2.0)
    assert kappa_branch(3.0, 2.0) == pytest.approx(-1j * np.sqrt(5))
