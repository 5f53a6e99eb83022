import mpmath as mp
import numpy as np
import pytest

from woodscat import specfun

# ascending power series summed at 40 digits (see oracle below)
J0_AT_1 = 0.7651976865579666
Y0_AT_1 = 0.0882569642156770


def j0_series_oracle(x, dps=40, terms=80):
    """Independent ascending-series evaluation of J0 in extended precision."""
    mp.mp.dps = dps
    s = mp.mpf(0)
    for m in range(terms):
        s += (-1) ** m * (mp.mpf(x) / 2) ** (2 * m) / mp.factorial(m) ** 2
    return float(s)


def test_j0_against_series_oracle():
    assert j0_series_oracle(1.0) == pytest.approx(J0_AT_1, abs=1e-15)
    assert specfun.bessel("J", 0, 1.0) == pytest.approx(J0_AT_1, abs=1e-13)


def test_j0_at_zero_limit():
    assert specfun.bessel("J", 0, 0.0) == 1.0
    assert specfun.bessel("J", 0, 1e-12) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("x", [0.5, 2.0, 50.0])
def test_wronskian_identity(x):
    j0 = specfun.bessel("J", 0, x)
    j1 = specfun.bessel("J", 1, x)
    y0 = specfun.bessel("Y", 0, x)
    y1 = specfun.bessel("Y", 1, x)
    assert j0 * y1 - j1 * y0 == pytest.approx(-2.0 / (np.pi * x), abs=1e-12)


def test_wronskian_over_log_grid():
    x = np.geomspace(1e-3, 1e4, 200)
    w = (specfun.bessel("J", 0, x) * specfun.bessel("Y", 1, x)
         - specfun.bessel("J", 1, x) * specfun.bessel("Y", 0, x))
    assert np.max(np.abs(w + 2.0 / (np.pi * x))) <= 1e-12


def test_domain_errors():
    with pytest.raises(ValueError):
        specfun.bessel("Y", 0, 0.0)
    with pytest.raises(ValueError):
        specfun.bessel("Y", 1, -1.0)
    with pytest.raises(ValueError):
        specfun.hankel1(0, 0.0)


def test_hankel1_value():
    h = specfun.hankel1(0, 1.0)
    assert h.real == pytest.approx(J0_AT_1, abs=1e-13)
    assert h.imag == pytest.approx(Y0_AT_1, abs=1e-13)
    assert abs(h - (specfun.bessel("J", 0, 1.0) + 1j * specfun.bessel("Y", 0, 1.0))) == 0.0


def test_hankel1_small_argument_limit():
    x = 1e-6
    h1 = specfun.hankel1(1, x)
    limit = -2j / (np.pi * x)
    assert abs(h1 - limit) / abs(limit) <= 1e-5


def test_hankel1_large_argument_asymptotic():
    x = 100.0
    h0 = specfun.hankel1(0, x)
    approx = np.sqrt(2.0 / (np.pi * x)) * np.exp(1j * (x - np.pi / 4))
    assert abs(h0 - approx) / abs(approx) <= 1e-2


@pytest.mark.parametrize("x", [1.0, 10.0, 200.0])
def test_derivative_recurrence(x):
    # (H0^(1))' = -H1^(1), central differences
    step = 1e-6 * max(1.0, x)
    d = (specfun.hankel1(0, x + step) - specfun.hankel1(0, x - step)) / (2 * step)
    h1 = specfun.hankel1(1, x)
    assert abs(d + h1) / abs(h1) <= 1e-6


def test_large_argument_modulus():
    x = 1e3
    assert abs(specfun.hankel1(0, x)) * np.sqrt(x) == pytest.approx(
        np.sqrt(2.0 / np.pi), rel=1e-2)


def test_branch_agreement_at_switch():
    # cephes and the joint expansion must agree where the dispatch flips
    x = np.linspace(specfun.ASYMPTOTIC_SWITCH - 3, specfun.ASYMPTOTIC_SWITCH + 30, 500)
    h0a, h1a = specfun.hankel1_pair_asymptotic(x)
    h0c = specfun.bessel("J", 0, x) + 1j * specfun.bessel("Y", 0, x)
    h1c = specfun.bessel("J", 1, x) + 1j * specfun.bessel("Y", 1, x)
    assert np.max(np.abs(h0a - h0c) / np.abs(h0c)) <= 1e-13
    assert np.max(np.abs(h1a - h1c) / np.abs(h1c)) <= 1e-13


def test_pair_matches_separate_orders():
    x = np.geomspace(0.05, 1e4, 300)
    h0, h1 = specfun.hankel1_pair(x)
    assert np.max(np.abs(h0 - specfun.hankel1(0, x))) <= 1e-13 * np.max(np.abs(h0))
    assert np.max(np.abs(h1 - specfun.hankel1(1, x))) <= 1e-12 * np.max(np.abs(h1))


def test_accuracy_envelope():
    # absolute error <= 1e-13 for x <= 1e4, spot-checked against mpmath
    mp.mp.dps = 30
    xs = [0.01, 0.5, 3.0, 8.0, 25.0, 80.0, 1e3, 1e4]
    for x in xs:
        assert specfun.bessel("J", 0, x) == pytest.approx(float(mp.besselj(0, x)), abs=1e-13)
        assert specfun.bessel("Y", 1, x) == pytest.approx(float(mp.bessely(1, x)), abs=1e-13)
