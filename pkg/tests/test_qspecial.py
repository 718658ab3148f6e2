from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from ellwn.qspecial import (ParameterError, PoleError, QParams, bracket, bracket_star,
                            contour_norm_check, phi_N, pochhammer, theta)

TOL = mpmath.mpf("1e-25")
P = QParams(N=2)
real = st.floats(-1.5, 1.5, allow_nan=False)
imag = st.floats(-0.3, 0.3, allow_nan=False)


def _v(a, b):
    return mpmath.mpc(a, b)


def _triple_product(z, p, terms=80):
    # sum_n (-1)^n p^{n(n-1)/2} z^n
    return mpmath.fsum((-1) ** n * p ** (n * (n - 1) // 2) * z ** n
                       for n in range(-terms, terms + 1))


def test_theta_against_triple_product():
    with mp.workprec(128):
        p = P.p
        for z in (mpmath.mpf("0.3"), mpmath.mpc("1.7", "-0.4"), mpmath.mpc("-0.2", "0.9")):
            assert abs(theta(z, p) - _triple_product(z, p)) < TOL


def test_pochhammer_against_mpmath_qp():
    with mp.workprec(128):
        for z, t in ((mpmath.mpf("0.7"), mpmath.mpf("0.3")), (mpmath.mpc("0.2", "1.1"), mpmath.mpf("0.55"))):
            assert abs(pochhammer(z, [t]) / mpmath.qp(z, t) - 1) < TOL


def test_two_base_pochhammer_is_product_over_second_base():
    with mp.workprec(128):
        z, a, b = mpmath.mpf("0.4"), mpmath.mpf("0.3"), mpmath.mpf("0.5")
        ref = mpmath.mpf(1)
        for n in range(200):
            ref *= mpmath.qp(z * b ** n, a)
        assert abs(pochhammer(z, [a, b]) / ref - 1) < TOL


@given(st.integers(2, 12), st.floats(0.1, 3.0))
def test_tail_bound_is_genuine(cutoff, zabs):
    with mp.workprec(128):
        bases = [mpmath.mpf("0.4"), mpmath.mpf("0.55")]
        z = mpmath.mpf(zabs)
        val, bound = pochhammer(z, bases, cutoff=cutoff, with_bound=True)
        ref = pochhammer(z, bases, cutoff=2 * cutoff)
        if ref != 0 and val != 0:
            assert abs(ref / val - 1) <= bound * (1 + mpmath.mpf("1e-20")) + mpmath.mpf("1e-35")


@given(real, imag)
def test_bracket_quasi_periodic_and_odd(a, b):
    with mp.workprec(128):
        v = _v(a, b)
        for star in (False, True):
            rr = P.rstar if star else P.r
            val = bracket(v, P, star=star)
            scale = max(abs(val), 1)
            assert abs(bracket(-v, P, star=star) + val) / scale < TOL
            shifted = bracket(v + mpmath.mpf(rr.numerator) / rr.denominator, P, star=star)
            assert abs(shifted + val) / scale < TOL


@given(real, imag)
def test_theta_quasi_periodicity(a, b):
    with mp.workprec(128):
        z = P.qpow(2 * _v(a, b))
        p = P.p
        val = theta(z, p)
        assert abs(theta(p * z, p) + val / z) / max(abs(val / z), 1) < TOL


def test_zeros_and_normalization():
    with mp.workprec(128):
        assert theta(1, P.p) == 0
        assert bracket(0, P) == 0
        assert bracket_star(0, P) == 0
        # [v] ~ -2 log(q) v near 0, so dz/(2 pi i z) 1/[-v] has unit residue
        eps = mpmath.mpf("1e-12")
        assert abs(bracket(eps, P) / eps + 2 * P.logq) < mpmath.mpf("1e-20")
    assert contour_norm_check(P, npoints=256) < mpmath.mpf("1e-10")


@given(real, imag)
def test_phi_unitarity(a, b):
    Q = QParams(N=3)
    with mp.workprec(128):
        z = Q.qpow(2 * _v(a, b))
        try:
            val = phi_N(z, Q) * phi_N(1 / z, Q)
        except PoleError:
            return
        assert abs(val - 1) < mpmath.mpf("1e-20")


def test_theta_at_zero_raises():
    with pytest.raises(PoleError):
        theta(0, mpmath.mpf("0.5"))


@pytest.mark.parametrize("kw", [dict(q=Fraction(3, 2)), dict(q=0), dict(N=1), dict(r=Fraction(1, 2)),
                                dict(c=0)])
def test_parameter_validation(kw):
    with pytest.raises(ParameterError):
        QParams(**kw)


def test_params_exact_storage():
    Q = QParams(q="2/5", r=6.3)
    assert Q.q == Fraction(2, 5) and Q.r == Fraction(63, 10)
    assert Q.rstar == Fraction(53, 10)
