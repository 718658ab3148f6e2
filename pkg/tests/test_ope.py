import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from ellwn.catalog import CurrentCatalog
from ellwn.ope import (contraction_product, exchange_ratio, log_contraction, sample_points,
                       specialize_compose)
from ellwn.laurent import mono, mono_value
from ellwn.qspecial import PoleError, QParams
from ellwn.series import series_exp


def _ops(P):
    C = CurrentCatalog(P)
    N = P.N
    return [C.E(1), C.F(1), C.K(1), C.K(N), C.E(N - 1), C.F(N - 1), C.H(1, 1), C.H(1, -1),
            C.Lambda(1), C.Psi_star_N()]


@pytest.mark.parametrize("N", [2, 3])
def test_product_form_reexpands_to_exp_of_log_contraction(N):
    # exp of the mode sum cancels terms of size max|q^y|^M, so the oracle gets that many extra bits
    P = QParams(N=N)
    ops = _ops(P)
    wide = {}
    for i, X in enumerate(ops):
        for k, Y in enumerate(ops):
            pf = contraction_product(X, Y)
            with mp.workprec(P.prec):
                a = pf.series(order=24)
                grow = max([mpmath.mpf(1)] + [abs(P.qpow(mono_value(y, P.r))) for _, y, _ in pf.terms])
            bits = P.prec + 64 + 32 * (int(24 * mpmath.log(grow, 2)) // 32 + 1)
            if bits not in wide:
                wide[bits] = _ops(P.replace(prec=bits))
            with mp.workprec(bits):
                b = series_exp(log_contraction(wide[bits][i], wide[bits][k], order=24))
                for ak, bk in zip(a.coeffs, b.coeffs):
                    assert abs(ak - bk) < mpmath.mpf("1e-25") * max(1, abs(bk)), (X.name, Y.name)


@pytest.mark.parametrize("N", [2, 3])
def test_exchange_symmetry(N):
    P = QParams(N=N)
    C = CurrentCatalog(P)
    with mp.workprec(P.prec):
        for X, Y in ((C.E(1), C.E(N - 1)), (C.F(1), C.K(2)), (C.Lambda(1), C.Lambda(N))):
            f, g = exchange_ratio(X, Y), exchange_ratio(Y, X)
            for a, b in sample_points(12, P):
                assert abs(f(a, b) * g(b, a) - 1) < mpmath.mpf("1e-25")


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_log_contraction_bilinear(s, t):
    P = QParams(N=3)
    C = CurrentCatalog(P)
    X1, X2, Y = C.E(1), C.K(2), C.F(2)
    Xs = C.product(X1.scaled(s), X2.scaled(t), "X")
    with mp.workprec(P.prec):
        lhs = log_contraction(Xs, Y, order=10)
        rhs = log_contraction(X1, Y, order=10) * s + log_contraction(X2, Y, order=10) * t
        assert lhs.max_abs_diff(rhs) < mpmath.mpf("1e-28")
        lhs = log_contraction(Y, Xs, order=10)
        rhs = log_contraction(Y, X1, order=10) * s + log_contraction(Y, X2, order=10) * t
        assert lhs.max_abs_diff(rhs) < mpmath.mpf("1e-28")


def test_product_form_evaluation_matches_series_inside_disc():
    P = QParams(N=2)
    C = CurrentCatalog(P)
    pf = contraction_product(C.E(1), C.F(1))
    with mp.workprec(P.prec):
        s = pf.series(order=60)
        x = mpmath.mpc("0.05", "0.02")
        assert abs(pf.evaluate(x) - s(x)) < mpmath.mpf("1e-25")


def test_sample_points_deterministic_and_on_radii():
    P = QParams(N=2)
    a, b = sample_points(9, P, seed=4), sample_points(9, P, seed=4)
    assert a == b
    with mp.workprec(P.prec):
        radii = sorted({mpmath.nstr(abs(P.qpow(2 * (y - x))), 10) for x, y in a})
    assert radii == ["0.7", "1.0", "1.3"]


def test_specialize_compose_rejects_double_pole():
    P = QParams(N=2)
    C = CurrentCatalog(P)
    E = C.E(1)
    EE = C.product(E, E, "EE")
    order = contraction_product(EE, C.F(1).scaled(2)).pole_order(mono(-1, 0))
    if order > 1:
        with pytest.raises(PoleError):
            specialize_compose(EE, C.F(1).scaled(2), mono(-1, 0))
    else:
        specialize_compose(EE, C.F(1).scaled(2), mono(-1, 0))
