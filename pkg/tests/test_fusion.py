from math import comb

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from ellwn import fusion as fu
from ellwn.qspecial import C_n, PoleError, QParams, S_nm, g_N

P2, P3 = QParams(N=2), QParams(N=3)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_Ttilde_term_count(N):
    P = QParams(N=N)
    for n in range(1, N + 1):
        T = fu.build_Ttilde(P, n)
        assert len(T) == comb(N, n)
        assert T.indices[0] == tuple(range(1, n + 1))


def test_Ttilde_range():
    for n in (0, 4):
        with pytest.raises(ValueError):
            fu.build_Ttilde(P3, n)


def test_lambda_exchange():
    rep = fu.verify_Lambda_exchange(P3, samples=18)
    assert rep.passed and rep.info["zero_mode_constant"]


@pytest.mark.parametrize("n, m", [(1, 1), (2, 1), (2, 2)])
def test_TT_exchange(n, m):
    rep = fu.verify_TT_exchange(P3, n, m, samples=9)
    assert rep.passed, rep.line()


@given(st.floats(-1, 1), st.floats(-0.2, 0.2), st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)]))
def test_smatrix_unitarity(a, b, nm):
    n, m = nm
    with mp.workprec(128):
        z = P3.qpow(2 * mpmath.mpc(a, b))
        try:
            val = S_nm(z, n, m, P3) * S_nm(1 / z, m, n, P3)
        except PoleError:
            return
        assert abs(val - 1) < mpmath.mpf("1e-18")


def test_smatrix_three_readings():
    rep = fu.verify_smatrix(P3, samples=6)
    assert rep.passed, rep.line()


@pytest.mark.parametrize("P", [P2, P3], ids=["N2", "N3"])
def test_TN_nontrivial(P):
    rep = fu.verify_TN_nontrivial(P, order=4)
    assert rep.passed
    assert not rep.info["zero_word_identity"] and rep.info["zero_word_central"]
    # the ladder with q^{+1} steps collapses to a central element, the q^{-1} one does not
    assert rep.info["pW_ladder_up"] < mpmath.mpf("1e-25")
    assert rep.info["pW_ladder_down"] > mpmath.mpf("0.1")


@pytest.mark.parametrize("P", [P2, P3], ids=["N2", "N3"])
def test_Cn(P):
    rep = fu.verify_Cn(P)
    assert rep.passed, rep.line()
    with mp.workprec(128):
        assert abs(C_n(0, P) / g_N(P) - 1) < mpmath.mpf("1e-18")
        for n in range(P.N + 1):
            assert C_n(n, P) != 0


def test_fusion_pole_location():
    ok, poles, order = fu.fusion_leading_check(P3)
    assert ok and order == 1


def test_eval_Cn_range():
    with pytest.raises(ValueError):
        fu.eval_Cn(P2, 3)
