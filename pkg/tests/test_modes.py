import mpmath
import pytest
import sympy as sp
from hypothesis import given, strategies as st
from mpmath import mp

from ellwn.modes import ModeAlgebra
from ellwn.qspecial import QParams, qnum

modes = st.integers(1, 12).flatmap(lambda m: st.sampled_from([m, -m]))


def _exact_solution(N, m):
    """``B_m`` in terms of ``b_m`` by exact rational elimination."""
    q = sp.Rational(2, 5)
    qn = (q**m - q**-m) / (q - 1 / q)
    A = sp.zeros(N, N)
    rhs = sp.zeros(N, N - 1)
    for j in range(1, N):
        A[j - 1, j - 1], A[j - 1, j] = -1, 1
        rhs[j - 1, j - 1] = m / qn * q ** ((N - j) * m)
    for j in range(1, N + 1):
        A[N - 1, j - 1] = q ** (2 * j * m)
    return A.LUsolve(rhs)


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("m", [-7, -2, -1, 1, 3, 12])
def test_solve_B_from_b_against_exact_elimination(N, m):
    S = ModeAlgebra(QParams(N=N)).solve_B_from_b(m)
    ref = _exact_solution(N, m)
    with mp.workprec(128):
        for i in range(N):
            for k in range(N - 1):
                exact = ref[i, k]
                val = mpmath.mpf(exact.p) / exact.q
                assert abs(S[i, k] - val) <= mpmath.mpf("1e-30") * max(1, abs(val))


@pytest.mark.parametrize("N", [2, 3, 4])
def test_constraint_consistency(N):
    rep = ModeAlgebra(QParams(N=N)).consistency_check()
    assert rep.passed, rep.line()
    assert rep.max_residual < mpmath.mpf("1e-25")


@given(st.integers(2, 4), modes, st.data())
def test_commutator_symmetry(N, m, data):
    A = ModeAlgebra(QParams(N=N))
    j = data.draw(st.integers(1, N))
    k = data.draw(st.integers(1, N))
    with mp.workprec(128):
        a = A.B_commutator(j, k, m, -m)
        b = A.B_commutator(k, j, -m, m)
        assert abs(a + b) < mpmath.mpf("1e-30") * max(1, abs(a))


@given(st.integers(2, 4), modes, st.data())
def test_template_matches_numeric_commutator(N, m, data):
    P = QParams(N=N)
    A = ModeAlgebra(P)
    j = data.draw(st.integers(1, N))
    k = data.draw(st.integers(1, N))
    with mp.workprec(128):
        ref = A.B_commutator(j, k, m, -m)
        assert abs(m * A.template(j, k).evaluate(m, P) - ref) < mpmath.mpf("1e-28") * max(1, abs(ref))


def test_diagonal_commutator_closed_form():
    P = QParams(N=3)
    A = ModeAlgebra(P)
    with mp.workprec(128):
        m = 2
        ref = (m * qnum(P.rstar * m, P) * qnum(m, P) * qnum(2 * m, P)
               / (qnum(P.r * m, P) * qnum(m, P) * qnum(3 * m, P)))
        assert abs(A.B_commutator(2, 2, m, -m) - ref) < mpmath.mpf("1e-30")
        assert A.B_commutator(1, 2, 2, 3) == 0


def test_invalid_indices():
    A = ModeAlgebra(QParams(N=2))
    with pytest.raises(IndexError):
        A.B_commutator(0, 1, 1, -1)
    with pytest.raises(ValueError):
        A.B_commutator(1, 1, 0, 0)
    with pytest.raises(ValueError):
        A.solve_B_from_b(0)
