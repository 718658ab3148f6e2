"""Heisenberg oscillators ``B_m^j`` (1 <= j <= N).

``[B_m^j, B_{m'}^k] = m δ_{m+m',0} [r*m][cm]/([rm][m][Nm]) × ([(N-1)m]  if j = k,
                                                        -q^{-mN sgn(j-k)}[m] otherwise)``
"""

from fractions import Fraction

import mpmath
from mpmath import mp

from .laurent import RatTemplate, bin_
from .qspecial import qnum
from .report import RelationReport, Timer


def _sgn(x):
    return (x > 0) - (x < 0)


class ModeAlgebra:
    """Structure constants of the oscillator sector for a parameter pack."""

    def __init__(self, params):
        self.params = params
        self.N = params.N

    def _check(self, *idx):
        for j in idx:
            if not 1 <= j <= self.N:
                raise IndexError(f"oscillator index {j} outside 1..{self.N}")

    def B_commutator(self, j, k, m, mp_):
        """``[B_m^j, B_{m'}^k]`` as a number."""
        self._check(j, k)
        if m == 0 or mp_ == 0:
            raise ValueError("oscillator modes are non-zero integers")
        P = self.params
        if m + mp_ != 0:
            return mpmath.mpf(0)
        with mp.workprec(P.prec):
            N, c = P.N, P.c
            pref = m * qnum(P.rstar * m, P) * qnum(c * m, P) / (
                qnum(P.r * m, P) * qnum(m, P) * qnum(N * m, P))
            if j == k:
                return pref * qnum((N - 1) * m, P)
            return -pref * P.qpow(-m * N * _sgn(j - k)) * qnum(m, P)

    def template(self, j, k):
        """``[B_m^j, B_{-m}^k] / m`` as an exact template in ``(u, w) = (q^m, q^{rm})``."""
        self._check(j, k)
        P = self.params
        N, c = P.N, P.c
        # [r*m] = [rm - cm]: monomial exponent (-c, 1)
        pref = bin_(-c, 1) * bin_(c) / bin_(0, 1) / bin_(1) / bin_(N)
        if j == k:
            out = pref * bin_(N - 1)
        else:
            out = -pref * RatTemplate.monomial(-N * _sgn(j - k)) * bin_(1)
        return out.reduced(P.r)

    def constraint_residual(self, m, k):
        """``|sum_j q^{2jm} [B_m^j, B_{-m}^k]|`` relative to ``sum_j |term_j|``."""
        P = self.params
        with mp.workprec(P.prec):
            terms = [P.qpow(2 * j * m) * self.B_commutator(j, k, m, -m)
                     for j in range(1, self.N + 1)]
            return abs(mpmath.fsum(terms)) / mpmath.fsum(abs(t) for t in terms)

    def solve_B_from_b(self, m):
        """Matrix ``S`` with ``B_m = S @ b_m`` (N x (N-1)).

        Rows 1..N-1 encode ``-B^j + B^{j+1} = m/[m] q^{(N-j)m} b_{j}``, the last row
        ``sum_j q^{2jm} B^j = 0``.
        """
        if m == 0:
            raise ValueError("m must be non-zero")
        P, N = self.params, self.N
        with mp.workprec(P.prec):
            A = self.system_matrix(m)
            rhs = mpmath.zeros(N, N - 1)
            for j in range(1, N):
                rhs[j - 1, j - 1] = m / qnum(m, P) * P.qpow((N - j) * m)
            # row equilibration: the constraint row spans q^{2m}..q^{2Nm}
            w = 1 / max(abs(A[N - 1, k]) for k in range(N))
            for k in range(N):
                A[N - 1, k] *= w
            cond = mpmath.mnorm(A, 1) * mpmath.mnorm(mpmath.inverse(A), 1)
            if cond > mpmath.mpf(2) ** (P.prec // 2):
                raise ArithmeticError(f"ill-conditioned B/b system (cond={mpmath.nstr(cond, 5)})")
            return mpmath.inverse(A) * rhs

    def system_matrix(self, m):
        P, N = self.params, self.N
        A = mpmath.zeros(N, N)
        for j in range(1, N):
            A[j - 1, j - 1] = -1
            A[j - 1, j] = 1
        for j in range(1, N + 1):
            A[N - 1, j - 1] = P.qpow(2 * j * m)
        return A

    def consistency_check(self, ms=None, threshold=mpmath.mpf("1e-25")):
        """Verify the printed commutator is compatible with ``sum_j q^{2jm} B_m^j = 0``."""
        P = self.params
        ms = list(ms) if ms is not None else [m for m in range(-12, 13) if m]
        with Timer() as tm, mp.workprec(P.prec):
            res = []
            for m in ms:
                for k in range(1, self.N + 1):
                    res.append(self.constraint_residual(m, k))
                    for j in range(1, self.N + 1):
                        res.append(abs(self.B_commutator(j, k, m, -m) + self.B_commutator(k, j, -m, m)))
        return RelationReport.build("modes.constraint", P, res, threshold,
                                    truncation_bound=0, wall_time=tm.elapsed,
                                    notes=f"m in {ms[0]}..{ms[-1]}, all k")
