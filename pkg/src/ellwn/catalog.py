"""Descriptor builders for the level-one free-field operators.

Each builder transcribes one printed operator: the oscillator exponent goes into
an :class:`~ellwn.ope.OscProfile`, every remaining factor into a
:class:`~ellwn.zeromode.ZeroModeWord`.  Positions are ``v`` with ``z = q^{2v}``.
"""

from fractions import Fraction

import sympy as sp

from .laurent import RatTemplate, bin_, mono
from .ope import OscProfile, VertexDescriptor
from . import zeromode as zm
from .zeromode import logq, v


def _R(x):
    return sp.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sp.Rational(x)


class CurrentCatalog:
    """Builders for ``E_j, F_j, K_j, H_j^±, Ψ*_N, Ψ_1, Λ_j`` at fixed parameters."""

    def __init__(self, params):
        self.params = params
        self.N = params.N
        self.alg = zm.ZeroModeAlgebra(params)
        c = params.c
        # [rm]/[r*m] and [m]/[r*m] as templates
        self._r_over_rs = bin_(0, 1) / bin_(-c, 1)
        self._one_over_rs = bin_(1) / bin_(-c, 1)
        self._rs = _R(params.rstar)
        self._r = _R(params.r)

    def _word(self):
        return zm.ZeroModeWord(self.alg)

    def _logz(self):
        return 2 * v * logq

    def _check(self, j, top):
        if not 1 <= j <= top:
            raise IndexError(f"index {j} outside 1..{top}")

    # free-field E_j
    def E(self, j):
        self._check(j, self.N - 1)
        N, A = self.N, self.alg
        t = self._r_over_rs * RatTemplate.monomial(-(N - j))
        osc = OscProfile(self.params, {j: t, j + 1: -t})
        larg = (N - j) * logq + self._logz()
        w = (self._word()
             .exp(A.alpha_hat(j))
             .power(self._logz(), A.root("h", j))
             .exp(A.root("Q", j, -1))
             .power(larg, A.root("P", j, -1 / self._rs))
             .scalar(larg / self._rs))
        return VertexDescriptor(f"E{j}", osc, w)

    # free-field F_j
    def F(self, j):
        self._check(j, self.N - 1)
        N, A = self.N, self.alg
        t = RatTemplate.monomial(-(N - j))
        osc = OscProfile(self.params, {j: -t, j + 1: t})
        larg = (N - j) * logq + self._logz()
        w = (self._word()
             .exp(A.alpha_hat(j, -1))
             .power(self._logz(), A.root("h", j, -1))
             .power(larg, zm.add_forms(A.root("P", j, 1 / self._r), A.root("h", j, 1 / self._r)))
             .scalar(-larg / self._r))
        return VertexDescriptor(f"F{j}", osc, w)

    # k_j with its full zero-mode dressing
    def K(self, j):
        self._check(j, self.N)
        N, A = self.N, self.alg
        osc = OscProfile(self.params, {j: self._one_over_rs})
        d = 1 / self._rs - 1 / self._r
        w = (self._word()
             .exp(A.eps("Q", j))
             .power(self._logz(), A.eps("P", j, d))
             .power(self._logz(), A.eps("h", j, -1 / self._r))
             .scalar(self._logz() * d * sp.Rational(N - 1, 2 * N)))
        return VertexDescriptor(f"K{j}", osc, w)

    def shifted(self, X, s, name=None):
        """``X(v + s)`` for ``s = (a + b r)/2`` given as the exponent pair ``(a, b)`` of ``q^{2s}``."""
        a, b = Fraction(s[0]), Fraction(s[1])
        osc = X.osc.shift(mono(a, b))
        shift = (_R(a) + _R(b) * self._r) / 2
        return VertexDescriptor(name or X.name, osc, X.zero.subs({v: v + shift}))

    def product(self, X, Y, name):
        """Normal-ordered product at the same point (contraction constant dropped)."""
        return VertexDescriptor(name, X.osc + Y.osc, X.zero * Y.zero)

    # H_j^±(v) = κ K_j(v ± (r - c/2)/2 + (N-j)/2) K_{j+1}(...)^{-1}
    def H(self, j, sign):
        self._check(j, self.N - 1)
        N, c = self.N, self.params.c
        s = (N - j - sign * Fraction(c, 2), sign)
        Kj = self.shifted(self.K(j), s)
        Kj1 = self.shifted(self.K(j + 1), s).scaled(-1)
        return self.product(Kj, Kj1, f"H{j}{'+' if sign > 0 else '-'}")

    # type-II vertex operator, highest component
    def Psi_star_N(self):
        N, A = self.N, self.alg
        osc = OscProfile(self.params, {N: self._r_over_rs})
        lam = zm.add_forms(*[A.alpha_hat(k, sp.Rational(k, N)) for k in range(1, N)])
        w = (self._word()
             .exp(zm.scale_form(lam, -1))
             .power(self._logz(), A.eps("h", N, -1))
             .exp(A.eps("Q", N))
             .power(self._logz(), A.eps("P", N, 1 / self._rs))
             .scalar(self._logz() * (1 + 1 / self._rs) * sp.Rational(N - 1, 2 * N)))
        return VertexDescriptor(f"Psi*{N}", osc, w)

    # dual vertex operator, first component
    def Psi_1(self):
        N, A = self.N, self.alg
        osc = OscProfile(self.params, {1: -self._r_over_rs * RatTemplate.monomial(-N)})
        lam = zm.add_forms(*[A.alpha_hat(k, sp.Rational(N - k, N)) for k in range(1, N)])
        larg = N * logq + self._logz()
        w = (self._word()
             .exp(lam)
             .power(self._logz(), A.eps("h", 1))
             .exp(A.eps("Q", 1, -1))
             .power(larg, A.eps("P", 1, -1 / self._rs))
             .scalar(larg * sp.Rational(N - 1, 2 * N) / self._rs + self._logz() * sp.Rational(N - 1, 2 * N)))
        return VertexDescriptor("Psi1", osc, w)

    # deformed W_N building block
    def Lambda(self, j, shift_unit=None):
        self._check(j, self.N)
        N, A = self.N, self.alg
        osc = OscProfile(self.params, {j: bin_(0, 1)})
        rs = self._rs
        w = (self._word()
             .exp(A.eps("P", j, -2 * logq))
             .exp(A.eps("h", j, 2 * rs * logq))
             .scalar((sp.Rational(2 * (1 - N), N) + 2 * rs * (-sp.Rational(1, N) - j)) * logq))
        return VertexDescriptor(f"Lambda{j}", osc, w)
