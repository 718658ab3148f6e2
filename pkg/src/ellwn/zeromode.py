"""Zero-mode (momentum / lattice) sector with central commutators.

Generators are ``P_j, Q_j, h_j`` (the ε̄_j components, 1 <= j <= N), ``eta_j``
(1 <= j <= N, each with the sgn commutator table; ``eta_N`` is kept as an
independent generator rather than eliminated) and the
simple-root lattice operators ``alpha_j`` (1 <= j <= N-1).  All commutators are
central, so a word of exponentials ``e^{L_1} ... e^{L_n}`` is a scalar times a
canonical word and two words exchange up to ``exp(sum_{i,l} [L_i, M_l])``.

Exponent coefficients are sympy expressions in the position symbol ``v`` and the
symbol ``logq``; ``z = q^{2v}`` so ``log z = 2 v logq`` and no branch choice is
ever made.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy as sp

v = sp.Symbol("v")
v1, v2 = sp.symbols("v1 v2")
logq = sp.Symbol("logq")

KINDS = ("P", "h", "Q", "eta", "alpha")


class ZeroModeError(ValueError):
    pass


def _sgn(x):
    return (x > 0) - (x < 0)


def _rat(x):
    return sp.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sp.nsimplify(x)


@dataclass(frozen=True)
class CentralValue:
    """``rational + logq_coeff * log q + pi_i_coeff * πi`` (all exact)."""

    rational: Fraction = Fraction(0)
    logq_coeff: Fraction = Fraction(0)
    pi_i_coeff: Fraction = Fraction(0)

    def sympy(self):
        return (_rat(self.rational) + _rat(self.logq_coeff) * logq
                + _rat(self.pi_i_coeff) * sp.pi * sp.I)

    def __neg__(self):
        return CentralValue(-self.rational, -self.logq_coeff, -self.pi_i_coeff)

    def is_zero(self):
        return not (self.rational or self.logq_coeff or self.pi_i_coeff)


@dataclass(frozen=True, order=True)
class ZeroGen:
    kind: str
    index: int

    def sort_key(self):
        return (KINDS.index(self.kind), self.index)

    def __repr__(self):
        return f"{self.kind}{self.index}"


class ZeroModeAlgebra:
    """Commutator table for a parameter pack (``r`` exact)."""

    def __init__(self, params):
        self.params = params
        self.N = params.N
        self.r = params.r
        self.rstar = params.rstar

    def gen(self, kind, j):
        N = self.N
        if kind not in KINDS:
            raise ZeroModeError(f"unknown generator kind {kind!r}")
        top = N - 1 if kind == "alpha" else N
        if not 1 <= j <= top:
            raise ZeroModeError(f"{kind} index {j} outside 1..{top}")
        return ZeroGen(kind, j)

    def cartan(self, j, k):
        return 2 * (j == k) - (j == k + 1) - (j == k - 1)

    def pairing(self, j, k):
        """``<ε̄_j, ε̄_k> = δ_jk - 1/N``."""
        return Fraction(int(j == k)) - Fraction(1, self.N)

    def commutator_scalar(self, g1, g2):
        """Central value of ``[g1, g2]``."""
        for g in (g1, g2):
            if not isinstance(g, ZeroGen) or g.kind not in KINDS:
                raise ZeroModeError(f"unknown generator {g!r}")
        a, b = g1.kind, g2.kind
        j, k = g1.index, g2.index
        r, rs = self.r, self.rstar
        if (a, b) == ("P", "Q"):
            return CentralValue(self.pairing(j, k))
        if (a, b) == ("Q", "P"):
            return -self.commutator_scalar(g2, g1)
        if (a, b) == ("Q", "Q"):
            return CentralValue(logq_coeff=(1 / r - 1 / rs) * _sgn(j - k))
        if (a, b) in (("Q", "eta"), ("eta", "eta")):
            return CentralValue(logq_coeff=Fraction(1) / r * _sgn(j - k))
        if (a, b) == ("eta", "Q"):
            return -self.commutator_scalar(g2, g1)
        if (a, b) == ("h", "alpha"):
            # <ε̄_j, α_k> with α_k = -ε̄_k + ε̄_{k+1}
            return CentralValue(Fraction(-int(j == k) + int(j == k + 1)))
        if (a, b) == ("alpha", "h"):
            return -self.commutator_scalar(g2, g1)
        if (a, b) == ("alpha", "alpha"):
            # antisymmetric cocycle: e^{α_j} e^{α_k} = (-1)^{A_jk} e^{α_k} e^{α_j}
            return CentralValue(pi_i_coeff=Fraction(self.cartan(j, k) * _sgn(k - j)))
        return CentralValue()

    def bracket(self, L, M):
        """Central commutator of two linear forms (dicts gen -> sympy coefficient)."""
        acc = sp.Integer(0)
        for g, a in L.items():
            for h, b in M.items():
                cv = self.commutator_scalar(g, h)
                if not cv.is_zero():
                    acc += a * b * cv.sympy()
        return sp.expand(acc)

    # ------------------------------------------------------------------ forms
    def form(self, **spec):
        """Linear form from keyword entries like ``P=((1, c), ...)``."""
        L = {}
        for kind, items in spec.items():
            for j, c in items:
                self._add(L, kind, j, c)
        return L

    def _add(self, L, kind, j, c):
        c = sp.sympify(c)
        g = self.gen(kind, j)
        L[g] = sp.expand(L.get(g, 0) + c)
        if L[g] == 0:
            del L[g]

    def eps(self, kind, j, c=1):
        """``c * X_{ε̄_j}`` for X in P, Q, h."""
        return self.form(**{kind: [(j, c)]})

    def root(self, kind, j, c=1):
        """``c * X_{α_j} = c (-X_{ε̄_j} + X_{ε̄_{j+1}})``."""
        return self.form(**{kind: [(j, -c), (j + 1, c)]})

    def alpha_bar(self, j, c=1):
        """``c ᾱ_j = c(-eta_j + eta_{j+1})``."""
        return self.form(eta=[(j, -c), (j + 1, c)])

    def alpha_hat(self, j, c=1):
        """``c α̂_j = c(α_j + ᾱ_j)``."""
        L = self.alpha_bar(j, c)
        self._add(L, "alpha", j, c)
        return L


def add_forms(*forms):
    out = {}
    for L in forms:
        for g, c in L.items():
            out[g] = sp.expand(out.get(g, 0) + c)
            if out[g] == 0:
                del out[g]
    return out


def scale_form(L, c):
    return {g: sp.expand(a * c) for g, a in L.items() if sp.expand(a * c) != 0}


class ZeroModeWord:
    """``exp(const) * e^{L_1} e^{L_2} ...`` with coefficients depending on ``v``."""

    def __init__(self, algebra, factors=(), const=0):
        self.algebra = algebra
        self.factors = [dict(L) for L in factors if L]
        self.const = sp.expand(sp.sympify(const))

    @classmethod
    def identity(cls, algebra):
        return cls(algebra)

    def exp(self, L):
        return ZeroModeWord(self.algebra, self.factors + [L], self.const)

    def power(self, log_arg, L):
        """Append ``(arg)^L`` with ``log(arg) = log_arg`` (a sympy expression)."""
        return self.exp(scale_form(L, log_arg))

    def scalar(self, log_value):
        return ZeroModeWord(self.algebra, self.factors, self.const + log_value)

    def __mul__(self, other):
        return ZeroModeWord(self.algebra, self.factors + other.factors, self.const + other.const)

    def subs(self, mapping):
        fs = [{g: sp.expand(c.subs(mapping)) for g, c in L.items()} for L in self.factors]
        return ZeroModeWord(self.algebra, fs, self.const.subs(mapping))

    def at(self, position):
        """Word with ``v`` replaced by ``position``."""
        return self.subs({v: position})

    def total(self):
        return add_forms(*self.factors)

    def normal_form(self):
        """``(log scalar, canonical word)`` with the canonical word in generator order."""
        A = self.algebra
        acc = sp.Integer(0)
        fs = self.factors
        for i in range(len(fs)):
            for k in range(i + 1, len(fs)):
                acc += A.bracket(fs[i], fs[k]) / 2
        tot = self.total()
        gens = sorted(tot, key=ZeroGen.sort_key)
        for i in range(len(gens)):
            for k in range(i + 1, len(gens)):
                g, h = gens[i], gens[k]
                acc -= tot[g] * tot[h] * A.commutator_scalar(g, h).sympy() / 2
        canon = ZeroModeWord(A, [{g: tot[g]} for g in gens])
        return sp.expand(acc + self.const), canon

    def canonical_items(self):
        """Generator -> total coefficient, in canonical order."""
        tot = self.total()
        return [(g, tot[g]) for g in sorted(tot, key=ZeroGen.sort_key)]

    def is_identity(self):
        return not self.total()

    def __repr__(self):
        items = ", ".join(f"{g}:{c}" for g, c in self.canonical_items())
        return f"ZeroModeWord({items}; const={self.const})"


def exchange_exponent(X, Y):
    """``E`` with ``X(v1) Y(v2) = exp(E) Y(v2) X(v1)`` in the zero-mode sector."""
    A = X.algebra
    Xa, Yb = X.at(v1), Y.at(v2)
    acc = sp.Integer(0)
    for L in Xa.factors:
        for M in Yb.factors:
            acc += A.bracket(L, M)
    return sp.expand(acc)


class ExchangeFactor:
    """Numeric handle on ``exp(E(v1, v2))``."""

    def __init__(self, exponent, params):
        self.exponent = sp.expand(exponent)
        self.params = params
        self._f = sp.lambdify((v1, v2, logq), self.exponent, modules="mpmath")

    def depends_on_positions(self):
        return bool(self.exponent.free_symbols & {v1, v2})

    def log_value(self, a, b):
        return self._f(a, b, self.params.logq)

    def __call__(self, a, b):
        return mpmath.exp(self.log_value(a, b))


def exchange_factor(X, Y, params):
    return ExchangeFactor(exchange_exponent(X, Y), params)
