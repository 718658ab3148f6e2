"""Exact rational templates in ``u = q**m`` and ``w = q**(r m)``.

A mode coefficient of a vertex operator (or a contraction coefficient) is a
function of the mode number ``m`` of the shape

    sum_i c_i u**a_i w**b_i / prod_t (1 - u**t_a w**t_b)

with rational ``c_i, a_i, b_i``.  Treating ``u`` and ``w`` as independent
variables is legitimate for generic (irrational-like) ``r``.  A monomial
``(a, b)`` evaluates at mode ``m`` to ``q**((a + b r) m)``.
"""

from collections import Counter
from fractions import Fraction
from math import floor

import mpmath


def mono(a=0, b=0):
    return (Fraction(a), Fraction(b))


def mono_add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def mono_neg(x):
    return (-x[0], -x[1])


def mono_scale(x, k):
    return (x[0] * k, x[1] * k)


def mono_value(x, r):
    """Real exponent ``a + b r`` of ``q`` carried by the monomial."""
    return x[0] + x[1] * r


class Laurent:
    """Sparse Laurent polynomial in (u, w) with rational exponents and coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for k, v in (terms or {}).items():
            v = Fraction(v)
            if v:
                t[(Fraction(k[0]), Fraction(k[1]))] = v
        self.terms = t

    @classmethod
    def const(cls, c):
        return cls({mono(): c})

    @classmethod
    def monomial(cls, a=0, b=0, c=1):
        return cls({mono(a, b): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*u^{a}*w^{b}" for (a, b), c in sorted(self.terms.items()))

    def __add__(self, other):
        t = Counter(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return Laurent(t)

    def __neg__(self):
        return Laurent({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return Laurent({k: v * Fraction(other) for k, v in self.terms.items()})
        t = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = mono_add(k1, k2)
                t[k] = t.get(k, 0) + v1 * v2
        return Laurent(t)

    __rmul__ = __mul__

    def shift(self, m):
        """Multiply by the monomial ``m``."""
        return Laurent({mono_add(k, m): v for k, v in self.terms.items()})

    def reflect(self):
        """Substitute ``u -> 1/u, w -> 1/w`` (i.e. ``m -> -m``)."""
        return Laurent({mono_neg(k): v for k, v in self.terms.items()})

    def div_one_minus(self, t):
        """Exact quotient by ``(1 - t)``, or ``None`` if not divisible."""
        if not self.terms:
            return Laurent()
        axis = 0 if t[0] != 0 else 1
        if t[axis] == 0:
            raise ZeroDivisionError("1 - 1 is not a valid divisor")
        classes = {}
        for e, c in self.terms.items():
            k = floor(e[axis] / t[axis])
            rep = (e[0] - k * t[0], e[1] - k * t[1])
            classes.setdefault(rep, {})[k] = c
        out = {}
        for rep, poly in classes.items():
            if sum(poly.values()) != 0:
                return None
            acc = Fraction(0)
            for k in range(min(poly), max(poly)):
                acc += poly.get(k, 0)
                if acc:
                    out[(rep[0] + k * t[0], rep[1] + k * t[1])] = acc
        return Laurent(out)

    def evaluate(self, m, params):
        """Numeric value at mode ``m``."""
        r = params.r
        with mpmath.mp.workprec(max(params.prec, mpmath.mp.prec)):
            return mpmath.fsum(
                mpmath.mpf(c.numerator) / c.denominator * params.qpow(mono_value(e, r) * m)
                for e, c in self.terms.items()
            )


def one_minus(t):
    return Laurent({mono(): 1, t: -1})


class RatTemplate:
    """``num / prod_{t in den} (1 - t)`` with ``den`` a multiset of monomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        self.num = num if isinstance(num, Laurent) else Laurent.const(num)
        self.den = Counter()
        for t in (den.elements() if isinstance(den, Counter) else den):
            self.den[(Fraction(t[0]), Fraction(t[1]))] += 1

    @classmethod
    def const(cls, c):
        return cls(Laurent.const(c))

    @classmethod
    def monomial(cls, a=0, b=0, c=1):
        return cls(Laurent.monomial(a, b, c))

    def __repr__(self):
        den = " ".join(f"(1-u^{a}w^{b})^{n}" for (a, b), n in sorted(self.den.items()))
        return f"RatTemplate(({self.num}) / {den or '1'})"

    def is_zero(self):
        return not self.num

    def __mul__(self, other):
        if not isinstance(other, RatTemplate):
            return RatTemplate(self.num * other, self.den)
        return RatTemplate(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a template whose numerator is a single binomial or monomial."""
        return self * other.inverse()

    def __neg__(self):
        return RatTemplate(-self.num, self.den)

    def __add__(self, other):
        if not isinstance(other, RatTemplate):
            other = RatTemplate.const(other)
        den = self.den | other.den
        n1 = self.num
        for t, k in (den - self.den).items():
            for _ in range(k):
                n1 = n1 * one_minus(t)
        n2 = other.num
        for t, k in (den - other.den).items():
            for _ in range(k):
                n2 = n2 * one_minus(t)
        return RatTemplate(n1 + n2, den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def reflect(self):
        """``m -> -m``; each ``1/(1 - t)`` becomes ``1/(1 - 1/t) = -t/(1 - t)``."""
        num = self.num.reflect()
        for t, k in self.den.items():
            for _ in range(k):
                num = num.shift(t) * -1
        return RatTemplate(num, self.den)

    def shift(self, m):
        return RatTemplate(self.num.shift(m), self.den)

    def inverse(self):
        """Inverse of a template whose numerator is ``c u^a w^b`` or ``c (X - Y)``
        with ``X, Y`` monomials; the result keeps ``t`` with ``|t| < 1``
        decided later by :meth:`normalize`."""
        if self.den:
            num = Laurent.const(1)
            for t, k in self.den.items():
                for _ in range(k):
                    num = num * one_minus(t)
            inv_num = num
        else:
            inv_num = Laurent.const(1)
        terms = list(self.num.terms.items())
        if len(terms) == 1:
            (e, c), = terms
            return RatTemplate(inv_num.shift(mono_neg(e)) * (1 / c))
        if len(terms) == 2:
            (e1, c1), (e2, c2) = terms
            if c1 != -c2:
                raise ValueError("can only invert a pure binomial X - Y")
            # c1 (X - Y) = c1 X (1 - Y/X)
            t = mono_add(e2, mono_neg(e1))
            return RatTemplate(inv_num.shift(mono_neg(e1)) * (1 / c1), [t])
        raise ValueError("cannot invert a template with more than two terms")

    def normalize(self, r):
        """Rewrite every ``1/(1 - t)`` with ``|q^t| > 1`` as ``-t^{-1}/(1 - t^{-1})``."""
        num = self.num
        den = Counter()
        for t, k in self.den.items():
            if mono_value(t, r) < 0:
                ti = mono_neg(t)
                for _ in range(k):
                    num = num.shift(ti) * -1
                den[ti] += k
            elif mono_value(t, r) == 0:
                raise ZeroDivisionError(f"denominator factor (1 - u^{t[0]} w^{t[1]}) is identically 0")
            else:
                den[t] += k
        return RatTemplate(num, den)

    def cancel(self):
        """Divide out every denominator factor that divides the numerator."""
        num = self.num
        den = Counter()
        for t, k in sorted(self.den.items()):
            for _ in range(k):
                qt = num.div_one_minus(t)
                if qt is None:
                    den[t] += 1
                else:
                    num = qt
        return RatTemplate(num, den)

    def reduced(self, r):
        return self.normalize(r).cancel()

    def equals(self, other, r):
        return (self - other).reduced(r).is_zero()

    def evaluate(self, m, params):
        with mpmath.mp.workprec(max(params.prec, mpmath.mp.prec)):
            val = self.num.evaluate(m, params)
            r = params.r
            for t, k in self.den.items():
                val /= (1 - params.qpow(mono_value(t, r) * m)) ** k
            return val


def bin_(a, b=0):
    """Unnormalised q-number numerator ``u^a w^b - u^{-a} w^{-b}``."""
    terms = {mono(a, b): 1}
    neg = mono(-a, -b)
    terms[neg] = terms.get(neg, 0) - 1
    return RatTemplate(Laurent(terms))
