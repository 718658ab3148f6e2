"""Truncated Laurent series with high-precision complex coefficients.

Coefficients are :class:`mpmath.mpc` values.  All arithmetic is done inside
``mpmath.workprec(prec)`` where ``prec`` is the larger of the operand
precisions, so a result never carries fewer bits than its inputs.
"""

from contextlib import contextmanager

import mpmath
from mpmath import mp

DEFAULT_PREC = 128
DEFAULT_ORDER = 24


@contextmanager
def precision(prec=DEFAULT_PREC):
    """Run a block at ``prec`` binary digits (never lowers the current one)."""
    with mp.workprec(max(int(prec), mp.prec)):
        yield


def scalar(value):
    return mpmath.mpc(value)


class SeriesError(ValueError):
    pass


class TruncSeries:
    """``x**lead * sum(coeffs[k] * x**k for k in 0..order)``."""

    __slots__ = ("coeffs", "order", "lead", "var", "prec")

    def __init__(self, coeffs, order=None, lead=0, var="x", prec=None):
        prec = prec or mp.prec
        with mp.workprec(prec):
            cs = [mpmath.mpc(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise SeriesError("order must be non-negative")
        cs = (cs + [mpmath.mpc(0)] * (order + 1 - len(cs)))[: order + 1]
        self.coeffs = tuple(cs)
        self.order = order
        self.lead = lead
        self.var = var
        self.prec = prec

    @classmethod
    def one(cls, order=DEFAULT_ORDER, var="x", prec=None):
        return cls([1], order=order, var=var, prec=prec)

    @classmethod
    def zero(cls, order=DEFAULT_ORDER, var="x", prec=None):
        return cls([], order=order, var=var, prec=prec)

    @classmethod
    def monomial(cls, k, coeff=1, order=DEFAULT_ORDER, var="x", prec=None):
        cs = [0] * (order + 1)
        if k <= order:
            cs[k] = coeff
        return cls(cs, order=order, var=var, prec=prec)

    def __len__(self):
        return self.order + 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        head = ", ".join(mpmath.nstr(c, 8) for c in self.coeffs[:4])
        return f"TruncSeries({self.var}, lead={self.lead}, order={self.order}, [{head}, ...])"

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries([other], order=self.order, var=self.var, prec=self.prec)
        if other.var != self.var:
            raise SeriesError(f"cannot combine series in {self.var!r} and {other.var!r}")
        return other, min(self.order, other.order), max(self.prec, other.prec)

    def __add__(self, other):
        other, order, prec = self._check(other)
        if other.lead != self.lead:
            raise SeriesError("cannot add series with different leading exponents")
        with mp.workprec(prec):
            cs = [self.coeffs[k] + other.coeffs[k] for k in range(order + 1)]
        return TruncSeries(cs, order, self.lead, self.var, prec)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order, self.lead, self.var, self.prec)

    def __sub__(self, other):
        other, _, _ = self._check(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            with mp.workprec(self.prec):
                c = mpmath.mpc(other)
                cs = [a * c for a in self.coeffs]
            return TruncSeries(cs, self.order, self.lead, self.var, self.prec)
        return series_mul(self, other)

    __rmul__ = __mul__

    def scale_var(self, factor):
        """Substitute ``x -> factor * x`` (lead must be zero)."""
        if self.lead:
            raise SeriesError("scale_var needs an integral series")
        with mp.workprec(self.prec):
            f = mpmath.mpc(factor)
            cs, fk = [], mpmath.mpc(1)
            for c in self.coeffs:
                cs.append(c * fk)
                fk *= f
        return TruncSeries(cs, self.order, 0, self.var, self.prec)

    def max_abs_diff(self, other):
        other, order, prec = self._check(other)
        with mp.workprec(prec):
            return max(abs(self.coeffs[k] - other.coeffs[k]) for k in range(order + 1))

    def __call__(self, x):
        with mp.workprec(self.prec):
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            if self.lead:
                acc *= mpmath.power(x, self.lead)
            return acc


def series_mul(a, b):
    b, order, prec = a._check(b)
    with mp.workprec(prec):
        ac, bc = a.coeffs, b.coeffs
        cs = [mpmath.fsum(ac[i] * bc[k - i] for i in range(k + 1)) for k in range(order + 1)]
    return TruncSeries(cs, order, a.lead + b.lead, a.var, prec)


def series_exp(a):
    """exp of an integral series via ``k e_k = sum_j j a_j e_{k-j}``."""
    if a.lead:
        raise SeriesError("series_exp needs lead exponent 0")
    M = a.order
    with mp.workprec(a.prec):
        ac = a.coeffs
        e = [mpmath.exp(ac[0])]
        for k in range(1, M + 1):
            e.append(mpmath.fsum(j * ac[j] * e[k - j] for j in range(1, k + 1)) / k)
    return TruncSeries(e, M, 0, a.var, a.prec)


def series_log(a):
    """Principal log of an integral series with non-zero constant term."""
    if a.lead:
        raise SeriesError("series_log needs lead exponent 0")
    M = a.order
    with mp.workprec(a.prec):
        ac = a.coeffs
        if ac[0] == 0:
            raise SeriesError("log of a series with vanishing constant term")
        # k a_0 l_k = k a_k - sum_{j=1}^{k-1} j l_j a_{k-j}
        l = [mpmath.log(ac[0])]
        for k in range(1, M + 1):
            s = k * ac[k] - mpmath.fsum(j * l[j] * ac[k - j] for j in range(1, k))
            l.append(s / (k * ac[0]))
    return TruncSeries(l, M, 0, a.var, a.prec)
