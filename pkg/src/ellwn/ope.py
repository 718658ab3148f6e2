"""Contractions of normal-ordered vertex operators.

A vertex operator is ``:exp(sum_{m != 0} sum_j c_m(j) B_m^j z^{-m}): × zero modes``
with ``c_m(j) = T_j(m) / m`` for exact templates ``T_j``.  Moving the annihilation
part of ``X(z1)`` through the creation part of ``Y(z2)`` gives

    X(z1) Y(z2) = exp(γ(z2/z1)) :X(z1) Y(z2):,   γ(x) = sum_{m>=1} R(m) x^m / m

with ``R = sum_{j,k} T^X_j(m) T^Y_k(-m) [B_m^j, B_{-m}^k]/m``.  Because ``R`` is a
Laurent polynomial over products of ``(1 - p^m)``, ``(1 - p*^m)``, ``(1 - q^{2Nm})``,
``exp(γ)`` is a finite product of multi-base Pochhammer symbols, which is the
meromorphic continuation used to compare the two operator orderings.
"""

import math
from collections import defaultdict
from fractions import Fraction

import gmpy2
import mpmath
import sympy as sp
from mpmath import mp

from .laurent import RatTemplate, mono, mono_add, mono_neg, mono_value
from .modes import ModeAlgebra
from .qspecial import PoleError, tail_bound_by_size
from .report import RelationReport, Timer
from .series import TruncSeries
from . import zeromode as zm


class RecognitionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# descriptors


class OscProfile:
    """Map ``j -> T_j`` (exact templates); ``c_m(j) = T_j(m) / m``."""

    def __init__(self, params, coeffs=None):
        self.params = params
        self.coeffs = {}
        for j, t in (coeffs or {}).items():
            t = t.reduced(params.r)
            if not t.is_zero():
                self.coeffs[j] = t

    def __add__(self, other):
        out = dict(self.coeffs)
        for j, t in other.coeffs.items():
            out[j] = out[j] + t if j in out else t
        return OscProfile(self.params, out)

    def __neg__(self):
        return OscProfile(self.params, {j: -t for j, t in self.coeffs.items()})

    def __mul__(self, c):
        return OscProfile(self.params, {j: t * c for j, t in self.coeffs.items()})

    __rmul__ = __mul__

    def shift(self, e):
        """Profile of ``X(q^{e} z)`` given that of ``X(z)`` (``e`` a monomial exponent)."""
        return OscProfile(self.params, {j: t.shift(mono_neg(e)) for j, t in self.coeffs.items()})

    def coefficient(self, j, m):
        t = self.coeffs.get(j)
        if t is None:
            return mpmath.mpf(0)
        with mp.workprec(self.params.prec):
            return t.evaluate(m, self.params) / m

    def equals(self, other):
        r = self.params.r
        keys = set(self.coeffs) | set(other.coeffs)
        zero = RatTemplate.const(0)
        return all(self.coeffs.get(j, zero).equals(other.coeffs.get(j, zero), r) for j in keys)

    def max_coeff_diff(self, other, order):
        """``max_{1<=|m|<=order, j} |c_m(j) - c'_m(j)|`` relative to the larger size."""
        keys = set(self.coeffs) | set(other.coeffs)
        worst = mpmath.mpf(0)
        with mp.workprec(self.params.prec):
            for j in keys:
                for m in list(range(1, order + 1)) + list(range(-order, 0)):
                    a, b = self.coefficient(j, m), other.coefficient(j, m)
                    scale = max(abs(a), abs(b), mpmath.mpf(1))
                    worst = max(worst, abs(a - b) / scale)
        return worst

    def is_trivial(self):
        return not self.coeffs


class VertexDescriptor:
    """Oscillator profile plus zero-mode word of one normal-ordered operator."""

    def __init__(self, name, osc, zero):
        self.name = name
        self.osc = osc
        self.zero = zero

    @property
    def params(self):
        return self.osc.params

    def __repr__(self):
        return f"VertexDescriptor({self.name})"

    def scaled(self, c, name=None):
        """Oscillator content multiplied by ``c`` (e.g. ``c = -1`` for an inverse)."""
        zero = zm.ZeroModeWord(self.zero.algebra, [zm.scale_form(L, c) for L in self.zero.factors],
                               self.zero.const * c)
        return VertexDescriptor(name or f"{self.name}^{c}", self.osc * c, zero)


def empty_descriptor(params, algebra):
    return VertexDescriptor("1", OscProfile(params), zm.ZeroModeWord(algebra))


# ---------------------------------------------------------------------------
# contraction templates and series


def contraction_template(X, Y):
    """Exact ``R`` with ``γ_m = R(m) / m`` for ``<X(z1) Y(z2)>`` in ``x = z2/z1``."""
    P = X.params
    A = ModeAlgebra(P)
    acc = RatTemplate.const(0)
    for j, tx in X.osc.coeffs.items():
        for k, ty in Y.osc.coeffs.items():
            # c_{-m} = T(-m) / (-m)
            acc = acc - tx * ty.reflect() * A.template(j, k)
    return acc.reduced(P.r)


def log_contraction(X, Y, order=24):
    """``γ(x)`` as a truncated series, summed mode by mode from the printed commutator."""
    P = X.params
    A = ModeAlgebra(P)
    with mp.workprec(P.prec):
        cs = [mpmath.mpc(0)]
        for m in range(1, order + 1):
            s = mpmath.mpc(0)
            for j in X.osc.coeffs:
                cx = X.osc.coefficient(j, m)
                for k in Y.osc.coeffs:
                    s += cx * Y.osc.coefficient(k, -m) * A.B_commutator(j, k, m, -m)
            cs.append(s)
    return TruncSeries(cs, order=order, var="x", prec=P.prec)


# ---------------------------------------------------------------------------
# product forms


def allowed_bases(params):
    return {
        mono(0, 2): "p",
        mono(-2 * params.c, 2): "p*",
        mono(2 * params.N, 0): "q^2N",
    }


class ProductForm:
    """``x**lead * const * prod_i (q^{y_i} x; T)_inf ** (-c_i)``.

    ``terms`` is a list of ``(c_i, y_i, T)`` with ``T`` a sorted tuple of base
    exponents; ``lead`` and ``const`` stay at 0 and 1 for pure oscillator
    contractions.
    """

    def __init__(self, params, terms, lead=0, const=1):
        self.params = params
        merged = defaultdict(Fraction)
        for c, y, T in terms:
            merged[(y, tuple(sorted(T)))] += Fraction(c)
        self.terms = [(c, y, T) for (y, T), c in sorted(merged.items()) if c]
        self.lead = lead
        self.const = const
        self._cache = {}

    def __repr__(self):
        names = allowed_bases(self.params)
        parts = []
        for c, y, T in self.terms:
            base = ",".join(names.get(t, str(t)) for t in T)
            parts.append(f"(q^({y[0]}+{y[1]}r) x; {base})^{-c}")
        return "ProductForm(" + " ".join(parts) + ")"

    def is_trivial(self):
        return not self.terms

    def inverted(self):
        """Product form of the reciprocal."""
        return ProductForm(self.params, [(-c, y, T) for c, y, T in self.terms])

    def pole_order(self, x0):
        """Order of the pole at ``x = q^{x0}`` (negative for a zero), exactly."""
        r = self.params.r
        order = 0
        for c, y, T in self.terms:
            target = mono_add(y, x0)  # need target + n.T == 0
            budget = -mono_value(target, r)
            if budget < 0:
                continue
            order += c * _count_exact(target, T, r)
        return order

    def _multipliers(self, T, zmax):
        P = self.params
        bucket = math.floor(math.log2(float(zmax))) + 1 if zmax > 0 else 0
        key = (T, mp.prec, bucket)
        if key not in self._cache:
            bases = [P.qpow(mono_value(t, P.r)) for t in T]
            thr = mpmath.ldexp(1, -mp.prec - 8 - bucket)
            mults = [mpmath.mpf(1)]
            for b in bases:
                new = []
                for m0 in mults:
                    m1 = m0
                    while m1 >= thr:
                        new.append(m1)
                        m1 *= b
                mults = new
            bound = tail_bound_by_size(bases, mpmath.ldexp(1, bucket), thr) if bases else 0
            with gmpy2.context(gmpy2.get_context(), precision=mp.prec + 10):
                self._cache[key] = ([_to_gmpy(m) for m in mults], bound)
        return self._cache[key]

    def evaluate(self, x, with_bound=False):
        """Value at ``x``; raises :class:`PoleError` at a pole."""
        P = self.params
        with mp.workprec(max(P.prec, mp.prec)):
            x = mpmath.mpmathify(x)
            groups = defaultdict(list)
            for c, y, T in self.terms:
                if c.denominator != 1:
                    raise RecognitionError("non-integral Pochhammer exponent")
                groups[T].append((int(c), P.qpow(mono_value(y, P.r)) * x))
            with gmpy2.context(gmpy2.get_context(), precision=mp.prec + 10):
                num = gmpy2.mpc(1)
                den = gmpy2.mpc(1)
                bound = mpmath.mpf(0)
                for T, items in groups.items():
                    zmax = max(abs(z) for _, z in items)
                    mults, b = self._multipliers(T, zmax)
                    bound += b * sum(abs(c) for c, _ in items)
                    gz = [(c, _to_gmpyc(z)) for c, z in items]
                    if not T:
                        mults = [gmpy2.mpfr(1)]
                    for m in mults:
                        for c, z in gz:
                            f = 1 - z * m
                            if c > 0:
                                for _ in range(c):
                                    den *= f
                            else:
                                for _ in range(-c):
                                    num *= f
                if den == 0:
                    raise PoleError("product form evaluated at a pole")
                val = mpmath.mpc(_from_gmpy(num / den))
        val *= self.const
        if self.lead:
            val *= mpmath.power(x, self.lead)
        if with_bound:
            return val, bound
        return val

    def series(self, order=24):
        """Re-expansion in ``x`` by multiplying out the truncated products."""
        P = self.params
        with mp.workprec(P.prec):
            acc = [mpmath.mpc(1)] + [mpmath.mpc(0)] * order
            for c, y, T in self.terms:
                z0 = P.qpow(mono_value(y, P.r))
                bases = [P.qpow(mono_value(t, P.r)) for t in T]
                thr = mpmath.ldexp(1, -P.prec - 16) / max(abs(z0), mpmath.mpf(1)) ** order
                mults = [mpmath.mpf(1)]
                for b in bases:
                    new = []
                    for m0 in mults:
                        m1 = m0
                        while m1 >= thr:
                            new.append(m1)
                            m1 *= b
                    mults = new
                k = int(c)
                for m in mults:
                    a = z0 * m
                    for _ in range(abs(k)):
                        if k > 0:
                            # divide by (1 - a x)
                            for i in range(1, order + 1):
                                acc[i] += a * acc[i - 1]
                        else:
                            for i in range(order, 0, -1):
                                acc[i] -= a * acc[i - 1]
            return TruncSeries(acc, order=order, prec=P.prec)


def _to_gmpy(m):
    sign, man, exp, bc = mpmath.mpf(m)._mpf_
    if not man:
        return gmpy2.mpfr(0)
    x = gmpy2.mul_2exp(gmpy2.mpfr(int(man), max(int(bc), 1)), int(exp))
    return -x if sign else x


def _to_gmpyc(z):
    z = mpmath.mpc(z)
    return gmpy2.mpc(_to_gmpy(z.real), _to_gmpy(z.imag))


def _from_gmpy(z):
    parts = []
    for x in (z.real, z.imag):
        man, exp = x.as_mantissa_exp()
        parts.append(mpmath.mpf((int(man), int(exp))))
    return mpmath.mpc(*parts)


def _count_exact(target, T, r):
    """Number of multi-indices ``n >= 0`` with ``target + sum n_i T_i == 0`` exactly."""
    budget = -mono_value(target, r)
    vals = [mono_value(t, r) for t in T]
    count = 0

    def rec(i, acc):
        nonlocal count
        if i == len(T):
            if acc == (0, 0):
                count += 1
            return
        n = 0
        cur = acc
        while mono_value(cur, r) <= 0:
            rec(i + 1, cur)
            n += 1
            cur = mono_add(cur, T[i])
            if vals[i] <= 0:
                raise RecognitionError("non-contracting Pochhammer base")

    if budget < 0:
        return 0
    rec(0, target)
    return count


def recognize_products(template, params):
    """Turn ``γ_m = R(m)/m`` into a :class:`ProductForm`."""
    R = template.reduced(params.r)
    allowed = allowed_bases(params)
    for t in R.den:
        if t not in allowed:
            raise RecognitionError(f"denominator factor (1 - q^(({t[0]})+({t[1]})r)m) is not a Pochhammer base")
    T = tuple(sorted(R.den.elements()))
    return ProductForm(params, [(c, y, T) for y, c in R.num.terms.items()])


def contraction_product(X, Y):
    return recognize_products(contraction_template(X, Y), X.params)


# ---------------------------------------------------------------------------
# exchange


class ExchangeRatio:
    """``f(v1, v2)`` with ``X(v1) Y(v2) = f Y(v2) X(v1)`` as a meromorphic function."""

    def __init__(self, X, Y):
        self.X, self.Y = X, Y
        self.params = X.params
        self.forward = contraction_product(X, Y)
        self.backward = contraction_product(Y, X)
        self.zero = zm.exchange_factor(X.zero, Y.zero, self.params)

    def oscillator_trivial(self):
        """True when both contraction product forms are identically 1."""
        return self.forward.is_trivial() and self.backward.is_trivial()

    def __call__(self, v_1, v_2, with_bound=False):
        P = self.params
        with mp.workprec(P.prec):
            v_1, v_2 = mpmath.mpmathify(v_1), mpmath.mpmathify(v_2)
            x = P.qpow(2 * (v_2 - v_1))
            a, ba = self.forward.evaluate(x, with_bound=True)
            b, bb = self.backward.evaluate(1 / x, with_bound=True)
            val = a / b * self.zero(v_1, v_2)
            return (val, ba + bb) if with_bound else val


def exchange_ratio(X, Y):
    return ExchangeRatio(X, Y)


def specialize_compose(X, Y, x0, name=None, check_pole=True):
    """``:X(z1) Y(z2):`` at ``z2/z1 = q^{x0}`` as a descriptor in ``z2`` (position ``v``).

    ``x0`` is an exact monomial exponent.  Raises if ``<X Y>`` has a pole of
    order > 1 there.
    """
    P = X.params
    if check_pole:
        order = contraction_product(X, Y).pole_order(x0)
        if order > 1:
            raise PoleError(f"pole of order {order} at the fusion point")
    # z1 = z2 q^{-x0}:  X(z1) has profile X.shift(-x0) in terms of z2
    osc = X.osc.shift(mono_neg(x0)) + Y.osc
    e = sp.Rational(x0[0].numerator, x0[0].denominator) + sp.Rational(
        x0[1].numerator, x0[1].denominator) * sp.Rational(P.r.numerator, P.r.denominator)
    zx = X.zero.subs({zm.v: zm.v - e / 2})
    return VertexDescriptor(name or f":{X.name}{Y.name}:", osc, zx * Y.zero)


def sample_points(n, params, radii=("0.7", "1.0", "1.3"), seed=0, base=None):
    """Deterministic sample pairs ``(v1, v2)`` with ``|z2/z1|`` on the given radii."""
    P = params
    with mp.workprec(P.prec):
        rng = mpmath.mpf
        per = -(-n // len(radii))
        out = []
        golden = (mpmath.sqrt(5) - 1) / 2
        for i, rad in enumerate(radii):
            for k in range(per):
                if len(out) >= n:
                    break
                t = mpmath.frac(golden * (k + 1) + mpmath.mpf(seed) / 7 + mpmath.mpf(i) / 11)
                theta = mpmath.pi * (2 * t - 1) * mpmath.mpf("0.98")
                x = rng(rad) * mpmath.expj(theta)
                d = mpmath.log(x) / (2 * P.logq)
                v_1 = base if base is not None else mpmath.mpc("0.137", "0.071") + mpmath.mpf(k) / 97
                out.append((v_1, v_1 + d))
        return out


def compare_structure_function(f, target, samples, params, suite="custom", threshold="1e-20",
                               notes="", info=None):
    """Max relative residual ``|f/target - 1|`` over the samples."""
    res = []
    bound = mpmath.mpf(0)
    skipped = 0
    with Timer() as tm, mp.workprec(params.prec):
        for a, b in samples:
            try:
                out = f(a, b, with_bound=True)
            except TypeError:
                out = (f(a, b), 0)
            except PoleError:
                skipped += 1
                continue
            val, bd = out
            try:
                tv = target(a, b)
            except PoleError:
                skipped += 1
                continue
            if tv == 0:
                skipped += 1
                continue
            res.append(abs(val / tv - 1))
            bound = max(bound, mpmath.mpf(bd))
    if not res:
        raise ValueError("all samples degenerate")
    info = dict(info or {})
    if skipped:
        info["skipped_samples"] = skipped
    return RelationReport.build(suite, params, res, mpmath.mpf(threshold), bound,
                                tm.elapsed, notes, info)
