"""Multi-base q-Pochhammer symbols, theta functions and the structure functions
of the elliptic algebra.

Every function takes a :class:`QParams` pack.  ``q`` and ``r`` are stored as
exact :class:`fractions.Fraction` values so that exponent bookkeeping in the
OPE engine stays exact; they are converted to mpmath numbers at the working
precision on use.
"""

from dataclasses import dataclass
import functools
from fractions import Fraction

import mpmath
from mpmath import mp

from .series import DEFAULT_PREC


class ParameterError(ValueError):
    pass


class PoleError(ArithmeticError):
    """Evaluation hit a zero of a denominator (or of a required non-zero value)."""


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


@dataclass(frozen=True)
class QParams:
    q: Fraction = Fraction(2, 5)
    r: Fraction = Fraction(63, 10)
    c: int = 1
    N: int = 2
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        object.__setattr__(self, "q", _frac(self.q))
        object.__setattr__(self, "r", _frac(self.r))
        object.__setattr__(self, "c", int(self.c))
        object.__setattr__(self, "N", int(self.N))
        if not 0 < self.q < 1:
            raise ParameterError("q must lie in (0, 1)")
        if self.N < 2:
            raise ParameterError("N must be an integer >= 2")
        if self.c < 1:
            raise ParameterError("c must be a positive integer")
        if not self.r > self.c:
            raise ParameterError("r must exceed the level c")

    @property
    def rstar(self):
        return self.r - self.c

    def replace(self, **kw):
        d = dict(q=self.q, r=self.r, c=self.c, N=self.N, prec=self.prec)
        d.update(kw)
        return QParams(**d)

    # numeric views, evaluated at the current working precision
    @property
    def qv(self):
        return mpmath.mpf(self.q.numerator) / self.q.denominator

    @property
    def logq(self):
        return mpmath.log(self.qv)

    def qpow(self, e):
        """``q**e`` for real or complex ``e``."""
        if isinstance(e, Fraction):
            e = mpmath.mpf(e.numerator) / e.denominator
        return mpmath.exp(e * self.logq)

    @property
    def p(self):
        return self.qpow(2 * self.r)

    @property
    def pstar(self):
        return self.qpow(2 * self.rstar)

    def zpow(self, v, e):
        """``z**e`` with ``z = q**(2v)``, defined through ``v`` (no branch cut)."""
        return self.qpow(2 * mpmath.mpmathify(v) * _num(e))


def _num(e):
    if isinstance(e, Fraction):
        return mpmath.mpf(e.numerator) / e.denominator
    return e


def qnum(n, params):
    """The q-number ``[n]_q``."""
    with mp.workprec(params.prec):
        q = params.qv
        n = _num(n)
        return (mpmath.power(q, n) - mpmath.power(q, -n)) / (q - 1 / q)


# ---------------------------------------------------------------------------
# q-Pochhammer symbols


def _multipliers_by_degree(bases, cutoff):
    """All products ``prod t_i**n_i`` with total degree <= cutoff."""
    k = len(bases)
    res = []

    def rec(i, deg, val):
        if i == k:
            res.append(val)
            return
        v = val
        for n in range(cutoff - deg + 1):
            rec(i + 1, deg + n, v)
            v = v * bases[i]

    rec(0, 0, mpmath.mpf(1))
    return res


def _multipliers_by_size(bases, threshold):
    """All products ``prod t_i**n_i`` that are >= threshold (bases in (0,1))."""
    k = len(bases)
    res = []

    def rec(i, val):
        if i == k:
            res.append(val)
            return
        v = val
        while v >= threshold:
            rec(i + 1, v)
            v = v * bases[i]

    rec(0, mpmath.mpf(1))
    return res


def _check_bases(bases):
    bases = [mpmath.mpf(b) if not isinstance(b, mpmath.mpc) else b for b in bases]
    for b in bases:
        if isinstance(b, mpmath.mpc) or not 0 < b < 1:
            raise ParameterError(f"Pochhammer base {b} outside (0, 1)")
    return bases


def tail_bound_by_size(bases, zabs, threshold, theta=Fraction(1, 10)):
    """Upper bound on |log| of the omitted factors when every kept multiplier is >= threshold.

    Omitted multipliers ``m`` satisfy ``m < threshold`` so ``m <= threshold**(1-θ) m**θ``
    and their sum is at most ``threshold**(1-θ) / prod(1 - t**θ)``.
    """
    th = _num(theta)
    s = mpmath.power(threshold, 1 - th)
    for t in bases:
        s /= 1 - mpmath.power(t, th)
    x = zabs * s
    if x >= mpmath.mpf(1) / 2:
        return mpmath.inf
    return 2 * x


def tail_bound_by_degree(bases, zabs, cutoff):
    """Bound on |log| of the omitted factors of degree > cutoff."""
    tmax = max(bases)
    s = mpmath.power(mpmath.sqrt(tmax), cutoff + 1)
    for t in bases:
        s /= 1 - mpmath.sqrt(t)
    x = zabs * s
    if x >= mpmath.mpf(1) / 2:
        return mpmath.inf
    return 2 * x


def pochhammer(z, bases, cutoff=None, with_bound=False):
    """``(z; t_1, ..., t_k)_inf`` at the current working precision.

    ``cutoff`` is the total degree in the bases; by default every factor whose
    correction ``|z| prod t**n`` exceeds ``2**-(prec+8)`` is kept.  With
    ``with_bound`` the pair ``(value, bound)`` is returned where ``bound``
    bounds the relative truncation error.
    """
    bases = _check_bases(bases)
    z = mpmath.mpmathify(z)
    if not bases:
        val = 1 - z
        return (val, mpmath.mpf(0)) if with_bound else val
    zabs = abs(z)
    if cutoff is None:
        if zabs == 0:
            return (mpmath.mpf(1), mpmath.mpf(0)) if with_bound else mpmath.mpf(1)
        threshold = mpmath.ldexp(1, -mp.prec - 8) / zabs
        mults = _multipliers_by_size(bases, threshold)
        bound = tail_bound_by_size(bases, zabs, threshold) if with_bound else None
    else:
        mults = _multipliers_by_degree(bases, int(cutoff))
        bound = tail_bound_by_degree(bases, zabs, int(cutoff)) if with_bound else None
    val = mpmath.mpf(1)
    for m in mults:
        val *= 1 - z * m
    if with_bound:
        return val, (mpmath.exp(bound) - 1 if bound != mpmath.inf else bound)
    return val


def theta(z, p):
    """``Θ_p(z) = (z;p)(p/z;p)(p;p)``."""
    z = mpmath.mpmathify(z)
    if z == 0:
        raise PoleError("theta function at z = 0")
    return pochhammer(z, [p]) * pochhammer(p / z, [p]) * pochhammer(p, [p])


def curly(z, params, star=False):
    """``{z} = (z; p, q^{2N})`` (``star`` uses p*)."""
    base = params.pstar if star else params.p
    return pochhammer(z, [base, params.qpow(2 * params.N)])


def bracket(v, params, star=False):
    """``[v]`` (or ``[v]*`` with ``star``) with ``z = q^{2v}``."""
    with mp.workprec(params.prec):
        v = mpmath.mpmathify(v)
        rr = params.rstar if star else params.r
        p = params.qpow(2 * rr)
        pref = params.qpow(v * v / _num(rr) - v)
        return pref * theta(params.qpow(2 * v), p) / _bracket_norm(params, star, mp.prec)


@functools.lru_cache(maxsize=64)
def _bracket_norm(params, star, prec):
    with mp.workprec(prec):
        rr = params.rstar if star else params.r
        p = params.qpow(2 * rr)
        return pochhammer(p, [p]) ** 3


def bracket_star(v, params):
    return bracket(v, params, star=True)


def contour_norm_check(params, npoints=2048, radius=mpmath.mpf("0.5"), star=False):
    """Trapezoid evaluation of ``∮ dz/(2πi z) 1/[-v]`` on a circle around v = 0.

    Returns ``|integral - target|`` where the target is 1 for ``[v]`` and
    ``lim_{v->0} [v]/[v]*`` (which is 1) for the starred bracket.
    """
    with mp.workprec(params.prec):
        radius = mpmath.mpf(radius)
        # dz/z = 2 log q dv
        acc = mpmath.mpc(0)
        for k in range(npoints):
            t = 2 * mpmath.pi * k / npoints
            v = radius * mpmath.expj(t)
            dv = 1j * v  # dv/dt
            den = bracket(-v, params, star=star)
            if den == 0:
                raise PoleError("contour passes through a zero of [-v]")
            acc += dv / den
        integral = acc * (2 * mpmath.pi / npoints) * 2 * params.logq / (2j * mpmath.pi)
        if star:
            eps = mpmath.mpf(10) ** (-(mp.dps // 2))
            target = bracket(eps, params) / bracket(eps, params, star=True)
        else:
            target = 1
        return abs(integral - target)


# ---------------------------------------------------------------------------
# constants and structure functions


def kappa(params):
    with mp.workprec(params.prec):
        p, ps, q2 = params.p, params.pstar, params.qpow(2)
        return (pochhammer(p, [p]) * pochhammer(ps * q2, [ps])
                / (pochhammer(ps, [ps]) * pochhammer(p * q2, [p])))


def rho_plus(v, params, star=False):
    """``ρ⁺(v)``; ``star`` gives ``ρ⁺*(v) = ρ⁺(v)|_{r -> r*}``."""
    with mp.workprec(params.prec):
        N = params.N
        rr = params.rstar if star else params.r
        p = params.qpow(2 * rr)
        z = params.qpow(2 * mpmath.mpmathify(v))
        qq = params.qpow
        t = [p, qq(2 * N)]
        num = (pochhammer(p * qq(2) * z, t) * pochhammer(p * qq(2 * N - 2) * z, t)
               * pochhammer(1 / z, t) * pochhammer(qq(2 * N) / z, t))
        den = (pochhammer(p * z, t) * pochhammer(p * qq(2 * N) * z, t)
               * pochhammer(qq(2) / z, t) * pochhammer(qq(2 * N - 2) / z, t))
        if den == 0:
            raise PoleError("rho_plus at a pole")
        mono = qq(Fraction(N - 1, N)) * params.zpow(v, Fraction(N - 1, N) / rr)
        return mono * num / den


def rho(v, params):
    with mp.workprec(params.prec):
        return rho_plus(v, params, star=True) / rho_plus(v, params)


def mu_star(v, params):
    """``μ*(v)`` of the type-II vertex operator exchange (p -> p* throughout)."""
    with mp.workprec(params.prec):
        N = params.N
        ps = params.pstar
        qq = params.qpow
        z = qq(2 * mpmath.mpmathify(v))
        t = [ps, qq(2 * N)]
        num = (pochhammer(ps * qq(2 * N - 2) * z, t) * pochhammer(qq(2) * z, t)
               * pochhammer(ps / z, t) * pochhammer(qq(2 * N) / z, t))
        den = (pochhammer(ps * z, t) * pochhammer(qq(2 * N) * z, t)
               * pochhammer(ps * qq(2 * N - 2) / z, t) * pochhammer(qq(2) / z, t))
        if den == 0:
            raise PoleError("mu_star at a pole")
        e = (1 / params.rstar - 1) * Fraction(N - 1, N)
        return params.zpow(v, e) * num / den


def phi_N(z, params):
    """Bound-state exchange function built from ``Θ_{q^{2N}}``."""
    with mp.workprec(params.prec):
        z = mpmath.mpmathify(z)
        qq = params.qpow
        t = qq(2 * params.N)
        ps = params.pstar
        num = theta(qq(2) * z, t) * theta(ps * z, t) * theta(z / (ps * qq(2)), t)
        den = theta(z / qq(2), t) * theta(z / ps, t) * theta(ps * qq(2) * z, t)
        if den == 0:
            raise PoleError("phi_N at a pole")
        return num / den


def S_nm(z, n, m, params):
    """``S_{n,m}(z) = prod_k prod_l φ_N(z q^{r*(n-m+2(l-k))})``."""
    with mp.workprec(params.prec):
        acc = mpmath.mpc(1)
        rs = params.rstar
        for k in range(1, n + 1):
            for l in range(1, m + 1):
                acc *= phi_N(z * params.qpow(rs * (n - m + 2 * (l - k))), params)
        return acc


def _sqrt_minus_one_pow(n):
    return mpmath.mpc(0, 1) ** n


def g_N(params):
    with mp.workprec(params.prec):
        N, qq, ps, p = params.N, params.qpow, params.pstar, params.p
        rs = params.rstar
        t2 = [qq(2 * N), ps]
        pre = _sqrt_minus_one_pow(N) * qq(Fraction(N + 1, 2) / rs + Fraction(N * N - 1, 2))
        pre *= (pochhammer(ps * qq(2), [ps]) / pochhammer(ps, [ps])) ** N
        return pre * (pochhammer(p * qq(2 * N), t2) * pochhammer(qq(2 * N - 2), t2)
                      / (pochhammer(qq(2 * N) * ps, t2) * pochhammer(qq(2 * N), t2)))


def g_N_prime(params):
    with mp.workprec(params.prec):
        N, qq, ps, p = params.N, params.qpow, params.pstar, params.p
        rs = params.rstar
        t2 = [qq(2 * N), ps]
        pre = _sqrt_minus_one_pow(-N) * qq(-Fraction(N + 1, 2) / rs - Fraction(N * N - 1, 2))
        pre /= pochhammer(ps, [ps]) ** (2 * N - 3) * pochhammer(qq(-2), [ps]) ** N
        return pre * (pochhammer(p, t2) * pochhammer(qq(-2), t2)
                      / (pochhammer(ps, t2) * pochhammer(qq(2 * N), t2)))


def C_n(n, params):
    """Fusion constant in front of the fused current of level ``n``."""
    with mp.workprec(params.prec):
        N, qq, ps, p = params.N, params.qpow, params.pstar, params.p
        rs = params.rstar
        t2 = [qq(2 * N), ps]
        psn = params.qpow(-2 * rs * n)
        pre = _sqrt_minus_one_pow(N) * qq(Fraction(N + 1, 2) / rs + Fraction(N * N - 1, 2))
        pre *= (pochhammer(ps * qq(2), [ps]) / pochhammer(ps, [ps])) ** N
        pre *= ((1 - p * qq(-N)) / (1 - qq(-N))) ** n
        num = pochhammer(p * qq(2 * N) * psn, t2) * pochhammer(qq(2 * N - 2) * psn, t2)
        den = pochhammer(qq(2 * N) * psn, t2) * pochhammer(qq(2 * N) * ps * psn, t2)
        if den == 0:
            raise PoleError(f"C_{n} at a pole")
        return pre * num / den
