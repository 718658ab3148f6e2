"""Dynamical R-matrix of face type and its consistency checks.

Matrices act on ``C^N ⊗ C^N`` (or three copies) and are stored sparsely as
``{(row, col): value}`` with basis index ``(a, b) -> a*N + b`` (0-based).
"""

from dataclasses import dataclass
from itertools import product

import mpmath
import numpy as np
from mpmath import mp

from .qspecial import PoleError, bracket, rho_plus
from .report import RelationReport, Timer

SHIFT_CONVENTIONS = ("plus", "minus")


def s_partial(s, j, l):
    """``s_{j,l} = s_j + ... + s_{l-1}`` (1-based, ``j < l``)."""
    return mpmath.fsum(s[m - 1] for m in range(j, l))


@dataclass
class DynRMatrix:
    """``N^2 x N^2`` sparse matrix with the spectral and dynamical arguments it was built at."""

    N: int
    u: object
    s: tuple
    entries: dict

    def index(self, a, b):
        return a * self.N + b

    def to_matrix(self):
        n = self.N ** 2
        M = mpmath.zeros(n, n)
        for (i, k), val in self.entries.items():
            M[i, k] = val
        return M

    def nonzero_mask(self):
        return {key for key, val in self.entries.items() if val != 0}

    def scaled(self, c):
        return DynRMatrix(self.N, self.u, self.s, {k: c * x for k, x in self.entries.items()})


def _entries(u, s, params, star=False, memo=None):
    """Entries of ``R̄(u, s)`` from the brackets ``[ ]`` (or ``[ ]*``)."""
    N = params.N
    if len(s) != N - 1:
        raise ValueError(f"expected {N - 1} dynamical parameters, got {len(s)}")
    memo = {} if memo is None else memo

    def br(x):
        if x not in memo:
            memo[x] = bracket(x, params, star=star)
        return memo[x]

    with mp.workprec(params.prec):
        u = mpmath.mpmathify(u)
        s = tuple(mpmath.mpmathify(x) for x in s)
        one, bu, bu1 = br(1), br(u), br(u + 1)
        if bu1 == 0:
            raise PoleError("[u+1] = 0")
        ent = {}
        idx = lambda a, b: a * N + b  # noqa: E731
        for j in range(N):
            ent[(idx(j, j), idx(j, j))] = mpmath.mpf(1)
        for j, l in ((j, l) for j in range(1, N + 1) for l in range(j + 1, N + 1)):
            sjl = s_partial(s, j, l)
            bs = br(sjl)
            if bs == 0:
                raise PoleError(f"[s_{j}{l}] = 0")
            a, b = j - 1, l - 1
            # b E_jj⊗E_ll, b̄ E_ll⊗E_jj
            ent[(idx(a, b), idx(a, b))] = br(sjl + 1) * br(sjl - 1) * bu / (bs ** 2 * bu1)
            ent[(idx(b, a), idx(b, a))] = bu / bu1
            # c E_jl⊗E_lj, c̄ E_lj⊗E_jl
            ent[(idx(a, b), idx(b, a))] = one * br(sjl + u) / (bs * bu1)
            ent[(idx(b, a), idx(a, b))] = one * br(sjl - u) / (bs * bu1)
        return ent


def build_Rbar(u, s, params):
    return DynRMatrix(params.N, u, tuple(s), _entries(u, s, params))


def build_Rplus(u, s, params):
    """``R⁺(u, s) = ρ⁺(u) R̄(u, s)``."""
    with mp.workprec(params.prec):
        return build_Rbar(u, s, params).scaled(rho_plus(u, params))


def build_Rstar(u, s, params):
    """``R⁺*(u, s)``: every bracket and ``ρ⁺`` taken with ``r -> r*``."""
    with mp.workprec(params.prec):
        R = DynRMatrix(params.N, u, tuple(s), _entries(u, s, params, star=True))
        return R.scaled(rho_plus(u, params, star=True))


def permutation(N):
    return {(a * N + b, b * N + a): mpmath.mpf(1) for a in range(N) for b in range(N)}


def allowed_mask(N):
    """Positions permitted by weight conservation: ``e_a⊗e_b -> e_a⊗e_b`` or ``e_b⊗e_a``."""
    out = set()
    for a, b in product(range(N), repeat=2):
        out.add((a * N + b, a * N + b))
        out.add((b * N + a, a * N + b))
    return out


# ------------------------------------------------------------------ three-site

def _shift(s, a, sign):
    """``s + sign * h`` for the weight of basis vector ``e_a`` (0-based).

    ``s_{j,l}`` moves by ``δ_{a,j} - δ_{a,l}``, i.e. ``s_j`` by ``δ_{a,j} - δ_{a,j+1}``.
    """
    out = list(s)
    for j in range(len(s)):
        out[j] = s[j] + sign * (int(a == j) - int(a == j + 1))
    return tuple(out)


class _Site3:
    """Sparse operators on ``(C^N)^{⊗3}`` assembled from two-site blocks."""

    def __init__(self, N):
        self.N = N

    def embed(self, block_of, pair):
        """Operator ``R_{pair}`` whose block may depend on the spectator basis index.

        ``block_of(c)`` returns the two-site entries for spectator state ``c``.
        """
        N = self.N
        spectator = ({0, 1, 2} - set(pair)).pop()
        cache = {}
        op = {}
        for idx in product(range(N), repeat=3):
            c = idx[spectator]
            if c not in cache:
                cache[c] = _by_col(block_of(c), N)
            col2 = idx[pair[0]] * N + idx[pair[1]]
            for row2, val in cache[c].get(col2, ()):
                out = list(idx)
                out[pair[0]], out[pair[1]] = divmod(row2, N)
                op.setdefault(_flat(idx, N), []).append((_flat(out, N), val))
        return op


def _by_col(entries, N):
    cols = {}
    for (row, col), val in entries.items():
        cols.setdefault(col, []).append((row, val))
    return cols


def _flat(idx, N):
    return (idx[0] * N + idx[1]) * N + idx[2]


def _compose(*ops):
    """Dense-in-columns product ``ops[0] ops[1] ...`` as ``{col: {row: val}}``."""
    result = None
    for op in reversed(ops):
        if result is None:
            result = {col: {row: val for row, val in outs} for col, outs in op.items()}
            continue
        new = {}
        for col, vec in result.items():
            acc = {}
            for mid, val in vec.items():
                for row, w in op.get(mid, ()):
                    acc[row] = acc.get(row, 0) + w * val
            new[col] = acc
        result = new
    return result


def dybe_residual(u1, u2, u3, s, params, convention="plus"):
    """Relative residual of the dynamical Yang-Baxter equation.

    ``R12(u12, s+h3) R13(u13, s) R23(u23, s+h1) - R23(u23, s) R13(u13, s+h2) R12(u12, s)``;
    ``convention="minus"`` replaces ``+h`` by ``-h``.
    """
    if convention not in SHIFT_CONVENTIONS:
        raise ValueError(f"unknown shift convention {convention!r}")
    sign = 1 if convention == "plus" else -1
    N = params.N
    S = _Site3(N)
    with mp.workprec(params.prec):
        u12, u13, u23 = u1 - u2, u1 - u3, u2 - u3
        memo, brackets = {}, {}

        def R(u, ss):
            key = (u, ss)
            if key not in memo:
                memo[key] = _entries(u, ss, params, memo=brackets)
            return memo[key]

        def fixed(u):
            return lambda c: R(u, tuple(s))

        def shifted(u):
            return lambda c: R(u, _shift(s, c, sign))

        lhs = _compose(S.embed(shifted(u12), (0, 1)), S.embed(fixed(u13), (0, 2)),
                       S.embed(shifted(u23), (1, 2)))
        rhs = _compose(S.embed(fixed(u23), (1, 2)), S.embed(shifted(u13), (0, 2)),
                       S.embed(fixed(u12), (0, 1)))
        diff = mpmath.mpf(0)
        scale = mpmath.mpf(0)
        for col in set(lhs) | set(rhs):
            a, b = lhs.get(col, {}), rhs.get(col, {})
            for row in set(a) | set(b):
                diff = max(diff, abs(a.get(row, 0) - b.get(row, 0)))
                scale = max(scale, abs(a.get(row, 0)), abs(b.get(row, 0)))
        return diff / scale


def _draws(n, N, seed):
    """Seeded, independently spawned draws ``(u1, u2, u3, s)``."""
    children = np.random.SeedSequence(seed).spawn(n)
    for child in children:
        g = np.random.default_rng(child)
        us = g.uniform(-0.9, 0.9, 3) + 1j * g.uniform(-0.4, 0.4, 3)
        s = g.uniform(0.3, 2.7, N - 1) + 1j * g.uniform(-0.4, 0.4, N - 1)
        yield tuple(mpmath.mpc(complex(x)) for x in us), tuple(mpmath.mpc(complex(x)) for x in s)


def check_dybe(params, draws=100, seed=0, convention="plus", threshold="1e-12"):
    res, skipped = [], 0
    with Timer() as tm:
        for (u1, u2, u3), s in _draws(draws, params.N, seed):
            try:
                res.append(dybe_residual(u1, u2, u3, s, params, convention))
            except PoleError:
                skipped += 1
    info = {"convention": convention, "draws": draws, "seed": seed}
    if skipped:
        info["skipped_draws"] = skipped
    return RelationReport.build("rmat.dybe", params, res, threshold, 0, tm.elapsed,
                                notes="face-type dynamical Yang-Baxter equation for R-bar",
                                info=info)


def check_weight_conservation(params, draws=10, seed=0):
    """Nonzero pattern equals the permitted mask and has ``N(2N-1)`` positions."""
    N = params.N
    mask = allowed_mask(N)
    res = []
    with Timer() as tm:
        for (u, _, _), s in _draws(draws, N, seed):
            R = build_Rbar(u, s, params)
            outside = [abs(x) for k, x in R.entries.items() if k not in mask]
            res.append(max(outside, default=mpmath.mpf(0)))
            count_ok = len(R.nonzero_mask()) == N * (2 * N - 1)
            res.append(mpmath.mpf(0) if count_ok else mpmath.mpf(1))
    return RelationReport.build("rmat.weights", params, res, "1e-30", 0, tm.elapsed,
                                notes="entries outside the weight-conserving mask vanish",
                                info={"pattern_count": N * (2 * N - 1)})


def check_initial_condition(params, draws=10, seed=0):
    """``R̄(0, s)`` equals the permutation operator."""
    N = params.N
    P = permutation(N)
    res = []
    with Timer() as tm:
        for _, s in _draws(draws, N, seed):
            R = build_Rbar(0, s, params)
            keys = set(R.entries) | set(P)
            res.append(max(abs(R.entries.get(k, 0) - P.get(k, 0)) for k in keys))
    return RelationReport.build("rmat.init", params, res, "1e-25", 0, tm.elapsed,
                                notes="R-bar(0, s) is the permutation", info={})

