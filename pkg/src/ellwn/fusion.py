"""Deformed W_N currents: Λ_j, fused currents T̃_n and their S-matrices."""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import mpmath
from mpmath import mp

from .catalog import CurrentCatalog
from .currents import _poles_near_unit_circle
from .laurent import mono
from .modes import ModeAlgebra
from .ope import (compare_structure_function, contraction_product, exchange_ratio,
                  sample_points)
from .qspecial import C_n, S_nm, g_N, phi_N
from .report import RelationReport, Timer

THRESHOLD = "1e-20"


def build_Lambda(params, j):
    return CurrentCatalog(params).Lambda(j)


@dataclass
class FusedCurrent:
    """``T̃_n(z)`` as its list of ordered, normal-ordered Λ-ladders."""

    n: int
    terms: list          # VertexDescriptor per j_1 < ... < j_n
    indices: list        # the tuples (j_1, ..., j_n)
    unit: tuple          # ladder step as an exponent pair of q

    def __len__(self):
        return len(self.terms)


def ladder(params, js, unit=None, name=None):
    """``:Λ_{j_1}(z u^{n-1}) Λ_{j_2}(z u^{n-3}) ... Λ_{j_n}(z u^{-(n-1)}):``.

    ``unit`` is the exponent pair of ``u`` (default ``q^{r*}``).
    """
    C = CurrentCatalog(params)
    unit = unit or (-params.c, 1)
    n = len(js)
    acc = None
    for i, j in enumerate(js):
        k = n - 1 - 2 * i
        # q^{2s} = u^k
        L = C.shifted(C.Lambda(j), (k * unit[0], k * unit[1]))
        acc = L if acc is None else C.product(acc, L, "")
    acc.name = name or "T[" + ",".join(map(str, js)) + "]"
    return acc


def build_Ttilde(params, n, unit=None):
    N = params.N
    if not 1 <= n <= N:
        raise ValueError(f"fusion level {n} outside 1..{N}")
    idx = list(combinations(range(1, N + 1), n))
    terms = [ladder(params, js, unit) for js in idx]
    assert len(terms) == comb(N, n)
    return FusedCurrent(n, terms, idx, unit or (-params.c, 1))


def verify_Lambda_exchange(params, samples=100, seed=0):
    """Every ``Λ_j(z) Λ_k(w)`` exchanges with ``φ_N(w/z)``; the zero-mode factor is constant."""
    C = CurrentCatalog(params)
    N = params.N
    res, bound, info = [], mpmath.mpf(0), {}
    pairs = [(j, k) for j in range(1, N + 1) for k in range(1, N + 1)]
    per = max(1, -(-samples // len(pairs)))
    const = True
    with Timer() as tm:
        for j, k in pairs:
            f = exchange_ratio(C.Lambda(j), C.Lambda(k))
            const = const and not f.zero.depends_on_positions()
            rep = compare_structure_function(
                f, lambda a, b: phi_N(params.qpow(2 * (b - a)), params),
                sample_points(per, params, seed=seed + 31 * j + k), params)
            res.extend(rep.residuals)
            bound = max(bound, rep.truncation_bound)
    info["zero_mode_constant"] = const
    info["pairs"] = len(pairs)
    return RelationReport.build("wn.lambda", params, res, THRESHOLD, bound, tm.elapsed,
                                notes="S_11 from the Lambda exchange against phi_N(w/z)",
                                info=info, require=const)


def verify_TT_exchange(params, n, m, samples=100, seed=0):
    """Each ladder pair of ``T̃_n(z) T̃_m(w)`` exchanges with ``S_{n,m}(w/z)``."""
    Tn, Tm = build_Ttilde(params, n), build_Ttilde(params, m)
    pairs = [(X, Y) for X in Tn.terms for Y in Tm.terms]
    per = max(2, -(-samples // len(pairs)))
    res, bound = [], mpmath.mpf(0)
    with Timer() as tm:
        for i, (X, Y) in enumerate(pairs):
            rep = compare_structure_function(
                exchange_ratio(X, Y),
                lambda a, b: S_nm(params.qpow(2 * (b - a)), n, m, params),
                sample_points(per, params, seed=seed + i), params)
            res.extend(rep.residuals)
            bound = max(bound, rep.truncation_bound)
    return RelationReport.build(f"wn.tt.{n}{m}", params, res, THRESHOLD, bound, tm.elapsed,
                                notes="term-by-term ladder exchange against the double product of phi_N",
                                info={"term_pairs": len(pairs)})


def lambda_level_S(params, n, m, v_1, v_2):
    """``S_{n,m}`` as the product of shifted Λ-level exchange factors."""
    C = CurrentCatalog(params)
    f = exchange_ratio(C.Lambda(1), C.Lambda(1))
    rs = mpmath.mpf(params.rstar.numerator) / params.rstar.denominator
    acc = mpmath.mpc(1)
    for k in range(1, n + 1):
        for l in range(1, m + 1):
            # z -> z q^{(n+1-2k) r*},  w -> w q^{(m+1-2l) r*}
            acc *= f(v_1 + (n + 1 - 2 * k) * rs / 2, v_2 + (m + 1 - 2 * l) * rs / 2)
    return acc


def verify_smatrix(params, pairs=((1, 1), (2, 1), (2, 2)), samples=30, seed=0):
    """Three readings of ``S_{n,m}`` agree and ``S_{n,m}(z) S_{m,n}(1/z) = 1``."""
    res = []
    info = {}
    with Timer() as tm, mp.workprec(params.prec):
        for n, m in pairs:
            if max(n, m) > params.N:
                continue
            T = exchange_ratio(build_Ttilde(params, n).terms[0], build_Ttilde(params, m).terms[0])
            worst = mpmath.mpf(0)
            for a, b in sample_points(samples, params, seed=seed):
                x = params.qpow(2 * (b - a))
                printed = S_nm(x, n, m, params)
                res.append(abs(lambda_level_S(params, n, m, a, b) / printed - 1))
                res.append(abs(T(a, b) / printed - 1))
                u = abs(printed * S_nm(1 / x, m, n, params) - 1)
                res.append(u)
                worst = max(worst, u)
            info[f"unitarity_{n}{m}"] = worst
    return RelationReport.build("wn.smatrix", params, res, "1e-18", 0, tm.elapsed,
                                notes="printed double product vs Lambda-level vs ladder exchange; unitarity",
                                info=info)


def _central_residual(params, desc, order):
    """``max_{m,k} |Σ_j c_m(j) [B_m^j, B_{-m}^k]| / Σ_j |...|``: zero iff the oscillator part is central."""
    A = ModeAlgebra(params)
    N = params.N
    worst = mpmath.mpf(0)
    with mp.workprec(params.prec):
        for m in range(1, order + 1):
            for sgn in (1, -1):
                mm = sgn * m
                for k in range(1, N + 1):
                    terms = [desc.osc.coefficient(j, mm) * A.B_commutator(j, k, mm, -mm)
                             for j in range(1, N + 1)]
                    scale = mpmath.fsum(abs(t) for t in terms)
                    if scale:
                        worst = max(worst, abs(mpmath.fsum(terms)) / scale)
    return worst


def _word_central(word):
    """True when the word's exponent commutes with every zero-mode generator."""
    A = word.algebra
    tot = word.total()
    for kind in ("P", "h", "Q", "eta", "alpha"):
        top = A.N - 1 if kind == "alpha" else A.N
        for j in range(1, top + 1):
            if A.bracket(tot, {A.gen(kind, j): 1}) != 0:
                return False
    return True


def verify_TN_nontrivial(params, order=6):
    """``T̃_N`` built with the ``q^{r*}`` ladder is not a scalar."""
    N = params.N
    TN = build_Ttilde(params, N).terms[0]
    info = {}
    with Timer() as tm:
        osc = _central_residual(params, TN, order)
        word_identity = TN.zero.is_identity()
        # informational: the same ladder with steps of q^{∓1} (shift unit p_W = q^{-2})
        for tag, unit in (("pW_ladder_down", (-1, 0)), ("pW_ladder_up", (1, 0))):
            alt = ladder(params, tuple(range(1, N + 1)), unit=unit, name="T_N^W")
            info[tag] = _central_residual(params, alt, order)
        info["osc_commutator_max"] = osc
        info["zero_word_identity"] = word_identity
        info["zero_word_central"] = _word_central(TN.zero)
        info["zero_word_generators"] = sorted(f"{g.kind}{g.index}" for g, _ in TN.zero.canonical_items())
    nontrivial = osc > mpmath.mpf("1e-10") and not word_identity
    # residual is 1 when T_N is trivial, 0 otherwise
    return RelationReport.build("wn.tn_nontrivial", params, [mpmath.mpf(0 if nontrivial else 1)],
                                "0.5", 0, tm.elapsed,
                                notes="oscillator part of T_N fails to commute with some B_{-m}^k",
                                info=info, require=nontrivial)


def eval_Cn(params, n):
    if not 0 <= n <= params.N:
        raise ValueError(f"n={n} outside 0..{params.N}")
    return C_n(n, params)


def fusion_leading_check(params):
    """Pole of ``<Ψ_1(z1) Ψ*_N(z2)>`` at ``z2/z1 = q^{-N}`` and nothing else near ``|x| = 1``."""
    C = CurrentCatalog(params)
    pf = contraction_product(C.Psi_1(), C.Psi_star_N())
    poles = _poles_near_unit_circle(pf, params)
    target = {(-params.N, 0): 1}
    got = {(int(a), int(b)) if a.denominator == b.denominator == 1 else (a, b): o
           for (a, b), o in poles.items()}
    return got == target, poles, pf.pole_order(mono(-params.N, 0))


def verify_Cn(params):
    """``C_0 = g_N``, ``C_n`` finite and nonzero for ``n <= N``, leading pole location."""
    res, info = [], {}
    with Timer() as tm, mp.workprec(params.prec):
        c0, g = C_n(0, params), g_N(params)
        res.append(abs(c0 - g) / abs(g))
        ok = True
        for n in range(params.N + 1):
            val = C_n(n, params)
            finite = mpmath.isfinite(val.real) and mpmath.isfinite(val.imag) and val != 0
            ok = ok and bool(finite)
            info[f"C_{n}"] = mpmath.nstr(val, 20)
        pole_ok, poles, order = fusion_leading_check(params)
        info["psi_pole"] = sorted(f"q^({a}+{b}r)" for a, b in poles)
        info["psi_pole_order"] = order
        ok = ok and pole_ok
    return RelationReport.build("wn.cn", params, res, "1e-18", 0, tm.elapsed,
                                notes="C_0 against g_N; C_n finite and nonzero; n=0 pole location",
                                info=info, require=ok)

