"""Acceptance criteria 1-10 at the contract tolerances.

Each criterion prints one ``PASS``/``FAIL`` line.  Run directly
(``python tests/test_acceptance.py``) or under pytest.
"""

import io
import sys
import tempfile
import time
from pathlib import Path

import mpmath
import pytest
import sympy as sp
from mpmath import mp

from ellwn import cli, currents, fusion, rmatrix
from ellwn.modes import ModeAlgebra
from ellwn.qspecial import QParams
from ellwn.suites import specials_contour, specials_identities

M, PREC, SAMPLES, DRAWS = 24, 128, 100, 100


def _P(N):
    return QParams(N=N, prec=PREC)


def _rule(rep):
    """Pass rule: max residual below threshold and truncation bound below threshold/10."""
    return bool(rep.passed and rep.max_residual < rep.threshold
                and rep.truncation_bound < rep.threshold / 10)


def _name(rep):
    return f"{rep.suite}[N={rep.params['N']}]"


def _summary(reps):
    worst = max(reps, key=lambda r: r.max_residual / r.threshold)
    return f"{len(reps)} suites, worst {_name(worst)} max_residual={mpmath.nstr(worst.max_residual, 3)}"


def _failed(reps):
    return [_name(r) for r in reps if not _rule(r)]


# ------------------------------------------------------------------ criteria

def criterion_1():
    t0 = time.perf_counter()
    reps = [specials_identities(_P(2)), specials_contour(_P(2))]
    dt = time.perf_counter() - t0
    ok = not _failed(reps) and dt < 5
    return ok, f"{_summary(reps)}; {dt:.1f}s (limit 5s)"


def _exact_B(N, m):
    q = sp.Rational(2, 5)
    qn = (q**m - q**-m) / (q - 1 / q)
    A, rhs = sp.zeros(N, N), sp.zeros(N, N - 1)
    for j in range(1, N):
        A[j - 1, j - 1], A[j - 1, j] = -1, 1
        rhs[j - 1, j - 1] = m / qn * q ** ((N - j) * m)
    for j in range(1, N + 1):
        A[N - 1, j - 1] = q ** (2 * j * m)
    return A.LUsolve(rhs)


def criterion_2():
    t0 = time.perf_counter()
    reps, worst = [], mpmath.mpf(0)
    for N in (2, 3, 4):
        alg = ModeAlgebra(_P(N))
        reps.append(alg.consistency_check())
        with mp.workprec(PREC):
            for m in [k for k in range(-12, 13) if k]:
                S, ref = alg.solve_B_from_b(m), _exact_B(N, m)
                for i in range(N):
                    for k in range(N - 1):
                        e = ref[i, k]
                        val = mpmath.mpf(e.p) / e.q
                        worst = max(worst, abs(S[i, k] - val) / max(1, abs(val)))
    dt = time.perf_counter() - t0
    ok = not _failed(reps) and worst < mpmath.mpf("1e-25") and dt < 5
    return ok, f"{_summary(reps)}; B/b elimination diff {mpmath.nstr(worst, 3)}; {dt:.1f}s (limit 5s)"


def _exchange_reports(N):
    P = _P(N)
    reps = []
    for i in range(1, N):
        for j in range(1, N):
            reps.append(currents.verify_EE(P, i, j, samples=SAMPLES))
            reps.append(currents.verify_FF(P, i, j, samples=SAMPLES))
    for j1 in range(1, N + 1):
        for j2 in range(j1, N + 1):
            reps.append(currents.verify_KK(P, j1, j2, samples=SAMPLES))
        for j2 in range(1, N):
            reps.append(currents.verify_KE(P, j1, j2, samples=SAMPLES))
            reps.append(currents.verify_KF(P, j1, j2, samples=SAMPLES))
    return reps


def criterion_3():
    t0 = time.perf_counter()
    reps = _exchange_reports(2) + _exchange_reports(3)
    dt = time.perf_counter() - t0
    enough = all(len(r.residuals) >= SAMPLES for r in reps)
    ok = not _failed(reps) and enough and dt < 120
    return ok, f"{_summary(reps)}; failed={_failed(reps)}; {dt:.1f}s (limit 120s)"


def criterion_4():
    reps = [currents.verify_H_decomposition(_P(N), j, order=M) for N in (2, 3) for j in range(1, N)]
    return not _failed(reps), f"{_summary(reps)} (|m| <= {M})"


def criterion_5():
    reps = [currents.verify_EF_delta(_P(N), i, j, order=M)
            for N in (2, 3) for i in range(1, N) for j in range(1, N)]
    poles = {_name(r): r.info["poles_EF"] for r in reps}
    return not _failed(reps), f"{_summary(reps)}; poles {poles}"


def criterion_6():
    reps = [currents.verify_psi_exchange(_P(N), samples=SAMPLES) for N in (2, 3)]
    return not _failed(reps), f"{_summary(reps)}; failed={_failed(reps)}"


def criterion_7():
    t0 = time.perf_counter()
    reps = []
    for N in (2, 3):
        P = _P(N)
        reps.append(rmatrix.check_weight_conservation(P))
        reps.append(rmatrix.check_initial_condition(P))
        reps.append(rmatrix.check_dybe(P, draws=DRAWS, seed=0))
    dt = time.perf_counter() - t0
    counted = all(len(r.residuals) >= DRAWS for r in reps if r.suite == "rmat.dybe")
    ok = not _failed(reps) and counted and dt < 30
    return ok, f"{_summary(reps)}; {dt:.1f}s (limit 30s)"


def criterion_8():
    P = _P(3)
    reps = [fusion.verify_Lambda_exchange(P, samples=SAMPLES)]
    reps += [fusion.verify_TT_exchange(P, n, m, samples=SAMPLES) for n, m in ((1, 1), (2, 1), (2, 2))]
    reps.append(fusion.verify_smatrix(P))
    reps += [fusion.verify_TN_nontrivial(_P(N)) for N in (2, 3)]
    return not _failed(reps), _summary(reps)


def criterion_9():
    reps = [fusion.verify_Cn(_P(N)) for N in (2, 3)]
    return not _failed(reps), f"{_summary(reps)}; C_0 - g_N and C_n != 0 for n <= N"


def criterion_10():
    argv = ["run", "--suite", "qs.identities,cur.EE.12,rmat.dybe,wn.tt.21", "--N", "3",
            "--samples", "12", "--draws", "5", "--seed", "7"]
    with tempfile.TemporaryDirectory() as d:
        paths = [Path(d) / "a.jsonl", Path(d) / "b.jsonl"]
        cli.main(argv + ["--out", str(paths[0])], out=io.StringIO())
        cli.main(argv + ["--out", str(paths[1]), "--workers", "2"], out=io.StringIO())
        a, b = (p.read_bytes() for p in paths)
    return a == b and len(a) > 0, f"report bytes identical: {a == b} ({len(a)} bytes)"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _line(k, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k, capsys):
    ok, detail = CRITERIA[k - 1]()
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    status = 0
    for k, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        print(_line(k, ok, detail), flush=True)
        status |= not ok
    sys.exit(status)
