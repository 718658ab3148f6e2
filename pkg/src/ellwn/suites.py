"""Named verification suites and the registry the command line runs from."""

import fnmatch
from dataclasses import dataclass, fields

import mpmath
from mpmath import mp

from . import currents, fusion, rmatrix
from .modes import ModeAlgebra
from .qspecial import QParams, bracket, contour_norm_check, theta
from .report import RelationReport, Timer


@dataclass
class RunConfig:
    N: int = 2
    q: str = "2/5"
    r: str = "63/10"
    c: int = 1
    order: int = 24
    prec: int = 128
    samples: int = 100
    draws: int = 100
    seed: int = 0
    suite: str = "*"
    convention: str = "plus"
    workers: int = 1
    out: str = ""
    baseline: str = ""
    timings: bool = False

    def params(self):
        return QParams(q=self.q, r=self.r, c=self.c, N=self.N, prec=self.prec)

    def validate(self):
        """Raise ``ValueError`` naming the offending field."""
        for name, lo in (("N", 2), ("c", 1), ("order", 1), ("prec", 53), ("samples", 1),
                         ("draws", 1), ("workers", 1)):
            if getattr(self, name) < lo:
                raise ValueError(f"{name}: must be >= {lo}")
        if self.convention not in rmatrix.SHIFT_CONVENTIONS:
            raise ValueError(f"convention: expected one of {rmatrix.SHIFT_CONVENTIONS}")
        try:
            self.params()
        except ValueError as exc:
            raise ValueError(f"{str(exc).split()[0]}: {exc}") from None
        return self

    @classmethod
    def field_types(cls):
        return {f.name: f.type for f in fields(cls)}


# ------------------------------------------------------------------ specials

def specials_identities(params, samples=100, seed=0):
    """``[0] = 0``, ``[-v] = -[v]``, ``[v+r] = -[v]``, ``Θ_p(1) = 0``, ``Θ_p(pz) = -Θ_p(z)/z``."""
    res = []
    with Timer() as tm, mp.workprec(params.prec):
        r = mpmath.mpf(params.r.numerator) / params.r.denominator
        p = params.p
        res.append(abs(bracket(0, params)))
        res.append(abs(bracket(0, params, star=True)))
        res.append(abs(theta(1, p)))
        golden = (mpmath.sqrt(5) - 1) / 2
        for k in range(samples):
            t = mpmath.frac(golden * (k + 1) + mpmath.mpf(seed) / 7)
            v = mpmath.mpc(2 * t - 1, mpmath.mpf("0.3") * mpmath.sin(7 * t))
            b = bracket(v, params)
            scale = max(abs(b), mpmath.mpf(1))
            res.append(abs(bracket(-v, params) + b) / scale)
            res.append(abs(bracket(v + r, params) + b) / scale)
            z = params.qpow(2 * v)
            th = theta(z, p)
            res.append(abs(theta(p * z, p) + th / z) / max(abs(th / z), mpmath.mpf(1)))
    return RelationReport.build("qs.identities", params, res, "1e-25", 0, tm.elapsed,
                                notes="bracket parity, quasi-periodicity and theta zeros")


def specials_contour(params):
    with Timer() as tm:
        res = [contour_norm_check(params), contour_norm_check(params, star=True)]
    return RelationReport.build("qs.contour", params, res, "1e-10", 0, tm.elapsed,
                                notes="contour integral of 1/[-v] around v = 0 equals 1")


def modes_constraint(params):
    return ModeAlgebra(params).consistency_check()


# ------------------------------------------------------------------ registry

def _pairs(N, top_i, top_j):
    return [(i, j) for i in range(1, top_i + 1) for j in range(1, top_j + 1)]


def plan(cfg):
    """All concrete suites for a configuration as ``(name, runner, kwargs)``."""
    N = cfg.N
    out = [("qs.identities", "specials_identities", {"samples": cfg.samples, "seed": cfg.seed}),
           ("qs.contour", "specials_contour", {}),
           ("modes.constraint", "modes_constraint", {})]
    for i, j in _pairs(N, N - 1, N - 1):
        out.append((f"cur.EE.{i}{j}", "verify_EE", {"i": i, "j": j}))
        out.append((f"cur.FF.{i}{j}", "verify_FF", {"i": i, "j": j}))
        out.append((f"cur.EF.{i}{j}", "verify_EF_delta", {"i": i, "j": j, "order": cfg.order}))
    for j1, j2 in _pairs(N, N, N):
        if j1 <= j2:
            out.append((f"cur.KK.{j1}{j2}", "verify_KK", {"j1": j1, "j2": j2}))
    for j1, j2 in _pairs(N, N, N - 1):
        out.append((f"cur.KE.{j1}{j2}", "verify_KE", {"j1": j1, "j2": j2}))
        out.append((f"cur.KF.{j1}{j2}", "verify_KF", {"j1": j1, "j2": j2}))
    for j in range(1, N):
        out.append((f"cur.H.{j}", "verify_H_decomposition", {"j": j, "order": cfg.order}))
    out.append(("cur.psi", "verify_psi_exchange", {}))
    out += [("rmat.dybe", "check_dybe", {"draws": cfg.draws, "seed": cfg.seed,
                                          "convention": cfg.convention}),
            ("rmat.weights", "check_weight_conservation", {"seed": cfg.seed}),
            ("rmat.init", "check_initial_condition", {"seed": cfg.seed}),
            ("wn.lambda", "verify_Lambda_exchange", {}),
            ("wn.smatrix", "verify_smatrix", {"seed": cfg.seed}),
            ("wn.tn_nontrivial", "verify_TN_nontrivial", {}),
            ("wn.cn", "verify_Cn", {})]
    for n, m in ((1, 1), (2, 1), (2, 2)):
        if max(n, m) <= N:
            out.append((f"wn.tt.{n}{m}", "verify_TT_exchange", {"n": n, "m": m}))
    sampled = {"verify_EE", "verify_FF", "verify_KK", "verify_KE", "verify_KF",
               "verify_psi_exchange", "verify_Lambda_exchange", "verify_TT_exchange"}
    for name, runner, kw in out:
        if runner in sampled:
            kw.setdefault("samples", cfg.samples)
            kw.setdefault("seed", cfg.seed)
    return sorted(out)


RUNNERS = {
    "specials_identities": specials_identities,
    "specials_contour": specials_contour,
    "modes_constraint": modes_constraint,
    "verify_EE": currents.verify_EE,
    "verify_FF": currents.verify_FF,
    "verify_KK": currents.verify_KK,
    "verify_KE": currents.verify_KE,
    "verify_KF": currents.verify_KF,
    "verify_EF_delta": currents.verify_EF_delta,
    "verify_H_decomposition": currents.verify_H_decomposition,
    "verify_psi_exchange": currents.verify_psi_exchange,
    "check_dybe": rmatrix.check_dybe,
    "check_weight_conservation": rmatrix.check_weight_conservation,
    "check_initial_condition": rmatrix.check_initial_condition,
    "verify_Lambda_exchange": fusion.verify_Lambda_exchange,
    "verify_TT_exchange": fusion.verify_TT_exchange,
    "verify_smatrix": fusion.verify_smatrix,
    "verify_TN_nontrivial": fusion.verify_TN_nontrivial,
    "verify_Cn": fusion.verify_Cn,
}


def select(tasks, patterns):
    """Tasks whose name matches any comma-separated glob (a bare family name matches its members)."""
    pats = [p.strip() for p in (patterns or "*").split(",") if p.strip()] or ["*"]
    out = []
    for task in tasks:
        name = task[0]
        if any(fnmatch.fnmatchcase(name, p) or fnmatch.fnmatchcase(name, p + ".*") for p in pats):
            out.append(task)
    return out


def run_task(task, params):
    name, runner, kwargs = task
    rep = RUNNERS[runner](params, **kwargs)
    rep.suite = name
    return rep


def registry_names(N=3):
    return [t[0] for t in plan(RunConfig(N=N))]
