"""Verification reports and their on-disk format.

A report file is JSON Lines: a header record ``{"schema": ..., "version": ...}``
followed by one record per suite, sorted by suite name.  Numbers are written
as short decimal strings so that reruns with the same configuration produce
byte-identical files.  Wall times are only written when explicitly requested.
"""

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

SCHEMA = "ellwn-report"
SCHEMA_VERSION = 1


class Timer:
    def __enter__(self):
        self._t0 = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._t0
        return False


def fmt(x, digits=6):
    if x is None:
        return None
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return mpmath.nstr(mpmath.mpmathify(x), digits, min_fixed=0, max_fixed=0)


def _info_value(v):
    if isinstance(v, (str, bool, int, list)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    return fmt(v)


def params_dict(params):
    return {"q": str(params.q), "r": str(params.r), "c": params.c, "N": params.N, "prec": params.prec}


@dataclass
class RelationReport:
    suite: str
    params: dict
    residuals: list
    max_residual: object
    threshold: object
    truncation_bound: object
    passed: bool
    wall_time: float = 0.0
    notes: str = ""
    info: dict = field(default_factory=dict)

    @classmethod
    def build(cls, suite, params, residuals, threshold, truncation_bound=0,
              wall_time=0.0, notes="", info=None, require=True):
        residuals = [mpmath.mpf(abs(x)) for x in residuals]
        if not residuals:
            raise ValueError(f"{suite}: no samples evaluated")
        mx = max(residuals)
        tb = mpmath.mpf(truncation_bound)
        threshold = mpmath.mpf(threshold)
        ok = bool(require) and mx < threshold and tb < threshold / 10
        return cls(suite, params_dict(params) if not isinstance(params, dict) else params,
                   residuals, mx, threshold, tb, ok, wall_time, notes, dict(info or {}))

    def to_record(self, timings=False):
        rec = {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "max_residual": fmt(self.max_residual),
            "threshold": fmt(self.threshold, 3),
            "truncation_bound": fmt(self.truncation_bound, 3),
            "samples": len(self.residuals),
            "residuals": [fmt(x, 3) for x in self.residuals],
            "notes": self.notes,
            "info": {k: _info_value(v) for k, v in sorted(self.info.items())},
        }
        if timings:
            rec["wall_time"] = round(self.wall_time, 3)
        return rec

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.suite:<28} max_residual={fmt(self.max_residual, 3):>10} "
                f"threshold={fmt(self.threshold, 2)} samples={len(self.residuals)}")


def dumps(reports, timings=False):
    lines = [json.dumps({"schema": SCHEMA, "version": SCHEMA_VERSION}, sort_keys=True)]
    for rep in sorted(reports, key=lambda r: r.suite):
        lines.append(json.dumps(rep.to_record(timings), sort_keys=True))
    return "\n".join(lines) + "\n"


def loads(text):
    lines = [json.loads(l) for l in text.splitlines() if l.strip()]
    if not lines or lines[0].get("schema") != SCHEMA:
        raise ValueError("not an ellwn report file")
    if lines[0].get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report version {lines[0].get('version')}")
    return {rec["suite"]: rec for rec in lines[1:]}
