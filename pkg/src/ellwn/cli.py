"""Command line: ``ellwn run``, ``ellwn eval`` and ``ellwn baseline``.

Exit status: 0 when every selected suite passes, 1 when any fails, 2 on usage
or configuration errors.
"""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields

import mpmath
from mpmath import mp

from . import report, suites
from .fusion import eval_Cn
from .qspecial import bracket, g_N, phi_N, rho_plus, theta

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DRIFT_FACTOR = 10


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ config

def _coerce(name, typ, raw):
    try:
        if typ in (bool, "bool"):
            low = str(raw).strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if typ in (int, "int"):
            return int(raw)
        return str(raw).strip()
    except ValueError:
        raise UsageError(f"{name}: cannot parse {raw!r}") from None


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment."""
    types = suites.RunConfig.field_types()
    out = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"config: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, types[key], val)
    return out


def make_config(args):
    base = read_config(args.config) if getattr(args, "config", None) else {}
    types = suites.RunConfig.field_types()
    for f in fields(suites.RunConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            base[f.name] = _coerce(f.name, types[f.name], val)
    try:
        return suites.RunConfig(**base).validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------------ run

def _run_one(task, params):
    return suites.run_task(task, params)


def run_suites(cfg):
    tasks = suites.select(suites.plan(cfg), cfg.suite)
    if not tasks:
        raise UsageError(f"suite: no suite matches {cfg.suite!r}")
    params = cfg.params()
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            reps = list(ex.map(_run_one, tasks, [params] * len(tasks)))
    else:
        reps = [_run_one(t, params) for t in tasks]
    return sorted(reps, key=lambda r: r.suite)


def cmd_run(args, out=sys.stdout):
    cfg = make_config(args)
    reps = run_suites(cfg)
    for rep in reps:
        print(rep.line(), file=out)
    text = report.dumps(reps, timings=cfg.timings)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    status = EXIT_OK if all(r.passed for r in reps) else EXIT_FAIL
    if cfg.baseline:
        status = max(status, _diff_files(cfg.baseline, text, out, current_is_text=True))
    return status


# ------------------------------------------------------------------ eval

def _numbers(fn, raw):
    try:
        return [mpmath.mpmathify(x) for x in raw]
    except (ValueError, TypeError):
        raise UsageError(f"{fn}: arguments must be numbers, got {raw}") from None


EVAL_ARITY = {"theta": 1, "bracket": 1, "rho_plus": 1, "phiN": 1, "C_n": 1, "g_N": 0}


def evaluate(fn, raw, params):
    """Value of a named special function as a string."""
    if fn not in EVAL_ARITY:
        raise UsageError(f"unknown function {fn!r}; choose from {sorted(EVAL_ARITY)}")
    if len(raw) != EVAL_ARITY[fn]:
        raise UsageError(f"{fn}: expected {EVAL_ARITY[fn]} argument(s), got {len(raw)}")
    with mp.workprec(params.prec):
        vals = _numbers(fn, raw)
        if fn == "theta":
            val = theta(vals[0], params.p)
        elif fn == "bracket":
            val = bracket(vals[0], params)
        elif fn == "rho_plus":
            val = rho_plus(vals[0], params)
        elif fn == "phiN":
            val = phi_N(vals[0], params)
        elif fn == "C_n":
            n = vals[0]
            if n != int(n):
                raise UsageError("C_n: n must be an integer")
            try:
                val = eval_Cn(params, int(n))
            except ValueError as exc:
                raise UsageError(f"C_n: {exc}") from None
        else:
            val = g_N(params)
        digits = max(15, int(params.prec * 0.30103) - 2)
        return mpmath.nstr(val, digits)


def cmd_eval(args, out=sys.stdout):
    cfg = make_config(args)
    print(evaluate(args.fn, args.args, cfg.params()), file=out)
    return EXIT_OK


# ------------------------------------------------------------------ baseline

def compare_reports(old, new):
    """Differences between two loaded reports as ``(kind, suite, message)`` tuples.

    ``kind`` is ``missing``, ``new``, ``status`` or ``drift``; drift means the
    maximum residual grew by more than ``DRIFT_FACTOR``.
    """
    out = []
    for suite in sorted(set(old) | set(new)):
        if suite not in new:
            out.append(("missing", suite, "suite absent from current report"))
            continue
        if suite not in old:
            out.append(("new", suite, "suite absent from baseline"))
            continue
        a, b = old[suite], new[suite]
        if a["passed"] != b["passed"]:
            out.append(("status", suite, f"passed {a['passed']} -> {b['passed']}"))
        ra, rb = mpmath.mpf(a["max_residual"]), mpmath.mpf(b["max_residual"])
        if rb > DRIFT_FACTOR * ra and rb > 0:
            out.append(("drift", suite, f"max_residual {a['max_residual']} -> {b['max_residual']}"))
    return out


def _load(path_or_text, is_text=False):
    if is_text:
        return report.loads(path_or_text)
    try:
        with open(path_or_text, encoding="utf-8") as fh:
            return report.loads(fh.read())
    except OSError as exc:
        raise UsageError(f"baseline: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"baseline: {path_or_text}: {exc}") from None


def _diff_files(old_path, new, out, current_is_text=False):
    diffs = compare_reports(_load(old_path), _load(new, current_is_text))
    for kind, suite, msg in diffs:
        print(f"{kind.upper():8} {suite}: {msg}", file=out)
    bad = [d for d in diffs if d[0] in ("missing", "drift", "status")]
    if not diffs:
        print("no differences", file=out)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_baseline(args, out=sys.stdout):
    return _diff_files(args.old, args.new, out)


# ------------------------------------------------------------------ parser

def _add_common(p):
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--N", type=int)
    p.add_argument("--q", help="nome, e.g. 2/5")
    p.add_argument("--r", help="elliptic parameter, e.g. 63/10")
    p.add_argument("--c", type=int, help="level")
    p.add_argument("--prec", type=int, help="working precision in bits")


def build_parser():
    ap = argparse.ArgumentParser(prog="ellwn", description="Elliptic algebra relation checks")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run verification suites")
    _add_common(run)
    run.add_argument("--suite", help="comma-separated glob(s) over suite names")
    run.add_argument("--order", type=int, help="oscillator truncation order")
    run.add_argument("--samples", type=int)
    run.add_argument("--draws", type=int, help="random draws for the R-matrix suites")
    run.add_argument("--seed", type=int)
    run.add_argument("--convention", choices=("plus", "minus"), help="dynamical shift sign")
    run.add_argument("--workers", type=int)
    run.add_argument("--out", help="write the report here")
    run.add_argument("--baseline", help="compare against this earlier report")
    run.add_argument("--timings", action="store_const", const="true", help="record wall times")

    ev = sub.add_parser("eval", help="evaluate a special function")
    _add_common(ev)
    ev.add_argument("fn")
    ev.add_argument("args", nargs="*")

    bl = sub.add_parser("baseline", help="compare two report files")
    bl.add_argument("old")
    bl.add_argument("new")
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = {"run": cmd_run, "eval": cmd_eval, "baseline": cmd_baseline}[args.command]
    try:
        return handler(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
