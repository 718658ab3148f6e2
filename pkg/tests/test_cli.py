import io
import json

import pytest

from ellwn import cli, report, suites

FAST = "qs.contour,rmat.init,rmat.weights"


def _run(argv):
    out = io.StringIO()
    return cli.main(argv, out=out), out.getvalue()


def test_run_is_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert _run(["run", "--suite", FAST, "--seed", "3", "--out", str(a)])[0] == 0
    assert _run(["run", "--suite", FAST, "--seed", "3", "--out", str(b), "--workers", "2"])[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_report_schema(tmp_path):
    path = tmp_path / "r.jsonl"
    _run(["run", "--suite", "rmat.init", "--out", str(path)])
    lines = [json.loads(l) for l in path.read_text().splitlines()]
    assert lines[0] == {"schema": report.SCHEMA, "version": report.SCHEMA_VERSION}
    rec = lines[1]
    assert rec["suite"] == "rmat.init" and rec["passed"] is True
    assert {"params", "max_residual", "threshold", "truncation_bound", "samples"} <= set(rec)
    assert "wall_time" not in rec


def test_exit_status_nonzero_on_failure():
    code, text = _run(["run", "--suite", "cur.psi", "--samples", "6"])
    assert code == 1 and text.startswith("FAIL cur.psi")
    code, _ = _run(["run", "--suite", "rmat.dybe", "--draws", "3", "--convention", "minus"])
    assert code == 1


def test_usage_errors(tmp_path, capsys):
    assert _run(["run", "--suite", "nope.*"])[0] == 2
    assert _run(["run", "--N", "1", "--suite", "qs.contour"])[0] == 2
    assert "N:" in capsys.readouterr().err
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("r = 1/2\n")
    assert _run(["run", "--config", str(cfg)])[0] == 2
    assert "r:" in capsys.readouterr().err
    cfg.write_text("colour = blue\n")
    assert _run(["run", "--config", str(cfg)])[0] == 2
    assert _run(["bogus"])[0] == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nN = 3\nsuite = rmat.init\nseed=4\n")
    out = tmp_path / "o.jsonl"
    assert _run(["run", "--config", str(cfg), "--N", "2", "--out", str(out)])[0] == 0
    rec = report.loads(out.read_text())["rmat.init"]
    assert rec["params"]["N"] == 2


@pytest.mark.parametrize("fn, args", [("theta", ["0.3"]), ("bracket", ["0.5"]), ("rho_plus", ["0.2"]),
                                      ("phiN", ["0.7"]), ("C_n", ["1"]), ("g_N", [])])
def test_eval_functions(fn, args):
    code, text = _run(["eval", fn, *args, "--N", "3"])
    assert code == 0 and text.strip()


def test_eval_values():
    assert _run(["eval", "bracket", "0"])[1].strip() == "0.0"
    code, _ = _run(["eval", "unknown", "1"])
    assert code == 2
    assert _run(["eval", "C_n", "5", "--N", "2"])[0] == 2
    assert _run(["eval", "theta"])[0] == 2


def _write(path, recs):
    path.write_text(report.dumps(recs))


def test_baseline_drift_and_missing(tmp_path):
    params = suites.RunConfig().params()
    base = [report.RelationReport.build("a", params, [1e-30], "1e-20"),
            report.RelationReport.build("b", params, [1e-30], "1e-20")]
    _write(tmp_path / "old.jsonl", base)
    same = [report.RelationReport.build("a", params, [5e-30], "1e-20"),
            report.RelationReport.build("b", params, [1e-30], "1e-20")]
    _write(tmp_path / "same.jsonl", same)
    code, text = _run(["baseline", str(tmp_path / "old.jsonl"), str(tmp_path / "same.jsonl")])
    assert code == 0 and "no differences" in text
    drift = [report.RelationReport.build("a", params, [1e-25], "1e-20")]
    _write(tmp_path / "new.jsonl", drift)
    code, text = _run(["baseline", str(tmp_path / "old.jsonl"), str(tmp_path / "new.jsonl")])
    assert code == 1
    assert "DRIFT    a" in text and "MISSING  b" in text


def test_run_with_baseline(tmp_path):
    old = tmp_path / "old.jsonl"
    _run(["run", "--suite", FAST, "--out", str(old)])
    code, text = _run(["run", "--suite", FAST, "--baseline", str(old)])
    assert code == 0 and "no differences" in text
    code, text = _run(["run", "--suite", "qs.contour", "--baseline", str(old)])
    assert code == 1 and "MISSING" in text


def test_registry_names_and_selection():
    names = suites.registry_names(3)
    assert names == sorted(names)
    for fam in ("cur.EE.12", "cur.H.2", "cur.psi", "rmat.dybe", "wn.tt.22", "wn.cn", "modes.constraint"):
        assert fam in names
    tasks = suites.plan(suites.RunConfig(N=3))
    assert [t[0] for t in suites.select(tasks, "cur.KK")] == ["cur.KK.11", "cur.KK.12", "cur.KK.13",
                                                             "cur.KK.22", "cur.KK.23", "cur.KK.33"]
