import csv
import json
import math
from fractions import Fraction

import pytest

from rauzy import cli
from rauzy.report import (EXIT_CONFIG, EXIT_OK, RunConfig, cmd_prune, cmd_sweep, decode_value, dumps,
                          report_body)


def run(argv, capsys=None):
    return cli.main([str(a) for a in argv])


def test_sweep_cli_writes_report(tmp_path):
    out = tmp_path / "r.json"
    table = tmp_path / "w.csv"
    assert run(["sweep", "--n", 5, "--out", out, "--per-word-table", table]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1 and doc["command"] == "sweep"
    assert doc["sweep"]["word_count"] == 240
    with open(table) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 240
    assert list(rows[0])[:7] == ["word", "rmax_num", "rmax_den", "qmin_num", "qmin_den",
                                 "qmax_num", "qmax_den"]
    for r in rows:
        for k in ("rmax", "qmin", "qmax"):
            if r[f"{k}_at"] == "vertex":
                exact = Fraction(int(r[f"{k}_num"]), int(r[f"{k}_den"]))
                assert float(exact) == pytest.approx(float(r[k]), rel=1e-12)


def test_per_word_exact_columns_match_single_word_path(tmp_path):
    from rauzy.sweep import EvalMode, word_stats
    table = tmp_path / "w.csv"
    run(["sweep", "--n", 4, "--eval", "vertices", "--per-word-table", table, "--out", tmp_path / "r.json"])
    with open(table) as fh:
        for r in csv.DictReader(fh):
            st = word_stats(tuple(int(c) for c in r["word"]), EvalMode("vertices"))
            assert Fraction(int(r["qmin_num"]), int(r["qmin_den"])) == st.qmin
            assert Fraction(int(r["qmax_num"]), int(r["qmax_den"])) == st.qmax
            assert Fraction(int(r["rmax_num"]), int(r["rmax_den"])) == st.rmax


def _decimals_recomputable(section):
    a, b = decode_value(section["exp2a"]), decode_value(section["exp2b"])
    assert float(section["exp2a"]["decimal"]) == pytest.approx(float(a), rel=1e-12)
    assert float(section["a"]) == pytest.approx(0.5 * math.log(a), rel=1e-12)
    assert float(section["b"]) == pytest.approx(0.5 * math.log(b), rel=1e-12)
    assert float(section["c"]) == pytest.approx(math.log(section["word_count"]), rel=1e-12)
    s0 = 1 + (math.log(section["word_count"]) - 0.5 * math.log(a)) / (0.5 * math.log(b))
    assert float(section["s0"]) == pytest.approx(s0, rel=1e-12)


def test_report_decimals_recomputable(tmp_path):
    doc, code = cmd_prune(RunConfig(n=9))
    assert code == EXIT_OK
    _decimals_recomputable(doc["bound_full"])
    _decimals_recomputable(doc["bound_pruned"])


def test_prune_side_files(tmp_path):
    words, trace = tmp_path / "keep.txt", tmp_path / "trace.csv"
    assert run(["prune", "--n", 7, "--out", tmp_path / "p.json", "--retained-words", words,
                "--trace", trace]) == EXIT_OK
    doc = json.loads((tmp_path / "p.json").read_text())
    kept = words.read_text().split()
    assert len(kept) == doc["prune"]["retained"] == doc["bound_pruned"]["word_count"]
    assert all(len(w) == 7 and set(w) <= set("123") for w in kept)
    with open(trace) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == doc["prune"]["rounds"]
    assert list(rows[0]) == ["round", "size_in", "size_out", "i_star", "i_starstar", "a_prime",
                             "a", "b", "c", "s0"]


def test_report_body_is_deterministic():
    a, _ = cmd_prune(RunConfig(n=8))
    b, _ = cmd_prune(RunConfig(n=8, workers=2))
    a["config"].pop("workers"), b["config"].pop("workers")
    assert dumps(report_body(a)) == dumps(report_body(b))
    assert "timings" in a and "timings" not in report_body(a)


def test_stdout_when_no_out(capsys):
    assert run(["sweep", "--n", 3]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["sweep"]["n"] == 3


@pytest.mark.parametrize("argv", [["sweep", "--n", 1], ["sweep", "--eval", "bogus"],
                                  ["sweep", "--workers", 0], ["oracle", "--n", 9]])
def test_config_errors(argv, capsys):
    assert run(argv) == EXIT_CONFIG
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["sweep", "--mode", "interval"])
    assert exc.value.code == EXIT_CONFIG


def test_render_cli(tmp_path):
    out = tmp_path / "g.pgm"
    assert run(["render", "--depth", 2, "--width", 128, "--out", out]) == EXIT_OK
    assert out.read_bytes().startswith(b"P5")


def test_verify_and_oracle_cli(tmp_path):
    assert run(["verify", "--n", 6, "--words", 50, "--samples", 50, "--out", tmp_path / "v.json"]) == EXIT_OK
    assert run(["oracle", "--n", 2, "--out", tmp_path / "o.json"]) == EXIT_OK
    assert json.loads((tmp_path / "o.json").read_text())["oracle"]["checked"] == 6


def test_samples_mode_uses_seed():
    from rauzy.sweep import EvalMode, build_table
    t1 = build_table(4, EvalMode.parse("samples:20:1"))
    t2 = build_table(4, EvalMode.parse("samples:20:2"))
    assert not (t1.extra_qmin == t2.extra_qmin).all()
    doc, _ = cmd_sweep(RunConfig(n=4, eval_mode="samples:20:1"))
    assert doc["sweep"]["eval"] == "samples:20:1"


def test_trivial_bound_is_flagged_not_fatal(capsys):
    assert run(["sweep", "--n", 3]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["bound_full"]["flags"]["nontrivial"] is False
