"""Report documents, side tables and the command implementations behind the CLI.

Reports are JSON with ``schema_version``; exact rationals are stored as
decimal-digit ``num``/``den`` strings so that arbitrary precision survives
serialization.  Wall-clock timings live under a separate ``timings`` key and
are excluded from :func:`report_body`, which is what determinism checks compare.
"""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import mpmath
import numpy as np

from . import bound as bnd
from . import ifs
from .oracle import compare_with_pipeline
from .pruning import prune_fixed_point
from .render import render, write_image
from .sweep import EvalMode, WordTable, aggregate, build_table, expansion_certificate
from .verify import verify_extrema

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERTIFICATE = 3
EXIT_ORACLE = 4
EXIT_VERIFY = 5


@dataclass
class RunConfig:
    n: int = 13
    eval_mode: EvalMode = field(default_factory=EvalMode)
    arithmetic: str = "exact"
    workers: int = 1
    seed: int = 0
    out: Optional[str] = None
    per_word_table: Optional[str] = None
    retained_words: Optional[str] = None
    trace: Optional[str] = None
    verify_words: int = 1000
    verify_points: int = 1000

    def __post_init__(self):
        if isinstance(self.eval_mode, str):
            self.eval_mode = EvalMode.parse(self.eval_mode)
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.arithmetic not in ("exact", "float"):
            raise ValueError("mode must be 'exact' or 'float'")

    def echo(self) -> dict:
        return {"n": self.n, "eval": str(self.eval_mode), "mode": self.arithmetic,
                "workers": self.workers, "seed": self.seed}


# ---------------------------------------------------------------------------
# value encoding

def _sig(x, digits=15) -> str:
    return mpmath.nstr(x, digits) if not isinstance(x, float) else f"{x:.{digits}g}"


def encode_value(x) -> dict:
    """JSON form of a Fraction, an mpmath number or a float."""
    if isinstance(x, (int, np.integer)):
        x = Fraction(int(x))
    if isinstance(x, Fraction):
        with mpmath.workdps(50):
            dec = mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, 15)
        return {"num": str(x.numerator), "den": str(x.denominator), "decimal": dec}
    if isinstance(x, float):
        return {"decimal": f"{x:.15g}", "float": True}
    with mpmath.workdps(50):
        return {"decimal": mpmath.nstr(x, 15), "decimal_40": mpmath.nstr(x, 40), "algebraic": True}


def decode_value(d: dict):
    if "num" in d:
        return Fraction(int(d["num"]), int(d["den"]))
    if "decimal_40" in d:
        return mpmath.mpf(d["decimal_40"])
    return float(d["decimal"])


def encode_bound(r: bnd.BoundReport) -> dict:
    return {
        "exp2a": encode_value(r.exp2a),
        "exp2b": encode_value(r.exp2b),
        "word_count": r.word_count,
        "a": f"{r.a:.15g}",
        "b": f"{r.b:.15g}",
        "c": f"{r.c:.15g}",
        "s0": f"{r.s0:.15g}",
        "s0_40": r.s0_hp,
        "flags": {"b_positive": r.b_positive, "nontrivial": r.nontrivial,
                  "in_range": r.in_range, "expanding": r.expanding, "valid": r.valid},
    }


def _word(w) -> str:
    return ifs.word_string(w)


def sweep_section(result) -> dict:
    return {
        "n": result.n,
        "eval": str(result.mode),
        "arithmetic": result.arithmetic,
        "word_count": result.word_count,
        "exp2a": encode_value(result.exp2a),
        "exp2b": encode_value(result.exp2b),
        "expansion_sq": encode_value(result.expansion_sq),
        "argmax_rmax": _word(result.argmax_rmax),
        "argmin_qmin": _word(result.argmin_qmin),
        "argmax_qmax": _word(result.argmax_qmax),
    }


def certificate_section(result) -> dict:
    e = result.expansion_sq
    with mpmath.workdps(50):
        ev = mpmath.mpf(e.numerator) / e.denominator if isinstance(e, Fraction) else mpmath.mpf(e)
        factor = mpmath.nstr(1 / mpmath.sqrt(ev), 15)
    return {"expansion_sq": encode_value(e), "threshold": encode_value(Fraction(1, 3)),
            "smallest_expansion_factor": factor, "passed": expansion_certificate(result)}


def report_body(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timings"}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(doc: dict, path) -> None:
    Path(path).write_text(dumps(doc))


# ---------------------------------------------------------------------------
# side tables

def _reduce(num, den):
    if num.dtype == object or den.dtype == object:
        g = np.frompyfunc(math.gcd, 2, 1)(num, den)
    else:
        g = np.gcd(num, den)
    return num // g, den // g


def _vertex_pick(table: WordTable, larger: bool):
    """Exact (num, den) of the extreme vertex value of q, per row."""
    vq = table.vertex_q
    k = np.argmax(vq, axis=1) if larger else np.argmin(vq, axis=1)
    rows = np.arange(len(table))
    Q = table.Q[rows, k].copy()
    s = table.s[rows, k].copy()
    srt = np.sort(vq, axis=1)
    close = (np.abs(srt[:, 1] - srt[:, 2]) <= 1e-12 * srt[:, 2]) if larger else \
        (np.abs(srt[:, 1] - srt[:, 0]) <= 1e-12 * srt[:, 0])
    for i in np.flatnonzero(close):
        vals = [Fraction(int(table.Q[i, j]), 12 * int(table.s[i, j]) ** 4) for j in range(3)]
        j = max(range(3), key=vals.__getitem__) if larger else min(range(3), key=vals.__getitem__)
        Q[i], s[i] = table.Q[i, j], table.s[i, j]
    return _reduce(Q, 12 * s ** 4)


def write_per_word_csv(table: WordTable, path) -> None:
    """Per-word table; exact columns are blank where the extremum is edge/interior-attained."""
    rn, rd = _reduce(table.vertex_r12.max(axis=1), np.full(len(table), 12, dtype=np.int64))
    qn_num, qn_den = _vertex_pick(table, larger=False)
    qx_num, qx_den = _vertex_pick(table, larger=True)
    r_at_v = table.vertex_r12.max(axis=1) / 12.0 >= table.extra_rmax
    qn_at_v = table.vertex_q.min(axis=1) <= table.extra_qmin
    qx_at_v = table.vertex_q.max(axis=1) >= table.extra_qmax
    rmax, qmin, qmax = table.rmax, table.qmin, table.qmax
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["word", "rmax_num", "rmax_den", "qmin_num", "qmin_den", "qmax_num", "qmax_den",
                     "rmax", "qmin", "qmax", "rmax_at", "qmin_at", "qmax_at"])
        for i in range(len(table)):
            def ex(ok, num, den):
                return (str(num[i]), str(den[i])) if ok[i] else ("", "")
            wr.writerow([_word(table.word(i)), *ex(r_at_v, rn, rd), *ex(qn_at_v, qn_num, qn_den),
                         *ex(qx_at_v, qx_num, qx_den), repr(float(rmax[i])), repr(float(qmin[i])),
                         repr(float(qmax[i])), "vertex" if r_at_v[i] else "edge",
                         "vertex" if qn_at_v[i] else "edge", "vertex" if qx_at_v[i] else "edge"])


def write_trace_csv(trace: list, path) -> None:
    cols = ["round", "size_in", "size_out", "i_star", "i_starstar", "a_prime", "a", "b", "c", "s0"]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(cols)
        for t in trace:
            row = dict(t, i_star=_word(t["i_star"]), i_starstar=_word(t["i_starstar"]))
            wr.writerow([row[c] if isinstance(row[c], (int, str)) else f"{row[c]:.15g}" for c in cols])


def write_retained(words, path) -> None:
    with open(path, "w") as fh:
        for w in words:
            fh.write(_word(w) + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_sweep(config: RunConfig, table: Optional[WordTable] = None):
    """Full sweep and the unpruned bound.  Returns ``(document, exit_code)``."""
    t0 = time.perf_counter()
    if table is None:
        table = build_table(config.n, config.eval_mode, config.workers)
    t1 = time.perf_counter()
    result = aggregate(table, config.arithmetic)
    full = bnd.bound_from_sweep(result)
    t2 = time.perf_counter()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "sweep",
        "config": config.echo(),
        "sweep": sweep_section(result),
        "expansion_certificate": certificate_section(result),
        "bound_full": encode_bound(full),
        "timings": {"table_s": t1 - t0, "aggregate_s": t2 - t1},
    }
    if config.per_word_table:
        write_per_word_csv(table, config.per_word_table)
    if config.out:
        write_json(doc, config.out)
    ok = doc["expansion_certificate"]["passed"] and full.b_positive
    return doc, EXIT_OK if ok else EXIT_CERTIFICATE


def cmd_prune(config: RunConfig, table: Optional[WordTable] = None):
    """Sweep followed by the pruning fixed point."""
    t0 = time.perf_counter()
    if table is None:
        table = build_table(config.n, config.eval_mode, config.workers)
    inner = RunConfig(**{**config.__dict__, "out": None})
    doc, code = cmd_sweep(inner, table)
    t1 = time.perf_counter()
    res = prune_fixed_point(table, config.arithmetic)
    t2 = time.perf_counter()
    pruned = res.report
    full_s0 = float(doc["bound_full"]["s0"])
    doc["command"] = "prune"
    doc["bound_pruned"] = encode_bound(pruned)
    doc["prune"] = {
        "rounds": res.rounds,
        "retained": int(len(res.rows)),
        "improved": pruned.s0 >= full_s0,
        "trace": [dict(t, i_star=_word(t["i_star"]), i_starstar=_word(t["i_starstar"]),
                       **{k: f"{t[k]:.15g}" for k in ("a_prime", "a", "b", "c", "s0")})
                  for t in res.trace],
    }
    doc["timings"] = dict(doc["timings"], total_s=t2 - t0, prune_s=t2 - t1)
    if config.retained_words:
        write_retained(res.words(), config.retained_words)
    if config.trace:
        write_trace_csv(res.trace, config.trace)
    if config.out:
        write_json(doc, config.out)
    if code == EXIT_OK and pruned.expanding is False:
        code = EXIT_CERTIFICATE
    return doc, code


def cmd_verify(config: RunConfig, table: Optional[WordTable] = None, extrema=None):
    """Interior-sampling check of the evaluation mode's extrema."""
    if table is None:
        table = build_table(config.n, config.eval_mode, config.workers)
    rep = verify_extrema(table, config.verify_words, config.verify_points, config.seed,
                         extrema=extrema)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "config": dict(config.echo(), words=config.verify_words, points=config.verify_points),
        "verify": {
            "eval": rep.mode, "words": rep.words, "points": rep.points, "tol": rep.tol,
            "worst_rmax_excess": f"{rep.worst_rmax:.6g}",
            "worst_qmin_deficit": f"{rep.worst_qmin:.6g}",
            "worst_qmax_excess": f"{rep.worst_qmax:.6g}",
            "violations": rep.violations,
            "worst_words": [{"word": w, "margin": f"{m:.6g}"} for w, m in rep.examples],
            "vacuous": rep.words == 0,
            "passed": rep.passed,
        },
    }
    if config.out:
        write_json(doc, config.out)
    return doc, EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_oracle(config: RunConfig, reverse: bool = False):
    """Compare the pipeline against the finite-difference oracle for small ``n``."""
    if config.n > 6:
        raise ValueError("the oracle command is limited to n <= 6")
    table = build_table(config.n, config.eval_mode, 1)
    cmp = compare_with_pipeline(table, reverse=reverse)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "oracle",
        "config": config.echo(),
        "oracle": {
            "checked": cmp.checked,
            "worst_relative_error": f"{cmp.worst_rel:.6g}",
            "mismatches": [{"word": _word(w), "quantity": q, "pipeline": p, "oracle": o}
                           for w, q, p, o in cmp.mismatches],
            "passed": cmp.passed,
        },
    }
    if config.out:
        write_json(doc, config.out)
    return doc, EXIT_OK if cmp.passed else EXIT_ORACLE


def cmd_render(depth: int, width: int, out) -> Path:
    return write_image(render(depth, width), out)
