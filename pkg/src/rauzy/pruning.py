"""Iterated rank-and-threshold pruning of the branch words.

One round on a working set of words, with ``A = (max ||D g||^+)^2`` and
``B = (min ||(D g)^{-1}||^-)^2`` per word:

1. rank the words by ``A`` ascending (ranks start at 1);
2. pick ``i*`` maximizing ``log r+(i) - log sqrt(A_i)``; keep ``r+ <= r+(i*)``
   and set ``a' = log sqrt(A_{i*})``;
3. rank the kept words by ``B`` descending;
4. pick ``i**`` maximizing ``(log r-(i) - a') / log(1 / sqrt(B_i))``; keep
   ``r- <= r-(i**)``, so ``b = log(1/sqrt(B_{i**}))`` and ``c = log r-(i**)``.

Rounds repeat until the working set stops changing.  Sorting is done on
float keys with the word's lexicographic index as secondary key; the
entries whose floats lie within ``FLOAT_SLACK`` of a cut value are re-sorted
with high-precision values so that the cut itself is exact.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .bound import BoundReport, dimension_lower_bound
from .sweep import FLOAT_SLACK, HP_DPS, WordTable, _mpf, hp_less

SCORE_SLACK = 1e-9


def select_istar(A_sorted: np.ndarray, tie_break: str = "largest"):
    """Step 2 on values already sorted ascending.

    Returns ``(pos, a_prime)`` with ``pos`` the 0-based position of ``i*``; the
    kept set is ``A_sorted[:pos + 1]``.
    """
    A_sorted = np.asarray(A_sorted, dtype=float)
    if len(A_sorted) == 0:
        raise ValueError("empty working set")
    ranks = np.arange(1, len(A_sorted) + 1)
    score = np.log(ranks) - 0.5 * np.log(A_sorted)
    pos = _argmax(score, tie_break)
    return pos, 0.5 * float(np.log(A_sorted[pos]))


def select_istarstar(B_sorted: np.ndarray, a_prime: float, tie_break: str = "largest"):
    """Step 4 on values already sorted descending.

    Returns ``(pos, b, c)``; the kept set is ``B_sorted[:pos + 1]``.
    """
    B_sorted = np.asarray(B_sorted, dtype=float)
    if len(B_sorted) == 0:
        raise ValueError("empty working set")
    if np.any(B_sorted >= 1):
        raise ValueError("a word has B >= 1; the branch is not expanding and the score is undefined")
    ranks = np.arange(1, len(B_sorted) + 1)
    score = (np.log(ranks) - a_prime) / (-0.5 * np.log(B_sorted))
    pos = _argmax(score, tie_break)
    return pos, -0.5 * float(np.log(B_sorted[pos])), float(np.log(pos + 1))


def _argmax(score, tie_break):
    hits = np.flatnonzero(score == score.max())
    return int(hits[-1] if tie_break == "largest" else hits[0])


@dataclass
class PruneResult:
    table: WordTable
    rows: np.ndarray          # rows of ``table`` kept at the fixed point
    report: BoundReport
    rounds: int
    trace: list = field(default_factory=list)

    def words(self):
        for i in self.rows:
            yield self.table.word(int(i))


class _Pruner:
    def __init__(self, table: WordTable, exact: bool, tie_break: str, secondary: str):
        if tie_break not in ("largest", "smallest"):
            raise ValueError("tie_break must be 'largest' or 'smallest'")
        if secondary not in ("lex", "revlex"):
            raise ValueError("secondary must be 'lex' or 'revlex'")
        self.t = table
        self.exact = exact
        self.tie_break = tie_break
        self.A = table.rmax
        self.B = table.qmin / 2.0
        self.key2 = table.index if secondary == "lex" else -table.index
        self._hp = {}

    # high-precision values -------------------------------------------------
    def hpA(self, row):
        return self._stats(row).rmax

    def hpB(self, row):
        return self._stats(row).qmin / 2

    def _stats(self, row):
        row = int(row)
        if row not in self._hp:
            self._hp[row] = self.t.exact_stats(row)
        return self._hp[row]

    # sorting ---------------------------------------------------------------
    def _sorted(self, rows, vals, descending):
        key = -vals[rows] if descending else vals[rows]
        return rows[np.lexsort((self.key2[rows], key))]

    def _refine_block(self, order, vals, pos, hp, descending):
        """Exactly re-sort the near-tie block around ``pos``; return its bounds."""
        v = vals[order]
        ref = v[pos]
        lo = pos
        while lo > 0 and abs(v[lo - 1] - ref) <= FLOAT_SLACK * abs(ref):
            lo -= 1
        hi = pos + 1
        while hi < len(v) and abs(v[hi] - ref) <= FLOAT_SLACK * abs(ref):
            hi += 1
        if hi - lo > 1:
            block = list(order[lo:hi])
            key2 = self.key2

            def cmp(i, j):
                x, y = hp(i), hp(j)
                if descending:
                    x, y = y, x
                if hp_less(x, y):
                    return -1
                if hp_less(y, x):
                    return 1
                ki, kj = int(key2[i]), int(key2[j])
                return (ki > kj) - (ki < kj)

            block.sort(key=functools.cmp_to_key(cmp))
            order[lo:hi] = block
        return lo, hi

    def _pick(self, order, vals, score_fn, hp_score, hp, descending):
        """Maximize a rank score, resolving near-ties at high precision."""
        score = score_fn(vals[order])
        best = score.max()
        cands = np.flatnonzero(score >= best - SCORE_SLACK * abs(best))
        if not self.exact:
            return _argmax(score, self.tie_break)
        # the score grows with rank inside a near-tie block, so each candidate
        # block is represented by its last entry after exact re-sorting
        ends = set()
        for p in cands[::-1]:
            lo, hi = self._refine_block(order, vals, int(p), hp, descending)
            ends.add(hi - 1)
        ends = sorted(ends, reverse=self.tie_break == "largest")
        best_p, best_s = None, None
        with mpmath.workdps(HP_DPS):
            for p in ends:
                s = hp_score(p + 1, hp(order[p]))
                if best_s is None or s - best_s > mpmath.mpf(10) ** (10 - HP_DPS) * abs(best_s):
                    best_p, best_s = p, s
        return best_p

    # one round ----------------------------------------------------------------
    def round(self, rows):
        A, B = self.A, self.B
        o1 = self._sorted(rows, A, descending=False)
        ranks = np.arange(1, len(o1) + 1)
        p1 = self._pick(
            o1, A,
            lambda a: np.log(ranks) - 0.5 * np.log(a),
            lambda r, x: mpmath.log(r) - mpmath.log(_mpf(x)) / 2,
            self.hpA, descending=False)
        istar = int(o1[p1])
        a_prime_val = self.hpA(istar) if self.exact else A[istar]
        with mpmath.workdps(HP_DPS):
            a_prime = mpmath.log(_mpf(a_prime_val)) / 2
        s_plus = o1[:p1 + 1]

        if np.any(B[s_plus] >= 1):
            raise ValueError("a retained word has B >= 1; the branch is not expanding")
        o2 = self._sorted(s_plus, B, descending=True)
        ranks2 = np.arange(1, len(o2) + 1)
        ap = float(a_prime)
        p2 = self._pick(
            o2, B,
            lambda bb: (np.log(ranks2) - ap) / (-0.5 * np.log(bb)),
            lambda r, x: (mpmath.log(r) - a_prime) / (-mpmath.log(_mpf(x)) / 2),
            self.hpB, descending=True)
        istar2 = int(o2[p2])
        kept = np.sort(o2[:p2 + 1])

        exp2a = self._max_A(kept)
        Bv = self.hpB(istar2) if self.exact else B[istar2]
        exp2b = (1 / Bv) if isinstance(Bv, Fraction) else (1 / _mpf(Bv) if self.exact else 1.0 / Bv)
        return kept, istar, istar2, a_prime, exp2a, exp2b

    def expanding(self, rows) -> bool:
        """Expansion certificate (``max qmax <= 1/3``) restricted to ``rows``."""
        vals = self.t.qmax[rows]
        i = int(np.argmax(vals))
        if not self.exact:
            return bool(vals[i] <= 1 / 3)
        third = Fraction(1, 3)
        for r in rows[vals >= vals[i] * (1 - FLOAT_SLACK)]:
            if hp_less(third, self._stats(r).qmax):
                return False
        return True

    def _max_A(self, rows):
        vals = self.A[rows]
        i = int(np.argmax(vals))
        if not self.exact:
            return float(vals[i])
        cand = rows[vals >= vals[i] * (1 - FLOAT_SLACK)]
        best = None
        for r in cand:
            v = self.hpA(r)
            if best is None or hp_less(best, v):
                best = v
        return best


def prune_fixed_point(table: WordTable, arithmetic: str = "exact", tie_break: str = "largest",
                      secondary: str = "lex", max_rounds: int | None = None,
                      start_rows: np.ndarray | None = None) -> PruneResult:
    """Run pruning rounds from ``start_rows`` (default: every word) to a fixed point."""
    if arithmetic not in ("exact", "float"):
        raise ValueError("arithmetic must be 'exact' or 'float'")
    pr = _Pruner(table, arithmetic == "exact", tie_break, secondary)
    rows = np.arange(len(table)) if start_rows is None else np.sort(np.asarray(start_rows))
    if len(rows) == 0:
        raise ValueError("empty working set")
    limit = len(rows) if max_rounds is None else max_rounds
    trace = []
    report = None
    for rnd in range(1, limit + 1):
        kept, istar, istar2, a_prime, exp2a, exp2b = pr.round(rows)
        report = dimension_lower_bound(exp2a, exp2b, len(kept), expanding=pr.expanding(kept))
        trace.append({
            "round": rnd,
            "size_in": len(rows),
            "size_out": len(kept),
            "i_star": table.word(istar),
            "i_starstar": table.word(istar2),
            "a_prime": float(a_prime),
            "a": report.a,
            "b": report.b,
            "c": report.c,
            "s0": report.s0,
        })
        if len(kept) == len(rows) and np.array_equal(kept, rows):
            return PruneResult(table, kept, report, rnd, trace)
        rows = kept
    raise RuntimeError(f"no fixed point after {limit} rounds")
