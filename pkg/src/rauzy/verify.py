"""Sampling check that no interior point beats the per-word extrema of a table."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .ifs import word_product
from .sweep import WordTable, quad_form, vertex_kint

VERIFY_TOL = 1e-12


@dataclass
class VerifyReport:
    mode: str
    words: int
    points: int
    worst_rmax: float   # max of r(y)/rmax - 1
    worst_qmin: float   # max of 1 - q(y)/qmin
    worst_qmax: float   # max of q(y)/qmax - 1
    violations: int
    examples: list = field(default_factory=list)
    tol: float = VERIFY_TOL

    @property
    def passed(self) -> bool:
        return self.violations == 0

    @property
    def worst(self) -> float:
        return max(self.worst_rmax, self.worst_qmin, self.worst_qmax)


def verify_extrema(table: WordTable, words: int = 1000, points: int = 1000, seed: int = 0,
                   tol: float = VERIFY_TOL, extrema=None) -> VerifyReport:
    """Compare interior samples against ``(rmax, qmin, qmax)`` of the table.

    ``extrema`` overrides the table's arrays (used for fault injection).
    Interior points are drawn uniformly from the open simplex.
    """
    rmax, qmin, qmax = extrema if extrema is not None else (table.rmax, table.qmin, table.qmax)
    rng = np.random.default_rng(seed)
    if words <= 0 or points <= 0:
        warnings.warn("empty verification sample; the check is vacuous", stacklevel=2)
        return VerifyReport(str(table.mode), 0, 0, -np.inf, -np.inf, -np.inf, 0, tol=tol)
    rows = np.sort(rng.choice(len(table), size=min(words, len(table)), replace=False))
    ys = rng.dirichlet((1.0, 1.0, 1.0), size=points)
    Kint, s = _rows_vertex_data(table, rows)
    Kf, sf = Kint.astype(float), s.astype(float)
    wr = np.full(len(rows), -np.inf)
    wqn = np.full(len(rows), -np.inf)
    wqx = np.full(len(rows), -np.inf)
    R, QN, QX = rmax[rows], qmin[rows], qmax[rows]
    for y in ys:
        Ky = np.einsum("k,nkj->nj", y, Kf)
        sy = sf @ y
        Qy = quad_form(Ky)
        q = Qy / (12.0 * sy ** 4)
        r = Qy * sy * sy / 12.0
        wr = np.maximum(wr, r / R - 1)
        wqn = np.maximum(wqn, 1 - q / QN)
        wqx = np.maximum(wqx, q / QX - 1)
    worst_row = np.maximum(np.maximum(wr, wqn), wqx)
    bad = np.flatnonzero(worst_row > tol)
    order = bad[np.argsort(-worst_row[bad])][:10]
    examples = [("".join(map(str, table.word(int(rows[i])))), float(worst_row[i])) for i in order]
    return VerifyReport(str(table.mode), len(rows), points, float(wr.max()), float(wqn.max()),
                        float(wqx.max()), int(len(bad)), examples, tol)


def _rows_vertex_data(table: WordTable, rows):
    P = np.array([word_product(table.word(int(i))) for i in rows], dtype=np.int64).reshape(-1, 3, 3)
    return vertex_kint(P)
