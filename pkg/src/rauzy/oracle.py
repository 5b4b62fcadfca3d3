"""Independent small-n reference for the per-word statistics.

Branch maps are evaluated by composing the projective maps one letter at a
time, derivatives are central finite differences taken along the
orthonormal tangent basis, and matrix coefficients are read off with the
simplex metric ``<u, v> = (u . v) / 2``.  Nothing here touches branch
product matrices or the closed-form vertex data used by the sweep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .ifs import GENERATORS, enumerate_words

_BASIS = (np.array([1.0, -1.0, 0.0]), np.array([-1.0, -1.0, 2.0]) / math.sqrt(3.0))
_GEN = [np.array(M, dtype=float) for M in GENERATORS]
FD_STEP = 1e-5


def branch_point(word, y, reverse=False):
    """``f_in(...f_i1(y))``; ``reverse`` applies the letters in the opposite order."""
    x = np.asarray(y, dtype=float)
    for i in (reversed(word) if reverse else word):
        x = _GEN[i - 1] @ x
        x = x / x.sum()
    return x


def fd_jacobian(word, y, reverse=False, h=FD_STEP) -> np.ndarray:
    """Orthonormal-basis derivative of the branch map at ``y`` by central differences."""
    y = np.asarray(y, dtype=float)
    cols = []
    for e in _BASIS:
        d = (branch_point(word, y + h * e, reverse) - branch_point(word, y - h * e, reverse)) / (2 * h)
        cols.append([np.dot(b, d) / 2.0 for b in _BASIS])
    return np.array(cols).T


def _r_and_q(word, y, reverse):
    J = fd_jacobian(word, y, reverse)
    q = float((J * J).sum())
    det = float(np.linalg.det(J))
    return q / (det * det), q


@dataclass(frozen=True)
class OracleStats:
    word: tuple
    rmax: float
    qmin: float
    qmax: float


def oracle_stats(word, include_edges: bool = True, reverse: bool = False, scan: int = 200) -> OracleStats:
    """Extrema over the vertices and, optionally, the three edges of the simplex."""
    verts = [np.eye(3)[k] for k in range(3)]
    rs, qs = [], []
    for v in verts:
        r, q = _r_and_q(word, v, reverse)
        rs.append(r)
        qs.append(q)
    if include_edges:
        for a, b in ((0, 1), (0, 2), (1, 2)):
            pt = lambda t: (1 - t) * verts[a] + t * verts[b]
            ts = np.linspace(0.0, 1.0, scan + 1)
            vals = np.array([_r_and_q(word, pt(t), reverse) for t in ts])
            for col, sign, sink in ((0, -1.0, rs), (1, 1.0, qs), (1, -1.0, qs)):
                f = vals[:, col] * sign
                j = int(np.argmin(f))
                lo, hi = ts[max(j - 1, 0)], ts[min(j + 1, scan)]
                res = minimize_scalar(lambda t: sign * _r_and_q(word, pt(t), reverse)[col],
                                      bounds=(lo, hi), method="bounded",
                                      options={"xatol": 1e-12})
                sink.append(sign * min(res.fun, f[j]))
    return OracleStats(tuple(word), max(rs), min(qs), max(qs))


@dataclass
class OracleComparison:
    n: int
    checked: int
    worst_rel: float
    mismatches: list  # (word, quantity, pipeline, oracle)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def compare_with_pipeline(table, tol: float = 1e-6, reverse: bool = False) -> OracleComparison:
    """Check every row of a small-``n`` table against the oracle."""
    if table.n > 6:
        raise ValueError("the finite-difference oracle is limited to n <= 6")
    include_edges = table.mode.kind == "edges"
    if table.mode.kind not in ("vertices", "edges"):
        raise ValueError("the oracle covers the vertices and edges modes only")
    words = list(enumerate_words(table.n))
    worst, bad = 0.0, []
    for i, w in enumerate(words):
        if table.word(i) != w:
            raise AssertionError("table rows are not in lexicographic order")
        o = oracle_stats(w, include_edges=include_edges, reverse=reverse)
        for name, pv, ov in (("rmax", table.rmax[i], o.rmax), ("qmin", table.qmin[i], o.qmin),
                             ("qmax", table.qmax[i], o.qmax)):
            rel = abs(pv - ov) / abs(ov)
            worst = max(worst, rel)
            if rel > tol:
                bad.append((w, name, float(pv), float(ov)))
    return OracleComparison(table.n, len(words), worst, bad)
