"""Per-word derivative extrema of the branch maps and their global aggregates.

For a word with branch matrix ``P`` and a point ``y`` of the simplex, write
``J(y)`` for the derivative of the branch map in the orthonormal basis.  The
expanding map ``g`` inverts the branch map, so with ``x = h(y)``

    ||D_x g||^+ squared             = q(y) / det(J)^2,
    ||(D_x g)^{-1}||^- squared      = q(y) / 2,

where ``q`` is the sum of squared entries of ``J``.  In the rational basis
``(b1, u2)`` the derivative is ``Kint(y) / (2 s(y)^2)`` with ``s(y) = sum(Py)``
and an integer-linear ``Kint``, which gives

    q(y)          = Q(y) / (12 s(y)^4),
    q(y) / det^2  = Q(y) s(y)^2 / 12,          (det J = 1 / s(y)^3)

with ``Q = 3 k11^2 + k12^2 + 9 k21^2 + 3 k22^2``.  At a vertex ``e_k`` these
are exact rationals built from int64 data.  Along an edge ``Q`` is quadratic
and ``s`` linear in the edge parameter, so the interior critical points of
both quantities solve explicit quadratics.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from . import ifs

HP_DPS = 60
FLOAT_SLACK = 1e-9
EDGES = ((0, 1), (0, 2), (1, 2))
_QW = np.array([3, 1, 9, 3], dtype=np.int64)


@dataclass(frozen=True)
class EvalMode:
    """Where each per-word quantity is extremized.

    ``vertices``      the three vertices of the simplex;
    ``edges``         vertices plus the interior critical points of every edge;
    ``grid:K``        vertices plus the barycentric grid of step ``1/K``;
    ``samples:M:S``   vertices plus ``M`` uniform interior points (seed ``S``).
    """

    kind: str = "edges"
    k: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("vertices", "edges", "grid", "samples"):
            raise ValueError(f"unknown evaluation mode {self.kind!r}")
        if self.kind == "grid" and self.k < 1:
            raise ValueError("grid mode needs K >= 1")
        if self.kind == "samples" and self.k < 0:
            raise ValueError("samples mode needs M >= 0")

    @classmethod
    def parse(cls, text: str) -> "EvalMode":
        parts = text.strip().lower().split(":")
        kind = {"vertex": "vertices", "vertices": "vertices", "edge": "edges",
                "edges": "edges", "grid": "grid", "samples": "samples"}.get(parts[0])
        if kind is None:
            raise ValueError(f"unknown evaluation mode {text!r}")
        try:
            nums = [int(p) for p in parts[1:]]
        except ValueError:
            raise ValueError(f"malformed evaluation mode {text!r}") from None
        if kind in ("vertices", "edges"):
            if nums:
                raise ValueError(f"{kind} mode takes no parameters")
            return cls(kind)
        if kind == "grid":
            if len(nums) != 1:
                raise ValueError("grid mode is written grid:K")
            return cls("grid", nums[0])
        if len(nums) not in (1, 2):
            raise ValueError("samples mode is written samples:M or samples:M:SEED")
        return cls("samples", nums[0], nums[1] if len(nums) == 2 else 0)

    def __str__(self):
        if self.kind == "grid":
            return f"grid:{self.k}"
        if self.kind == "samples":
            return f"samples:{self.k}:{self.seed}"
        return self.kind

    def extra_points(self) -> list:
        """Non-vertex evaluation points, as exact rationals where possible."""
        if self.kind == "grid":
            K = self.k
            return [(Fraction(i, K), Fraction(j, K), Fraction(K - i - j, K))
                    for i in range(K + 1) for j in range(K + 1 - i)
                    if max(i, j, K - i - j) < K]
        if self.kind == "samples":
            rng = np.random.default_rng(self.seed)
            pts = rng.dirichlet((1.0, 1.0, 1.0), size=self.k)
            # exact rationals of the float samples, renormalized to sum to one
            out = []
            for p in pts:
                a, b = Fraction(float(p[0])), Fraction(float(p[1]))
                out.append((a, b, 1 - a - b))
            return [p for p in out if p[2] >= 0]
        return []


VERTICES = EvalMode("vertices")


# ---------------------------------------------------------------------------
# vectorized kernels

def vertex_kint(P: np.ndarray):
    """Integer derivative data at the three vertices.

    Returns ``K`` of shape ``(N, 3, 4)`` holding ``(k11, k12, k21, k22)`` at each
    vertex and ``s`` of shape ``(N, 3)`` holding the column sums.
    """
    c0, c1, c2 = P[:, :, 0], P[:, :, 1], P[:, :, 2]
    pb1 = c0 - c1
    pu2 = 2 * c2 - c0 - c1
    sb1 = pb1.sum(axis=1)
    su2 = pu2.sum(axis=1)
    s = P.sum(axis=1)
    K = np.empty((P.shape[0], 3, 4), dtype=object if P.dtype == object else np.int64)
    for k in range(3):
        p = P[:, :, k]
        sk = s[:, k:k + 1]
        n1 = sk * pb1 - sb1[:, None] * p
        n2 = sk * pu2 - su2[:, None] * p
        K[:, k, 0] = n1[:, 0] - n1[:, 1]
        K[:, k, 1] = n2[:, 0] - n2[:, 1]
        K[:, k, 2] = n1[:, 2]
        K[:, k, 3] = n2[:, 2]
    return K, s


def quad_form(K) -> np.ndarray:
    """``3 k11^2 + k12^2 + 9 k21^2 + 3 k22^2`` along the last axis."""
    if K.dtype.kind == "f":
        return (K * K * _QW.astype(float)).sum(axis=-1)
    return (K * K * _QW.astype(K.dtype)).sum(axis=-1)


def _roots01(a, b, c):
    """Real roots in the open interval (0, 1) of ``a t^2 + b t + c``; NaN where absent."""
    with np.errstate(invalid="ignore", divide="ignore"):
        disc = b * b - 4.0 * a * c
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        quad = a != 0
        qq = -0.5 * (b + np.copysign(sq, b))
        r1 = np.where(quad, qq / a, np.where(b != 0, -c / b, np.nan))
        r2 = np.where(quad, c / qq, np.nan)
    out = []
    for r in (r1, r2):
        out.append(np.where((r > 0) & (r < 1), r, np.nan))
    return out


def edge_extrema(K: np.ndarray, s: np.ndarray):
    """Extreme interior-edge values of ``q/det^2`` (max) and ``q`` (min, max).

    Words whose edges have no interior critical point get -inf / +inf.
    """
    N = K.shape[0]
    rmax = np.full(N, -np.inf)
    qmin = np.full(N, np.inf)
    qmax = np.full(N, -np.inf)
    w = _QW.astype(float)
    for a_, b_ in EDGES:
        ka = K[:, a_, :].astype(float)
        d = K[:, b_, :].astype(float) - ka
        c0 = (w * ka * ka).sum(axis=1)
        c1 = 2.0 * (w * ka * d).sum(axis=1)
        c2 = (w * d * d).sum(axis=1)
        s0 = s[:, a_].astype(float)
        s1 = s[:, b_].astype(float) - s0
        # d/dt [Q / s^4] = 0  and  d/dt [Q s^2] = 0
        q_roots = _roots01(-2.0 * c2 * s1, 2.0 * c2 * s0 - 3.0 * c1 * s1, c1 * s0 - 4.0 * s1 * c0)
        r_roots = _roots01(4.0 * c2 * s1, 3.0 * c1 * s1 + 2.0 * c2 * s0, c1 * s0 + 2.0 * s1 * c0)
        for t in q_roots:
            ok = ~np.isnan(t)
            tt = np.where(ok, t, 0.0)
            st = s0 + s1 * tt
            val = (c0 + c1 * tt + c2 * tt * tt) / (12.0 * st ** 4)
            qmin = np.where(ok, np.minimum(qmin, val), qmin)
            qmax = np.where(ok, np.maximum(qmax, val), qmax)
        for t in r_roots:
            ok = ~np.isnan(t)
            tt = np.where(ok, t, 0.0)
            st = s0 + s1 * tt
            val = (c0 + c1 * tt + c2 * tt * tt) * st * st / 12.0
            rmax = np.where(ok, np.maximum(rmax, val), rmax)
    return rmax, qmin, qmax


def point_extrema(K: np.ndarray, s: np.ndarray, points: Sequence):
    """Extreme values of ``q/det^2`` and ``q`` over the given barycentric points."""
    N = K.shape[0]
    rmax = np.full(N, -np.inf)
    qmin = np.full(N, np.inf)
    qmax = np.full(N, -np.inf)
    Kf = K.astype(float)
    sf = s.astype(float)
    for y in points:
        y = np.array([float(c) for c in y])
        Ky = np.einsum("k,nkj->nj", y, Kf)
        sy = sf @ y
        Q = quad_form(Ky)
        q = Q / (12.0 * sy ** 4)
        r = Q * sy * sy / 12.0
        rmax = np.maximum(rmax, r)
        qmin = np.minimum(qmin, q)
        qmax = np.maximum(qmax, q)
    return rmax, qmin, qmax


def _fits_int64(K, s) -> bool:
    Kf, sf = np.abs(K.astype(float)), s.astype(float)
    Qf = quad_form(Kf)
    limit = 2.0 ** 60
    return bool(Kf.max() < 2.0 ** 28 and (Qf * sf * sf).max() < limit
                and (12.0 * sf ** 4).max() < limit)


def _chunk(args):
    n, prefix, mode = args
    P = ifs.products_with_prefix(prefix, n)
    K, s = vertex_kint(P)
    if not _fits_int64(K, s):
        # promote to Python integers; everything downstream accepts object arrays
        K, s = vertex_kint(P.astype(object))
    # det(Kint) = 4 s at every vertex, i.e. det J = 1/s^3
    det = K[:, :, 0] * K[:, :, 3] - K[:, :, 1] * K[:, :, 2]
    if not np.array_equal(det, 4 * s):
        raise ArithmeticError("determinant law failed on a branch product")
    Q = quad_form(K)
    if mode.kind == "edges":
        extra = edge_extrema(K, s)
    elif mode.kind in ("grid", "samples"):
        extra = point_extrema(K, s, mode.extra_points())
    else:
        N = len(P)
        extra = (np.full(N, -np.inf), np.full(N, np.inf), np.full(N, -np.inf))
    start = ifs.word_to_index(prefix) * 3 ** (n - len(prefix))
    index = np.arange(start, start + len(P), dtype=np.int64)
    return index, Q, s, extra


def _prefixes(n: int) -> list:
    import itertools
    p = min(n - 1, 3)
    return [tuple(w) for w in itertools.product((1, 2, 3), repeat=p)]


# ---------------------------------------------------------------------------
# per-word table

@dataclass
class WordTable:
    """Per-word derivative data for every non-constant word of length ``n``.

    ``Q`` and ``s`` are exact int64 vertex data; ``extra_*`` are float extrema
    over the non-vertex evaluation points of ``mode``.
    """

    n: int
    mode: EvalMode
    index: np.ndarray
    Q: np.ndarray
    s: np.ndarray
    extra_rmax: np.ndarray
    extra_qmin: np.ndarray
    extra_qmax: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.index)

    @property
    def vertex_r12(self) -> np.ndarray:
        """``12 q/det^2`` at each vertex, exact int64."""
        return self.Q * self.s * self.s

    @property
    def vertex_q(self) -> np.ndarray:
        sf = self.s.astype(float)
        return self.Q / (12.0 * sf ** 4)

    @property
    def rmax(self) -> np.ndarray:
        if "rmax" not in self._cache:
            self._cache["rmax"] = np.maximum(self.vertex_r12.max(axis=1) / 12.0, self.extra_rmax)
        return self._cache["rmax"]

    @property
    def qmin(self) -> np.ndarray:
        if "qmin" not in self._cache:
            self._cache["qmin"] = np.minimum(self.vertex_q.min(axis=1), self.extra_qmin)
        return self._cache["qmin"]

    @property
    def qmax(self) -> np.ndarray:
        if "qmax" not in self._cache:
            self._cache["qmax"] = np.maximum(self.vertex_q.max(axis=1), self.extra_qmax)
        return self._cache["qmax"]

    def word(self, i: int) -> tuple:
        return ifs.word_from_index(int(self.index[i]), self.n)

    def exact_stats(self, i: int) -> "WordStats":
        """High-precision stats of row ``i`` (exact where attained at a rational point)."""
        return word_stats(self.word(i), self.mode)

    def vertex_exact(self, i: int) -> tuple:
        """Exact vertex-only ``(rmax, qmin, qmax)`` of row ``i`` from the int64 data."""
        r = max(Fraction(int(v), 12) for v in self.vertex_r12[i])
        qs = [Fraction(int(Q), 12 * int(s) ** 4) for Q, s in zip(self.Q[i], self.s[i])]
        return r, min(qs), max(qs)

    def subset(self, rows: np.ndarray) -> "WordTable":
        return WordTable(self.n, self.mode, self.index[rows], self.Q[rows], self.s[rows],
                         self.extra_rmax[rows], self.extra_qmin[rows], self.extra_qmax[rows])


def build_table(n: int, mode: EvalMode = EvalMode(), workers: int = 1) -> WordTable:
    """Compute the per-word table for all of ``S_n``."""
    if n < 2:
        raise ValueError("word length must be at least 2")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    jobs = [(n, p, mode) for p in _prefixes(n)]
    if workers == 1:
        parts = [_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk, jobs))
    index = np.concatenate([p[0] for p in parts])
    Q = np.concatenate([p[1] for p in parts])
    s = np.concatenate([p[2] for p in parts])
    extra = [np.concatenate([p[3][j] for p in parts]) for j in range(3)]
    keep = np.ones(len(index), dtype=bool)
    keep[list(ifs.constant_indices(n))] = False
    return WordTable(n, mode, index[keep], Q[keep], s[keep],
                     extra[0][keep], extra[1][keep], extra[2][keep])


# ---------------------------------------------------------------------------
# single-word, high-precision path

@dataclass(frozen=True)
class WordStats:
    """Extremized derivative quantities of one word.

    Values are ``Fraction`` when the extremum is attained at a rational
    evaluation point and ``mpmath.mpf`` (``HP_DPS`` digits) when it is attained
    at an irrational edge critical point.
    """

    word: tuple
    rmax: object
    qmin: object
    qmax: object

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in (self.rmax, self.qmin, self.qmax))


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def hp_less(x, y) -> bool:
    """``x < y`` for Fraction / mpf values; mpf comparisons resolve to ``HP_DPS - 10`` digits."""
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x < y
    with mpmath.workdps(HP_DPS):
        fx, fy = _mpf(x), _mpf(y)
        tol = mpmath.mpf(10) ** (10 - HP_DPS) * max(abs(fx), abs(fy))
        return fy - fx > tol


def _word_vertex_data(P):
    """Integer ``(Kint, s)`` at each vertex, pure Python."""
    out = []
    cols = [[P[i][k] for i in range(3)] for k in range(3)]
    pb1 = [cols[0][i] - cols[1][i] for i in range(3)]
    pu2 = [2 * cols[2][i] - cols[0][i] - cols[1][i] for i in range(3)]
    sb1, su2 = sum(pb1), sum(pu2)
    for k in range(3):
        p = cols[k]
        sk = sum(p)
        n1 = [sk * pb1[i] - sb1 * p[i] for i in range(3)]
        n2 = [sk * pu2[i] - su2 * p[i] for i in range(3)]
        out.append(((n1[0] - n1[1], n2[0] - n2[1], n1[2], n2[2]), sk))
    return out


def _Q(k):
    return 3 * k[0] * k[0] + k[1] * k[1] + 9 * k[2] * k[2] + 3 * k[3] * k[3]


def _values_at(vd, y):
    """Exact ``(q/det^2, q)`` at a rational point ``y``."""
    K = [sum(y[v] * vd[v][0][j] for v in range(3)) for j in range(4)]
    s = sum(y[v] * vd[v][1] for v in range(3))
    Q = _Q(K)
    return Fraction(Q * s * s, 12), Fraction(Q, 12 * s ** 4)


def _edge_values_hp(vd):
    """Interior edge critical values ``(list of q/det^2, list of q)`` in mpmath."""
    rv, qv = [], []
    with mpmath.workdps(HP_DPS):
        for a_, b_ in EDGES:
            ka, kb = vd[a_][0], vd[b_][0]
            d = [kb[j] - ka[j] for j in range(4)]
            w = (3, 1, 9, 3)
            c0 = sum(w[j] * ka[j] * ka[j] for j in range(4))
            c1 = 2 * sum(w[j] * ka[j] * d[j] for j in range(4))
            c2 = sum(w[j] * d[j] * d[j] for j in range(4))
            s0 = vd[a_][1]
            s1 = vd[b_][1] - s0
            for coeffs, sink, f in (
                ((-2 * c2 * s1, 2 * c2 * s0 - 3 * c1 * s1, c1 * s0 - 4 * s1 * c0), qv,
                 lambda Qt, st: Qt / (12 * st ** 4)),
                ((4 * c2 * s1, 3 * c1 * s1 + 2 * c2 * s0, c1 * s0 + 2 * s1 * c0), rv,
                 lambda Qt, st: Qt * st * st / 12),
            ):
                for t in _roots01_exact(*coeffs):
                    Qt = c0 + c1 * t + c2 * t * t
                    st = s0 + s1 * t
                    sink.append(f(Qt, st))
    return rv, qv


def _roots01_exact(a, b, c):
    """Roots in (0, 1) of an integer quadratic; rational roots stay Fractions."""
    if a == 0:
        if b == 0:
            return []
        roots = [Fraction(-c, b)]
    else:
        disc = b * b - 4 * a * c
        if disc < 0:
            return []
        r = math.isqrt(disc)
        if r * r == disc:
            roots = [Fraction(-b + r, 2 * a), Fraction(-b - r, 2 * a)]
        else:
            sq = mpmath.sqrt(disc)
            roots = [(-b + sq) / (2 * a), (-b - sq) / (2 * a)]
    return [t for t in roots if 0 < t < 1]


def word_stats(word: Sequence[int], mode: EvalMode = EvalMode()) -> WordStats:
    """Extremize ``q/det^2`` (max) and ``q`` (min, max) for one word."""
    w = ifs.validate_word(word)
    vd = _word_vertex_data(ifs.word_product(w))
    pts = [tuple(Fraction(int(i == k)) for i in range(3)) for k in range(3)]
    pts += mode.extra_points()
    rs, qs = [], []
    for y in pts:
        r, q = _values_at(vd, y)
        rs.append(r)
        qs.append(q)
    if mode.kind == "edges":
        er, eq = _edge_values_hp(vd)
        rs += er
        qs += eq

    def pick(vals, larger):
        best = vals[0]
        for v in vals[1:]:
            if (hp_less(best, v) if larger else hp_less(v, best)):
                best = v
        return best

    return WordStats(w, pick(rs, True), pick(qs, False), pick(qs, True))


# ---------------------------------------------------------------------------
# aggregation

@dataclass
class SweepResult:
    """Global constants of the repeller built from all words of ``S_n``.

    ``exp2a`` is ``max rmax`` and ``exp2b`` is ``2 / min qmin``; ``expansion_sq``
    is ``max qmax``.  In exact arithmetic they are ``Fraction`` (or ``mpf`` for an
    edge-attained extremum); in float arithmetic they are floats.
    """

    n: int
    mode: EvalMode
    arithmetic: str
    word_count: int
    exp2a: object
    exp2b: object
    expansion_sq: object
    argmax_rmax: tuple
    argmin_qmin: tuple
    argmax_qmax: tuple
    table: Optional[WordTable] = None


def _select(table: WordTable, values: np.ndarray, larger: bool, attr: str, exact: bool):
    """Global extremum with a float prefilter and a high-precision re-check."""
    i0 = int(np.argmax(values) if larger else np.argmin(values))
    best = values[i0]
    if not exact:
        return float(best), table.word(i0)
    if larger:
        cand = np.flatnonzero(values >= best * (1 - FLOAT_SLACK))
    else:
        cand = np.flatnonzero(values <= best * (1 + FLOAT_SLACK))
    bv, bw = None, None
    for i in cand:  # lexicographic order; keep the first exact extremizer
        v = getattr(table.exact_stats(int(i)), attr)
        if bv is None or (hp_less(bv, v) if larger else hp_less(v, bv)):
            bv, bw = v, table.word(int(i))
    return bv, bw


def aggregate(table: WordTable, arithmetic: str = "exact") -> SweepResult:
    if arithmetic not in ("exact", "float"):
        raise ValueError("arithmetic must be 'exact' or 'float'")
    exact = arithmetic == "exact"
    a, wa = _select(table, table.rmax, True, "rmax", exact)
    qmin, wb = _select(table, table.qmin, False, "qmin", exact)
    e, we = _select(table, table.qmax, True, "qmax", exact)
    if exact and isinstance(qmin, Fraction):
        exp2b = 2 / qmin
    else:
        exp2b = (2 / _mpf(qmin)) if exact else 2.0 / qmin
    return SweepResult(table.n, table.mode, arithmetic, len(table), a, exp2b, e, wa, wb, we, table)


def sweep(n: int, mode: EvalMode = EvalMode(), arithmetic: str = "exact",
          workers: int = 1) -> SweepResult:
    """Per-word extrema for all of ``S_n`` followed by the max/min reductions."""
    return aggregate(build_table(n, mode, workers), arithmetic)


def expansion_certificate(result: SweepResult) -> bool:
    """True iff the smallest expansion factor is at least ``sqrt(3)``."""
    e = result.expansion_sq
    third = Fraction(1, 3)
    if isinstance(e, Fraction):
        return e <= third
    if isinstance(e, float):
        return e <= 1 / 3
    return not hp_less(third, e)
