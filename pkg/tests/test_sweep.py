import itertools
from collections import Counter
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from rauzy import ifs, sweep as S
from rauzy.geometry import jacobian

F = Fraction
THREE = F(3208 ** 2 * 86185, 3)
FOUR = F(4917248 ** 2 * 2, 1595)


def test_eval_mode_parse():
    assert S.EvalMode.parse("vertices").kind == "vertices"
    assert S.EvalMode.parse("edges") == S.EvalMode("edges")
    assert S.EvalMode.parse("grid:4") == S.EvalMode("grid", 4)
    assert S.EvalMode.parse("samples:10:7") == S.EvalMode("samples", 10, 7)
    assert str(S.EvalMode.parse("samples:10")) == "samples:10:0"
    for bad in ("nope", "grid", "grid:0", "grid:x", "edges:3"):
        with pytest.raises(ValueError):
            S.EvalMode.parse(bad)


def test_vertex_data_matches_generic_jacobian():
    for w in ifs.enumerate_words(4):
        P = ifs.word_product(w)
        K, s = S.vertex_kint(np.array([P], dtype=np.int64))
        Q = S.quad_form(K)[0]
        for k in range(3):
            y = tuple(F(int(i == k)) for i in range(3))
            J = jacobian(P, y)
            assert J.q == F(int(Q[k]), 12 * int(s[0, k]) ** 4)
            assert J.q / J.det2 == F(int(Q[k]) * int(s[0, k]) ** 2, 12)


def test_word_stats_12_vertices_against_jacobian():
    P = ifs.word_product((1, 2))
    rs, qs = [], []
    for k in range(3):
        J = jacobian(P, tuple(F(int(i == k)) for i in range(3)))
        rs.append(J.q / J.det2)
        qs.append(J.q)
    st = S.word_stats((1, 2), S.VERTICES)
    assert (st.rmax, st.qmin, st.qmax) == (max(rs), min(qs), max(qs))
    assert st.exact


def _edge_brute(w, pts=4001):
    """Dense scan of every edge with the generic Jacobian (float)."""
    P = ifs.word_product(w)
    rs, qs = [], []
    for a, b in S.EDGES:
        for t in np.linspace(0, 1, pts):
            y = [0.0, 0.0, 0.0]
            y[a], y[b] = 1 - t, t
            J = jacobian(P, tuple(y))
            rs.append(J.q / J.det2)
            qs.append(J.q)
    return max(rs), min(qs), max(qs)


@pytest.mark.parametrize("w", [(2, 2, 2, 3, 1, 1, 2, 3), (1, 2, 3, 1, 3), (3, 3, 1, 2, 2, 1, 1)])
def test_edge_extrema_against_dense_scan(w):
    st = S.word_stats(w, S.EvalMode("edges"))
    br = _edge_brute(w)
    for got, ref in zip((st.rmax, st.qmin, st.qmax), br):
        g = float(got)
        assert g == pytest.approx(ref, rel=1e-6)
    # the dense scan never beats the critical-point solution
    assert br[0] <= float(st.rmax) * (1 + 1e-12)
    assert br[1] >= float(st.qmin) * (1 - 1e-12)


@pytest.mark.parametrize("mode", ["vertices", "edges", "grid:3", "samples:5:1"])
def test_table_matches_single_word_path(mode):
    m = S.EvalMode.parse(mode)
    tab = S.build_table(6, m)
    rng = np.random.default_rng(0)
    for i in rng.choice(len(tab), 40, replace=False):
        st = tab.exact_stats(int(i))
        assert float(st.rmax) == pytest.approx(tab.rmax[i], rel=1e-12)
        assert float(st.qmin) == pytest.approx(tab.qmin[i], rel=1e-12)
        assert float(st.qmax) == pytest.approx(tab.qmax[i], rel=1e-12)


def test_vertex_exact_matches_table():
    tab = S.build_table(5, S.VERTICES)
    for i in range(len(tab)):
        r, qn, qx = tab.vertex_exact(i)
        st = tab.exact_stats(i)
        assert (r, qn, qx) == (st.rmax, st.qmin, st.qmax)


def test_partition_independence():
    a = S.build_table(8, S.EvalMode("edges"), workers=1)
    b = S.build_table(8, S.EvalMode("edges"), workers=3)
    for name in ("index", "Q", "s", "extra_rmax", "extra_qmin", "extra_qmax"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))
    ra, rb = S.aggregate(a), S.aggregate(b)
    assert (ra.exp2a, ra.exp2b, ra.expansion_sq) == (rb.exp2a, rb.exp2b, rb.expansion_sq)


def test_object_promotion_gives_same_values(monkeypatch):
    ref = S.build_table(6, S.EvalMode("edges"))
    monkeypatch.setattr(S, "_fits_int64", lambda K, s: False)
    big = S.build_table(6, S.EvalMode("edges"))
    assert big.Q.dtype == object
    np.testing.assert_array_equal(ref.rmax, big.rmax)
    np.testing.assert_array_equal(ref.qmin, big.qmin)
    assert S.aggregate(ref).exp2a == S.aggregate(big).exp2a


def test_grid_refinement_monotone():
    coarse = S.build_table(6, S.EvalMode("grid", 2))
    fine = S.build_table(6, S.EvalMode("grid", 4))
    assert np.all(fine.rmax >= coarse.rmax)
    assert np.all(fine.qmin <= coarse.qmin)
    assert np.all(fine.qmax >= coarse.qmax)


def test_edges_dominate_vertices():
    v = S.build_table(7, S.VERTICES)
    e = S.build_table(7, S.EvalMode("edges"))
    assert np.all(e.rmax >= v.rmax) and np.all(e.qmin <= v.qmin) and np.all(e.qmax >= v.qmax)


def test_stats_invariants():
    tab = S.build_table(8, S.EvalMode("edges"))
    assert np.all(tab.qmin > 0)
    assert np.all(tab.qmin <= tab.qmax)
    # det^2 = 1/s^6 <= 1, so q/det^2 >= q
    assert np.all(tab.rmax >= tab.qmax)


def _stats_multiset(tab, relabel):
    out = Counter()
    for i in range(len(tab)):
        w = tab.word(i)
        if relabel:
            w = ifs.cyclic_relabel(w)
        st = S.word_stats(w, tab.mode)
        out[(st.rmax, st.qmin, st.qmax)] += 1
    return out


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cyclic_symmetry_of_stats(n):
    tab = S.build_table(n, S.VERTICES)
    for i in range(len(tab)):
        w = tab.word(i)
        assert S.word_stats(w, S.VERTICES) == S.WordStats(
            w, *[getattr(S.word_stats(ifs.cyclic_relabel(w), S.VERTICES), k) for k in ("rmax", "qmin", "qmax")])
    assert _stats_multiset(tab, False) == _stats_multiset(tab, True)


def test_cyclic_symmetry_edges_float():
    tab = S.build_table(6, S.EvalMode("edges"))
    pos = {int(ix): i for i, ix in enumerate(tab.index)}
    for i in range(len(tab)):
        j = pos[ifs.word_to_index(ifs.cyclic_relabel(tab.word(i)))]
        assert tab.rmax[j] == pytest.approx(tab.rmax[i], rel=1e-12)
        assert tab.qmin[j] == pytest.approx(tab.qmin[i], rel=1e-12)


def test_expansion_certificate_boundaries():
    base = dict(n=2, mode=S.VERTICES, arithmetic="exact", word_count=6, exp2a=F(2), exp2b=F(3),
                argmax_rmax=(1, 2), argmin_qmin=(1, 2), argmax_qmax=(1, 2))
    assert S.expansion_certificate(S.SweepResult(expansion_sq=F(1, 3), **base))
    assert not S.expansion_certificate(S.SweepResult(expansion_sq=F(1, 2), **base))
    assert S.expansion_certificate(S.SweepResult(expansion_sq=0.2, **base))
    with mpmath.workdps(60):
        assert not S.expansion_certificate(S.SweepResult(expansion_sq=mpmath.mpf(1) / 3 + mpmath.mpf(10) ** -30, **base))


def test_sweep_n13_vertices_exact(table13_vertices):
    res = S.aggregate(table13_vertices, "exact")
    assert res.word_count == 1_594_320
    assert res.exp2a == THREE
    assert res.exp2b == FOUR


def test_sweep_n13_edges_exact(table13):
    res = S.aggregate(table13, "exact")
    assert res.exp2a == THREE and res.exp2b == FOUR and res.expansion_sq == F(1, 3)
    assert S.expansion_certificate(res)


def test_float_matches_exact(table13):
    ex = S.aggregate(table13, "exact")
    fl = S.aggregate(table13, "float")
    assert fl.exp2a == pytest.approx(float(ex.exp2a), rel=1e-9)
    assert fl.exp2b == pytest.approx(float(ex.exp2b), rel=1e-9)
    assert (fl.argmax_rmax, fl.argmin_qmin, fl.argmax_qmax) == (ex.argmax_rmax, ex.argmin_qmin, ex.argmax_qmax)


def test_hp_less():
    assert S.hp_less(F(1, 3), F(1, 2))
    with mpmath.workdps(60):
        third = mpmath.mpf(1) / 3
        above = third + mpmath.mpf(10) ** -20
    assert not S.hp_less(third, F(1, 3)) and not S.hp_less(F(1, 3), third)
    assert S.hp_less(F(1, 3), above)
