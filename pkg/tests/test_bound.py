import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rauzy.bound import bound_float, dimension_lower_bound

F = Fraction
FULL = (F(3208 ** 2 * 86185, 3), F(4917248 ** 2 * 2, 1595), 1_594_320)
PRUNED = (F(6800 ** 2 * 829, 3), F(615627 ** 2 * 3, 515), 898_224)


def closed_form(a_mult, a_rad, b_mult, b_rad, count):
    """Direct double evaluation of 1 + (c - a)/b from the printed constants."""
    a = math.log(a_mult * math.sqrt(a_rad))
    b = math.log(b_mult * math.sqrt(b_rad))
    return 1 + (math.log(count) - a) / b


def test_full_sweep_bound():
    r = dimension_lower_bound(*FULL)
    assert r.s0 > 1.08
    assert r.s0 == pytest.approx(closed_form(3208, 86185 / 3, 4917248, 2 / 1595, 1594320), rel=1e-13)
    assert r.s0 == pytest.approx(1.089, abs=1e-3)
    assert r.valid and r.nontrivial


def test_pruned_bound():
    r = dimension_lower_bound(*PRUNED)
    assert r.s0 > 1.19
    assert r.s0 == pytest.approx(closed_form(6800, 829 / 3, 615627, 3 / 515, 898224), rel=1e-13)
    assert r.s0 == pytest.approx(1.1926, abs=1e-3)


def test_degenerate_c_equals_a():
    r = dimension_lower_bound(F(1000 ** 2), F(50), 1000)
    assert r.s0 == 1.0
    assert not r.nontrivial


def test_trivial_and_invalid():
    r = dimension_lower_bound(F(10 ** 8), F(50), 10)
    assert r.s0 < 1 and not r.nontrivial and not r.valid
    with pytest.raises(ValueError):
        dimension_lower_bound(F(4), F(1), 10)
    with pytest.raises(ValueError):
        dimension_lower_bound(F(-4), F(3), 10)


def test_logs_recomputable_from_companions():
    r = dimension_lower_bound(*FULL)
    assert r.a == pytest.approx(0.5 * math.log(FULL[0]), rel=1e-15)
    assert r.b == pytest.approx(0.5 * math.log(FULL[1]), rel=1e-15)
    assert r.c == pytest.approx(math.log(FULL[2]), rel=1e-15)
    assert float(r.s0_hp) == pytest.approx(r.s0, rel=1e-15)


def test_high_precision_agrees_with_double():
    for consts in (FULL, PRUNED):
        r = dimension_lower_bound(*consts)
        assert abs(r.s0 - bound_float(float(consts[0]), float(consts[1]), consts[2])) < 1e-12


@settings(max_examples=300, derandomize=True, deadline=None)
@given(st.integers(2, 10 ** 6), st.integers(2, 10 ** 6), st.integers(3, 10 ** 6), st.integers(1, 1000))
def test_monotonicity(A, Bx, count, bump):
    A, B = F(A), F(Bx * 4 + 10)
    base = dimension_lower_bound(A, B, count).s0
    assert dimension_lower_bound(A, B, count + bump).s0 > base
    assert dimension_lower_bound(A + bump, B, count).s0 < base
    if math.log(count) > 0.5 * math.log(A):
        assert dimension_lower_bound(A, B + bump, count).s0 < base
