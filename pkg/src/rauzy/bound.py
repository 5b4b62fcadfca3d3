"""Dimension lower bound ``s0 = 1 + (c - a) / b`` from the repeller constants.

``a = log(sqrt(exp2a))`` bounds the log of the largest expansion, ``b =
log(sqrt(exp2b))`` the log of the reciprocal smallest inverse-derivative
norm, and ``c = log(word_count)`` the entropy of the full shift on the
retained branches.  All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

REPORT_DPS = 50


def _log(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.log(x.numerator) - mpmath.log(x.denominator)
    return mpmath.log(mpmath.mpf(x))


@dataclass(frozen=True)
class BoundReport:
    exp2a: object
    exp2b: object
    word_count: int
    a: float
    b: float
    c: float
    s0: float
    s0_hp: str
    b_positive: bool
    nontrivial: bool
    in_range: bool
    expanding: bool | None = None

    @property
    def valid(self) -> bool:
        return self.b_positive and self.in_range and self.expanding is not False


def dimension_lower_bound(exp2a, exp2b, word_count: int, expanding: bool | None = None) -> BoundReport:
    """Evaluate the closed-form lower bound at ``REPORT_DPS`` digits.

    Raises ``ValueError`` if ``b <= 0``; a bound that degenerates to ``s0 <= 1``
    is returned with ``nontrivial=False``.
    """
    if word_count < 1:
        raise ValueError("word_count must be positive")
    if not (exp2a > 0 and exp2b > 0):
        raise ValueError("exp2a and exp2b must be positive")
    with mpmath.workdps(REPORT_DPS):
        a = _log(exp2a) / 2
        b = _log(exp2b) / 2
        c = mpmath.log(word_count)
        if b <= 0:
            raise ValueError("b = log(sqrt(exp2b)) must be positive")
        s0 = 1 + (c - a) / b
        s0_hp = mpmath.nstr(s0, 40)
        s0f = float(s0)
        nontrivial = bool(c > a)
    return BoundReport(exp2a, exp2b, int(word_count), float(a), float(b), float(c), s0f, s0_hp,
                       True, nontrivial, 1.0 <= s0f <= 2.0, expanding)


def bound_float(exp2a: float, exp2b: float, word_count: int) -> float:
    """Double-precision evaluation, used as a cross-check of the high-precision path."""
    return 1.0 + (math.log(word_count) - 0.5 * math.log(exp2a)) / (0.5 * math.log(exp2b))


def bound_from_sweep(result) -> BoundReport:
    from .sweep import expansion_certificate
    return dimension_lower_bound(result.exp2a, result.exp2b, result.word_count,
                                 expanding=expansion_certificate(result))
