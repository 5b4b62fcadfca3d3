"""Geometry of the standard 2-simplex and derivatives of projective maps.

Tangent vectors of the simplex live in the zero-sum plane of R^3.  The
metric used throughout makes

    b1 = (1, -1, 0),    b2 = (-1, -1, 2) / sqrt(3)

an orthonormal basis.  Because of the ``sqrt(3)`` in ``b2`` we do all the
bookkeeping in the rational basis ``(b1, u2)`` with ``u2 = (-1, -1, 2)``;
a linear map with rational matrix ``K`` in that basis has matrix

    J = [[K11,          K12 / sqrt(3)],
         [sqrt(3) K21,  K22          ]]

in the orthonormal basis, so every squared quantity (sum of squared
entries, squared determinant) is a rational function of ``K``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

SQRT3 = math.sqrt(3.0)

B1 = (1, -1, 0)
U2 = (-1, -1, 2)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, np.integer))


def _as_exact(x):
    if isinstance(x, np.integer):
        return int(x)
    return x


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the standard 2-simplex."""

    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 3:
            raise ValueError("a simplex point has three coordinates")
        if any(c < 0 for c in self.coords):
            raise ValueError(f"negative barycentric coordinate in {self.coords}")
        total = sum(self.coords)
        exact = all(_is_exact(c) for c in self.coords)
        if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
            raise ValueError(f"coordinates {self.coords} do not sum to 1")

    @classmethod
    def vertex(cls, k: int) -> "SimplexPoint":
        return cls(tuple(Fraction(int(i == k)) for i in range(3)))

    @classmethod
    def barycenter(cls) -> "SimplexPoint":
        return cls((Fraction(1, 3),) * 3)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


@dataclass(frozen=True)
class BasisCoords:
    """Coordinates of a tangent vector in the orthonormal basis ``(b1, b2)``.

    ``gamma`` is the coefficient on the rational vector ``u2``, so the
    orthonormal coordinate is ``beta = sqrt(3) * gamma``.
    """

    alpha: Real
    gamma: Real

    @property
    def beta(self) -> float:
        return SQRT3 * float(self.gamma)

    def vector(self) -> tuple:
        """Reconstruct the tangent vector ``alpha*b1 + gamma*u2``."""
        a, g = self.alpha, self.gamma
        return (a - g, -a - g, 2 * g)


def basis_coords(v: Sequence) -> BasisCoords:
    """Coordinates of a zero-sum vector ``v`` in the basis ``(b1, b2)``."""
    v = tuple(_as_exact(x) for x in v)
    if len(v) != 3:
        raise ValueError("tangent vectors have three components")
    s = v[0] + v[1] + v[2]
    if (all(_is_exact(x) for x in v) and s != 0) or abs(s) > 1e-12 * max(1.0, max(abs(float(x)) for x in v)):
        raise ValueError(f"{v} is not tangent to the simplex (components sum to {s})")
    if all(_is_exact(x) for x in v):
        return BasisCoords(Fraction(v[0] - v[1], 2), Fraction(v[2], 2))
    return BasisCoords((v[0] - v[1]) / 2, v[2] / 2)


def _matvec(P, y):
    return tuple(sum(P[i][j] * y[j] for j in range(3)) for i in range(3))


def projective_apply(P, y) -> SimplexPoint:
    """Image of ``y`` under the projectivization ``x -> Px / sum(Px)``."""
    y = tuple(_as_exact(c) for c in y)
    P = [[_as_exact(P[i][j]) for j in range(3)] for i in range(3)]
    py = _matvec(P, y)
    s = sum(py)
    if s <= 0:
        raise ValueError("degenerate projective image (coordinate sum is not positive)")
    if all(_is_exact(c) for c in py):
        return SimplexPoint(tuple(Fraction(c) / s for c in py))
    return SimplexPoint(tuple(c / s for c in py))


@dataclass(frozen=True)
class Jacobian2:
    """A linear map of the tangent plane, stored as its matrix in ``(b1, u2)``.

    ``K`` is a 2x2 nested tuple with rational (exact) or float entries.
    """

    K: tuple

    @classmethod
    def identity(cls) -> "Jacobian2":
        return cls(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))))

    @classmethod
    def from_orthonormal(cls, J) -> "Jacobian2":
        """Build from a float matrix given in the orthonormal basis."""
        return cls(((J[0][0], J[0][1] * SQRT3), (J[1][0] / SQRT3, J[1][1])))

    @property
    def entries(self) -> np.ndarray:
        """Float matrix in the orthonormal basis ``(b1, b2)``."""
        (k11, k12), (k21, k22) = self.K
        return np.array([[float(k11), float(k12) / SQRT3],
                         [SQRT3 * float(k21), float(k22)]])

    @property
    def q(self):
        """Sum of squared orthonormal-basis entries (exact for rational ``K``)."""
        (k11, k12), (k21, k22) = self.K
        return k11 * k11 + k12 * k12 / 3 + 3 * k21 * k21 + k22 * k22

    @property
    def det(self):
        (k11, k12), (k21, k22) = self.K
        return k11 * k22 - k12 * k21

    @property
    def det2(self):
        d = self.det
        return d * d

    def __matmul__(self, other: "Jacobian2") -> "Jacobian2":
        a, b = self.K, other.K
        return Jacobian2(tuple(
            tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2))
            for i in range(2)))

    def inverse(self) -> "Jacobian2":
        (k11, k12), (k21, k22) = self.K
        d = self.det
        if d == 0:
            raise ZeroDivisionError("singular Jacobian")
        if all(_is_exact(x) for x in (k11, k12, k21, k22)):
            d = Fraction(d)
        return Jacobian2(((k22 / d, -k12 / d), (-k21 / d, k11 / d)))


def jacobian(P, y) -> Jacobian2:
    """Derivative at ``y`` of the projectivization of ``P``.

    The derivative of ``x -> Px / s(Px)`` is ``v -> Pv / s - s(Pv) Py / s^2``
    with ``s = s(Py)``; it is evaluated on ``b1`` and ``u2`` and expressed back
    in the same basis.
    """
    y = tuple(_as_exact(c) for c in y)
    P = [[_as_exact(P[i][j]) for j in range(3)] for i in range(3)]
    exact = all(_is_exact(c) for c in y) and all(_is_exact(x) for row in P for x in row)
    py = _matvec(P, y)
    s = sum(py)
    if s <= 0:
        raise ValueError("degenerate projective image (coordinate sum is not positive)")
    if exact:
        s = Fraction(s)
    cols = []
    for u in (B1, U2):
        pu = _matvec(P, u)
        su = sum(pu)
        w = tuple(pu[i] / s - su * py[i] / (s * s) for i in range(3))
        c = basis_coords(w)
        cols.append((c.alpha, c.gamma))
    return Jacobian2(((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1])))


def largest_singular_value(J) -> float:
    """Operator norm of a 2x2 matrix via the closed form in its entries.

    Accepts a :class:`Jacobian2` or a 2x2 array in the orthonormal basis.  The
    discriminant ``q^2 - 4 det^2`` is evaluated as ``(q - 2 det)(q + 2 det)``,
    a product of two sums of squares, to avoid cancellation.
    """
    M = J.entries if isinstance(J, Jacobian2) else np.asarray(J, dtype=float)
    (a, b), (c, d) = M
    q = a * a + b * b + c * c + d * d
    disc = ((a - d) ** 2 + (b + c) ** 2) * ((a + d) ** 2 + (b - c) ** 2)
    return math.sqrt((q + math.sqrt(disc)) / 2.0)


def norm_upper(J) -> float:
    """``sqrt(sum of squares)``, an upper bound for the operator norm."""
    return math.sqrt(float(J.q))


def norm_lower(J) -> float:
    """``sqrt(sum of squares / 2)``, a lower bound for the operator norm."""
    return math.sqrt(float(J.q) / 2.0)
