"""Upper half-plane geometry.

Points z = x + iy with y > 0, the action of positive-determinant real
2x2 matrices by fractional linear transformations, the point-pair
proximity function

    u(w, z) = |w - z|^2 / (4 Im(w) Im(z)),

which is an increasing function of the hyperbolic distance between w
and z (u = 0 iff w = z), and the admissibility test used by the matrix
counting routines: N*y >= 1 together with a lower bound 1/N on the
squared length of every nonzero vector of the lattice spanned by 1 and
z.

All operations are pure.  Coordinates may be exact (int / Fraction),
in which case every result is exact, or float for speed; the float
path is accurate to ~1e-12 relative error on well-conditioned inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Coord = Union[int, Fraction, float]


@dataclass(frozen=True)
class UpperHalfPoint:
    """A point x + iy of the upper half-plane; requires y > 0."""

    x: Coord
    y: Coord

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"not in upper half-plane: y = {self.y}")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.x, Rational) and isinstance(self.y, Rational)

    def as_exact(self) -> "UpperHalfPoint":
        """Coerce coordinates to Fraction (floats converted exactly)."""
        return UpperHalfPoint(Fraction(self.x), Fraction(self.y))

    def abs2(self) -> Coord:
        """Squared distance from the origin, x^2 + y^2."""
        return self.x * self.x + self.y * self.y


@dataclass(frozen=True)
class RealMatrix2:
    """A real 2x2 matrix (a, b; c, d); the action below needs det > 0."""

    a: Coord
    b: Coord
    c: Coord
    d: Coord

    @property
    def det(self) -> Coord:
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the two admissibility conditions at level N.

    shortest_value is the exact minimum of |a*z + b|^2 over integer
    pairs (a, b) != (0, 0), attained at witness.
    """

    level: int
    point: UpperHalfPoint
    ny_ok: bool
    shortest_ok: bool
    shortest_value: Coord
    witness: tuple[int, int]

    @property
    def admissible(self) -> bool:
        return self.ny_ok and self.shortest_ok


def proximity(w: UpperHalfPoint, z: UpperHalfPoint) -> Coord:
    """u(w, z) = |w - z|^2 / (4 Im w Im z); nonnegative, 0 iff w == z."""
    dx = w.x - z.x
    dy = w.y - z.y
    return (dx * dx + dy * dy) / (4 * w.y * z.y)


def apply_moebius(g: RealMatrix2, z: UpperHalfPoint) -> UpperHalfPoint:
    """Fractional linear action (a*z + b)/(c*z + d) on the half-plane.

    Computed in real coordinates; the image has imaginary part
    det(g) * y / |c*z + d|^2.  Raises ValueError when det(g) <= 0.
    """
    det = g.det
    if not det > 0:
        raise ValueError(f"degenerate matrix: det = {det}")
    # c*z + d = (c*x + d) + i*c*y
    re_den = g.c * z.x + g.d
    im_den = g.c * z.y
    den = re_den * re_den + im_den * im_den
    # (a*z + b) * conj(c*z + d)
    re_num = g.a * z.x + g.b
    x_new = (re_num * re_den + g.a * z.y * im_den) / den
    y_new = det * z.y / den
    return UpperHalfPoint(x_new, y_new)


def shortest_vector(z: UpperHalfPoint) -> tuple[Coord, tuple[int, int]]:
    """Minimum of |a*z + b|^2 over integer (a, b) != (0, 0), with witness.

    Exact for rational z.  The scan is finite: |a*z + b|^2 >= a^2 y^2,
    so once a running minimum m is known only |a| <= sqrt(m)/y can
    improve it, and for each a the optimal b is within 1 of -a*x.  By
    the sign symmetry (a, b) ~ (-a, -b) only a >= 1 is scanned.
    """
    best = z.x - z.x + 1  # |0*z + 1|^2, in the coordinate arithmetic type
    witness = (0, 1)
    a = 1
    while a * a * z.y * z.y <= best:
        fl = math.floor(-a * z.x)
        for b in (fl, fl + 1):
            re = a * z.x + b
            val = re * re + a * a * z.y * z.y
            if val < best:
                best = val
                witness = (a, b)
        a += 1
    return best, witness


def check_admissible(z: UpperHalfPoint, level: int) -> AdmissibilityReport:
    """Evaluate both admissibility conditions for z at level N.

    ny_ok: N*y >= 1.  shortest_ok: min |a*z+b|^2 >= 1/N over nonzero
    integer pairs.  With rational coordinates both tests are exact.
    """
    if level < 1:
        raise ValueError("level must be a positive integer")
    value, witness = shortest_vector(z)
    ny_ok = level * z.y >= 1
    if isinstance(value, float):
        shortest_ok = value >= 1.0 / level
    else:
        shortest_ok = value >= Fraction(1, level)
    return AdmissibilityReport(level, z, ny_ok, shortest_ok, value, witness)
