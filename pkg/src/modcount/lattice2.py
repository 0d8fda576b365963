"""Rank-2 lattice machinery for lattices spanned by 1 and z.

The lattice L(z) = {a*z + b : a, b integers} sits in the plane, has
covolume Im(z), and its vectors in a closed disc can be counted
exactly.  Gauss (Lagrange) reduction produces a basis whose lengths
are the successive minima lambda1 <= lambda2, which feed the uniform
lattice-point bound

    1 + R/lambda1 + R^2/(lambda1*lambda2)

and the weaker two-term bound 1 + R^2/lambda1^2 it always dominates up
to an absolute constant.

Exact for rational z (squared lengths and disc counts are computed in
integer arithmetic); float coordinates are accepted for sweep work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .halfplane import Coord, UpperHalfPoint
from .intutil import ceil_div_sqrt, floor_div_sqrt

Vec = tuple[Coord, Coord]


@dataclass(frozen=True)
class DiscQuery:
    """Closed disc of radius R >= 0 about an arbitrary plane center."""

    center: Vec
    radius: Coord

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disc radius must be nonnegative")


@dataclass(frozen=True)
class ReducedLattice:
    """The lattice <1, z> with a Gauss-reduced basis.

    basis_coeffs holds the integer coefficient pairs (a, b) of the two
    reduced basis vectors a*z + b; their lengths are lambda1 <= lambda2
    (floats; the exact squared lengths are kept alongside when z is
    rational).  covolume equals Im(z).
    """

    z: UpperHalfPoint
    basis_coeffs: tuple[tuple[int, int], tuple[int, int]]
    lambda1: float
    lambda2: float
    lambda1_sq: Coord
    lambda2_sq: Coord

    @property
    def covolume(self) -> Coord:
        return self.z.y

    def vector(self, a: int, b: int) -> Vec:
        """Plane coordinates of the lattice vector a*z + b."""
        return (a * self.z.x + b, a * self.z.y)


def _norm_sq(z: UpperHalfPoint, a: int, b: int) -> Coord:
    re = a * z.x + b
    return re * re + (a * z.y) ** 2


def _inner(z: UpperHalfPoint, u: tuple[int, int], v: tuple[int, int]) -> Coord:
    ru = u[0] * z.x + u[1]
    rv = v[0] * z.x + v[1]
    return ru * rv + u[0] * v[0] * z.y * z.y


def _canonical_sign(v: tuple[int, int]) -> tuple[int, int]:
    a, b = v
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b)
    return (a, b)


def reduce(z: UpperHalfPoint) -> ReducedLattice:
    """Gauss-reduce the lattice <1, z>.

    Deterministic: nearest-integer size reduction (round-half-to-even
    on exact input), basis vectors sign-normalized to positive leading
    coefficient, and equal-length vectors ordered lexicographically by
    coefficient pair.  The reduced lengths are the successive minima.
    """
    u, v = (0, 1), (1, 0)  # the vectors 1 and z
    nu, nv = _norm_sq(z, *u), _norm_sq(z, *v)
    if nv < nu:
        u, v, nu, nv = v, u, nv, nu
    while True:
        mu = round(_inner(z, u, v) / nu)
        if mu:
            v = (v[0] - mu * u[0], v[1] - mu * u[1])
            nv = _norm_sq(z, *v)
        if nv < nu:
            u, v, nu, nv = v, u, nv, nu
        else:
            break
    u, v = _canonical_sign(u), _canonical_sign(v)
    if nu == nv and v < u:
        u, v = v, u
    return ReducedLattice(
        z=z,
        basis_coeffs=(u, v),
        lambda1=math.sqrt(nu),
        lambda2=math.sqrt(nv),
        lambda1_sq=nu,
        lambda2_sq=nv,
    )


def count_in_disc(lattice: ReducedLattice, query: DiscQuery) -> int:
    """Exact number of lattice points a*z + b in the closed disc.

    Enumerates a over the strip |a*y - Im(center)| <= R forced by the
    imaginary parts, then counts the integer b with
    (a*x + b - Re(center))^2 <= R^2 - (a*y - Im(center))^2 per row.
    Rational inputs are counted in exact integer arithmetic; float
    inputs use plain floating point.
    """
    z = lattice.z
    cx, cy = query.center
    r = query.radius
    if not math.isfinite(float(r)):
        raise ValueError("disc radius must be finite")
    exact = lattice.z.is_exact and not any(
        isinstance(t, float) for t in (cx, cy, r)
    )
    if exact:
        return _count_exact(z, Fraction(cx), Fraction(cy), Fraction(r))
    return _count_float(z, float(cx), float(cy), float(r))


def _count_exact(z: UpperHalfPoint, cx: Fraction, cy: Fraction, r: Fraction) -> int:
    y, x = Fraction(z.y), Fraction(z.x)
    r2 = r * r
    a_lo = math.ceil((cy - r) / y)
    a_hi = math.floor((cy + r) / y)
    total = 0
    for a in range(a_lo, a_hi + 1):
        w = r2 - (a * y - cy) ** 2
        if w < 0:
            continue
        alpha = cx - a * x  # b must satisfy (b - alpha)^2 <= w
        # floor(alpha + sqrt(w)) and ceil(alpha - sqrt(w)) in exact arithmetic
        p, q = alpha.numerator, alpha.denominator
        m, n = w.numerator, w.denominator
        hi = floor_div_sqrt(p * n, q * q * m * n, q * n)
        lo = ceil_div_sqrt(p * n, q * q * m * n, q * n)
        if hi >= lo:
            total += hi - lo + 1
    return total


def _count_float(z: UpperHalfPoint, cx: float, cy: float, r: float) -> int:
    y, x = float(z.y), float(z.x)
    a_lo = math.ceil((cy - r) / y)
    a_hi = math.floor((cy + r) / y)
    total = 0
    for a in range(a_lo, a_hi + 1):
        w = r * r - (a * y - cy) ** 2
        if w < 0:
            continue
        root = math.sqrt(w)
        alpha = cx - a * x
        hi = math.floor(alpha + root)
        lo = math.ceil(alpha - root)
        if hi >= lo:
            total += hi - lo + 1
    return total


def schmidt_bound(lattice: ReducedLattice, radius) -> float:
    """The three-term point-count bound 1 + R/l1 + R^2/(l1*l2)."""
    r = float(radius)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return 1.0 + r / lattice.lambda1 + r * r / (lattice.lambda1 * lattice.lambda2)


def naive_bound(lattice: ReducedLattice, radius) -> float:
    """The two-term point-count bound 1 + R^2/l1^2."""
    r = float(radius)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return 1.0 + (r / lattice.lambda1) ** 2
