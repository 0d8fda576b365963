"""Generalized Pell equations X^2 - D*Y^2 = m solved exactly in a box.

The fundamental unit of x^2 - D*y^2 = 1 is computed from the periodic
continued fraction of sqrt(D) in arbitrary-precision integer
arithmetic (the convergent numerators and denominators can far exceed
machine words already for moderate D).  All solutions with Y >= 1 and
|X| <= X_max are produced by scanning a provably sufficient range of
small Y for class representatives and closing the set under the unit
action

    (X, Y) -> (x0*X + D*y0*Y, x0*Y + y0*X)

and the reflection X -> -X.  Representatives with Y = 0 (possible when
m is a perfect square) seed the closure but are never reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from .intutil import is_square


@dataclass(frozen=True)
class PellInstance:
    """X^2 - D*Y^2 = m restricted to |X| <= x_max, Y >= 1."""

    d: int
    m: int
    x_max: int

    def __post_init__(self):
        if self.d < 2 or is_square(self.d):
            raise ValueError(f"D must be a non-square integer >= 2, got {self.d}")
        if self.m == 0:
            raise ValueError("m must be nonzero")
        if self.x_max < 1:
            raise ValueError("x_max must be a positive integer")


@dataclass(frozen=True)
class PellSolutionSet:
    """All box solutions of an instance, sorted by (Y, X)."""

    instance: PellInstance
    solutions: tuple[tuple[int, int], ...]
    fundamental_unit: tuple[int, int]

    def __len__(self) -> int:
        return len(self.solutions)


def fundamental_unit(d: int) -> tuple[int, int]:
    """Minimal (x0, y0) with x0, y0 >= 1 and x0^2 - d*y0^2 = 1.

    Walks the continued fraction of sqrt(d); the first convergent
    solving the unit equation is the fundamental one.
    """
    if d < 2 or is_square(d):
        raise ValueError(f"D must be a non-square integer >= 2, got {d}")
    a0 = isqrt(d)
    m, den, a = 0, 1, a0
    p_prev, q_prev = 1, 0
    p, q = a0, 1
    while p * p - d * q * q != 1:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return p, q


def solve_in_box(instance: PellInstance) -> PellSolutionSet:
    """All solutions with Y >= 1 and |X| <= x_max, duplicate-free.

    Representatives are scanned over 0 <= Y <= min(y0*sqrt(|m|/D) + 1,
    Y_box): every unit orbit contains such a representative (classical
    descent by the inverse unit), and nothing outside Y_box can sit in
    the box.  The closure under the unit map and X -> -X then fills in
    the rest; images with Y < 0 are normalized by total negation.
    """
    d, m, x_max = instance.d, instance.m, instance.x_max
    x0, y0 = fundamental_unit(d)

    y_box = isqrt((x_max * x_max + abs(m)) // d) + 1
    # Classical per-class representative bounds: y* <= y0*sqrt(m/(2(x0+1)))
    # for m > 0 and y* <= y0*sqrt(|m|/(2(x0-1))) for m < 0.  The simpler
    # bound y0*sqrt(|m|/D) + 1 is NOT always sufficient (D=99, m=198 has
    # minimal class member Y=3 against a bound of 2), so scan to the max.
    if m > 0:
        y_class = isqrt(y0 * y0 * m // (2 * (x0 + 1))) + 1
    else:
        y_class = isqrt(y0 * y0 * (-m) // (2 * (x0 - 1))) + 1
    y_rep = max(isqrt(y0 * y0 * abs(m) // d) + 1, y_class)
    y_scan = min(y_rep, y_box)

    seeds: set[tuple[int, int]] = set()
    for y in range(0, y_scan + 1):
        xx = m + d * y * y
        if xx < 0 or not is_square(xx):
            continue
        x = isqrt(xx)
        seeds.add((x, y))
        seeds.add((-x, y))

    # Closure under the unit map and X -> -X.  Every generated state
    # satisfies the Pell equation, so states with Y <= y_box form a
    # finite space and the walk terminates.
    in_box: set[tuple[int, int]] = set()
    work = list(seeds)
    seen = set(seeds)
    while work:
        x, y = work.pop()
        if y >= 1 and abs(x) <= x_max:
            in_box.add((x, y))
        nx, ny = x0 * x + d * y0 * y, x0 * y + y0 * x
        if ny < 0 or (ny == 0 and nx < 0):
            nx, ny = -nx, -ny
        for cand in ((nx, ny), (-x, y)):
            if cand[1] <= y_box and cand not in seen:
                seen.add(cand)
                work.append(cand)

    sols = tuple(sorted(in_box, key=lambda s: (s[1], s[0])))
    return PellSolutionSet(instance=instance, solutions=sols, fundamental_unit=(x0, y0))


def count_solutions(instance: PellInstance) -> int:
    """Number of box solutions, |solve_in_box(instance)|."""
    return len(solve_in_box(instance))
