"""Small integer and rational utilities shared across the package.

Everything here is exact: arbitrary-precision integers and
fractions.Fraction.  Floating point never enters these helpers.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def is_square(n: int) -> bool:
    """True iff n is a perfect square (n >= 0)."""
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, n + 1) if sieve[i]]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Positive divisors of n >= 1, ascending."""
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def is_squarefree(n: int) -> bool:
    """True iff no prime square divides n (n >= 1)."""
    if n < 1:
        return False
    return all(e == 1 for e in factorize(n).values())


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = s * f**2 with s squarefree; returns (s, f)."""
    if n < 1:
        raise ValueError("squarefree_part expects a positive integer")
    s, f = 1, 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
        f *= p ** (e // 2)
    return s, f


def floor_div_sqrt(u: int, v: int, w: int) -> int:
    """floor((u + sqrt(v)) / w) for integers with v >= 0, w > 0.

    Exact: floor((u + sqrt(v))/w) equals (u + isqrt(v)) // w because no
    integer can lie strictly between (u + floor(sqrt v))/w and
    (u + sqrt v)/w unless v is a perfect square, in which case the two
    agree anyway.
    """
    return (u + isqrt(v)) // w


def ceil_div_sqrt(u: int, v: int, w: int) -> int:
    """ceil((u - sqrt(v)) / w) for integers with v >= 0, w > 0."""
    return -((-u + isqrt(v)) // w)


def parse_rational(text: str) -> Fraction:
    """Parse 'p', 'p/q' or a plain decimal into an exact Fraction."""
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    """Serialize a Fraction as 'p/q' (or 'p' when the denominator is 1)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
