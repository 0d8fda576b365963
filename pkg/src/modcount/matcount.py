"""Exact counts of integer matrices near-fixing a half-plane point.

For an admissible rational point z, squarefree level N, determinant
l >= 1 and threshold delta >= 0, the matrices gamma = (a, b; c, d)
with

    det(gamma) = l,   c = 0 (mod N),   u(gamma*z, z) <= delta

decompose into three classes:

    generic           c != 0 and (a+d)^2 != 4l
    upper_triangular  c  = 0 and (a+d)^2 != 4l
    parabolic         (a+d)^2 = 4l

Membership is decided by the coordinate identity

    u(gamma*z, z) <= delta  <=>  |-c z^2 + (a-d) z + b|^2 <= 4 delta l y^2

(valid whenever det = l > 0), so enumeration runs over triples
(c, a-d, b) and reconstructs the trace from

    (a+d)^2 = (a-d)^2 + 4 b c + 4 l,

accepting perfect squares only; the parity of a+d then automatically
matches a-d.  All range computations and membership tests are exact
integer arithmetic on scaled coordinates; the optional accelerated
engine only pre-screens candidates and every accepted matrix passes
the exact test.

The per-family summation operations report each count next to its
certified upper-bound expression and the count/bound ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from . import fastkernel
from .halfplane import UpperHalfPoint, check_admissible
from .intutil import (
    ceil_div_sqrt,
    divisors,
    floor_div_sqrt,
    is_square,
    is_squarefree,
    primes_up_to,
    squarefree_part,
)
from .lattice2 import reduce as reduce_lattice
from .pell import PellInstance, solve_in_box


class InvalidQueryError(ValueError):
    """The query violates a precondition (level, admissibility, delta)."""


class RangeViolationError(ValueError):
    """A summation hypothesis (an l-range condition) does not hold."""


class InternalConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


GENERIC = "generic"
UPPER = "upper_triangular"
PARABOLIC = "parabolic"


@dataclass(frozen=True, order=True)
class IntMatrix2:
    """Integer 2x2 matrix (a, b; c, d); entries are arbitrary precision."""

    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __neg__(self) -> "IntMatrix2":
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)


@dataclass(frozen=True)
class CountQuery:
    """Parameters of one matrix count.

    z must carry exact rational coordinates and pass the admissibility
    test at the (squarefree) level; delta >= 0 may be any rational.
    """

    z: UpperHalfPoint
    l: int
    level: int
    delta: Fraction

    def validate(self) -> None:
        if self.l < 1:
            raise InvalidQueryError(f"determinant must be >= 1, got {self.l}")
        if self.level < 1 or not is_squarefree(self.level):
            raise InvalidQueryError(f"level not square-free: {self.level}")
        if self.delta < 0:
            raise InvalidQueryError(f"delta must be >= 0, got {self.delta}")
        if not self.z.is_exact:
            raise InvalidQueryError("count queries need exact rational coordinates")
        report = check_admissible(self.z, self.level)
        if not report.admissible:
            raise InvalidQueryError(
                f"point not admissible at level {self.level}: "
                f"N*y >= 1 is {report.ny_ok}, shortest >= 1/N is {report.shortest_ok}"
            )


@dataclass(frozen=True)
class CountBreakdown:
    """Class counts for one query; total = generic + upper + parabolic."""

    query: CountQuery
    generic: int
    upper_triangular: int
    parabolic: int
    total: int
    matrices: tuple[tuple[str, IntMatrix2], ...] | None = None


@dataclass(frozen=True)
class SumReport:
    """A summed count next to its certified bound expression."""

    operation: str
    count: float
    bound: float
    ratio: float
    per_l: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ParabolicReport:
    """Outcome of checking the parabolic-count identity M_p = 2*[l square]."""

    ok: bool
    counts: tuple[int, ...]
    counterexample: tuple[int, int, int] | None  # (l, got, expected)


def trace_cap(l: int, delta) -> int:
    """Integer bound on |a+d|: membership forces |t| <= 2 sqrt(l) (sqrt(1+delta)+2 sqrt(delta))."""
    df = float(delta)
    return int(2.0 * math.sqrt(l) * (math.sqrt(1.0 + df) + 2.0 * math.sqrt(df))) + 2


class CountingSession:
    """Caches per-(z, N, delta) data across many determinants l."""

    def __init__(self, z: UpperHalfPoint, level: int, delta, validate: bool = True):
        delta = Fraction(delta)
        self.z = z.as_exact()
        self.level = level
        self.delta = delta
        if validate:
            CountQuery(self.z, 1, level, delta).validate()
        x, y = Fraction(self.z.x), Fraction(self.z.y)
        dm = math.lcm(x.denominator, y.denominator)
        self.dm = dm
        self.xi = x.numerator * (dm // x.denominator)
        self.yi = y.numerator * (dm // y.denominator)
        self.dn = delta.numerator
        self.dd = delta.denominator
        self.xf = float(x)
        self.yf = float(y)
        self.deltaf = float(delta)
        self.basis = reduce_lattice(self.z).basis_coeffs
        # precomputed scaled quantities
        self._dm2 = dm * dm
        self._x2y2 = self.xi * self.xi - self.yi * self.yi
        self._y2 = self.yi * self.yi

    # -- exact pieces -------------------------------------------------

    def query(self, l: int) -> CountQuery:
        return CountQuery(self.z, l, self.level, self.delta)

    def in_disc(self, c: int, s: int, b: int, l: int) -> bool:
        """Exact membership |.|^2 <= 4 delta l y^2 for the triple (c, s, b)."""
        re_scaled = b * self._dm2 + s * self.xi * self.dm - c * self._x2y2
        im_scaled = self.yi * (s * self.dm - 2 * c * self.xi)
        lhs = self.dd * (re_scaled * re_scaled + im_scaled * im_scaled)
        rhs = 4 * self.dn * l * self._y2 * self._dm2
        return lhs <= rhs

    def c_bound(self, l: int) -> int:
        """Containment bound: no solution has |c| above this."""
        tp = 1.0 + self.deltaf + 2.0 * math.sqrt(self.deltaf * (1.0 + self.deltaf)) + self.deltaf
        return int(math.sqrt(l * tp) / self.yf) + 2

    def s_range(self, c: int, l: int) -> tuple[int, int]:
        u = 2 * c * self.xi * self.dd
        v = 4 * self.dn * l * self._dm2 * self.dd
        w = self.dm * self.dd
        return ceil_div_sqrt(u, v, w), floor_div_sqrt(u, v, w)

    def b_range(self, c: int, s: int, l: int) -> tuple[int, int] | None:
        t = s * self.dm - 2 * c * self.xi
        i_val = 4 * self.dn * l * self._y2 * self._dm2 - self.dd * self._y2 * t * t
        if i_val < 0:
            return None
        a_val = s * self.xi * self.dm - c * self._x2y2
        u = -a_val * self.dd
        v = i_val * self.dd
        w = self.dd * self._dm2
        lo, hi = ceil_div_sqrt(u, v, w), floor_div_sqrt(u, v, w)
        if lo > hi:
            return None
        return lo, hi

    # -- reference engine ----------------------------------------------

    def _breakdown_reference(self, l: int, collect: bool):
        counts = {GENERIC: 0, UPPER: 0, PARABOLIC: 0}
        mats: list[tuple[str, IntMatrix2]] = []
        n = self.level
        cmax = self.c_bound(l)
        fourl = 4 * l
        for c in range(-(cmax // n) * n, cmax + 1, n):
            s_lo, s_hi = self.s_range(c, l)
            for s in range(s_lo, s_hi + 1):
                br = self.b_range(c, s, l)
                if br is None:
                    continue
                for b in range(br[0], br[1] + 1):
                    t2 = s * s + 4 * b * c + fourl
                    if t2 < 0 or not is_square(t2):
                        continue
                    self._emit(counts, mats if collect else None, c, s, b, isqrt(t2), l)
        return counts, mats

    def _emit(self, counts, mats, c: int, s: int, b: int, t: int, l: int):
        """Count (and optionally collect) the matrices for one verified triple."""
        kind = PARABOLIC if t * t == 4 * l else (UPPER if c == 0 else GENERIC)
        traces = (t, -t) if t > 0 else (0,)
        counts[kind] += len(traces)
        if mats is not None:
            for tt in traces:
                a = (tt + s) // 2
                d = (tt - s) // 2
                m = IntMatrix2(a, b, c, d)
                assert m.det == l
                mats.append((kind, m))

    # -- accelerated engine ---------------------------------------------

    def _breakdown_fast(self, l: int, collect: bool):
        counts = {GENERIC: 0, UPPER: 0, PARABOLIC: 0}
        mats: list[tuple[str, IntMatrix2]] = []
        sink = mats if collect else None

        # c = 0: divisor pairs for the upper-triangular class
        for a in divisors(l):
            d = l // a
            if a == d:
                continue
            for sgn in (1, -1):
                s = sgn * (a - d)
                br = self.b_range(0, s, l)
                if br is None:
                    continue
                counts[UPPER] += br[1] - br[0] + 1
                if sink is not None:
                    for b in range(br[0], br[1] + 1):
                        sink.append((UPPER, IntMatrix2(sgn * a, b, 0, sgn * d)))

        # c = 0 parabolic family (determinant a perfect square)
        r = isqrt(l)
        if r * r == l:
            br = self.b_range(0, 0, l)
            if br is not None:
                counts[PARABOLIC] += 2 * (br[1] - br[0] + 1)
                if sink is not None:
                    for b in range(br[0], br[1] + 1):
                        sink.append((PARABOLIC, IntMatrix2(r, b, 0, r)))
                        sink.append((PARABOLIC, IntMatrix2(-r, -b, 0, -r)))

        # c > 0 congruence classes via the screened kernel; each candidate
        # is re-verified exactly, and negation doubles it to c < 0.
        c_count = self.c_bound(l) // self.level
        if c_count > 0:
            cs, ss, bs, ts = fastkernel.scan_candidates(
                self.xf, self.yf, self.deltaf, l, self.level, c_count, self.basis
            )
            fourl = 4 * l
            for c, s, b, t in zip(cs.tolist(), ss.tolist(), bs.tolist(), ts.tolist()):
                if t * t != s * s + 4 * b * c + fourl:
                    raise InternalConsistencyError("kernel emitted a non-solution")
                if not self.in_disc(c, s, b, l):
                    continue
                self._emit(counts, sink, c, s, b, t, l)
                self._emit(counts, sink, -c, -s, -b, t, l)
        return counts, mats

    def _fast_safe(self, l: int) -> bool:
        """Accept the kernel only when its int64 quantities cannot overflow."""
        cmax = self.c_bound(l)
        smax = 2 * cmax * abs(self.xf) + 4.0 * math.sqrt(self.deltaf * l) + 4
        bmax = cmax * (self.xf * self.xf + self.yf * self.yf) + smax * abs(self.xf) + \
            2.0 * math.sqrt(self.deltaf * l) * self.yf + 4
        worst = max(smax * smax, 4.0 * bmax * cmax, 4.0 * l)
        return 3.0 * worst < 2.0 ** 62

    def breakdown(self, l: int, collect: bool = False, engine: str = "auto") -> CountBreakdown:
        if l < 1:
            raise InvalidQueryError(f"determinant must be >= 1, got {l}")
        if engine == "auto":
            est = (self.c_bound(l) // self.level + 1) * (4.0 * math.sqrt(self.deltaf * l) + 2)
            engine = "fast" if est > 20000 and self._fast_safe(l) else "exact"
        if engine == "fast":
            if not self._fast_safe(l):
                raise InvalidQueryError("instance too large for the accelerated engine")
            counts, mats = self._breakdown_fast(l, collect)
        elif engine == "exact":
            counts, mats = self._breakdown_reference(l, collect)
        else:
            raise ValueError(f"unknown engine {engine!r}")
        return CountBreakdown(
            query=self.query(l),
            generic=counts[GENERIC],
            upper_triangular=counts[UPPER],
            parabolic=counts[PARABOLIC],
            total=counts[GENERIC] + counts[UPPER] + counts[PARABOLIC],
            matrices=tuple(sorted(mats, key=lambda km: (km[1].c, km[1].a, km[1].b, km[1].d)))
            if collect
            else None,
        )

    def upper_count(self, l: int) -> int:
        """M_u(z, l, N) alone, by divisor pairs (no kernel needed)."""
        total = 0
        for a in divisors(l):
            d = l // a
            if a == d:
                continue
            for sgn in (1, -1):
                br = self.b_range(0, sgn * (a - d), l)
                if br is not None:
                    total += br[1] - br[0] + 1
        return total

    def parabolic_count(self, l: int, engine: str = "auto") -> int:
        """M_p(z, l, N) alone."""
        if not is_square(l):
            return 0
        return self.breakdown(l, engine=engine).parabolic


def enumerate_matrices(query: CountQuery, collect: bool = False,
                       engine: str = "auto") -> CountBreakdown:
    """Exact class counts (and optionally the matrices) for one query."""
    query.validate()
    session = CountingSession(query.z, query.level, query.delta, validate=False)
    return session.breakdown(query.l, collect=collect, engine=engine)


# ---------------------------------------------------------------------------
# summation operations with certified bounds
# ---------------------------------------------------------------------------


def sum_generic(z: UpperHalfPoint, level: int, delta, bound_l: int,
                squares_only: bool = False, engine: str = "auto") -> SumReport:
    """Sum of the generic count over 1 <= l <= bound_l (or squares only).

    Bound: L/(N y) + L^{3/2}/N^{1/2} + L^2/N, and with the l-range
    restricted to perfect squares L^{1/2}/(N y) + L/N^{1/2} + L^{3/2}/N.
    """
    if bound_l < 1:
        raise InvalidQueryError("bound_l must be >= 1")
    session = CountingSession(z, level, delta)
    if squares_only:
        ls = [k * k for k in range(1, isqrt(bound_l) + 1)]
    else:
        ls = list(range(1, bound_l + 1))
    per_l = {}
    total = 0
    for l in ls:
        got = session.breakdown(l, engine=engine).generic
        if got:
            per_l[l] = got
        total += got
    nf, yf, lf = float(level), float(z.y), float(bound_l)
    if squares_only:
        bound = math.sqrt(lf) / (nf * yf) + lf / math.sqrt(nf) + lf ** 1.5 / nf
        op = "lsquare"
    else:
        bound = lf / (nf * yf) + lf ** 1.5 / math.sqrt(nf) + lf * lf / nf
        op = "lem_ht"
    return SumReport(op, float(total), bound, float(total) / bound, per_l)


def sum_pell_family(z: UpperHalfPoint, level: int, delta, l1: int, lam: int,
                    engine: str = "auto") -> SumReport:
    """Sum of the generic count over the family l = l1*l2^2, l2 <= lam.

    Bound: Lam^{3/2}/(N y) + Lam^3/N^{1/2} + Lam^{9/2}/N.  Every
    nonempty triple (c, a-d, b) is cross-checked against the Pell
    solver: the traces and l2 found by enumeration must coincide with
    the box solutions of X^2 - 4*l1'*Y^2 = (a-d)^2 + 4bc after the
    squarefree reduction l1 = l1'*f^2 (skipped when l1' = 1, where the
    equation degenerates to a divisor count).
    """
    if not (1 <= l1 <= lam):
        raise InvalidQueryError("need 1 <= l1 <= lam")
    session = CountingSession(z, level, delta)
    per_l = {}
    total = 0
    triples: dict[tuple[int, int, int], set[tuple[int, int]]] = {}
    for l2 in range(1, lam + 1):
        l = l1 * l2 * l2
        bd = session.breakdown(l, collect=True, engine=engine)
        if bd.generic:
            per_l[l] = bd.generic
        total += bd.generic
        for kind, mat in bd.matrices:
            if kind == GENERIC:
                key = (mat.c, mat.a - mat.d, mat.b)
                triples.setdefault(key, set()).add((mat.trace, l2))

    sf, f = squarefree_part(l1)
    if sf > 1:
        x_max = trace_cap(l1 * lam * lam, delta)
        for (c, s, b), found in triples.items():
            m = s * s + 4 * b * c
            sols = solve_in_box(PellInstance(4 * sf, m, x_max))
            expected = set()
            for x_sol, y_sol in sols.solutions:
                if y_sol % f:
                    continue
                l2 = y_sol // f
                if 1 <= l2 <= lam and session.in_disc(c, s, b, l1 * l2 * l2):
                    expected.add((x_sol, l2))
            if found != expected:
                raise InternalConsistencyError(
                    f"Pell cross-check failed at triple (c,s,b)=({c},{s},{b}): "
                    f"enumerated {sorted(found)} vs Pell {sorted(expected)}"
                )

    nf, yf, lamf = float(level), float(z.y), float(lam)
    bound = lamf ** 1.5 / (nf * yf) + lamf ** 3 / math.sqrt(nf) + lamf ** 4.5 / nf
    return SumReport("lem_new", float(total), bound, float(total) / bound, per_l)


_UPPER_SHAPES = ("l1*l2", "l1*l2^2", "l1^2*l2^2", "prime")


def sum_upper(z: UpperHalfPoint, level: int, delta, lam: int, shape: str) -> SumReport:
    """Sums of the upper-triangular count over prime-indexed families.

    Shapes run l1, l2 over primes <= lam as a double sum ((l1, l2)
    pairs count with multiplicity), or a single sum over primes
    l <= lam for shape "prime".  Bounds per shape:

        l1*l2      Lam + Lam^2 N^{1/2} y + Lam^3 y
        l1*l2^2    Lam + Lam^{5/2} N^{1/2} y + Lam^4 y
        l1^2*l2^2  1 + Lam^2 N^{1/2} y + Lam^4 y
        prime      1 + L^{1/2} N^{1/2} y + L y
    """
    if shape not in _UPPER_SHAPES:
        raise InvalidQueryError(f"unknown shape {shape!r}; options: {_UPPER_SHAPES}")
    if lam < 1:
        raise InvalidQueryError("lam must be >= 1")
    session = CountingSession(z, level, delta)
    primes = primes_up_to(lam)
    values: dict[int, int] = {}
    if shape == "prime":
        for p in primes:
            values[p] = values.get(p, 0) + 1
    else:
        for p in primes:
            for q in primes:
                if shape == "l1*l2":
                    l = p * q
                elif shape == "l1*l2^2":
                    l = p * q * q
                else:
                    l = p * p * q * q
                values[l] = values.get(l, 0) + 1
    per_l = {}
    total = 0
    cache: dict[int, int] = {}
    for l, mult in sorted(values.items()):
        if l not in cache:
            cache[l] = session.upper_count(l)
        if cache[l]:
            per_l[l] = cache[l]
        total += mult * cache[l]
    nf, yf, lamf = float(level), float(z.y), float(lam)
    root_n_y = math.sqrt(nf) * yf
    if shape == "l1*l2":
        bound = lamf + lamf ** 2 * root_n_y + lamf ** 3 * yf
        op = "mu2"
    elif shape == "l1*l2^2":
        bound = lamf + lamf ** 2.5 * root_n_y + lamf ** 4 * yf
        op = "mu3"
    elif shape == "l1^2*l2^2":
        bound = 1.0 + lamf ** 2 * root_n_y + lamf ** 4 * yf
        op = "mu4"
    else:
        bound = 1.0 + math.sqrt(lamf) * root_n_y + lamf * yf
        op = "mu_prime"
    return SumReport(op, float(total), bound, float(total) / bound, per_l)


def verify_parabolic_identity(z: UpperHalfPoint, level: int, delta, bound_l: int,
                              engine: str = "auto") -> ParabolicReport:
    """Check M_p(z, l, N) = 2*[l is a square] for every 1 <= l <= bound_l.

    Requires the hypothesis bound_l < 1/(4 delta y^2) (exact rational
    comparison); outside it the identity has no content.  Counts are
    exact, so a failure reports a genuine counterexample.
    """
    session = CountingSession(z, level, delta)
    y = Fraction(session.z.y)
    if 4 * Fraction(session.delta) * bound_l * y * y >= 1:
        raise RangeViolationError(
            f"bound_l={bound_l} violates the hypothesis L < 1/(4 delta y^2)"
        )
    counts = []
    counterexample = None
    for l in range(1, bound_l + 1):
        got = session.parabolic_count(l, engine=engine)
        counts.append(got)
        expected = 2 if is_square(l) else 0
        if got != expected and counterexample is None:
            counterexample = (l, got, expected)
    return ParabolicReport(ok=counterexample is None, counts=tuple(counts),
                           counterexample=counterexample)
