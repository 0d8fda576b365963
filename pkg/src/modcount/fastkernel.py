"""Accelerated candidate scan for the nonzero-c matrix classes.

For fixed determinant l, level N and proximity threshold delta, the
matrices (a, b; c, d) with u(gz, z) <= delta correspond to triples
(c, s, b), s = a - d, with

    | -c*z^2 + s*z + b |^2  <=  4 * delta * l * y^2,

i.e. lattice points s*z + b of <1, z> inside a disc of radius
2*sqrt(delta*l)*y centered at c*z^2, after which the trace is
reconstructed from t^2 = s^2 + 4*b*c + 4*l when that value is a
perfect square.

The kernel walks each disc in a Gauss-reduced frame of <1, z> so the
work per c is proportional to the number of lattice points in the
disc, not to the bounding box in (s, b).  Floating point is used only
to bracket the coefficient ranges (always widened by one unit, so the
candidate set is a superset of the true set); the square test runs in
exact int64 arithmetic and every emitted candidate is re-verified in
exact rational arithmetic by the caller before it is counted.

Only c > 0 is scanned: the matrix set is closed under negation, which
maps (c, s, b, t) to (-c, -s, -b, -t).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _scan(x, y, r2, c_step, c_count, s1a, s1b, s2a, s2b, fourl,
          out_c, out_s, out_b, out_t):
    """Emit candidates (c, s, b, t) with t^2 = s^2+4bc+4l a square.

    Returns the number of candidates, or -1 if the output buffers are
    full (caller retries with larger buffers).
    """
    u1x = s1a * x + s1b
    u1y = s1a * y
    u2x = s2a * x + s2b
    u2y = s2a * y
    n1 = u1x * u1x + u1y * u1y
    det2 = u1x * u2y - u1y * u2x
    r = math.sqrt(r2)
    absu1 = math.sqrt(n1)
    cap = out_c.shape[0]
    cnt = 0
    for ci in range(1, c_count + 1):
        c = ci * c_step
        fx = float(c)
        qx = fx * (x * x - y * y)
        qy = 2.0 * fx * x * y
        cross_q = u1x * qy - u1y * qx
        lo = (cross_q - r * absu1) / det2
        hi = (cross_q + r * absu1) / det2
        if lo > hi:
            lo, hi = hi, lo
        m2_lo = int(math.floor(lo)) - 1
        m2_hi = int(math.ceil(hi)) + 1
        for m2 in range(m2_lo, m2_hi + 1):
            wx = m2 * u2x - qx
            wy = m2 * u2y - qy
            dot = u1x * wx + u1y * wy
            disc = dot * dot - n1 * (wx * wx + wy * wy - r2)
            slack = 1e-9 * (dot * dot + n1 * (r2 + 1.0))
            if disc < -slack:
                continue
            root = math.sqrt(disc) if disc > 0.0 else 0.0
            m1_lo = int(math.floor((-dot - root) / n1)) - 1
            m1_hi = int(math.ceil((-dot + root) / n1)) + 1
            s_val = m1_lo * s1a + m2 * s2a
            b_val = m1_lo * s1b + m2 * s2b
            for _m1 in range(m1_lo, m1_hi + 1):
                t2 = s_val * s_val + 4 * b_val * c + fourl
                if t2 >= 0:
                    t = np.int64(math.sqrt(float(t2)))
                    while t * t > t2:
                        t -= 1
                    while (t + 1) * (t + 1) <= t2:
                        t += 1
                    if t * t == t2:
                        if cnt >= cap:
                            return -1
                        out_c[cnt] = c
                        out_s[cnt] = s_val
                        out_b[cnt] = b_val
                        out_t[cnt] = t
                        cnt += 1
                s_val += s1a
                b_val += s1b
    return cnt


def scan_candidates(x: float, y: float, delta: float, l: int,
                    c_step: int, c_count: int,
                    basis: tuple[tuple[int, int], tuple[int, int]],
                    initial_cap: int = 1 << 12):
    """Run the kernel, growing the output buffers as needed.

    Returns int64 arrays (c, s, b, t) of candidates with c > 0.
    """
    (s1a, s1b), (s2a, s2b) = basis
    r2 = 4.0 * delta * l * y * y
    cap = initial_cap
    while True:
        out = [np.empty(cap, dtype=np.int64) for _ in range(4)]
        n = _scan(x, y, r2, c_step, c_count, s1a, s1b, s2a, s2b, 4 * l,
                  out[0], out[1], out[2], out[3])
        if n >= 0:
            return tuple(a[:n] for a in out)
        cap *= 4
