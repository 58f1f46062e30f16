"""Outward-rounded rational interval helpers and certified bounds for exp."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .exactpoly import IntPoly


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def sign(self):
        """+1/-1 if the interval excludes zero, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def __add__(self, o):
        if not isinstance(o, Interval):
            return Interval(self.lo + o, self.hi + o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __mul__(self, o):
        if not isinstance(o, Interval):
            o = Fraction(o)
            return Interval(self.lo * o, self.hi * o) if o >= 0 else Interval(self.hi * o, self.lo * o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def abs_max(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def rounded(self, bits: int) -> "Interval":
        return Interval(round_down(self.lo, bits), round_up(self.hi, bits))


def _scale_exp(q: Fraction, bits: int) -> int:
    """Power-of-two exponent e so that q / 2**e has about ``bits`` integer bits."""
    n, d = abs(q.numerator), q.denominator
    return n.bit_length() - d.bit_length() - bits


def round_down(q: Fraction, bits: int) -> Fraction:
    """Largest dyadic rational <= q with roughly ``bits`` significant bits."""
    if q.denominator & (q.denominator - 1) == 0 and q.denominator.bit_length() <= bits + 1:
        return q
    e = _scale_exp(q, bits)
    if e >= 0:
        return Fraction(q.numerator // (q.denominator << e) << e)
    return Fraction((q.numerator << -e) // q.denominator, 1 << -e)


def round_up(q: Fraction, bits: int) -> Fraction:
    return -round_down(-q, bits)


def poly_range(p: IntPoly, lo: Fraction, hi: Fraction) -> Interval:
    """An interval containing p([lo, hi]) (Taylor expansion at the midpoint)."""
    c = (lo + hi) / 2
    r = (hi - lo) / 2
    cs = [Fraction(x) for x in p.coeffs]
    n = len(cs)
    if n == 0:
        return Interval(Fraction(0), Fraction(0))
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] += c * cs[j + 1]
    tail = Fraction(0)
    rk = Fraction(1)
    for ek in cs[1:]:
        rk *= r
        tail += abs(ek) * rk
    return Interval(cs[0] - tail, cs[0] + tail)


# ---------------------------------------------------------------------------
# exp
# ---------------------------------------------------------------------------

LN2_UPPER = Fraction(6932, 10000)  # > ln 2
LN2_LOWER = Fraction(6931, 10000)  # < ln 2


def _exp_small_fixed(X: int, p: int) -> tuple[int, int]:
    """Bounds (lo, hi) on 2**p * exp(X / 2**p) for 0 <= X <= 2**(p-1)."""
    one = 1 << p
    # lower: truncated series with every term rounded down
    t = one
    s = one
    n = 1
    while t:
        t = (t * X) // (n << p)
        s += t
        n += 1
    lo = s
    # upper: the same with terms rounded up, plus a bound on the tail
    t = one
    s = one
    n = 1
    while True:
        t = -((-t * X) // (n << p))
        s += t
        n += 1
        if t <= 1:
            break
    nxt = -((-t * X) // (n << p))
    hi = s + 2 * nxt + 2
    return lo, hi


def exp_bounds_fixed(q_lo: Fraction, q_hi: Fraction, p: int) -> tuple[Fraction, Fraction]:
    """Rationals lo <= exp(q_lo) and hi >= exp(q_hi), computed with p working bits."""
    return _exp_point(q_lo, p, False), _exp_point(q_hi, p, True)


def _exp_point(q: Fraction, p: int, upper: bool) -> Fraction:
    if q == 0:
        return Fraction(1)
    if q < 0:
        # exp(q) = 1 / exp(-q): bound the reciprocal the opposite way
        v = _exp_point(-q, p, not upper)
        return round_up(1 / v, p) if upper else round_down(1 / v, p)
    # argument reduction q = r * 2**k with r <= 1/2
    k = 0
    while q > Fraction(1, 2) * (1 << k):
        k += 1
    # fixed point X ~ 2**p * q / 2**k, rounded in the safe direction
    num = q.numerator << p
    den = q.denominator << k
    X = -((-num) // den) if upper else num // den
    lo, hi = _exp_small_fixed(X, p)
    v = hi if upper else lo
    for _ in range(k):
        if upper:
            v = -((-v * v) >> p)
        else:
            v = (v * v) >> p
    return Fraction(v, 1 << p)


class ExpEnclosure(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi


def exp_enclosure(q, eps) -> ExpEnclosure:
    """Rational interval (lo, hi) with lo < e^q < hi and hi - lo <= eps."""
    q, eps = Fraction(q), Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if q == 0:
        return ExpEnclosure(1 - eps / 3, 1 + eps / 3)
    # rough size of e^q in bits, to pick the working precision
    mag = int(abs(q) * Fraction(1443, 1000)) + 2
    need = max(0, -_scale_exp(eps, 0))
    p = need + (mag if q > 0 else 0) + 2 * mag.bit_length() + 40
    while True:
        lo, hi = exp_bounds_fixed(q, q, p)
        # q != 0 rational makes e^q irrational, so both bounds are strict
        if hi - lo <= eps:
            return ExpEnclosure(lo, hi)
        p *= 2
