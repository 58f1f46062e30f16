"""Real roots of integer polynomials.

Root bounds, Sturm counting and bisection isolation, Thom encodings,
real algebraic numbers with refinable isolating boxes, and exact signs of
polynomials at such numbers.  Intervals are half-open ``(a, b]``
throughout so that counts over adjacent intervals add up.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, NamedTuple, Sequence

from .exactpoly import IntPoly, der_sequence, gcd_poly, squarefree_part

LESS, EQUAL, GREATER = -1, 0, 1


class RootInterval(NamedTuple):
    """Half-open interval ``(a, b]`` with rational endpoints."""

    a: Fraction
    b: Fraction

    @property
    def width(self) -> Fraction:
        return self.b - self.a

    def __contains__(self, x) -> bool:
        return self.a < x <= self.b


class ThomEncoding(NamedTuple):
    """Signs of ``p', p'', ..., p^(deg p)`` at a root of p."""

    signs: tuple


class SignCondition(NamedTuple):
    signs: tuple


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def _check_nonconstant(p: IntPoly):
    if p.is_zero or p.degree < 1:
        raise ValueError("a polynomial of degree >= 1 is required")


def cauchy_bound(p: IntPoly) -> Fraction:
    """``1 + max |a_j / a_d|``: strictly exceeds every |complex root|."""
    _check_nonconstant(p)
    ad = abs(p.lc)
    return 1 + Fraction(max(abs(c) for c in p.coeffs[:-1]), ad)


def _sqrt_upper(q: Fraction, bits: int = 16) -> Fraction:
    """A rational u with u >= sqrt(q), within about 2**-bits relative."""
    n, d = q.numerator, q.denominator
    scale = max(0, bits - (n.bit_length() - d.bit_length()) // 2)
    num = isqrt(n * d << (2 * scale))
    if num * num != n * d << (2 * scale):
        num += 1
    return Fraction(num, d << scale)


def _sqrt_lower(q: Fraction, bits: int = 16) -> Fraction:
    n, d = q.numerator, q.denominator
    scale = max(0, bits - (n.bit_length() - d.bit_length()) // 2)
    return Fraction(isqrt(n * d << (2 * scale)), d << scale)


def root_bound(p: IntPoly) -> Fraction:
    """A rational strictly larger than every |complex root| of p.

    The smaller of the Cauchy bound and ``sqrt(1 + sum |a_j/a_d|^2)``
    (the latter rounded up to a nearby rational).
    """
    _check_nonconstant(p)
    ad2 = p.lc * p.lc
    s2 = 1 + Fraction(sum(c * c for c in p.coeffs[:-1]), ad2)
    return min(cauchy_bound(p), _sqrt_upper(s2))


def separation_bound(p: IntPoly) -> Fraction:
    """Positive rational below the minimal distance between distinct roots."""
    if p.is_zero or p.degree < 2:
        raise ValueError("separation bound needs degree >= 2")
    d = p.degree
    h = p.height
    # square of d^(-(d+2)/2) (d+1)^((1-d)/2) H^(1-d)
    sq = Fraction(1, d ** (d + 2) * (d + 1) ** (d - 1) * h ** (2 * d - 2))
    return _sqrt_lower(sq)


def _isolation_seed(p: IntPoly) -> Fraction:
    """Power of two B with every real root of p inside (-B, B)."""
    lc = abs(p.lc)
    d = p.degree
    e = 0
    for k in range(1, d + 1):
        c = abs(p[d - k])
        if c:
            t = c.bit_length() - lc.bit_length() + 1  # 2**t > c / lc
            e = max(e, -(-t // k))
    fujiwara = Fraction(2 ** (e + 2))
    return min(fujiwara, Fraction(1 + p.height))


# ---------------------------------------------------------------------------
# Sturm sequences
# ---------------------------------------------------------------------------


@lru_cache(maxsize=2048)
def sturm_sequence(p: IntPoly) -> tuple:
    """Sturm sequence of the squarefree part of p, each term made primitive.

    Every term is a positive multiple of the classical signed remainder,
    so sign variations are unaffected.
    """
    q = squarefree_part(p)
    seq = [q, q.derivative().primitive()]
    while seq[-1].degree > 0:
        a, b = seq[-2], seq[-1]
        r = a.prem(b)
        if b.lc < 0 and (a.degree - b.degree + 1) % 2:
            r = -r
        r = (-r).primitive()
        if r.is_zero:
            break
        seq.append(r)
    return tuple(seq)


def _variations(seq, x: Fraction) -> int:
    n, d = x.numerator, x.denominator
    v = 0
    last = 0
    for q in seq:
        s = _sign(q.eval_homogeneous(n, d))
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _variations_inf(seq, positive: bool) -> int:
    v = 0
    last = 0
    for q in seq:
        s = _sign(q.lc)
        if not positive and q.degree % 2:
            s = -s
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def sturm_count(p: IntPoly, a, b) -> int:
    """Number of distinct real roots of p in ``(a, b]``.

    ``a`` may be ``-inf`` and ``b`` may be ``+inf`` (floats) for unbounded ends.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    if not a < b:
        raise ValueError("need a < b")
    if p.degree < 1:
        return 0
    seq = sturm_sequence(p)
    va = _variations_inf(seq, False) if a == float("-inf") else _variations(seq, _frac(a))
    vb = _variations_inf(seq, True) if b == float("inf") else _variations(seq, _frac(b))
    return va - vb


def isolate_roots(p: IntPoly, eps=None) -> list[RootInterval]:
    """Disjoint ``(a, b]`` intervals, each holding exactly one real root of p.

    With ``eps`` every interval also has width at most ``eps``.  Bisection
    is seeded by a power-of-two root bound, so endpoints are dyadic.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    if eps is not None:
        eps = _frac(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
    if p.degree < 1:
        return []
    seq = sturm_sequence(p)
    B = _isolation_seed(p)
    out = []
    stack = [(-B, B, _variations(seq, -B), _variations(seq, B))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1 and (eps is None or b - a <= eps):
            out.append(RootInterval(a, b))
            continue
        m = (a + b) / 2
        vm = _variations(seq, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# algebraic numbers
# ---------------------------------------------------------------------------


def _taylor_coeffs(p: IntPoly, c: Fraction) -> list:
    """Coefficients of p(c + t) in powers of t."""
    cs = [Fraction(x) for x in p.coeffs]
    n = len(cs)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] += c * cs[j + 1]
    return cs


def _sign_on_box(q: IntPoly, a: Fraction, b: Fraction):
    """Sign of q on [a, b] if it is certifiably constant and nonzero, else None."""
    c = (a + b) / 2
    r = (b - a) / 2
    e = _taylor_coeffs(q, c)
    tail = Fraction(0)
    rk = Fraction(1)
    for ek in e[1:]:
        rk *= r
        tail += abs(ek) * rk
    if abs(e[0]) > tail:
        return _sign(e[0])
    return None


class AlgebraicNumber:
    """A real root of an integer polynomial, located by an isolating box.

    ``defpoly`` is the polynomial the number was constructed from; the box
    ``(a, b]`` contains exactly one root of its squarefree part.  The box
    may be shrunk at any time (thread-safe); the Thom encoding is computed
    lazily and never changes.
    """

    __slots__ = ("defpoly", "_sqf", "_box", "_exact", "_thom", "_lock", "_sa", "_sb")

    def __init__(self, defpoly: IntPoly, box: RootInterval, *, _checked: bool = False):
        if defpoly.is_zero or defpoly.degree < 1:
            raise ValueError("algebraic numbers need a non-constant defining polynomial")
        self.defpoly = defpoly
        self._sqf = squarefree_part(defpoly)
        a, b = _frac(box[0]), _frac(box[1])
        if not _checked and sturm_count(self._sqf, a, b) != 1:
            raise ValueError("box does not isolate a single root")
        self._lock = threading.RLock()
        self._thom = None
        self._exact = None
        self._box = RootInterval(a, b)
        self._normalize()

    @classmethod
    def from_rational(cls, q) -> "AlgebraicNumber":
        q = _frac(q)
        p = IntPoly([-q.numerator, q.denominator])
        return cls(p, RootInterval(q - 1, q), _checked=True)

    # internal: make the endpoint signs usable for sign-change bisection
    def _normalize(self):
        a, b = self._box
        sq = self._sqf
        sb = sq.sign_at(b)
        if sb == 0:
            self._exact = b
            self._sa = self._sb = 0
            return
        sa = sq.sign_at(a)
        while sa == 0:
            m = (a + b) / 2
            sm = sq.sign_at(m)
            if sm == 0:
                self._exact = m
                self._box = RootInterval(a, m)
                self._sa = self._sb = 0
                return
            if sturm_count(sq, m, b) == 1:
                a, sa = m, sm
            else:
                b, sb = m, sm
        self._box = RootInterval(a, b)
        self._sa, self._sb = sa, sb

    @property
    def box(self) -> RootInterval:
        return self._box

    @property
    def exact(self):
        """The value as a Fraction when it is known to be rational, else None."""
        return self._exact

    def _halve(self):
        a, b = self._box
        if self._exact is not None:
            self._box = RootInterval((a + b) / 2, b)
            return
        m = (a + b) / 2
        sm = self._sqf.sign_at(m)
        if sm == 0:
            self._exact = m
            self._box = RootInterval(a, m)
        elif sm == self._sa:
            self._box = RootInterval(m, b)
        else:
            self._box = RootInterval(a, m)

    def refine(self, eps) -> RootInterval:
        eps = _frac(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        with self._lock:
            while self._box.width > eps:
                self._halve()
            return self._box

    @property
    def thom(self) -> ThomEncoding:
        if self._thom is None:
            ders = der_sequence(self.defpoly)[1:]
            self._thom = ThomEncoding(tuple(sign_poly_at(q, self) for q in ders))
        return self._thom

    def approx(self, bits: int = 53) -> float:
        box = self.refine(Fraction(1, 1 << bits))
        return float(box.b)

    def __float__(self):
        return self.approx()

    def __repr__(self):
        a, b = self._box
        if self._exact is not None:
            return f"AlgebraicNumber({self._exact})"
        return f"AlgebraicNumber(root of {self.defpoly} in ({a}, {b}])"

    def _cmp(self, other):
        if not isinstance(other, AlgebraicNumber):
            other = AlgebraicNumber.from_rational(other)
        return compare_algebraic(self, other)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    __hash__ = None


def sign_poly_at(q: IntPoly, x: AlgebraicNumber) -> int:
    """Exact sign of q at the algebraic number x."""
    if q.is_zero:
        return 0
    if q.degree == 0:
        return _sign(q.lc)
    if x.exact is not None:
        return q.sign_at(x.exact)
    g = gcd_poly(x._sqf, q)
    with x._lock:
        if g.degree >= 1:
            a, b = x.box
            # x is the only root of sqf in the box, and g divides sqf
            if sturm_count(g, a, b) >= 1:
                return 0
        while True:
            if x.exact is not None:
                return q.sign_at(x.exact)
            a, b = x.box
            s = _sign_on_box(q, a, b)
            if s is not None:
                return s
            x._halve()


def refine_box(x: AlgebraicNumber, eps) -> RootInterval:
    return x.refine(eps)


def _same_root(x: AlgebraicNumber, y: AlgebraicNumber) -> bool:
    g = gcd_poly(x._sqf, y._sqf)
    if g.degree < 1:
        return False
    if sign_poly_at(g, x) != 0 or sign_poly_at(g, y) != 0:
        return False
    while True:
        ax, bx = x.box
        ay, by = y.box
        if bx <= ay or by <= ax:
            return False
        lo, hi = min(ax, ay), max(bx, by)
        if sturm_count(g, lo, hi) == 1:
            return True
        x.refine(x.box.width / 2)
        y.refine(y.box.width / 2)


def compare_algebraic(x: AlgebraicNumber, y: AlgebraicNumber) -> int:
    """-1, 0 or 1 as x is less than, equal to or greater than y."""
    if x is y:
        return EQUAL
    if x.exact is not None and y.exact is not None:
        return _sign(x.exact - y.exact)
    if x.exact is not None:
        return -sign_poly_at_shift(y, x.exact)
    if y.exact is not None:
        return sign_poly_at_shift(x, y.exact)
    ax, bx = x.box
    ay, by = y.box
    if bx <= ay:
        return LESS
    if by <= ax:
        return GREATER
    if _same_root(x, y):
        return EQUAL
    while True:
        ax, bx = x.box
        ay, by = y.box
        if bx <= ay:
            return LESS
        if by <= ax:
            return GREATER
        x.refine(x.box.width / 2)
        y.refine(y.box.width / 2)


def sign_poly_at_shift(x: AlgebraicNumber, r: Fraction) -> int:
    """Sign of ``x - r`` for rational r."""
    r = _frac(r)
    return sign_poly_at(IntPoly([-r.numerator, r.denominator]), x)


def thom_roots(p: IntPoly) -> list[AlgebraicNumber]:
    """All distinct real roots of p, ascending, as algebraic numbers."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.degree < 1:
        return []
    return [AlgebraicNumber(p, box, _checked=True) for box in isolate_roots(p)]


def merge_roots(groups: Iterable[Sequence[AlgebraicNumber]]) -> list[AlgebraicNumber]:
    """Sorted union of several root lists with duplicates removed."""
    from functools import cmp_to_key

    allr = [r for g in groups for r in g]
    allr.sort(key=cmp_to_key(compare_algebraic))
    out = []
    for r in allr:
        if not out or compare_algebraic(out[-1], r) != EQUAL:
            out.append(r)
    return out


def feasible_sign_conditions_per_root(p0: IntPoly, ps: Sequence[IntPoly]):
    """``[(root, SignCondition), ...]`` for the real roots of p0 in ascending order."""
    if p0.is_zero:
        raise ValueError("p0 must be nonzero")
    out = []
    for r in thom_roots(p0):
        out.append((r, SignCondition(tuple(sign_poly_at(q, r) for q in ps))))
    return out


def feasible_sign_conditions(p0: IntPoly, ps: Sequence[IntPoly]) -> list[SignCondition]:
    """Sign conditions of ``ps`` realised at real roots of p0 (first-seen order)."""
    seen = []
    for _, sc in feasible_sign_conditions_per_root(p0, ps):
        if sc not in seen:
            seen.append(sc)
    return seen
