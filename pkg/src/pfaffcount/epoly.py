"""Exact zero counting for E-polynomials ``f(x) = F(x, e^{h(x)})``.

The sign oracle needed by the generic counter is realised without any
numerical trust: by Lindemann's theorem ``G(a, e^{h(a)})`` can only vanish
when ``G(a, Y)`` is identically zero or ``h(a) = 0``, and both cases are
decided exactly.  Every other sign is nonzero, so certified interval
evaluation at increasing precision is guaranteed to settle it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from ._interval import (
    LN2_LOWER,
    LN2_UPPER,
    ExpEnclosure,
    Interval,
    exp_bounds_fixed,
    exp_enclosure,
    poly_range,
)
from .errors import ConsistencyError
from .exactpoly import BiPoly, IntPoly, content_and_primitive, gcd_poly, resultant
from .pfaffian import (
    CancelToken,
    PfaffianSystem,
    ZeroCounter,
    _variations,
    chain_factors,
    reduce_resultant_nonzero,
)
from .realroots import (
    AlgebraicNumber,
    RootInterval,
    compare_algebraic,
    root_bound,
    sign_poly_at,
    sturm_count,
    thom_roots,
)

__all__ = [
    "EPolynomial",
    "ExpEnclosure",
    "InfinitySign",
    "ESignOracle",
    "EPolyCounter",
    "exp_enclosure",
    "sign_exp_alg",
    "root_box",
    "e_sign_determination",
    "epoly_derivative",
    "sign_at_infinity",
    "root_magnitude_bound",
    "count_zeros_epoly",
    "isolate_zeros_epoly",
]

_X = IntPoly([0, 1])
_START_BITS = 32


def _sign(v) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class EPolynomial:
    """``F(x, e^{h(x)})`` with F in ZZ[X, Y] and h in ZZ[X] of positive degree."""

    F: BiPoly
    h: IntPoly

    def __post_init__(self):
        if self.h.is_zero or self.h.degree < 1:
            raise ValueError("h must have positive degree")

    @property
    def system(self) -> PfaffianSystem:
        return PfaffianSystem(BiPoly([IntPoly(), self.h.derivative()]))

    @property
    def degree(self) -> int:
        return max(self.F.total_degree, 0)

    @property
    def height(self) -> int:
        return max(self.F.height, self.h.height)


class InfinitySign(NamedTuple):
    at_plus: int
    at_minus: int
    j0: int
    d_y: int


def epoly_derivative(G: BiPoly, h: IntPoly) -> BiPoly:
    """The polynomial defining g' for ``g = G(x, e^{h(x)})``."""
    D = G.diff_x() + G.diff_y() * BiPoly([IntPoly(), h.derivative()])
    if __debug__ and not G.is_zero and not D.is_zero:
        dx, dy, delta = max(G.deg_x, 0), G.deg_y, h.degree
        assert D.deg_x <= delta - 1 + dx
        assert D.height <= G.height * (dx + dy * delta * delta * h.height)
    return D


def _infinity_signs(G: BiPoly, h: IntPoly) -> InfinitySign:
    if G.is_zero:
        raise ValueError("zero polynomial has no sign at infinity")
    dy = G.deg_y
    j0 = next(j for j, c in enumerate(G.ycoeffs) if c)
    low, top = G.ycoeffs[j0], G.ycoeffs[dy]
    a = low if h.lc < 0 else top
    plus = _sign(a.lc)
    twisted = h.lc if h.degree % 2 == 0 else -h.lc
    a = low if twisted < 0 else top
    minus = _sign(a.lc) if a.degree % 2 == 0 else -_sign(a.lc)
    return InfinitySign(plus, minus, j0, dy)


def sign_at_infinity(ep: EPolynomial) -> InfinitySign:
    """Limit signs of f at +inf and -inf."""
    return _infinity_signs(ep.F, ep.h)


def root_magnitude_bound(ep: EPolynomial) -> int:
    """Every real zero of f has absolute value at most this integer."""
    d = ep.degree
    delta = ep.h.degree
    H = ep.height
    return 1 + (d + 1) * H * H * max((d + 1) * (1 + 2 * H * H), 2 * math.factorial(2 * d // delta + 1))


# ---------------------------------------------------------------------------
# signs of e^beta - alpha
# ---------------------------------------------------------------------------


def _closed_bounds(x: AlgebraicNumber, bits: int) -> tuple[Fraction, Fraction]:
    """Closed rational interval containing x, of width <= 2**-bits."""
    if x.exact is not None:
        return x.exact, x.exact
    box = x.refine(Fraction(1, 1 << bits))
    if x.exact is not None:
        return x.exact, x.exact
    return box.a, box.b


def _exp_interval(lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    mag = int(max(hi, 0) * Fraction(1443, 1000)) + 2
    return exp_bounds_fixed(lo, hi, bits + mag + 2 * mag.bit_length() + 24)


def _ln_bounds(q: Fraction) -> tuple[Fraction, Fraction]:
    """Crude rational bounds lo <= ln q <= hi for q > 0, from bit lengths."""
    e = q.numerator.bit_length() - q.denominator.bit_length()
    lo, hi = e - 1, e + 1  # 2**(e-1) < q < 2**(e+1)
    return (lo * (LN2_LOWER if lo >= 0 else LN2_UPPER),
            hi * (LN2_UPPER if hi >= 0 else LN2_LOWER))


def waldschmidt_bits(d: int, H: int) -> int:
    """``log2(1/c)`` for the gap constant c that separates e^beta from alpha.

    Used only as a termination certificate: a correct run never gets near it.
    """
    d = max(d, 2)
    H = max(H, 2)
    logH = (H - 1).bit_length()  # ceil(log2 H)
    return (2 ** 41) * d ** 6 * (5 * d + 4 * logH) * math.ceil(
        math.log2(2 ** (d + 1) * (d + 1) * H)
    )


@dataclass
class Trace:
    """Counters an E-sign computation fills in (tests and the CLI read them)."""

    escalations: int = 0
    sign_exp_calls: int = 0
    max_bits: int = 0


def sign_exp_alg(alpha: AlgebraicNumber, beta: AlgebraicNumber, trace: Trace | None = None) -> int:
    """Exact sign of ``e^beta - alpha``.

    The result is 0 only for beta = 0 and alpha = 1; that case is detected
    exactly.  Otherwise both numbers are approximated with a working
    tolerance that starts at 2**-32 and is squared on every failure.
    """
    if trace is not None:
        trace.sign_exp_calls += 1
    if sign_poly_at(_X, beta) == 0:
        return -sign_poly_at(IntPoly([-1, 1]), alpha)
    if sign_poly_at(_X, alpha) <= 0:
        return 1
    d = max(alpha.defpoly.degree, beta.defpoly.degree)
    H = max(alpha.defpoly.height, beta.defpoly.height)
    limit = waldschmidt_bits(d, H)
    bits = _START_BITS
    while True:
        blo, bhi = _closed_bounds(beta, bits)
        alo, ahi = _closed_bounds(alpha, bits)
        if trace is not None:
            trace.max_bits = max(trace.max_bits, bits)
        # compare beta with ln(alpha) first; this avoids forming huge e^beta
        if alo > 0:
            if blo > _ln_bounds(ahi)[1]:
                return 1
            if bhi < _ln_bounds(alo)[0]:
                return -1
        elo, ehi = _exp_interval(blo, bhi, bits)
        # e^beta is irrational here, so the enclosure bounds are strict
        if elo >= ahi:
            return 1
        if ehi <= alo:
            return -1
        if bits > limit:
            raise ConsistencyError("precision exceeded the theoretical gap bound")
        bits *= 2
        if trace is not None:
            trace.escalations += 1


# ---------------------------------------------------------------------------
# RootBox and E-SignDetermination
# ---------------------------------------------------------------------------


def _value_of_h(h: IntPoly, alpha: AlgebraicNumber) -> AlgebraicNumber:
    """h(alpha) as a root of ``S(T) = Res_X(L, T - h(X))``."""
    if alpha.exact is not None:
        return AlgebraicNumber.from_rational(h(alpha.exact))
    L = alpha._sqf
    S = resultant(BiPoly.from_x(L), BiPoly([-h, IntPoly([1])]), wrt="x")
    bits = 8
    while True:
        a, b = _closed_bounds(alpha, bits)
        if a == b:
            return AlgebraicNumber.from_rational(h(a))
        r = poly_range(h, a, b)
        lo = r.lo - r.width / 2 - Fraction(1, 1 << bits)
        if sturm_count(S, lo, r.hi) == 1:
            return AlgebraicNumber(S, RootInterval(lo, r.hi), _checked=True)
        bits *= 2


def root_box(h: IntPoly, alpha: AlgebraicNumber, M: IntPoly, lambdas: Sequence[AlgebraicNumber],
             trace: Trace | None = None) -> int:
    """Index i0 with ``lambda_{i0} < e^{h(alpha)} < lambda_{i0+1}`` (1-based, sentinels ±inf)."""
    if sign_poly_at(h, alpha) == 0:
        raise ValueError("h(alpha) = 0; this case is handled before RootBox")
    for u, v in zip(lambdas, lambdas[1:]):
        if compare_algebraic(u, v) >= 0:
            raise ValueError("roots of M must be sorted ascending and distinct")
    beta = _value_of_h(h, alpha)
    for i, lam in enumerate(lambdas):
        if sign_exp_alg(lam, beta, trace) < 0:
            return i
    return len(lambdas)


def _separator(lambdas: Sequence[AlgebraicNumber], i0: int, M: IntPoly) -> Fraction:
    """A rational strictly between lambda_{i0} and lambda_{i0+1} (1-based)."""
    m = len(lambdas)
    if m == 0:
        return Fraction(1)
    if i0 == 0:
        return -root_bound(M) - 1
    if i0 == m:
        return root_bound(M) + 1
    lo, hi = lambdas[i0 - 1], lambdas[i0]
    bits = 4
    while True:
        _, a = _closed_bounds(lo, bits)
        b, _ = _closed_bounds(hi, bits)
        if a < b:
            return (a + b) / 2
        bits *= 2


def e_sign_determination(G: BiPoly, h: IntPoly, L: IntPoly, roots: Sequence[AlgebraicNumber],
                         trace: Trace | None = None) -> list[int]:
    """Signs of ``G(a, e^{h(a)})`` at real roots a of L, by exact means only."""
    if h.degree < 1:
        raise ValueError("h must have positive degree")
    if G.is_zero:
        return [0] * len(roots)
    for a in roots:
        if sign_poly_at(L, a) != 0:
            raise ValueError(f"{a!r} is not a root of L")
    cont, _ = content_and_primitive(G)
    R = gcd_poly(L, h)
    G_at_1 = G.at_y(1)
    out: list = [None] * len(roots)
    pending = []
    for k, a in enumerate(roots):
        if sign_poly_at(cont, a) == 0:  # G(a, Y) is identically zero
            out[k] = 0
        elif R.degree >= 1 and sign_poly_at(R, a) == 0:  # h(a) = 0, so e^{h(a)} = 1
            out[k] = sign_poly_at(G_at_1, a)
        else:
            pending.append(k)
    if not pending:
        return out
    # drop the roots of L where G(., Y) vanishes identically so that M != 0
    Lr = L.normalized()
    c = gcd_poly(Lr, cont) if cont.degree >= 1 else IntPoly([1])
    if c.degree >= 1:
        Lr = Lr.exact_div(c)
    M = resultant(BiPoly.from_x(Lr), G, wrt="x")
    if M.is_zero:
        raise ConsistencyError("Res_X(L, G) vanished after removing common content")
    lambdas = thom_roots(M) if M.degree >= 1 else []
    for k in pending:
        a = roots[k]
        i0 = root_box(h, a, M, lambdas, trace)
        w = _separator(lambdas, i0, M)
        s = sign_poly_at(G.at_y(w), a)
        if s == 0:
            raise ConsistencyError("zero sign outside the Lindemann cases")
        out[k] = s
    return out


# ---------------------------------------------------------------------------
# the oracle
# ---------------------------------------------------------------------------


def _ln_upper(B: Fraction) -> Fraction:
    """Rational upper bound for ln B (B >= 1)."""
    n = -(-B.numerator // B.denominator)
    return n.bit_length() * LN2_UPPER


class ESignOracle:
    """Sign oracle for ``phi = e^h``.

    ``strategy="enclosure"`` (default) settles the exact zero cases first,
    then evaluates ``G(a, e^{h(a)})`` with certified interval arithmetic,
    squaring the tolerance until the sign is determined.  Very large
    ``|h(a)|`` are handled by a dominance test that never forms e^{h(a)}.
    ``strategy="rootbox"`` runs E-SignDetermination literally (resultants,
    RootBox and SignExpAlg); it is much slower and serves as a cross-check.
    """

    def __init__(self, h: IntPoly, strategy: str = "enclosure", trace: Trace | None = None,
                 cancel: CancelToken | None = None):
        if strategy not in ("enclosure", "rootbox"):
            raise ValueError("strategy must be 'enclosure' or 'rootbox'")
        if h.degree < 1:
            raise ValueError("h must have positive degree")
        self.h = h
        self.strategy = strategy
        self.trace = trace if trace is not None else Trace()
        self.cancel = cancel or CancelToken()
        self._cache = {}

    def domain(self):
        return [(float("-inf"), float("inf"))]

    def signs(self, G: BiPoly, points: Sequence[AlgebraicNumber]) -> list[int]:
        return [self.sign(G, p) for p in points]

    def sign(self, G: BiPoly, x: AlgebraicNumber) -> int:
        key = (G, x.exact if x.exact is not None else id(x))
        if key in self._cache:
            return self._cache[key][0]
        if self.strategy == "rootbox":
            (s,) = e_sign_determination(G, self.h, x._sqf, [x], self.trace)
        else:
            s = self._sign_enclosure(G, x)
        # keep x alive so that id(x) stays unique while cached
        self._cache[key] = (s, x)
        return s

    def _sign_enclosure(self, G: BiPoly, x: AlgebraicNumber) -> int:
        if G.is_zero:
            return 0
        cont, _ = content_and_primitive(G)
        if sign_poly_at(cont, x) == 0:
            return 0
        h = self.h
        if sign_poly_at(h, x) == 0:
            return sign_poly_at(G.at_y(1), x)
        ys = G.ycoeffs
        nz = [j for j, a in enumerate(ys) if a and sign_poly_at(a, x) != 0]
        top, bot = nz[-1], nz[0]
        s_top, s_bot = sign_poly_at(ys[top], x), sign_poly_at(ys[bot], x)
        if top == bot:
            return s_top
        bits = _START_BITS
        while True:
            self.cancel.check()
            a, b = _closed_bounds(x, bits)
            hr = poly_range(h, a, b)
            rng = [poly_range(ys[j], a, b) if j in nz else None for j in range(len(ys))]
            s = self._dominance(hr, rng, top, bot, s_top, s_bot)
            if s is not None:
                return s
            s = self._direct(hr, rng, bits)
            if s is not None:
                return s
            bits *= 2
            self.trace.escalations += 1
            self.trace.max_bits = max(self.trace.max_bits, bits)
            if bits > 1 << 24:
                raise ConsistencyError("E-sign evaluation failed to separate from zero")

    @staticmethod
    def _dominance(hr: Interval, rng, top, bot, s_top, s_bot):
        if hr.lo > 0:
            den = min(abs(rng[top].lo), abs(rng[top].hi)) if rng[top].sign() else 0
            if den:
                B = 1 + max(r.abs_max() for r in rng[:top] if r is not None) / den
                if hr.lo > _ln_upper(B):
                    return s_top
        if hr.hi < 0:
            den = min(abs(rng[bot].lo), abs(rng[bot].hi)) if rng[bot].sign() else 0
            if den:
                B = 1 + max(r.abs_max() for r in rng[bot + 1:] if r is not None) / den
                if -hr.hi > _ln_upper(B):
                    return s_bot
        return None

    @staticmethod
    def _direct(hr: Interval, rng, bits):
        elo, ehi = _exp_interval(hr.lo, hr.hi, bits)
        y = Interval(elo, ehi)
        acc = None
        for r in reversed(rng):
            term = r if r is not None else Interval(Fraction(0), Fraction(0))
            acc = term if acc is None else acc * y + term
            acc = acc.rounded(bits + 64)
        return acc.sign()


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


class EPolyCounter:
    """Zero counting and isolation for one E-polynomial.

    Build once and query many ranges; the subresultant chain and all sign
    information are cached between queries.
    """

    def __init__(self, ep: EPolynomial, strategy: str = "enclosure",
                 cancel: CancelToken | None = None):
        if ep.F.is_zero:
            raise ValueError("F must be nonzero")
        self.ep = ep
        self.cancel = cancel or CancelToken()
        self.trace = Trace()
        self.oracle = ESignOracle(ep.h, strategy, self.trace, self.cancel)
        self.poly = None
        self.zc = None
        if ep.F.deg_y == 0:
            self.poly = ep.F.coeff(0)
        else:
            P = reduce_resultant_nonzero(ep.F, ep.system)
            if P.deg_y == 0:
                self.poly = P.coeff(0)
            else:
                self.zc = ZeroCounter(P, ep.system, self.oracle, self.cancel)
        self._cut = None

    # -- statistics ----------------------------------------------------
    @property
    def chain_length(self) -> int:
        return self.zc.chain.N if self.zc else 0

    @property
    def l_roots(self) -> int:
        return len(self.zc.critical_roots) if self.zc else 0

    @property
    def oracle_queries(self) -> int:
        return self.zc.stats.oracle_queries if self.zc else 0

    # -- counting ------------------------------------------------------
    def is_zero_at(self, x) -> bool:
        x = Fraction(x)
        if self.zc is None:
            return self.poly(x) == 0
        return self.zc.is_zero_at(x)

    def count(self, a, b) -> int:
        """Distinct zeros in the closed interval [a, b]."""
        a, b = Fraction(a), Fraction(b)
        if not a < b:
            raise ValueError("need a < b")
        if self.zc is None:
            p = self.poly
            if p.degree < 1:
                return 0
            return sturm_count(p, a, b) + (p(a) == 0)
        return self.zc.count(a, b)

    def cut_point(self) -> int:
        """An integer beyond every zero of f and every critical root."""
        if self._cut is None:
            m = root_magnitude_bound(self.ep)
            if self.zc is not None:
                for p in chain_factors(self.zc.chain):
                    m = max(m, math.ceil(root_bound(p)) + 1)
            self._cut = m
        return self._cut

    def count_real(self) -> int:
        if self.zc is None:
            p = self.poly
            if p.degree < 1:
                return 0
            return sturm_count(p, float("-inf"), float("inf"))
        zc = self.zc
        Mp = self.cut_point()
        inner = zc.count(-Mp, Mp)
        R = zc.chain.R
        inf = [_infinity_signs(r, self.ep.h) for r in R]
        right = AlgebraicNumber.from_rational(Mp)
        sig = zc.sigma_right_of(right)
        tail_plus = zc.v_right(right, sig) - _variations(s * t.at_plus for s, t in zip(sig, inf))
        left = AlgebraicNumber.from_rational(-Mp)
        sig = zc.sigma_left_of(left)
        tail_minus = _variations(s * t.at_minus for s, t in zip(sig, inf)) - zc.v_left(left, sig)
        return inner + tail_plus + tail_minus

    def isolate(self, eps) -> list[tuple[Fraction, Fraction]]:
        """Disjoint closed intervals ``[lo, hi]`` of width <= eps, one zero in each."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        total = self.count_real()
        if total == 0:
            return []
        Mp = self.cut_point()

        def half_open(lo, hi):
            return self.count(lo, hi) - self.is_zero_at(lo)

        lo0, hi0 = Fraction(-Mp - 1), Fraction(Mp)
        if half_open(lo0, hi0) != total:
            raise ConsistencyError("zeros found outside the magnitude bound")
        out = []
        stack = [(lo0, hi0, total)]
        while stack:
            self.cancel.check()
            lo, hi, n = stack.pop()
            if n == 0:
                continue
            if n == 1 and hi - lo <= eps:
                out.append((lo, hi))
                continue
            m = (lo + hi) / 2
            left = half_open(lo, m)
            stack.append((m, hi, n - left))
            stack.append((lo, m, left))
        out.sort()
        # make the closed intervals disjoint: a shared endpoint, or a zero
        # sitting on lo (it belongs to the left neighbour), moves lo right
        prev_hi = None
        for k, (lo, hi) in enumerate(out):
            if lo == prev_hi or self.is_zero_at(lo):
                step = (hi - lo) / 2
                while self.count(lo + step, hi) != 1:
                    step /= 2
                out[k] = (lo + step, hi)
            prev_hi = hi
        return out


def count_zeros_epoly(ep: EPolynomial, a=None, b=None, *, strategy: str = "enclosure",
                      cancel: CancelToken | None = None) -> int:
    """Distinct real zeros of f in [a, b], or on the whole line when a, b are None."""
    counter = EPolyCounter(ep, strategy, cancel)
    if a is None and b is None:
        return counter.count_real()
    if a is None or b is None:
        raise ValueError("give both endpoints or neither")
    return counter.count(a, b)


def isolate_zeros_epoly(ep: EPolynomial, eps, *, strategy: str = "enclosure",
                        cancel: CancelToken | None = None) -> list[tuple[Fraction, Fraction]]:
    return EPolyCounter(ep, strategy, cancel).isolate(eps)
