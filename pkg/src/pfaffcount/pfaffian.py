"""Sturm sequences and zero counting for ``f(x) = F(x, phi(x))``.

Here ``phi`` solves ``phi' = Phi(x, phi)`` for an integer polynomial Phi.
Everything that needs the actual values of phi goes through a
``SignOracle``; the rest is exact polynomial arithmetic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Protocol, Sequence

from .errors import Cancelled, ConsistencyError
from .exactpoly import (
    BiPoly,
    IntPoly,
    content_and_primitive,
    gcd_y,
    pseudo_remainder,
    signed_subresultants,
    squarefree_part_bi,
)
from .realroots import (
    EQUAL,
    AlgebraicNumber,
    compare_algebraic,
    merge_roots,
    sign_poly_at,
    thom_roots,
)

RIGHT, LEFT = "right", "left"
INF = float("inf")


class CancelToken:
    """Cooperative cancellation: long loops call ``check()`` now and then."""

    def __init__(self, timeout: float | None = None):
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self._cancelled = False

    def cancel(self):
        self._cancelled = True

    @property
    def cancelled(self) -> bool:
        if self._cancelled:
            return True
        if self.deadline is not None and time.monotonic() > self.deadline:
            self._cancelled = True
        return self._cancelled

    def check(self):
        if self.cancelled:
            raise Cancelled("computation cancelled")


@dataclass(frozen=True)
class PfaffianSystem:
    """The differential equation ``phi' = Phi(x, phi)``."""

    Phi: BiPoly

    def __post_init__(self):
        if self.Phi.is_zero or self.Phi.deg_y < 1:
            raise ValueError("Phi must have positive degree in Y")

    @property
    def delta_x(self) -> int:
        return max(self.Phi.deg_x, 0)

    @property
    def delta_y(self) -> int:
        return self.Phi.deg_y


class SignOracle(Protocol):
    """Exact signs of ``G(x, phi(x))`` at real algebraic points."""

    def signs(self, G: BiPoly, points: Sequence[AlgebraicNumber]) -> list[int]:
        ...

    def domain(self) -> list[tuple]:
        """Open intervals ``(lo, hi)`` on which phi is defined (``±inf`` allowed)."""
        ...


@dataclass(frozen=True)
class OneSidedSign:
    value: int
    side: str
    order: int


@dataclass(frozen=True)
class SubresChain:
    """The chain ``R_0..R_N`` with ``tau_i = lc(R_i)`` and ``rho_i`` (i >= 2)."""

    R: tuple
    n: tuple
    tau: tuple
    rho: dict

    @property
    def N(self) -> int:
        return len(self.R) - 1


@dataclass(frozen=True)
class SturmSeq:
    polys: tuple
    sigma: tuple
    interval: tuple = (None, None)


def f_tilde(F: BiPoly, sys: PfaffianSystem) -> BiPoly:
    """``dF/dX + dF/dY * Phi``, so that ``f' = F~(x, phi(x))``."""
    return F.diff_x() + F.diff_y() * sys.Phi


def reduce_resultant_nonzero(F: BiPoly, sys: PfaffianSystem) -> BiPoly:
    """A polynomial P with ``Res_Y(P, P~) != 0`` and the same real zeros on the curve."""
    if F.is_zero or F.deg_y < 1:
        raise ValueError("F has degree 0 in Y; use classical Sturm counting instead")
    F = squarefree_part_bi(F)
    cont, F0 = content_and_primitive(F)
    S = gcd_y(F0, f_tilde(F0, sys))
    U = F0.exact_div(S) if S.deg_y > 0 else F0
    return U * cont


def build_F1(F: BiPoly, sys: PfaffianSystem) -> BiPoly:
    Ft = f_tilde(F, sys)
    d = F.deg_y
    if Ft.deg_y < d:
        return Ft
    D = 1 + Ft.deg_y - d
    D += D % 2
    return pseudo_remainder(Ft, F, D)


def build_chain(F: BiPoly, F1: BiPoly) -> SubresChain:
    if F1.is_zero or not F.deg_y > F1.deg_y:
        raise ValueError("build_chain needs deg_Y(F) > deg_Y(F1) and F1 nonzero")
    sr = signed_subresultants(F, F1)
    d = F.deg_y
    R = [F, F1]
    n = [d + 1, d]
    while True:
        nxt = R[-1].deg_y
        n.append(nxt)
        cand = sr.sres[nxt - 1]
        if cand.is_zero:
            break
        R.append(cand)
    N = len(R) - 1
    tau = tuple(r.lc_y for r in R)
    rho = {i: sr.s[n[i]] for i in range(2, N + 2)}
    return SubresChain(tuple(R), tuple(n), tau, rho)


def chain_factors(chain: SubresChain) -> list[IntPoly]:
    """The distinct nonconstant polynomials whose roots split the line."""
    out = []
    for p in list(chain.tau) + [chain.rho[i] for i in range(3, chain.N + 2)]:
        if p.degree >= 1:
            q = p.normalized()
            if q not in out:
                out.append(q)
    return out


def critical_poly_L(chain: SubresChain) -> IntPoly:
    L = IntPoly.const(1)
    for t in chain.tau:
        L = L * t
    for i in range(3, chain.N + 2):
        L = L * chain.rho[i]
    return L


def _eps(k: int) -> int:
    return -1 if (k * (k - 1) // 2) % 2 else 1


def sigma_signs(chain: SubresChain, tau_signs: Sequence[int], rho_signs: dict) -> tuple:
    """The sign vector for an interval on which tau_i and rho_i have the given signs."""
    N = chain.N
    if any(s == 0 for s in tau_signs) or any(s == 0 for s in rho_signs.values()):
        raise ValueError("a chain factor vanishes on the interval")
    sigma = [1, 1]
    if N >= 2:
        delta = chain.n[1] - chain.n[2]
        sigma.append(_eps(delta) * tau_signs[1] ** (delta + 1))
    for i in range(1, N - 1):
        s = rho_signs[i + 2] * tau_signs[i + 1] * rho_signs[i + 1] * tau_signs[i]
        sigma.append(s * sigma[i])
    return tuple(sigma)


def sturm_on_interval(chain: SubresChain, interval, tau_signs, rho_signs) -> SturmSeq:
    sigma = sigma_signs(chain, tau_signs, rho_signs)
    polys = tuple(R * s for R, s in zip(chain.R, sigma))
    return SturmSeq(polys, sigma, tuple(interval))


def multiplicity_bound(G: BiPoly, sys: PfaffianSystem) -> int:
    if G.is_zero:
        raise ValueError("zero polynomial")
    dx, dy = max(G.deg_x, 0), G.deg_y
    return 2 * dx * dy + dx * (sys.delta_y - 1) + (sys.delta_x + 1) * dy


def critical_degree_bound(F: BiPoly, sys: PfaffianSystem) -> int:
    """Upper bound on deg L in terms of the degrees of F and Phi."""
    dx, dy = max(F.deg_x, 0), F.deg_y
    return (2 * dy * dy - dy) * ((sys.delta_y + 3) * dx + sys.delta_x)


def corollary_bound(F: BiPoly, sys: PfaffianSystem) -> int:
    """Upper bound on the number of zeros of f in an open interval of the domain.

    With k <= deg L critical points inside the interval the count formula
    gives at most ``k + (k + 1) * deg_Y(F)`` zeros.
    """
    return (F.deg_y + 1) * (critical_degree_bound(F, sys) + 1) - 1


def _poly_one_sided(p: IntPoly, x: AlgebraicNumber, side: str) -> OneSidedSign:
    q = p
    r = 0
    while True:
        s = sign_poly_at(q, x)
        if s:
            return OneSidedSign(-s if side == LEFT and r % 2 else s, side, r)
        q = q.derivative()
        r += 1


def poly_one_sided_sign(p: IntPoly, x: AlgebraicNumber, side: str) -> int:
    """Sign of the polynomial p just to the right/left of x."""
    if p.is_zero:
        return 0
    return _poly_one_sided(p, x, side).value


def _as_point(x) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    return AlgebraicNumber.from_rational(x)


def one_sided_sign(G: BiPoly, x, side: str, sys: PfaffianSystem, oracle: SignOracle) -> OneSidedSign:
    """Sign of ``G(t, phi(t))`` for t slightly right (or left) of x."""
    if side not in (LEFT, RIGHT):
        raise ValueError("side must be 'left' or 'right'")
    x = _as_point(x)
    if G.is_zero:
        raise ValueError("zero polynomial")
    if G.deg_y == 0:
        # a polynomial in x alone: exact, and outside the multiplicity lemma
        return _poly_one_sided(G.coeff(0), x, side)
    cap = multiplicity_bound(G, sys)
    H = G
    for r in range(cap + 1):
        if H.is_zero:
            break
        (s,) = oracle.signs(H, [x])
        if s:
            if side == LEFT and r % 2:
                s = -s
            return OneSidedSign(s, side, r)
        H = f_tilde(H, sys)
    raise ConsistencyError(
        f"no nonzero derivative within the multiplicity bound {cap} at {x!r}"
    )


def _variations(signs: Iterable[int]) -> int:
    v = 0
    last = 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _check_domain(oracle: SignOracle, a, b):
    for lo, hi in oracle.domain():
        if lo < a and b < hi:
            return
    raise ValueError(f"[{a}, {b}] is not inside the domain of phi")


@dataclass
class CountStats:
    oracle_queries: int = 0
    chain_length: int = 0
    l_roots: int = 0


class _CountingOracle:
    def __init__(self, inner, stats: CountStats):
        self.inner = inner
        self.stats = stats

    def signs(self, G, points):
        self.stats.oracle_queries += len(points)
        return self.inner.signs(G, points)

    def domain(self):
        return self.inner.domain()


class ZeroCounter:
    """Counts zeros of ``F(x, phi(x))`` on closed intervals.

    The subresultant chain, the roots of the critical polynomials and the
    sign information at those roots are computed once and reused, so many
    counts of the same function (as in bisection) are cheap.
    F must satisfy ``Res_Y(F, F~) != 0``; see ``reduce_resultant_nonzero``.
    """

    def __init__(self, F: BiPoly, sys: PfaffianSystem, oracle: SignOracle,
                 cancel: CancelToken | None = None):
        if F.is_zero or F.deg_y < 1:
            raise ValueError("F has degree 0 in Y; use classical Sturm counting instead")
        self.F = F
        self.sys = sys
        self.stats = CountStats()
        self.oracle = _CountingOracle(oracle, self.stats)
        self.cancel = cancel or CancelToken()
        self.F1 = build_F1(F, sys)
        if self.F1.is_zero:
            raise ConsistencyError("F1 vanished although Res_Y(F, F~) should be nonzero")
        self.chain = build_chain(F, self.F1)
        if self.chain.R[-1].deg_y != 0:
            raise ValueError("Res_Y(F, F~) is zero; reduce F first")
        self.stats.chain_length = self.chain.N
        self._roots = None
        self._sigma_cache = {}
        self._side_cache = {}
        self._zero_cache = {}

    @property
    def critical_roots(self) -> list[AlgebraicNumber]:
        """All real roots of the tau_i and rho_i (i >= 3), ascending."""
        if self._roots is None:
            groups = []
            for p in chain_factors(self.chain):
                self.cancel.check()
                groups.append(thom_roots(p))
            self._roots = merge_roots(groups)
            self.stats.l_roots = len(self._roots)
        return self._roots

    def _key(self, x: AlgebraicNumber):
        return x.exact if x.exact is not None else id(x)

    def sigma_right_of(self, x: AlgebraicNumber) -> tuple:
        """Sign vector for the open interval starting just right of x."""
        k = self._key(x)
        if k not in self._sigma_cache:
            ch = self.chain
            ts = [poly_one_sided_sign(t, x, RIGHT) for t in ch.tau]
            rs = {i: poly_one_sided_sign(ch.rho[i], x, RIGHT) for i in ch.rho}
            self._sigma_cache[k] = sigma_signs(ch, ts, rs)
        return self._sigma_cache[k]

    def sigma_left_of(self, x: AlgebraicNumber) -> tuple:
        """Sign vector for the open interval ending just left of x."""
        ch = self.chain
        ts = [poly_one_sided_sign(t, x, LEFT) for t in ch.tau]
        rs = {i: poly_one_sided_sign(ch.rho[i], x, LEFT) for i in ch.rho}
        return sigma_signs(ch, ts, rs)

    def _sides(self, x: AlgebraicNumber, side: str) -> tuple:
        k = (self._key(x), side)
        if k not in self._side_cache:
            out = []
            for R in self.chain.R:
                self.cancel.check()
                out.append(one_sided_sign(R, x, side, self.sys, self.oracle).value)
            self._side_cache[k] = tuple(out)
        return self._side_cache[k]

    def is_zero_at(self, x) -> bool:
        x = _as_point(x)
        k = self._key(x)
        if k not in self._zero_cache:
            (s,) = self.oracle.signs(self.F, [x])
            self._zero_cache[k] = s == 0
        return self._zero_cache[k]

    def v_right(self, x: AlgebraicNumber, sigma: tuple) -> int:
        return _variations(s * t for s, t in zip(sigma, self._sides(x, RIGHT)))

    def v_left(self, x: AlgebraicNumber, sigma: tuple) -> int:
        return _variations(s * t for s, t in zip(sigma, self._sides(x, LEFT)))

    def roots_between(self, a, b) -> list[AlgebraicNumber]:
        """Critical roots strictly inside (a, b); a, b rational or algebraic."""
        a, b = _as_point(a), _as_point(b)
        return [r for r in self.critical_roots
                if compare_algebraic(a, r) < 0 and compare_algebraic(r, b) < 0]

    def count(self, a, b) -> int:
        """Number of distinct zeros of f in the closed interval [a, b]."""
        a, b = Fraction(a), Fraction(b)
        if not a < b:
            raise ValueError("need a < b")
        _check_domain(self.oracle, a, b)
        pa, pb = _as_point(a), _as_point(b)
        pts = [pa] + self.roots_between(pa, pb) + [pb]
        return self.count_points(pts)

    def count_points(self, pts: Sequence[AlgebraicNumber]) -> int:
        """Zero count on [pts[0], pts[-1]] where consecutive points bound
        intervals free of critical roots."""
        total = sum(1 for p in pts if self.is_zero_at(p))
        for lo, hi in zip(pts, pts[1:]):
            self.cancel.check()
            sigma = self.sigma_right_of(lo)
            total += self.v_right(lo, sigma) - self.v_left(hi, sigma)
        return total


def count_zeros_generic(F: BiPoly, sys: PfaffianSystem, a, b, oracle: SignOracle,
                        cancel: CancelToken | None = None) -> int:
    """Exact number of distinct zeros of ``F(x, phi(x))`` in ``[a, b]``."""
    if not Fraction(a) < Fraction(b):
        raise ValueError("need a < b")
    return ZeroCounter(F, sys, oracle, cancel).count(a, b)
