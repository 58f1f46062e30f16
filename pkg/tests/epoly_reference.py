"""Independent numeric reference for real zeros of F(x, e^{h(x)}).

Nothing here uses the package's algorithms: f and f' are built with sympy and
evaluated with mpmath.  Zeros are located by sign changes of f on a grid
(uniform 1/64 steps on [-40, 40], geometric steps beyond, up to a cut M),
bisection, and derivative-based cluster resolution: every sign change of f'
inside a grid cell yields a critical point that is tested for a tangential
zero or a hidden pair of zeros.  Tangential zeros are accepted only if the
relative residual keeps shrinking when the precision is raised.
"""

from fractions import Fraction
import random

import mpmath
import sympy

from pfaffcount.exactpoly import BiPoly, IntPoly

X, Y = sympy.symbols("x y")


def random_instance(rng: random.Random):
    """deg_X, deg_Y in 0..3, deg h in 1..3, coefficients in [-5, 5]."""
    dx, dy, dh = rng.randint(0, 3), rng.randint(0, 3), rng.randint(1, 3)
    while True:
        F = BiPoly.from_terms({(i, j): rng.randint(-5, 5) for i in range(dx + 1) for j in range(dy + 1)})
        if not F.is_zero:
            break
    lc = rng.choice([c for c in range(-5, 6) if c])
    h = IntPoly([rng.randint(-5, 5) for _ in range(dh)] + [lc])
    return F, h


def _exprs(F: BiPoly, h: IntPoly):
    hx = sum(c * X**i for i, c in enumerate(h.coeffs))
    terms = [c * X**i * sympy.exp(j * hx) for i, j, c in F.terms()]
    f = sum(terms)
    scale = sum(abs(c) * sympy.Abs(X) ** i * sympy.exp(j * hx) for i, j, c in F.terms())
    return f, sympy.diff(f, X), scale


def grid(M):
    M = mpmath.mpf(M)
    inner = min(M, 40)
    n = int(inner * 64)
    pts = [mpmath.mpf(k) / 64 for k in range(-n, n + 1)]
    x = mpmath.mpf(inner)
    right = []
    while x < M:
        x = min(x * mpmath.mpf("1.01"), M)
        right.append(x)
    return [-r for r in reversed(right)] + pts + right


class Reference:
    def __init__(self, F: BiPoly, h: IntPoly, dps=50):
        self.dps = dps
        f, fp, scale = _exprs(F, h)
        self.f = sympy.lambdify(X, f, "mpmath")
        self.fp = sympy.lambdify(X, fp, "mpmath")
        self.scale = sympy.lambdify(X, scale, "mpmath")

    def _sgn(self, func, x):
        v = func(x)
        return 0 if v == 0 else (1 if v > 0 else -1)

    def _bisect(self, func, a, b, sa):
        for _ in range(self.dps * 3):
            m = (a + b) / 2
            sm = self._sgn(func, m)
            if sm == 0:
                return m
            if sm == sa:
                a = m
            else:
                b = m
        return (a + b) / 2

    def _rel(self, x, dps):
        with mpmath.workdps(dps):
            x = mpmath.mpf(x)
            s = self.scale(x)
            return abs(self.f(x)) / s if s else mpmath.mpf(0)

    def _tangential(self, c):
        # zero if the residual drops with the precision, a near miss stays put
        r1 = self._rel(c, self.dps)
        if r1 > mpmath.mpf(10) ** (-(self.dps - 20)):
            return False
        with mpmath.workdps(2 * self.dps):
            c2 = self._refine_critical(mpmath.mpf(c))
        r2 = self._rel(c2, 2 * self.dps)
        return r2 < mpmath.mpf(10) ** (-(2 * self.dps - 25))

    def _refine_critical(self, c):
        try:
            return mpmath.findroot(self.fp, c, tol=mpmath.mpf(10) ** (-mpmath.mp.dps + 5))
        except (ValueError, ZeroDivisionError):
            return c

    def zeros(self, M):
        out = []
        with mpmath.workdps(self.dps):
            xs = grid(M)
            sf = [self._sgn(self.f, x) for x in xs]
            sd = [self._sgn(self.fp, x) for x in xs]
            for k, x in enumerate(xs):
                if sf[k] == 0:
                    out.append(x)
            for k in range(len(xs) - 1):
                a, b = xs[k], xs[k + 1]
                if sf[k] and sf[k + 1] and sf[k] != sf[k + 1]:
                    out.append(self._bisect(self.f, a, b, sf[k]))
                if sd[k] and sd[k + 1] and sd[k] != sd[k + 1]:
                    c = self._bisect(self.fp, a, b, sd[k])
                    sc = self._sgn(self.f, c)
                    if sc == 0 or self._tangential(c):
                        out.append(c)
                    elif sf[k] == sf[k + 1] == -sc:
                        # two zeros hidden in one cell
                        out.append(self._bisect(self.f, a, c, sf[k]))
                        out.append(self._bisect(self.f, c, b, sc))
            out.sort()
            merged = []
            for z in out:
                if not merged or abs(z - merged[-1]) > mpmath.mpf(10) ** -12 * (1 + abs(z)):
                    merged.append(z)
            return merged


def e_reference() -> tuple[Fraction, Fraction]:
    """(lo, hi) enclosing e: partial sum of 1/n! to n = 60 and its tail bound.

    The tail sum_{n>60} 1/n! is below 2/61!, so lo < e < lo + 2/61!.
    """
    s, term = Fraction(0), Fraction(1)
    for n in range(61):
        if n:
            term /= n
        s += term
    return s, s + 2 * term / 61


E_50 = "2.71828182845904523536028747135266249775724709369995"
