import sympy

from pfaffcount.exactpoly import BiPoly, IntPoly

X, Y = sympy.symbols("x y")


def to_sympy(p):
    if isinstance(p, IntPoly):
        return sum(c * X**i for i, c in enumerate(p.coeffs))
    return sum(c * X**i * Y**j for i, j, c in p.terms())


def bi_from_sympy(expr):
    poly = sympy.Poly(sympy.expand(expr), X, Y)
    return BiPoly.from_terms({m: int(c) for m, c in poly.terms()})


def int_from_sympy(expr, var=X):
    poly = sympy.Poly(sympy.expand(expr), var)
    cs = poly.all_coeffs()[::-1]
    return IntPoly(int(c) for c in cs)


import mpmath


def mp_point(alg, bits=260):
    """High-precision approximation of an AlgebraicNumber."""
    from fractions import Fraction

    if alg.exact is not None:
        q = alg.exact
    else:
        box = alg.refine(Fraction(1, 1 << bits))
        q = (box.a + box.b) / 2
    return mpmath.mpf(q.numerator) / q.denominator


def mp_eval(G, x, y):
    acc = mpmath.mpf(0)
    for c in reversed(G.ycoeffs):
        cx = mpmath.mpf(0)
        for k in reversed(c.coeffs):
            cx = cx * x + k
        acc = acc * y + cx
    return acc


class NumericOracle:
    """Signs of G(x, phi(x)) from mpmath at high precision.

    Only good for test instances whose zeros are well conditioned; a value
    below ``zero_tol`` is treated as an exact zero.
    """

    def __init__(self, phi, domain=((float("-inf"), float("inf")),), dps=90, zero_tol=50):
        self.phi = phi
        self._domain = list(domain)
        self.dps = dps
        self.zero_tol = zero_tol

    def domain(self):
        return self._domain

    def signs(self, G, points):
        out = []
        with mpmath.workdps(self.dps):
            for p in points:
                x = mp_point(p)
                v = mp_eval(G, x, self.phi(x))
                out.append(0 if abs(v) < mpmath.mpf(10) ** -self.zero_tol else int(mpmath.sign(v)))
        return out


def numeric_zero_count(func, a, b, steps=4000, dps=40):
    """Distinct zeros of func on [a, b]: sign changes on a fine grid plus exact
    grid hits.  Only meant for functions with simple, separated zeros."""
    with mpmath.workdps(dps):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        xs = [a + (b - a) * k / steps for k in range(steps + 1)]
        vals = [func(x) for x in xs]
        tol = mpmath.mpf(10) ** (-dps // 2)
        signs = [0 if abs(v) < tol else (1 if v > 0 else -1) for v in vals]
        count = sum(1 for s in signs if s == 0)
        last = None
        for s in signs:
            if s == 0:
                last = None
                continue
            if last is not None and s != last:
                count += 1
            last = s
        return count
