from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from pfaffcount.exactpoly import IntPoly, squarefree_part
from pfaffcount.realroots import (
    EQUAL,
    GREATER,
    LESS,
    AlgebraicNumber,
    RootInterval,
    SignCondition,
    cauchy_bound,
    compare_algebraic,
    feasible_sign_conditions,
    feasible_sign_conditions_per_root,
    isolate_roots,
    merge_roots,
    refine_box,
    root_bound,
    separation_bound,
    sign_poly_at,
    sturm_count,
    thom_roots,
)

P = IntPoly
X2m2 = P([-2, 0, 1])
polys = st.lists(st.integers(-50, 50), min_size=2, max_size=9).map(P).filter(lambda p: p.degree >= 1)


def numeric_real_roots(p):
    """Distinct real roots via mpmath at high precision (independent oracle)."""
    q = squarefree_part(p)
    if q.degree < 1:
        return []
    with mpmath.workdps(60):
        rs = mpmath.polyroots(list(reversed(q.coeffs)), maxsteps=400, extraprec=400)
        return sorted(float(mpmath.re(r)) for r in rs if abs(mpmath.im(r)) < mpmath.mpf(10) ** -30)


class TestBounds:
    def test_root_bound_examples(self):
        assert cauchy_bound(X2m2) == 3
        assert cauchy_bound(P([-5, 1])) == 6
        assert cauchy_bound(P([-1, 0, 2])) == Fraction(3, 2)
        b = root_bound(X2m2)
        assert 5 <= b * b and b <= 3
        assert Fraction(5) <= root_bound(P([-5, 1])) <= 6
        with pytest.raises(ValueError):
            root_bound(P([3]))

    @given(polys)
    @settings(max_examples=60, deadline=None)
    def test_root_bound_dominates_complex_roots(self, p):
        with mpmath.workdps(30):
            rs = mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=200, extraprec=200)
        assert all(abs(r) < float(root_bound(p)) + 1e-9 for r in rs)

    def test_separation_examples(self):
        s = separation_bound(X2m2)
        assert 0 < s <= Fraction(1, 8) / Fraction(173205, 100000)
        assert 0 < separation_bound(P([-1, 0, 1])) < Fraction(144, 1000) + Fraction(1, 1000)
        with pytest.raises(ValueError):
            separation_bound(P([1, 1]))

    @given(polys)
    @settings(max_examples=40, deadline=None)
    def test_separation_isolates(self, p):
        q = squarefree_part(p)
        assume(q.degree >= 2)
        ivs = isolate_roots(q, separation_bound(q))
        assert len(ivs) == len(numeric_real_roots(q))


class TestSturmIsolation:
    def test_sturm_examples(self):
        assert sturm_count(X2m2, 0, 2) == 1
        assert sturm_count(X2m2, -2, 2) == 2
        assert sturm_count(P([1, -2, 1]), 0, 2) == 1
        x = P([0, 1])
        assert sturm_count(x, -1, 0) == 1 and sturm_count(x, 0, 1) == 0
        with pytest.raises(ValueError):
            sturm_count(X2m2, 1, 1)

    def test_isolation_examples(self):
        ivs = isolate_roots(X2m2, Fraction(1, 4))
        assert len(ivs) == 2
        assert all(iv.width <= Fraction(1, 4) for iv in ivs)
        assert ivs[0].a < -1.4142135 <= ivs[0].b and ivs[1].a < 1.4142135 <= ivs[1].b
        assert isolate_roots(P([1, 0, 1]), 1) == []
        ivs = isolate_roots(P([0, -1, 1]), Fraction(1, 8))
        assert [0 in iv for iv in ivs] == [True, False] and 1 in ivs[1]
        with pytest.raises(ValueError):
            isolate_roots(X2m2, 0)
        with pytest.raises(ValueError):
            isolate_roots(P(), 1)
        assert isolate_roots(P([5]), 1) == []

    @given(polys)
    @settings(max_examples=80, deadline=None)
    def test_isolation_soundness(self, p):
        ivs = isolate_roots(p, Fraction(1, 16))
        for i, iv in enumerate(ivs):
            assert sturm_count(p, iv.a, iv.b) == 1
            if i:
                assert ivs[i - 1].b <= iv.a
        r = root_bound(p)
        assert len(ivs) == sturm_count(p, -r, r)
        assert len(ivs) == sturm_count(p, float("-inf"), float("inf"))
        num = numeric_real_roots(p)
        assert len(num) == len(ivs)
        for x, iv in zip(num, ivs):
            assert float(iv.a) - 1e-9 <= x <= float(iv.b) + 1e-9


class TestAlgebraic:
    def test_thom_examples(self):
        rs = thom_roots(X2m2)
        assert [r.thom.signs for r in rs] == [(-1, 1), (1, 1)]
        (z,) = thom_roots(P([0, 0, 0, 1]))
        assert z.thom.signs == (0, 0, 1) and sign_poly_at(P([0, 1]), z) == 0
        assert thom_roots(P([1, 0, 1])) == []
        with pytest.raises(ValueError):
            thom_roots(P())

    def test_compare_examples(self):
        m, s = thom_roots(X2m2)
        (t,) = thom_roots(P([-3, 2]))
        assert compare_algebraic(s, t) == LESS
        s2 = [r for r in thom_roots(P([-4, 0, 0, 0, 1])) if r > 0][0]
        assert compare_algebraic(s, s2) == EQUAL
        assert compare_algebraic(m, s) == LESS and compare_algebraic(s, m) == GREATER
        assert s == s2 and m < 0 and s > Fraction(141, 100)

    def test_sign_examples(self):
        m, s = thom_roots(X2m2)
        assert sign_poly_at(X2m2, s) == 0
        assert sign_poly_at(P([0, 1]), m) == -1
        assert sign_poly_at(P([-3, 0, 0, 1]), s) == -1
        # 2*sqrt(2) vs 2.8284271247 ...: very close call
        assert sign_poly_at(P([-28284271247, 0, 0, 10**10]), s) == 1

    def test_refine(self):
        _, s = thom_roots(X2m2)
        box = refine_box(s, Fraction(1, 100))
        assert box.width <= Fraction(1, 100) and 1.41421356 in box
        third = AlgebraicNumber(P([-1, 3]), RootInterval(Fraction(0), Fraction(1)))
        box = refine_box(third, Fraction(1, 1000))
        assert Fraction(1, 3) in box and third.exact is None
        m, _ = thom_roots(X2m2)
        before = m.thom
        assert refine_box(m, 1).width <= 1 and m.thom == before

    def test_bad_box(self):
        with pytest.raises(ValueError):
            AlgebraicNumber(X2m2, RootInterval(Fraction(-2), Fraction(2)))

    @given(polys, st.lists(st.integers(-20, 20), min_size=1, max_size=4).map(P))
    @settings(max_examples=60, deadline=None)
    def test_sign_zero_iff_gcd(self, p, q):
        for r in thom_roots(p):
            s = sign_poly_at(q, r)
            with mpmath.workdps(80):
                x = mpmath.mpf(r.refine(Fraction(1, 2**200)).b.numerator) / r.box.b.denominator
                v = mpmath.polyval(list(reversed(q.coeffs)), x) if not q.is_zero else 0
            if s == 0:
                assert abs(v) < mpmath.mpf(10) ** -40
            else:
                assert mpmath.sign(v) == s

    @given(st.lists(polys, min_size=1, max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_order_consistency(self, ps):
        merged = merge_roots(thom_roots(p) for p in ps)
        vals = [r.approx(120) for r in merged]
        assert vals == sorted(vals)
        assert all(compare_algebraic(a, b) == LESS for a, b in zip(merged, merged[1:]))


class TestFeasible:
    def test_examples(self):
        x = P([0, 1])
        assert set(feasible_sign_conditions(X2m2, [x])) == {SignCondition((-1,)), SignCondition((1,))}
        assert feasible_sign_conditions(X2m2, [X2m2]) == [SignCondition((0,))]
        got = feasible_sign_conditions(P([0, -1, 1]), [P([-1, 2]), P([1, 1])])
        assert got == [SignCondition((-1, 1)), SignCondition((1, 1))]
        with pytest.raises(ValueError):
            feasible_sign_conditions(P(), [x])

    @given(polys, st.lists(st.lists(st.integers(-9, 9), max_size=4).map(P), max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_brute_force(self, p0, ps):
        per = feasible_sign_conditions_per_root(p0, ps)
        brute = []
        for r in thom_roots(p0):
            sc = SignCondition(tuple(sign_poly_at(q, r) for q in ps))
            if sc not in brute:
                brute.append(sc)
        assert feasible_sign_conditions(p0, ps) == brute
        assert len(per) == len(thom_roots(p0))
