import random
from fractions import Fraction

import mpmath
import pytest

from pfaffcount.errors import ConsistencyError
from pfaffcount.exactpoly import BiPoly, IntPoly, resultant
from pfaffcount.pfaffian import (
    LEFT,
    RIGHT,
    CancelToken,
    PfaffianSystem,
    ZeroCounter,
    build_chain,
    build_F1,
    corollary_bound,
    critical_degree_bound,
    count_zeros_generic,
    critical_poly_L,
    f_tilde,
    multiplicity_bound,
    one_sided_sign,
    reduce_resultant_nonzero,
    sigma_signs,
    sturm_on_interval,
)
from pfaffcount.errors import Cancelled
from pfaffcount.realroots import AlgebraicNumber

from conftest import NumericOracle, X, Y, bi_from_sympy, mp_eval, numeric_zero_count, to_sympy

EXP = PfaffianSystem(bi_from_sympy(Y))
EXPM1 = PfaffianSystem(bi_from_sympy(1 + Y))  # phi = e^x - 1
TAN = PfaffianSystem(bi_from_sympy(1 + Y**2))  # phi = tan x
exp_oracle = NumericOracle(mpmath.exp)
expm1_oracle = NumericOracle(mpmath.expm1)
HALF_PI = 1.5707963267948966
tan_oracle = NumericOracle(mpmath.tan, domain=[(-HALF_PI, HALF_PI)])


def B(e):
    return bi_from_sympy(e)


class TestConstruction:
    def test_f_tilde_examples(self):
        assert f_tilde(B(Y), EXP) == B(Y)
        assert f_tilde(B(X * Y), EXP) == B(Y + X * Y)
        assert f_tilde(B(Y**2 - X), EXP) == B(2 * Y**2 - 1)

    def test_system_validation(self):
        with pytest.raises(ValueError):
            PfaffianSystem(B(X + 1))
        assert (TAN.delta_x, TAN.delta_y) == (0, 2)

    def test_reduce_examples(self):
        P = reduce_resultant_nonzero(B((Y - 1) ** 2), EXP)
        assert P in (B(Y - 1), B(1 - Y))
        assert resultant(P, f_tilde(P, EXP)) == IntPoly([1]) or not resultant(P, f_tilde(P, EXP)).is_zero
        assert reduce_resultant_nonzero(B(Y - 1), EXP) == B(Y - 1)
        assert reduce_resultant_nonzero(B(X * (Y - 1)), EXP) == B(X * (Y - 1))
        with pytest.raises(ValueError):
            reduce_resultant_nonzero(B(X - 1), EXP)

    def test_reduce_drops_common_factor(self):
        # S = Y - 1 - X... pick F0 = (Y^2 + 1) * (Y - X) under Phi = 1 + Y^2:
        # Y^2 + 1 is invariant (its tilde is 2Y(1+Y^2)), so it divides F~.
        F = B((Y**2 + 1) * (Y - X))
        P = reduce_resultant_nonzero(F, TAN)
        assert P.deg_y == 1
        assert not resultant(P, f_tilde(P, TAN)).is_zero

    def test_F1_examples(self):
        assert build_F1(B(Y - 1), EXP) == B(1 + 0 * Y)
        assert build_F1(B(Y**2 - X), EXP) == B(2 * X - 1)
        F = B(X * Y**2 + Y)
        assert f_tilde(F, EXPM1).deg_y == 2
        F1 = build_F1(F, EXPM1)
        assert F1.deg_y < 2

    def test_chain_examples(self):
        ch = build_chain(B(Y - 1), B(1 + 0 * Y))
        assert ch.R == (B(Y - 1), B(1 + 0 * Y)) and ch.tau == (IntPoly([1]), IntPoly([1]))
        assert critical_poly_L(ch) == IntPoly([1])
        ch = build_chain(B(Y**2 - X), B(2 * X - 1))
        assert ch.N == 1 and ch.R[1].deg_y == 0
        ch = build_chain(B(Y**3 - Y), B(3 * Y**2 - 1))
        assert ch.N == 3 and [r.deg_y for r in ch.R] == [3, 2, 1, 0]
        with pytest.raises(ValueError):
            build_chain(B(Y), B(Y + 1))

    def test_L_product(self):
        ch = build_chain(B(Y**2 - X), B(2 * X - 1))
        assert critical_poly_L(ch) == IntPoly([-1, 2])

    def test_classical_sigma(self):
        # P = Y^2 - x regarded with P' = 2Y: classical Sturm has (P, 2Y, +x)
        ch = build_chain(B(Y**2 - X), B(2 * Y))
        sig = sigma_signs(ch, [1, 1, 1], {2: 1, 3: 1})
        seq = sturm_on_interval(ch, (0, 1), [1, 1, 1], {2: 1, 3: 1})
        assert sig[:2] == (1, 1) and seq.polys[2] == B(4 * X)


class TestMultiplicity:
    def test_examples(self):
        assert multiplicity_bound(B(X * Y), EXP) == 3
        assert multiplicity_bound(B(Y**2), EXP) == 2
        assert multiplicity_bound(B(3 + 0 * X), EXP) == 0

    def test_one_sided(self):
        z = AlgebraicNumber.from_rational(0)
        r = one_sided_sign(B(Y - 1), z, RIGHT, EXP, exp_oracle)
        assert (r.value, r.order) == (1, 1)
        assert one_sided_sign(B(Y - 1), z, LEFT, EXP, exp_oracle).value == -1
        r = one_sided_sign(B((Y - 1) ** 2), z, RIGHT, EXP, exp_oracle)
        assert (r.value, r.order) == (1, 2)
        assert one_sided_sign(B((Y - 1) ** 2), z, LEFT, EXP, exp_oracle).value == 1

    def test_cap_violation(self):
        class Liar:
            def signs(self, G, pts):
                return [0] * len(pts)

            def domain(self):
                return [(float("-inf"), float("inf"))]

        with pytest.raises(ConsistencyError):
            one_sided_sign(B(Y - 1), 0, RIGHT, EXP, Liar())


class TestCounting:
    def test_examples(self):
        assert count_zeros_generic(B(Y - 1), EXP, -1, 1, exp_oracle) == 1
        assert count_zeros_generic(B(Y - 1), EXP, 1, 2, exp_oracle) == 0
        assert count_zeros_generic(B(X * Y - 1), EXP, 0, 1, exp_oracle) == 1

    def test_errors(self):
        with pytest.raises(ValueError):
            count_zeros_generic(B(Y - 1), EXP, 1, 1, exp_oracle)
        with pytest.raises(ValueError):
            count_zeros_generic(B(Y), TAN, 0, 2, tan_oracle)
        with pytest.raises(ValueError):
            ZeroCounter(B(X), EXP, exp_oracle)

    def test_tan(self):
        # tan x = x has the single zero 0 on (-pi/2, pi/2)
        assert count_zeros_generic(B(Y - X), TAN, -1, Fraction(3, 2), tan_oracle) == 1
        # tan x = 2x: zeros 0 and about +-1.1656
        assert count_zeros_generic(B(Y - 2 * X), TAN, -Fraction(3, 2), Fraction(3, 2), tan_oracle) == 3
        assert count_zeros_generic(B(Y**2 - 3), TAN, -Fraction(3, 2), Fraction(3, 2), tan_oracle) == 2

    def test_expm1(self):
        # e^x - 1 - x^2 vanishes only at 0; e^x - 1 - 3x/2 also near 0.76
        F = reduce_resultant_nonzero(B(Y - X**2), EXPM1)
        assert count_zeros_generic(F, EXPM1, -2, 3, expm1_oracle) == 1
        F = reduce_resultant_nonzero(B(2 * Y - 3 * X), EXPM1)
        ref = numeric_zero_count(lambda x: 2 * mpmath.expm1(x) - 3 * x, -2, 3)
        assert ref == 2 and count_zeros_generic(F, EXPM1, -2, 3, expm1_oracle) == 2

    def test_cancel(self):
        tok = CancelToken()
        tok.cancel()
        with pytest.raises(Cancelled):
            ZeroCounter(B(X * Y - 1), EXP, exp_oracle, tok).count(0, 1)


def _random_instance(rng):
    dx, dy = rng.randint(0, 2), rng.randint(1, 3)
    terms = {(i, j): rng.randint(-4, 4) for i in range(dx + 1) for j in range(dy + 1)}
    terms[(rng.randint(0, dx), dy)] = rng.choice([-3, -2, -1, 1, 2, 3])
    return B(sum(c * X**i * Y**j for (i, j), c in terms.items()))


@pytest.mark.parametrize("seed", range(12))
def test_random_exp_against_numeric(seed):
    rng = random.Random(1000 + seed)
    F = _random_instance(rng)
    if F.deg_y < 1:
        return
    P = reduce_resultant_nonzero(F, EXP)
    zc = ZeroCounter(P, EXP, exp_oracle)
    got = zc.count(-4, 4)
    ref = numeric_zero_count(lambda x: mp_eval(F, x, mpmath.exp(x)), -4, 4)
    assert got == ref
    inner = got - zc.is_zero_at(-4) - zc.is_zero_at(4)
    assert inner <= corollary_bound(P, EXP)
    assert len(zc.critical_roots) <= critical_degree_bound(P, EXP)
    c = Fraction(rng.randint(-30, 30), 10)
    assert got == zc.count(-4, c) + zc.count(c, 4) - (1 if zc.is_zero_at(c) else 0)


@pytest.mark.parametrize("seed", range(8))
def test_random_tan_against_numeric(seed):
    rng = random.Random(2000 + seed)
    F = _random_instance(rng)
    if F.deg_y < 1:
        return
    P = reduce_resultant_nonzero(F, TAN)
    got = count_zeros_generic(P, TAN, Fraction(-3, 2), Fraction(3, 2), tan_oracle)
    ref = numeric_zero_count(lambda x: mp_eval(F, x, mpmath.tan(x)), -1.5, 1.5)
    assert got == ref


def test_sturm_property_audit():
    """Definition checks on sampled points of every subinterval."""
    rng = random.Random(7)
    for _ in range(4):
        F = reduce_resultant_nonzero(_random_instance(rng), EXP)
        zc = ZeroCounter(F, EXP, exp_oracle)
        pts = [Fraction(-3)] + [r for r in zc.roots_between(-3, 3)] + [Fraction(3)]
        for lo, hi in zip(pts, pts[1:]):
            lo_p = lo if not isinstance(lo, Fraction) else AlgebraicNumber.from_rational(lo)
            sigma = zc.sigma_right_of(lo_p)
            a = float(lo) if isinstance(lo, Fraction) else lo.approx()
            b = float(hi) if isinstance(hi, Fraction) else hi.approx()
            for k in range(1, 6):
                x = mpmath.mpf(a) + (mpmath.mpf(b) - a) * k / 6
                vals = [s * mp_eval(R, x, mpmath.exp(x)) for s, R in zip(sigma, zc.chain.R)]
                assert vals[-1] != 0
                for i in range(1, len(vals) - 1):
                    if abs(vals[i]) < 1e-12:
                        assert vals[i - 1] * vals[i + 1] < 0
