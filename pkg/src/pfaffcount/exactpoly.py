"""Exact dense polynomials: ZZ[X], QQ[X] and ZZ[X][Y].

Coefficients are stored ascending (index = exponent).  All values are
immutable and hashable; every function here is pure.  Divisions that the
theory guarantees to be exact are checked and raise ``ConsistencyError``
when they are not.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, NamedTuple, Union

from .errors import ConsistencyError

NEG_INF = float("-inf")

# Above this length both operands are packed into big integers (Kronecker
# substitution); CPython's Karatsuba then beats the schoolbook loop.
_KRONECKER_MIN = 24


def _strip(cs) -> tuple:
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return tuple(cs[:n])


def _mul_school(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                out[i + j] += ai * bj
    return out


def _pack(cs, bits):
    v = 0
    for c in reversed(cs):
        v = (v << bits) + c
    return v


def _unpack(v, bits, n):
    out = []
    half = 1 << (bits - 1)
    mask = (1 << bits) - 1
    for _ in range(n):
        c = v & mask
        v >>= bits
        if c >= half:
            c -= 1 << bits
            v += 1
        out.append(c)
    return out


def _mul_ints(a, b):
    if not a or not b:
        return ()
    if min(len(a), len(b)) < _KRONECKER_MIN:
        return _strip(_mul_school(a, b))
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    bound = ma * mb * min(len(a), len(b))
    bits = bound.bit_length() + 2
    v = _pack(a, bits) * _pack(b, bits)
    return _strip(_unpack(v, bits, len(a) + len(b) - 1))


def _fmt_terms(terms, var="x"):
    """Render ``[(coeff, exponent), ...]`` (descending) as text."""
    out = []
    for c, e in terms:
        if e == 0:
            mono = str(abs(c))
        elif abs(c) == 1:
            mono = var if e == 1 else f"{var}^{e}"
        else:
            mono = f"{abs(c)}*{var}" if e == 1 else f"{abs(c)}*{var}^{e}"
        if not out:
            out.append(("-" if c < 0 else "") + mono)
        else:
            out.append((" - " if c < 0 else " + ") + mono)
    return "".join(out) if out else "0"


class IntPoly:
    """Dense polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integer coefficient {c}")
                c = c.numerator
            elif not isinstance(c, int):
                raise TypeError(f"integer coefficient expected, got {type(c).__name__}")
            cs.append(int(c))
        self.coeffs = _strip(cs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "IntPoly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls._raw((int(c),) if c else ())

    @classmethod
    def x(cls) -> "IntPoly":
        return cls._raw((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPoly":
        p = cls.const(1)
        for r in roots:
            p = p * cls._raw((-r, 1))
        return p

    # -- basic queries -------------------------------------------------
    @property
    def degree(self):
        """Degree; ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("IntPoly", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        terms = [(c, e) for e, c in reversed(list(enumerate(self.coeffs))) if c]
        return _fmt_terms(terms, var)

    # -- ring operations -----------------------------------------------
    def __neg__(self):
        return IntPoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly._raw(_strip(out))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return IntPoly._raw(())
            return IntPoly._raw(tuple(c * other for c in self.coeffs))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return IntPoly._raw(_mul_ints(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = IntPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "IntPoly":
        """Multiply by ``X**k``."""
        if not self.coeffs:
            return self
        return IntPoly._raw((0,) * k + self.coeffs)

    def derivative(self, k: int = 1) -> "IntPoly":
        cs = self.coeffs
        for _ in range(k):
            cs = tuple(i * c for i, c in enumerate(cs))[1:]
        return IntPoly._raw(_strip(list(cs)))

    def compose(self, other: "IntPoly") -> "IntPoly":
        """``self(other(X))``."""
        out = IntPoly._raw(())
        for c in reversed(self.coeffs):
            out = out * other + c
        return out

    def reflect(self) -> "IntPoly":
        """``self(-X)``."""
        return IntPoly._raw(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    # -- evaluation ----------------------------------------------------
    def eval_homogeneous(self, num: int, den: int) -> int:
        """``den**deg * self(num/den)`` as an exact integer (``den > 0``)."""
        cs = self.coeffs
        if not cs:
            return 0
        acc = cs[-1]
        dpow = 1
        for c in reversed(cs[:-1]):
            dpow *= den
            acc = acc * num + c * dpow
        return acc

    def __call__(self, x):
        if isinstance(x, int):
            acc = 0
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = Fraction(x)
        if not self.coeffs:
            return Fraction(0)
        v = self.eval_homogeneous(x.numerator, x.denominator)
        return Fraction(v, x.denominator ** (len(self.coeffs) - 1))

    def sign_at(self, x) -> int:
        x = Fraction(x)
        v = self.eval_homogeneous(x.numerator, x.denominator)
        return (v > 0) - (v < 0)

    # -- division and normalisation ------------------------------------
    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
            if g == 1:
                break
        return g

    def primitive(self) -> "IntPoly":
        """Divide by the (positive) integer content; sign is preserved."""
        g = self.content()
        if g <= 1:
            return self
        return IntPoly._raw(tuple(c // g for c in self.coeffs))

    def normalized(self) -> "IntPoly":
        """Primitive part with positive leading coefficient."""
        p = self.primitive()
        return -p if p.lc < 0 else p

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """Quotient of an exact division in ZZ[X]."""
        if isinstance(other, int):
            other = IntPoly.const(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        a, b = list(self.coeffs), other.coeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            if a:
                raise ConsistencyError("inexact polynomial division")
            return IntPoly._raw(())
        lb = b[-1]
        q = [0] * (len(a) - db)
        if db == 0:
            for i, c in enumerate(a):
                qi, r = divmod(c, lb)
                if r:
                    raise ConsistencyError("inexact polynomial division")
                q[i] = qi
            return IntPoly._raw(_strip(q))
        for k in range(len(a) - 1 - db, -1, -1):
            c = a[k + db]
            if c:
                qk, r = divmod(c, lb)
                if r:
                    raise ConsistencyError("inexact polynomial division")
                q[k] = qk
                for i, bi in enumerate(b):
                    a[k + i] -= qk * bi
        if any(a[:db]):
            raise ConsistencyError("inexact polynomial division")
        return IntPoly._raw(_strip(q))

    def divides(self, other: "IntPoly") -> bool:
        try:
            other.exact_div(self)
        except ConsistencyError:
            return False
        return True

    def prem(self, other: "IntPoly") -> "IntPoly":
        """Pseudo-remainder: remainder of ``lc(other)**(da-db+1) * self``."""
        b = other.coeffs
        if not b:
            raise ZeroDivisionError("pseudo-division by zero polynomial")
        a = list(self.coeffs)
        db = len(b) - 1
        if len(a) - 1 < db:
            return self
        lb = b[-1]
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k]
            a = [lb * x for x in a[:k]]
            if c:
                off = k - db
                for i in range(db):
                    a[off + i] -= c * b[i]
        return IntPoly._raw(_strip(a[:db]))

    def to_ratpoly(self) -> "RatPoly":
        return RatPoly(self.coeffs)


class RatPoly:
    """Dense polynomial over QQ; coefficients are reduced ``Fraction``s."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([Fraction(c) for c in coeffs])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("RatPoly", self.coeffs))

    def __repr__(self):
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        return RatPoly(_mul_school(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RatPoly":
        return RatPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def __divmod__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            return RatPoly(), self
        q = [Fraction(0)] * (len(a) - db)
        for k in range(len(a) - 1 - db, -1, -1):
            c = a[k + db] / b[-1]
            q[k] = c
            if c:
                for i, bi in enumerate(b):
                    a[k + i] -= c * bi
        return RatPoly(q), RatPoly(a[:db])

    def monic(self) -> "RatPoly":
        return self * (1 / self.lc) if self.coeffs else self

    def to_intpoly(self) -> IntPoly:
        """Primitive integer polynomial proportional to self (positive factor)."""
        if not self.coeffs:
            return IntPoly()
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return IntPoly(int(c * den) for c in self.coeffs).primitive()


PolyLike = Union[IntPoly, Iterable[int], int]


def _as_intpoly(c) -> IntPoly:
    if isinstance(c, IntPoly):
        return c
    if isinstance(c, int):
        return IntPoly.const(c)
    return IntPoly(c)


_ZERO = IntPoly()
_ONE = IntPoly.const(1)


class BiPoly:
    """Polynomial in ZZ[X][Y]: ``ycoeffs[j]`` is the IntPoly coefficient of ``Y**j``."""

    __slots__ = ("ycoeffs", "_hash")

    def __init__(self, ycoeffs: Iterable[PolyLike] = ()):
        self.ycoeffs = _strip([_as_intpoly(c) for c in ycoeffs])
        self._hash = None

    @classmethod
    def _raw(cls, ycoeffs: tuple) -> "BiPoly":
        p = object.__new__(cls)
        p.ycoeffs = ycoeffs
        p._hash = None
        return p

    @classmethod
    def from_terms(cls, terms: dict) -> "BiPoly":
        """Build from ``{(x_exp, y_exp): coeff}``."""
        if not terms:
            return cls()
        dy = max(j for (_, j) in terms)
        rows = [dict() for _ in range(dy + 1)]
        for (i, j), c in terms.items():
            rows[j][i] = rows[j].get(i, 0) + c
        ys = []
        for r in rows:
            dx = max(r, default=-1)
            ys.append(IntPoly([r.get(i, 0) for i in range(dx + 1)]))
        return cls(ys)

    @classmethod
    def from_x(cls, p: PolyLike) -> "BiPoly":
        return cls([_as_intpoly(p)])

    @classmethod
    def from_y(cls, p: PolyLike) -> "BiPoly":
        """A polynomial in Y alone, given by its integer coefficients."""
        p = _as_intpoly(p)
        return cls(IntPoly.const(c) for c in p.coeffs)

    @classmethod
    def const(cls, c: int) -> "BiPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "BiPoly":
        return cls([IntPoly.x()])

    @classmethod
    def y(cls) -> "BiPoly":
        return cls([0, 1])

    # -- queries -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.ycoeffs

    def __bool__(self):
        return bool(self.ycoeffs)

    @property
    def deg_y(self):
        return len(self.ycoeffs) - 1 if self.ycoeffs else NEG_INF

    @property
    def deg_x(self):
        if not self.ycoeffs:
            return NEG_INF
        return max(len(c) for c in self.ycoeffs) - 1

    @property
    def total_degree(self):
        if not self.ycoeffs:
            return NEG_INF
        return max(j + len(c) - 1 for j, c in enumerate(self.ycoeffs) if c)

    @property
    def height(self) -> int:
        return max((c.height for c in self.ycoeffs), default=0)

    @property
    def lc_y(self) -> IntPoly:
        return self.ycoeffs[-1] if self.ycoeffs else _ZERO

    def coeff(self, j: int) -> IntPoly:
        return self.ycoeffs[j] if 0 <= j < len(self.ycoeffs) else _ZERO

    def terms(self):
        """Yield ``(x_exp, y_exp, coeff)`` for each nonzero coefficient."""
        for j, p in enumerate(self.ycoeffs):
            for i, c in enumerate(p.coeffs):
                if c:
                    yield i, j, c

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.ycoeffs == other.ycoeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("BiPoly", self.ycoeffs))
        return self._hash

    def __repr__(self):
        return f"BiPoly({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    def to_str(self, xvar: str = "x", yvar: str = "y") -> str:
        ts = sorted(self.terms(), key=lambda t: (-(t[0] + t[1]), -t[1], -t[0]))
        out = []
        for i, j, c in ts:
            factors = []
            if i:
                factors.append(xvar if i == 1 else f"{xvar}^{i}")
            if j:
                factors.append(yvar if j == 1 else f"{yvar}^{j}")
            mono = "*".join(factors)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out) if out else "0"

    # -- ring operations -----------------------------------------------
    def __neg__(self):
        return BiPoly._raw(tuple(-c for c in self.ycoeffs))

    def __add__(self, other):
        other = _as_bipoly(other)
        if other is None:
            return NotImplemented
        a, b = self.ycoeffs, other.ycoeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return BiPoly._raw(_strip(out))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_bipoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, IntPoly)):
            return BiPoly._raw(_strip([c * other for c in self.ycoeffs]))
        if not isinstance(other, BiPoly):
            return NotImplemented
        a, b = self.ycoeffs, other.ycoeffs
        if not a or not b:
            return BiPoly._raw(())
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = out[i + j] + ai * bj
        return BiPoly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = BiPoly.const(1)
        for _ in range(n):
            result = result * self
        return result

    def shift_y(self, k: int) -> "BiPoly":
        if not self.ycoeffs:
            return self
        return BiPoly._raw((_ZERO,) * k + self.ycoeffs)

    def diff_x(self) -> "BiPoly":
        return BiPoly._raw(_strip([c.derivative() for c in self.ycoeffs]))

    def diff_y(self) -> "BiPoly":
        return BiPoly._raw(_strip([c * j for j, c in enumerate(self.ycoeffs)][1:]))

    def swap(self) -> "BiPoly":
        """Exchange the roles of X and Y."""
        return BiPoly.from_terms({(j, i): c for i, j, c in self.terms()})

    def subs_y(self, p: "BiPoly") -> "BiPoly":
        """``self(X, p(X, Y))``."""
        out = BiPoly()
        for c in reversed(self.ycoeffs):
            out = out * p + BiPoly.from_x(c)
        return out

    # -- evaluation ----------------------------------------------------
    def eval_x(self, x) -> RatPoly:
        """Specialise X, giving a polynomial in Y over QQ."""
        return RatPoly(c(x) for c in self.ycoeffs)

    def at_y(self, w) -> IntPoly:
        """``den(w)**deg_y * self(X, w)`` as an integer polynomial in X."""
        w = Fraction(w)
        n, d = w.numerator, w.denominator
        if not self.ycoeffs:
            return _ZERO
        # Horner on the homogenised form sum_j c_j n^j d^(dy-j)
        out = self.ycoeffs[-1]
        dpow = 1
        for c in reversed(self.ycoeffs[:-1]):
            dpow *= d
            out = out * n + c * dpow
        return out

    def __call__(self, x, y):
        acc = Fraction(0)
        for c in reversed(self.ycoeffs):
            acc = acc * y + c(x)
        return acc

    # -- content / division --------------------------------------------
    def content(self) -> IntPoly:
        return content_and_primitive(self)[0]

    def primitive(self) -> "BiPoly":
        return content_and_primitive(self)[1]

    def div_x(self, c: IntPoly) -> "BiPoly":
        """Exact division of every Y-coefficient by ``c``."""
        c = _as_intpoly(c)
        if c == 1:
            return self
        return BiPoly._raw(tuple(p.exact_div(c) for p in self.ycoeffs))

    def exact_div(self, other: "BiPoly") -> "BiPoly":
        """Quotient of an exact division in ZZ[X][Y]."""
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        a = list(self.ycoeffs)
        b = other.ycoeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            if a:
                raise ConsistencyError("inexact bivariate division")
            return BiPoly()
        q = [_ZERO] * (len(a) - db)
        for k in range(len(a) - 1 - db, -1, -1):
            c = a[k + db]
            if c:
                qk = c.exact_div(b[-1])
                q[k] = qk
                for i, bi in enumerate(b):
                    a[k + i] = a[k + i] - qk * bi
        if any(a[:db]):
            raise ConsistencyError("inexact bivariate division")
        return BiPoly._raw(_strip(q))


def _as_bipoly(v):
    if isinstance(v, BiPoly):
        return v
    if isinstance(v, (int, IntPoly)):
        return BiPoly.from_x(v)
    return None


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def gcd_poly(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd over QQ, lifted to ZZ with positive leading coefficient."""
    if p.is_zero and q.is_zero:
        raise ValueError("gcd of two zero polynomials is undefined")
    if p.is_zero:
        return q.normalized()
    if q.is_zero:
        return p.normalized()
    return _gcd_cached(p, q)


@lru_cache(maxsize=4096)
def _gcd_cached(p: IntPoly, q: IntPoly) -> IntPoly:
    a, b = p.primitive(), q.primitive()
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return _ONE
        r = a.prem(b)
        a, b = b, r.primitive()
    return a.normalized()


@lru_cache(maxsize=4096)
def squarefree_part(p: IntPoly) -> IntPoly:
    """Primitive squarefree part with positive leading coefficient."""
    if p.is_zero:
        raise ValueError("zero polynomial has no squarefree part")
    if p.degree <= 0:
        return _ONE
    g = gcd_poly(p, p.derivative())
    return p.normalized().exact_div(g).normalized()


def content_and_primitive(F: BiPoly) -> tuple[IntPoly, BiPoly]:
    """Split ``F = cont(F) * F0`` with cont(F) in ZZ[X] (positive lc)."""
    if F.is_zero:
        raise ValueError("zero polynomial has no content")
    return _content_cached(F)


@lru_cache(maxsize=2048)
def _content_cached(F: BiPoly):
    ints = 0
    for c in F.ycoeffs:
        ints = gcd(ints, c.content())
    g = None
    for c in sorted((c for c in F.ycoeffs if c), key=len):
        g = c.normalized() if g is None else gcd_poly(g, c)
        if g == 1:
            break
    cont = g * ints
    return cont, F.div_x(cont)


def pseudo_remainder(A: BiPoly, B: BiPoly, power: int) -> BiPoly:
    """Remainder of ``lc_Y(B)**power * A`` under division by B in Y."""
    if B.is_zero:
        raise ValueError("pseudo-division by zero polynomial")
    if A.is_zero:
        return A
    da, db = A.deg_y, B.deg_y
    need = da - db + 1
    if power < max(need, 0):
        raise ValueError(f"power {power} too small; need at least {need}")
    b = B.ycoeffs
    lb = b[-1]
    a = list(A.ycoeffs)
    if need <= 0:
        return A * (lb ** power)
    for k in range(da, db - 1, -1):
        c = a[k]
        a = [lb * x for x in a[:k]]
        if c:
            off = k - db
            for i in range(db):
                if b[i]:
                    a[off + i] = a[off + i] - c * b[i]
    rem = BiPoly._raw(_strip(a[:db]))
    extra = power - need
    return rem * (lb ** extra) if extra else rem


def gcd_y(A: BiPoly, B: BiPoly) -> BiPoly:
    """Gcd of the primitive parts of A and B, via the primitive PRS in Y.

    The result is primitive; a result of Y-degree 0 is returned as ``1``.
    """
    if A.is_zero and B.is_zero:
        raise ValueError("gcd of two zero polynomials is undefined")
    if A.is_zero:
        return _normalize_bi(B.primitive())
    if B.is_zero:
        return _normalize_bi(A.primitive())
    a, b = A.primitive(), B.primitive()
    if a.deg_y < b.deg_y:
        a, b = b, a
    while b:
        if b.deg_y == 0:
            return BiPoly.const(1)
        r = pseudo_remainder(a, b, a.deg_y - b.deg_y + 1)
        a, b = b, (r.primitive() if r else r)
    return _normalize_bi(a)


def _normalize_bi(F: BiPoly) -> BiPoly:
    return -F if F.lc_y.lc < 0 else F


def squarefree_part_bi(F: BiPoly) -> BiPoly:
    """Product of the distinct irreducible factors of F (up to sign)."""
    cont, F0 = content_and_primitive(F)
    csq = squarefree_part(cont) if cont.degree > 0 else _ONE
    if F0.deg_y <= 0:
        return BiPoly.from_x(csq) * F0
    g = gcd_y(F0, F0.diff_y())
    if g.deg_y > 0:
        F0 = F0.exact_div(g)
    return F0 * csq


def der_sequence(p: IntPoly) -> list[IntPoly]:
    """``(p, p', ..., p^(deg p))``."""
    if p.is_zero:
        raise ValueError("Der of the zero polynomial is undefined")
    out = [p]
    for _ in range(p.degree):
        out.append(out[-1].derivative())
    return out


def _eps(k: int) -> int:
    return -1 if (k * (k - 1) // 2) % 2 else 1


class Subresultants(NamedTuple):
    """Signed subresultants of a pair, indexed by j = d, d-1, ..., -1.

    ``sres[j]`` is SRes_j, ``s[j]`` the subresultant coefficient (coefficient
    of Y^j in SRes_j) and ``t[j]`` the leading coefficient of SRes_j.  The
    conventions ``s[d] = t[d] = 1`` are the ones the structure theorem uses.
    """

    sres: dict
    s: dict
    t: dict


def signed_subresultants(F: BiPoly, G: BiPoly) -> Subresultants:
    """All signed subresultants of F and G regarded as polynomials in Y.

    Computed with the structure-theorem recursion on pseudo-remainders
    rather than by determinants.
    """
    if G.is_zero or F.is_zero or not F.deg_y > G.deg_y:
        raise ValueError("signed_subresultants needs deg_Y(F) > deg_Y(G) >= 0")
    return _sres_cached(F, G)


@lru_cache(maxsize=256)
def _sres_cached(F: BiPoly, G: BiPoly) -> Subresultants:
    d = F.deg_y
    zero = BiPoly()
    sres = {d: F, d - 1: G}
    s = {d: _ONE, d - 1: G.coeff(d - 1)}
    t = {d: _ONE, d - 1: G.lc_y}
    prev, j = d, d
    while True:
        P = sres[j - 1]
        if P.is_zero:
            for l in range(j - 2, -2, -1):
                sres[l], s[l], t[l] = zero, _ZERO, _ZERO
            break
        k = P.deg_y
        for l in range(j - 2, k, -1):
            sres[l], s[l], t[l] = zero, _ZERO, _ZERO
        tj1 = t[j - 1]
        if k < j - 1:
            sk = (tj1 ** (j - k)).exact_div(s[j] ** (j - k - 1)) * _eps(j - k)
            sres[k] = (P * sk).div_x(tj1)
            s[k] = t[k] = sk
        else:
            s[k] = t[k] = tj1
        if k == 0:
            sres[-1], s[-1], t[-1] = zero, _ZERO, _ZERO
            break
        r = pseudo_remainder(sres[prev], P, j - k + 1)
        nxt = (r * (-_eps(j - k))).div_x(s[j] ** (j - k) * t[prev])
        sres[k - 1] = nxt
        s[k - 1] = nxt.coeff(k - 1)
        t[k - 1] = nxt.lc_y
        prev, j = j - 1, k
    return Subresultants(sres, s, t)


def resultant(F: BiPoly, G: BiPoly, wrt: str = "y") -> IntPoly:
    """Resultant with respect to ``wrt`` ("x" or "y"); a polynomial in the other variable."""
    if wrt not in ("x", "y"):
        raise ValueError("wrt must be 'x' or 'y'")
    if F.is_zero or G.is_zero:
        raise ValueError("resultant of a zero polynomial")
    if wrt == "x":
        F, G = F.swap(), G.swap()
    return _res_y(F, G)


def _res_y(F: BiPoly, G: BiPoly) -> IntPoly:
    p, q = F.deg_y, G.deg_y
    if p == 0 and q == 0:
        raise ValueError("both polynomials are constant in the eliminated variable")
    if q == 0:
        return G.coeff(0) ** p
    if p == 0:
        return F.coeff(0) ** q
    if p < q:
        r = _res_y(G, F)
        return -r if (p * q) % 2 else r
    if p == q:
        G2 = G * F.lc_y - F * G.lc_y
        if G2.is_zero:
            return _ZERO
        return _res_y(F, G2).exact_div(F.lc_y ** G2.deg_y)
    sr = signed_subresultants(F, G)
    return sr.s[0] * _eps(p)
