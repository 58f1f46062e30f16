"""Command-line front end.

    pfaffcount --F "y - x - 2" --h "x" --range all --cmd count

prints a JSON document with the schema tag ``pfaffcount/1``.  Exit codes:
0 success, 1 input error, 2 internal consistency error, 3 timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .epoly import EPolyCounter, EPolynomial, ESignOracle, root_magnitude_bound, sign_at_infinity
from .errors import Cancelled, ConsistencyError
from .exactpoly import BiPoly, IntPoly
from .pfaffian import CancelToken
from .realroots import AlgebraicNumber, thom_roots

SCHEMA = "pfaffcount/1"
COMMANDS = ("count", "isolate", "sign-at", "bound", "infinity-sign")
DEFAULT_EPSILON = Fraction(1, 1000)

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY, EXIT_TIMEOUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


class ParseError(InputError):
    def __init__(self, msg, line, col):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.col = line, col


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------

_OPS = {"+", "-", "*", "/", "^", "(", ")", ","}


def _tokenize(text: str):
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        start = (line, col)
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            lit = text[i:j]
            if lit.count(".") > 1:
                raise ParseError(f"malformed number {lit!r}", *start)
            toks.append(("num", Fraction(lit), start))
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], start))
        elif text.startswith("**", i):
            j = i + 2
            toks.append(("op", "^", start))
        elif ch in _OPS:
            j = i + 1
            toks.append(("op", ch, start))
        else:
            raise ParseError(f"unexpected character {ch!r}", *start)
        col += j - i
        i = j
    toks.append(("end", None, (line, col)))
    return toks


class _Parser:
    """Recursive descent over + - * / ^ with polynomials as {(i, j): Fraction}."""

    def __init__(self, text: str, allow_y: bool):
        self.toks = _tokenize(text)
        self.k = 0
        self.allow_y = allow_y

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, *tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = _add(p, q if op == "+" else _scale(q, -1))
        return p

    def term(self):
        p = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            q = self.unary()
            if tok[1] == "*":
                p = _mul(p, q)
            else:
                if any(m != (0, 0) for m in q) or not q:
                    self.fail("division is only allowed by a nonzero constant", tok)
                p = _scale(p, 1 / q[(0, 0)])
        return p

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return _scale(self.unary(), -1)
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num" or tok[1].denominator != 1:
                self.fail("exponent must be a nonnegative integer literal", tok)
            e = int(tok[1])
            if e > 10_000:
                self.fail("exponent too large", tok)
            out = {(0, 0): Fraction(1)}
            for _ in range(e):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return {(0, 0): val} if val else {}
        if kind == "name":
            if val == "x":
                return {(1, 0): Fraction(1)}
            if val == "y":
                if not self.allow_y:
                    self.fail("'y' is not allowed in h", tok)
                return {(0, 1): Fraction(1)}
            self.fail(f"unknown name {val!r} (only x and y)", tok)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return p
        self.fail("expected a number, x, y or '('", tok)


def _add(p, q):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _scale(p, c):
    return {m: v * c for m, v in p.items()} if c else {}


def _mul(p, q):
    out = {}
    for (i, j), a in p.items():
        for (k, l), b in q.items():
            m = (i + k, j + l)
            v = out.get(m, 0) + a * b
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _integral(p, what):
    bad = [c for c in p.values() if c.denominator != 1]
    if bad:
        raise InputError(f"{what} has a non-integer coefficient {bad[0]}")
    return {m: int(c) for m, c in p.items()}


def parse_F(text: str) -> BiPoly:
    return BiPoly.from_terms(_integral(_Parser(text, True).parse(), "F"))


def parse_h(text: str) -> IntPoly:
    p = _integral(_Parser(text, False).parse(), "h")
    d = max((i for i, _ in p), default=-1)
    return IntPoly([p.get((i, 0), 0) for i in range(d + 1)])


def parse_rational(text: str, what: str) -> Fraction:
    p = _Parser(str(text), False).parse()
    if any(m != (0, 0) for m in p):
        raise InputError(f"{what} must be a rational number")
    return p.get((0, 0), Fraction(0))


# ---------------------------------------------------------------------------
# problem spec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootPoint:
    """The k-th (1-based, ascending) real root of poly."""

    poly: IntPoly
    index: int

    def __str__(self):
        return f"root({self.poly.to_str()}, {self.index})"


@dataclass(frozen=True)
class ProblemSpec:
    F: BiPoly
    h: IntPoly
    range: Optional[tuple]
    command: str
    epsilon: Optional[Fraction] = None
    point: Union[Fraction, RootPoint, None] = None

    def canonical(self) -> dict:
        d = {"F": self.F.to_str(), "h": self.h.to_str(), "range": _fmt_range(self.range)}
        if self.epsilon is not None:
            d["epsilon"] = str(self.epsilon)
        if self.point is not None:
            d["point"] = str(self.point)
        return d


def _fmt_range(r):
    return "all" if r is None else f"{r[0]},{r[1]}"


def _parse_range(text: str):
    text = str(text).strip()
    if text == "all":
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError("range must be 'a,b' or 'all'")
    a, b = (parse_rational(p, "range endpoint") for p in parts)
    if not a < b:
        raise InputError("range needs a < b")
    return a, b


def _parse_point(text: str):
    text = str(text).strip()
    if text.startswith("root(") and text.endswith(")"):
        body = text[5:-1]
        if "," not in body:
            raise InputError("point must be 'root(<poly in x>, k)'")
        poly_txt, idx_txt = body.rsplit(",", 1)
        try:
            idx = int(idx_txt)
        except ValueError:
            raise InputError("root index must be an integer") from None
        poly = parse_h(poly_txt)
        if poly.degree < 1:
            raise InputError("root() needs a non-constant polynomial")
        if not 1 <= idx <= len(thom_roots(poly)):
            raise InputError(f"{poly} has no real root number {idx}")
        return RootPoint(poly, idx)
    return parse_rational(text, "point")


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_arg_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="pfaffcount", description="Exact real zero counting for F(x, e^{h(x)}).")
    p.add_argument("--F", help="polynomial in x and y, where y stands for e^{h(x)}")
    p.add_argument("--h", help="polynomial in x of positive degree")
    p.add_argument("--range", help="'a,b' with rationals, or 'all' (default)")
    p.add_argument("--cmd", choices=COMMANDS, help="default: count")
    p.add_argument("--epsilon", help="interval width for isolate (default 1/1000)")
    p.add_argument("--point", help="p/q or root(<poly>, k) for sign-at")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    p.add_argument("--timeout", type=float, help="seconds before giving up (exit code 3)")
    p.add_argument("--input", help="JSON file with the same fields")
    return p


_VALUE_FLAGS = ("--F", "--h", "--range", "--cmd", "--epsilon", "--point", "--timeout", "--input")


def _glue(argv):
    """Turn ``--flag value`` into ``--flag=value`` so values like "-y" or "-1,1" survive."""
    out, it = [], iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def parse_problem(argv=None) -> tuple[ProblemSpec, argparse.Namespace]:
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_arg_parser().parse_args(_glue(argv))
    fields = {}
    if ns.input:
        try:
            with open(ns.input) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {ns.input}: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("input file must hold a JSON object")
        if "command" in data and "cmd" not in data:
            data["cmd"] = data.pop("command")
        unknown = set(data) - {"F", "h", "range", "cmd", "epsilon", "point", "pretty", "timeout"}
        if unknown:
            raise InputError(f"unknown fields in input file: {sorted(unknown)}")
        fields.update(data)
    for key in ("F", "h", "range", "cmd", "epsilon", "point", "timeout"):
        v = getattr(ns, key)
        if v is not None:
            fields[key] = v
    ns.pretty = ns.pretty or bool(fields.get("pretty"))
    ns.timeout = fields.get("timeout")
    return spec_from_fields(fields), ns


def spec_from_fields(fields: dict) -> ProblemSpec:
    if "F" not in fields or "h" not in fields:
        raise InputError("both F and h are required")
    cmd = fields.get("cmd", "count")
    if cmd not in COMMANDS:
        raise InputError(f"unknown command {cmd!r}")
    F = parse_F(str(fields["F"]))
    h = parse_h(str(fields["h"]))
    if h.degree < 1:
        raise InputError("h must have positive degree: a constant h turns y into the constant e^h, "
                         "which is outside the integer-coefficient setting the exact sign tests rely on")
    if F.is_zero:
        raise InputError("F must be nonzero")
    rng = _parse_range(fields.get("range", "all"))
    eps = None
    if cmd == "isolate":
        eps = parse_rational(fields.get("epsilon", DEFAULT_EPSILON), "epsilon")
        if eps <= 0:
            raise InputError("epsilon must be positive")
    point = None
    if cmd == "sign-at":
        if "point" not in fields:
            raise InputError("sign-at needs --point")
        point = _parse_point(fields["point"])
    return ProblemSpec(F, h, rng, cmd, eps, point)


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------


def _as_algebraic(point) -> AlgebraicNumber:
    if isinstance(point, RootPoint):
        return thom_roots(point.poly)[point.index - 1]
    return AlgebraicNumber.from_rational(point)


def run(spec: ProblemSpec, cancel: CancelToken | None = None) -> dict:
    t0 = time.perf_counter()
    ep = EPolynomial(spec.F, spec.h)
    stats = {"chain_length": 0, "l_roots": 0, "oracle_queries": 0}
    counter = None
    if spec.command in ("count", "isolate"):
        counter = EPolyCounter(ep, cancel=cancel)
        if spec.command == "count":
            result = counter.count_real() if spec.range is None else counter.count(*spec.range)
        else:
            ivs = counter.isolate(spec.epsilon)
            if spec.range is not None:
                a, b = spec.range
                ivs = [iv for iv in ivs if _meets(counter, iv, a, b)]
            result = [[str(lo), str(hi)] for lo, hi in ivs]
    elif spec.command == "sign-at":
        oracle = ESignOracle(spec.h, cancel=cancel)
        result = oracle.sign(spec.F, _as_algebraic(spec.point))
        stats["oracle_queries"] = 1
    elif spec.command == "bound":
        result = root_magnitude_bound(ep)
    else:
        s = sign_at_infinity(ep)
        result = {"at_plus": s.at_plus, "at_minus": s.at_minus, "j0": s.j0, "d_y": s.d_y}
    if counter is not None:
        stats = {"chain_length": counter.chain_length, "l_roots": counter.l_roots,
                 "oracle_queries": counter.oracle_queries}
    stats["wall_ms"] = round((time.perf_counter() - t0) * 1000)
    return {"schema": SCHEMA, "command": spec.command, "input": spec.canonical(),
            "result": result, "stats": stats}


def _meets(counter, iv, a, b) -> bool:
    """Does the zero isolated in (lo, hi] lie in [a, b]?"""
    lo, hi = iv
    if hi < a or lo >= b:
        return False
    if a <= lo and hi <= b:
        return True
    lo2, hi2 = max(lo, a), min(hi, b)
    n = counter.count(lo2, hi2) if lo2 < hi2 else int(counter.is_zero_at(lo2))
    return n - (lo2 == lo and counter.is_zero_at(lo)) > 0


def _pretty(doc: dict) -> str:
    inp = doc["input"]
    lines = [f"f(x) = F(x, e^(h(x)))  with  F = {inp['F']},  h = {inp['h']}",
             f"range: {inp['range']}"]
    r = doc["result"]
    cmd = doc["command"]
    if cmd == "count":
        lines.append(f"number of distinct real zeros: {r}")
    elif cmd == "isolate":
        lines.append(f"{len(r)} isolating interval(s), each (lo, hi] with one zero:")
        lines += [f"  ({lo}, {hi}]" for lo, hi in r]
    elif cmd == "sign-at":
        lines.append(f"sign of f at {inp['point']}: {r:+d}" if r else f"f vanishes at {inp['point']}")
    elif cmd == "bound":
        lines.append(f"every real zero satisfies |x| <= {r}")
    else:
        lines.append(f"sign at +inf: {r['at_plus']:+d}, sign at -inf: {r['at_minus']:+d}")
    s = doc["stats"]
    lines.append(f"chain length {s['chain_length']}, critical roots {s['l_roots']}, "
                 f"oracle queries {s['oracle_queries']}, {s['wall_ms']} ms")
    return "\n".join(lines)


def main(argv=None) -> int:
    try:
        spec, ns = parse_problem(argv)
        timeout = float(ns.timeout) if ns.timeout is not None else None
        if timeout is not None and timeout <= 0:
            raise InputError("timeout must be positive")
    except (InputError, ValueError) as exc:
        print(f"pfaffcount: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        doc = run(spec, CancelToken(timeout))
    except Cancelled:
        print(f"pfaffcount: timed out after {timeout} s", file=sys.stderr)
        return EXIT_TIMEOUT
    except ConsistencyError as exc:
        print(f"pfaffcount: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except ValueError as exc:
        print(f"pfaffcount: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(_pretty(doc) if ns.pretty else json.dumps(doc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
