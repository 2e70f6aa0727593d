"""Recursive-descent parser for element expressions.

The grammar covers the printed form of every element kind:

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (['*'] factor)*        (adjacency multiplies: Q0Q1)
    factor := atom ('^' integer)?
    atom   := integer | generator | 'QN' | 'P[r1,r2,...]' | '(' expr ')'

Generators are ``rho``, ``tau``, ``tauN``, ``xiN`` (Gamma side) and
``bN`` (the MGL side).  Koszul signs and exponent caps are applied by
normalization, never during parsing, so parse -> print -> parse is the
identity on normal forms.
"""

from __future__ import annotations

import re

from .hopf import SteenrodContext
from .operations import Operation, P_op, milnor_Q, scalar_op
from .rings import GradedPoly, RingError

TOKEN = re.compile(r"""
    (?P<pseq>P\[[\d,\s]*\])
  | (?P<qop>Q\d+)
  | (?P<gen>tau\d+|xi\d+|b\d+|rho|tau)
  | (?P<int>\d+)
  | (?P<op>[-+*^()])
  | (?P<ws>\s+)
  | (?P<bad>.)
""", re.VERBOSE)


class ParseError(Exception):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def tokenize(src: str):
    out = []
    for m in TOKEN.finditer(src):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", m.start())
        out.append((kind, m.group(), m.start()))
    out.append(("end", "", len(src)))
    return out


class _Value:
    """A parsed value: an int, a Gamma/b polynomial, or an Operation."""

    def __init__(self, kind, val):
        self.kind = kind  # "int" | "ring" | "b" | "op"
        self.val = val


class Parser:
    def __init__(self, ctx: SteenrodContext, mgl=None):
        self.ctx = ctx
        self.mgl = mgl
        self.toks = []
        self.i = 0

    # -- token plumbing -----------------------------------------------

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        kind, val, pos = self.peek()
        if val != text:
            raise ParseError(f"expected {text!r}, found {val!r}", pos)
        return self.next()

    # -- value algebra ------------------------------------------------

    def _promote_pair(self, a: _Value, b: _Value, pos):
        """Bring two values to a common kind for addition."""
        order = {"int": 0, "ring": 1, "b": 1, "op": 2}
        if order[a.kind] < order[b.kind]:
            a = self._promote_to(a, b.kind, pos)
        elif order[b.kind] < order[a.kind]:
            b = self._promote_to(b, a.kind, pos)
        if a.kind != b.kind:
            raise ParseError("cannot combine Gamma and MGL elements", pos)
        return a, b

    def _promote_to(self, v: _Value, kind, pos):
        if v.kind == kind:
            return v
        if v.kind == "int":
            if kind == "ring":
                return _Value("ring", self.ctx.scalar(v.val))
            if kind == "b":
                return _Value("b", self.mgl.const(v.val))
            if kind == "op":
                return _Value("op", scalar_op(self.ctx, v.val))
        if v.kind == "ring" and kind == "op":
            return _Value("op", scalar_op(self.ctx, v.val))
        raise ParseError("cannot combine Gamma and MGL elements", pos)

    def add(self, a, b, pos, sign=1):
        a, b = self._promote_pair(a, b, pos)
        return _Value(a.kind, a.val + b.val if sign > 0 else a.val - b.val)

    def mul(self, a: _Value, b: _Value, pos):
        if a.kind == "int":
            if b.kind == "int":
                return _Value("int", a.val * b.val)
            return _Value(b.kind, b.val * a.val if b.kind == "op"
                          else b.val * a.val)
        if b.kind == "int":
            return _Value(a.kind, a.val * b.val)
        if a.kind == b.kind and a.kind in ("ring", "b", "op"):
            return _Value(a.kind, a.val * b.val)
        if a.kind == "ring" and b.kind == "op":
            # left A-action a.phi
            return _Value("op", b.val.__rmul__(a.val))
        if a.kind == "op" and b.kind == "ring":
            return _Value("op", a.val * scalar_op(self.ctx, b.val))
        raise ParseError("cannot multiply these element kinds", pos)

    def neg(self, a: _Value):
        if a.kind == "int":
            return _Value("int", -a.val)
        return _Value(a.kind, a.val * -1 if a.kind != "op" else -a.val)

    # -- grammar ------------------------------------------------------

    def parse(self, src: str) -> _Value:
        self.toks = tokenize(src)
        self.i = 0
        v = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return v

    def expr(self) -> _Value:
        negate = False
        if self.peek()[1] == "-":
            self.next()
            negate = True
        v = self.term()
        if negate:
            v = self.neg(v)
        while self.peek()[1] in ("+", "-"):
            _, sym, pos = self.next()
            v = self.add(v, self.term(), pos, 1 if sym == "+" else -1)
        return v

    def term(self) -> _Value:
        v = self.factor()
        while True:
            kind, val, pos = self.peek()
            if val == "*":
                self.next()
                v = self.mul(v, self.factor(), pos)
            elif kind in ("pseq", "qop", "gen", "int") or val == "(":
                # adjacency: Q0Q1, (rho)*..., 2tau0
                v = self.mul(v, self.factor(), pos)
            else:
                return v

    def factor(self) -> _Value:
        v = self.atom()
        if self.peek()[1] == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise ParseError("expected an integer exponent", pos)
            e = int(val)
            if e < 0:
                raise ParseError("negative exponent", pos)
            out = _Value("int", 1)
            for _ in range(e):
                out = self.mul(out, v, pos)
            return out
        return v

    def atom(self) -> _Value:
        kind, val, pos = self.next()
        if kind == "int":
            return _Value("int", int(val))
        if kind == "qop":
            return _Value("op", milnor_Q(self.ctx, int(val[1:])))
        if kind == "pseq":
            inner = val[2:-1].strip()
            R = tuple(int(x) for x in inner.split(",")) if inner else ()
            return _Value("op", P_op(self.ctx, R))
        if kind == "gen":
            if val.startswith("b") and val[1:].isdigit():
                if self.mgl is None:
                    raise ParseError("b-generators need an MGL context", pos)
                n = int(val[1:])
                try:
                    return _Value("b", self.mgl.b(n))
                except Exception as exc:
                    raise ParseError(str(exc), pos) from None
            try:
                return _Value("ring", self.ctx.gen(val))
            except RingError as exc:
                raise ParseError(str(exc), pos) from None
        if val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected {val!r}", pos)


def parse_element(src: str, ctx: SteenrodContext, mgl=None):
    """Parse an expression; the result is a polynomial or an Operation."""
    v = Parser(ctx, mgl).parse(src)
    if v.kind == "int":
        return ctx.scalar(v.val)
    return v.val


def element_str(x) -> str:
    """The canonical printed form; parse_element inverts it."""
    return str(x)
