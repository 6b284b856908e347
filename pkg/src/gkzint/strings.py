"""Canonical string grammar for polynomials and rational functions.

Terms are joined by ``+``/``-``, powers use ``^``, multiplication signs are
optional on input and always written on output, e.g.
``(b1*(b1+b2)*z4)/(z1*z4-z2*z3)``.  Names: ``b<i>`` parameters (alias ``s<i>``),
``z<j>`` variables, ``dz<j>`` derivations (operator grammar, parsed elsewhere).
"""

import re
from fractions import Fraction

from sympy import QQ

from .errors import MalformedInputError

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[a-zA-Z]+\d*)|(?P<op>[-+*/^()]))")


def tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise MalformedInputError(f"bad token at ...{text[pos:pos + 12]!r}")
        pos = m.end()
        if m.group("num"):
            out.append(("num", int(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    """Recursive-descent parser over tokens; atom semantics supplied by hooks."""

    def __init__(self, tokens, atom_num, atom_name, mul, div, add, sub, neg, powr):
        self.toks = tokens
        self.i = 0
        self.atom_num, self.atom_name = atom_num, atom_name
        self.mul, self.div, self.add, self.sub, self.neg, self.powr = mul, div, add, sub, neg, powr

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.i != len(self.toks):
            raise MalformedInputError("trailing input after expression")
        return v

    def expr(self):
        kind, val = self.peek()
        sign = 1
        while kind == "op" and val in "+-":
            self.take()
            if val == "-":
                sign = -sign
            kind, val = self.peek()
        v = self.term()
        if sign < 0:
            v = self.neg(v)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                v = self.add(v, rhs) if val == "+" else self.sub(v, rhs)
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                v = self.mul(v, rhs) if val == "*" else self.div(v, rhs)
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                v = self.mul(v, self.factor())  # implicit multiplication
            else:
                return v

    def factor(self):
        kind, val = self.peek()
        sign = 1
        while kind == "op" and val in "+-":
            self.take()
            if val == "-":
                sign = -sign
            kind, val = self.peek()
        v = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            esign = 1
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                if val == "-":
                    esign = -1
                kind, val = self.peek()
            if kind != "num":
                raise MalformedInputError("exponent must be an integer")
            self.take()
            v = self.powr(v, esign * val)
        return v if sign > 0 else self.neg(v)

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.atom_num(val)
        if kind == "name":
            return self.atom_name(val)
        if kind == "op" and val == "(":
            v = self.expr()
            kind, val = self.take()
            if (kind, val) != ("op", ")"):
                raise MalformedInputError("missing closing parenthesis")
            return v
        raise MalformedInputError(f"unexpected token {val!r}")


_NAME = re.compile(r"^(dz|[bsz])(\d+)$")


def resolve_scalar_name(ctx, name):
    m = _NAME.match(name)
    if not m or m.group(1) == "dz":
        raise MalformedInputError(f"unknown symbol {name!r}")
    head, idx = m.group(1), int(m.group(2))
    if head in ("b", "s"):
        if not 1 <= idx <= ctx.npar:
            raise MalformedInputError(f"parameter index out of range: {name}")
        return ctx.fb[idx - 1]
    if not 1 <= idx <= ctx.nvar:
        raise MalformedInputError(f"variable index out of range: {name}")
    return ctx.fz[idx - 1]


def parse_ratfun(ctx, text):
    """Parse the scalar grammar into a field element of ctx."""

    def div(a, b):
        if not b:
            raise MalformedInputError("division by zero")
        return a / b

    p = _Parser(
        tokenize(text),
        atom_num=lambda v: ctx.to_frac(v),
        atom_name=lambda s: resolve_scalar_name(ctx, s),
        mul=lambda a, b: a * b,
        div=div,
        add=lambda a, b: a + b,
        sub=lambda a, b: a - b,
        neg=lambda a: -a,
        powr=lambda a, e: a ** e,
    )
    return p.parse()


def _coeff_str(c):
    c = Fraction(c.numerator, c.denominator) if not isinstance(c, Fraction) else c
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_to_string(ctx, p, names=None):
    """Canonical string of a ring element; terms in descending grevlex order."""
    if not p:
        return "0"
    names = names or ctx.names
    parts = []
    for mon, c in sorted(p.terms(), key=lambda t: ctx.ring.order(t[0]), reverse=True):
        c = Fraction(c.numerator, c.denominator)
        mono = [f"{names[i]}^{e}" if e > 1 else names[i] for i, e in enumerate(mon) if e]
        body = "*".join(mono)
        if not body:
            chunk = _coeff_str(abs(c))
        elif abs(c) == 1:
            chunk = body
        else:
            chunk = _coeff_str(abs(c)) + "*" + body
        parts.append(("-" if c < 0 else "+", chunk))
    sign0, chunk0 = parts[0]
    out = ("-" if sign0 == "-" else "") + chunk0
    for sign, chunk in parts[1:]:
        out += sign + chunk
    return out


def ratfun_to_string(ctx, fr, names=None):
    """Canonical string of a field element: num or (num)/(den), denominator monic."""
    num, den = fr.numer, fr.denom
    if not num:
        return "0"
    if den == ctx.ring.one:
        return poly_to_string(ctx, num, names)
    lc = den.LC
    if lc != QQ(1):
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return f"({poly_to_string(ctx, num, names)})/({poly_to_string(ctx, den, names)})"
