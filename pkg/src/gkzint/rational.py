"""Public exact-arithmetic wrappers: multivariate polynomials and rational functions.

These are thin views over the shared SymbolContext ring/field; equality of
rational functions is structural equality of canonical forms (gcd-reduced,
denominator normalized monic under the canonical term order).
"""

from fractions import Fraction

from sympy import QQ

from .context import SymbolContext, Symbol  # noqa: F401  (re-exported)
from .errors import MalformedInputError
from .strings import parse_ratfun, poly_to_string, ratfun_to_string


class MultiPoly:
    """Exact multivariate polynomial over Q in the context's symbols."""

    __slots__ = ("ctx", "poly")

    def __init__(self, ctx, poly):
        self.ctx = ctx
        self.poly = poly

    @classmethod
    def from_terms(cls, ctx, terms):
        clean = {tuple(m): QQ(Fraction(c)) for m, c in terms.items() if Fraction(c) != 0}
        return cls(ctx, ctx.ring.from_dict(clean))

    def terms(self):
        return {mon: Fraction(c.numerator, c.denominator) for mon, c in self.poly.terms()}

    def __add__(self, other):
        return MultiPoly(self.ctx, self.poly + other.poly)

    def __sub__(self, other):
        return MultiPoly(self.ctx, self.poly - other.poly)

    def __mul__(self, other):
        return MultiPoly(self.ctx, self.poly * other.poly)

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.poly == other.poly

    def __bool__(self):
        return bool(self.poly)

    def __hash__(self):
        return hash(self.poly)

    def __str__(self):
        return poly_to_string(self.ctx, self.poly)

    __repr__ = __str__


class RatFun:
    """Rational function in canonical form: gcd(num, den) = 1, monic denominator."""

    __slots__ = ("ctx", "frac")

    def __init__(self, ctx, frac):
        self.ctx = ctx
        self.frac = frac

    @classmethod
    def parse(cls, ctx, text):
        return cls(ctx, parse_ratfun(ctx, text))

    @property
    def numerator(self):
        num, _ = _monic_pair(self.ctx, self.frac)
        return MultiPoly(self.ctx, num)

    @property
    def denominator(self):
        _, den = _monic_pair(self.ctx, self.frac)
        return MultiPoly(self.ctx, den)

    def __add__(self, other):
        return RatFun(self.ctx, self.frac + other.frac)

    def __sub__(self, other):
        return RatFun(self.ctx, self.frac - other.frac)

    def __mul__(self, other):
        return RatFun(self.ctx, self.frac * other.frac)

    def __truediv__(self, other):
        if not other.frac:
            raise MalformedInputError("division by zero rational function")
        return RatFun(self.ctx, self.frac / other.frac)

    def __neg__(self):
        return RatFun(self.ctx, -self.frac)

    def __eq__(self, other):
        return isinstance(other, RatFun) and self.frac == other.frac

    def __bool__(self):
        return bool(self.frac)

    def __hash__(self):
        return hash(self.frac)

    def __str__(self):
        return ratfun_to_string(self.ctx, self.frac)

    __repr__ = __str__


def _monic_pair(ctx, fr):
    num, den = fr.numer, fr.denom
    lc = den.LC
    if lc != QQ(1):
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


def rat_normalize(f):
    """Canonical form of a rational function; the carrier fraction field cancels
    gcds eagerly, so this re-normalizes the denominator to monic leading
    coefficient and returns a fresh RatFun."""
    if isinstance(f, RatFun):
        if not f.frac.denom:
            raise MalformedInputError("zero denominator")
        num, den = _monic_pair(f.ctx, f.frac)
        return RatFun(f.ctx, f.ctx.field.new(num, den))
    raise MalformedInputError("rat_normalize expects a RatFun")
