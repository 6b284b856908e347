"""Shared symbol context: exact arithmetic in Q[b_1..b_d, z_1..z_N] and its fraction field.

Parameters b_i and deformation variables z_j live in one sympy polynomial ring
over QQ with graded reverse lexicographic order on the fixed symbol ordering
b_1 < .. < b_d < z_1 < .. < z_N, so every polynomial and rational function has
a canonical, reproducible form.
"""

from dataclasses import dataclass
from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import field as _field
from sympy.polys.orderings import grevlex
from sympy.polys.rings import ring as _ring

from .errors import MalformedInputError


@dataclass(frozen=True)
class Symbol:
    """A parameter b_index or variable z_index, identified by (kind, index); 1-based."""

    kind: str  # "parameter" | "variable"
    index: int

    def __post_init__(self):
        if self.kind not in ("parameter", "variable"):
            raise MalformedInputError(f"bad symbol kind {self.kind!r}")
        if self.index < 1:
            raise MalformedInputError("symbol index must be >= 1")

    @property
    def name(self):
        return ("b" if self.kind == "parameter" else "z") + str(self.index)


class SymbolContext:
    """Polynomial ring and fraction field in d parameters and N variables."""

    def __init__(self, npar, nvar):
        self.npar, self.nvar = npar, nvar
        names = [f"b{i + 1}" for i in range(npar)] + [f"z{j + 1}" for j in range(nvar)]
        self.names = names
        self.ring, *rg = _ring(",".join(names), QQ, order=grevlex)
        self.field, *fg = _field(",".join(names), QQ, order=grevlex)
        self.b = rg[:npar]
        self.z = rg[npar:]
        self.fb = fg[:npar]
        self.fz = fg[npar:]
        self.zero, self.one = self.ring.zero, self.ring.one
        self.fzero, self.fone = self.field.zero, self.field.one

    # ---- conversions -------------------------------------------------
    def to_frac(self, p):
        """Embed a ring element (or int/Fraction) into the fraction field."""
        if p in (0, None):
            return self.fzero
        if isinstance(p, (int, Fraction)):
            return self.field.ground_new(QQ(p.numerator, p.denominator) if isinstance(p, Fraction) else QQ(p))
        return self.field.new(p, self.ring.one)

    def frac(self, num, den):
        """num/den as a field element, num/den ring elements or ints."""
        if isinstance(num, int):
            num = num * self.one
        if isinstance(den, int):
            den = den * self.one
        if not den:
            raise MalformedInputError("zero denominator")
        return self.field.new(num, den)

    def symbol_gen(self, sym):
        if sym.kind == "parameter":
            if sym.index > self.npar:
                raise MalformedInputError(f"parameter index {sym.index} out of range")
            return self.b[sym.index - 1]
        if sym.index > self.nvar:
            raise MalformedInputError(f"variable index {sym.index} out of range")
        return self.z[sym.index - 1]

    # ---- structural maps ---------------------------------------------
    def negate_params(self, fr):
        """Substitute b_i -> -b_i in a field element."""

        def neg(p):
            out = {}
            for mon, c in p.terms():
                s = sum(mon[: self.npar])
                out[mon] = -c if s % 2 else c
            return self.ring.from_dict(out)

        return self.field.new(neg(fr.numer), neg(fr.denom))

    def poly_shift_params(self, p, shift):
        """p(b + shift) for a ring element p and an integer vector shift (len npar)."""
        out = self.zero
        for mon, c in p.terms():
            term = self.ring.ground_new(c)
            for i, e in enumerate(mon[: self.npar]):
                if e:
                    term *= (self.b[i] + shift[i]) ** e
            for j, e in enumerate(mon[self.npar:]):
                if e:
                    term *= self.z[j] ** e
            out += term
        return out

    def subs_z(self, fr, values):
        """Substitute z_j -> values[j] (rational or None to keep) in a field element.

        Raises MalformedInputError if the denominator vanishes identically.
        """

        def ev(p):
            out = self.fzero
            for mon, c in p.terms():
                term = self.to_frac(self.ring.ground_new(c))
                for i, e in enumerate(mon):
                    if not e:
                        continue
                    if i >= self.npar and values[i - self.npar] is not None:
                        v = values[i - self.npar]
                        term = term * self.to_frac(Fraction(v)) ** e
                    else:
                        term = term * self.field.gens[i] ** e
                out += term
            return out

        den = ev(fr.denom)
        if not den:
            raise MalformedInputError("substitution makes denominator vanish")
        return ev(fr.numer) / den

    def frac_diff_z(self, fr, j):
        """d/dz_{j+1} of a field element."""
        return fr.diff(self.field.gens[self.npar + j])

    def eval_rational(self, fr, bvals, zvals):
        """Evaluate a field element at rational points; returns Fraction."""
        vals = list(bvals) + list(zvals)

        def ev(p):
            tot = Fraction(0)
            for mon, c in p.terms():
                t = Fraction(c.numerator, c.denominator)
                for i, e in enumerate(mon):
                    if e:
                        t *= Fraction(vals[i]) ** e
                tot += t
            return tot

        den = ev(fr.denom)
        if den == 0:
            raise MalformedInputError("evaluation point hits a pole")
        return ev(fr.numer) / den

    def monomial_frac(self, zexp):
        """z^zexp as a field element, integer exponents of either sign."""
        out = self.fone
        for j, e in enumerate(zexp):
            if e:
                out = out * self.fz[j] ** e
        return out
