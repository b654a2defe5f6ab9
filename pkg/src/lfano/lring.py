"""Exact arithmetic in Q[L, L^-1] and its dimension-filtration completion.

L stands for the class of the affine line.  Polynomials are sparse maps
from integer exponents (possibly negative) to exact rationals; the
completion is modelled by truncated series in L^-1.  Floating point is
deliberately absent from this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_DEPTH = 32


class ZeroPolynomial(ZeroDivisionError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class ParseError(ValueError):
    pass


def _normalize(coeffs):
    out = {}
    for k, v in coeffs.items():
        v = Fraction(v)
        if v != 0:
            out[int(k)] = v
    return out


class LPoly:
    """Laurent polynomial in L with exact rational coefficients.

    Immutable after construction; the zero polynomial has an empty
    coefficient map.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        object.__setattr__(self, "coeffs", _normalize(coeffs or {}))

    def __setattr__(self, name, value):
        raise AttributeError("LPoly is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero():
        return LPoly()

    @staticmethod
    def one():
        return LPoly({0: 1})

    @staticmethod
    def L(exp=1, coeff=1):
        return LPoly({exp: coeff})

    @staticmethod
    def from_int(c):
        return LPoly({0: c})

    # -- predicates ---------------------------------------------------
    def is_zero(self):
        return not self.coeffs

    def top_exponent(self):
        """Highest exponent with nonzero coefficient; None for zero."""
        return max(self.coeffs) if self.coeffs else None

    def bottom_exponent(self):
        return min(self.coeffs) if self.coeffs else None

    def leading_coefficient(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[max(self.coeffs)]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LPoly.from_int(other)
        if not isinstance(other, LPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __getitem__(self, exp):
        return self.coeffs.get(exp, Fraction(0))

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = LPoly.from_int(other)
        if isinstance(other, LSeries):
            return other + self
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LPoly.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LPoly({k: v * other for k, v in self.coeffs.items()})
        if isinstance(other, LSeries):
            return other * self
        out = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                k = ka + kb
                out[k] = out.get(k, Fraction(0)) + va * vb
        return LPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers require invert_poly")
        result = LPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k):
        """Multiply by L^k."""
        return LPoly({e + k: c for e, c in self.coeffs.items()})

    def exact_div(self, other):
        """Exact polynomial division; raises NonExactDivision otherwise.

        Both operands must be honest polynomials after a common shift;
        the quotient of Laurent polynomials is normalized the same way.
        """
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        if self.is_zero():
            return LPoly.zero()
        sa, sb = self.bottom_exponent(), other.bottom_exponent()
        num = {e - sa: c for e, c in self.coeffs.items()}
        den = {e - sb: c for e, c in other.coeffs.items()}
        dd = max(den)
        lead = den[dd]
        quot = {}
        while num:
            dn = max(num)
            if dn < dd:
                raise NonExactDivision(f"remainder of degree {dn} left over")
            c = num[dn] / lead
            quot[dn - dd] = c
            for e, v in den.items():
                k = dn - dd + e
                nv = num.get(k, Fraction(0)) - c * v
                if nv == 0:
                    num.pop(k, None)
                else:
                    num[k] = nv
        return LPoly(quot).shift(sa - sb)

    def truncate(self, depth):
        """Drop exponents below -depth (the image mod F^(depth+1))."""
        return LPoly({k: v for k, v in self.coeffs.items() if k >= -depth})

    def as_series(self, depth=DEFAULT_DEPTH):
        return LSeries({k: v for k, v in self.coeffs.items() if k >= -depth}, depth)

    def __repr__(self):
        return f"LPoly({render(self)!r})"

    def __str__(self):
        return render(self)


class NonExactDivision(ArithmeticError):
    pass


class LSeries:
    """Element of the completion, truncated at a filtration depth.

    Stored exponents are all >= -depth; anything deeper has been
    discarded.  Ring operations on series of different depths truncate
    to the smaller depth.
    """

    __slots__ = ("coeffs", "depth")

    def __init__(self, coeffs=None, depth=DEFAULT_DEPTH):
        c = _normalize(coeffs or {})
        bad = [k for k in c if k < -depth]
        for k in bad:
            del c[k]
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "depth", int(depth))

    def __setattr__(self, name, value):
        raise AttributeError("LSeries is immutable")

    def is_zero(self):
        return not self.coeffs

    def top_exponent(self):
        return max(self.coeffs) if self.coeffs else None

    def __eq__(self, other):
        if isinstance(other, (int, LPoly)):
            other = (LPoly.from_int(other) if isinstance(other, int) else other).as_series(self.depth)
        if not isinstance(other, LSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.depth == other.depth

    def __hash__(self):
        return hash((self.depth, tuple(sorted(self.coeffs.items()))))

    @staticmethod
    def _coerce(other, depth):
        if isinstance(other, int):
            other = LPoly.from_int(other)
        if isinstance(other, LPoly):
            return other.as_series(depth)
        return other

    def __add__(self, other):
        other = self._coerce(other, self.depth)
        depth = min(self.depth, other.depth)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LSeries(out, depth)

    __radd__ = __add__

    def __neg__(self):
        return LSeries({k: -v for k, v in self.coeffs.items()}, self.depth)

    def __sub__(self, other):
        return self + (-self._coerce(other, self.depth))

    def __rsub__(self, other):
        return (-self) + self._coerce(other, self.depth)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LSeries({k: v * other for k, v in self.coeffs.items()}, self.depth)
        other = self._coerce(other, self.depth)
        depth = min(self.depth, other.depth)
        out = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                k = ka + kb
                if k >= -depth:
                    out[k] = out.get(k, Fraction(0)) + va * vb
        return LSeries(out, depth)

    __rmul__ = __mul__

    def truncate(self, depth):
        return LSeries({k: v for k, v in self.coeffs.items() if k >= -depth},
                       min(self.depth, depth))

    def eq_mod(self, other, depth):
        """Equality of the images mod F^depth (exponents > -depth)."""
        other = self._coerce(other, self.depth)
        a = {k: v for k, v in self.coeffs.items() if k > -depth}
        b = {k: v for k, v in other.coeffs.items() if k > -depth}
        return a == b

    def __repr__(self):
        return f"LSeries({render(self)!r}, depth={self.depth})"

    def __str__(self):
        return render(self)


BOTTOM = object()


@dataclass(frozen=True)
class RelDim:
    """Relative dimension: the top L-exponent, or BOTTOM for zero.

    BOTTOM keeps reldim(a*b) = reldim(a) + reldim(b) exceptionless; use
    or_zero() where the dim(0) = 0 convention is wanted instead.
    """

    value: object

    @property
    def is_bottom(self):
        return self.value is BOTTOM

    def or_zero(self):
        return 0 if self.is_bottom else self.value

    def __add__(self, other):
        if self.is_bottom or other.is_bottom:
            return RelDim(BOTTOM)
        return RelDim(self.value + other.value)

    def at_most(self, bound):
        """One-sided comparison; BOTTOM satisfies every bound."""
        return True if self.is_bottom else self.value <= bound

    def __repr__(self):
        return "RelDim(BOTTOM)" if self.is_bottom else f"RelDim({self.value})"


def relative_dimension(x):
    top = x.top_exponent()
    return RelDim(BOTTOM) if top is None else RelDim(top)


def invert_poly(p, depth=DEFAULT_DEPTH):
    """Inverse of a nonzero Laurent polynomial in the completion.

    Factors out the leading power L^T and inverts the remaining
    polynomial in L^-1 by the geometric-series recursion.  The result
    carries T guard terms beyond the requested depth so that
    p * invert_poly(p, depth) == 1 holds mod F^(depth+1).
    """
    if isinstance(p, LSeries):
        raise TypeError("invert_poly takes an LPoly")
    if p.is_zero():
        raise ZeroPolynomial("cannot invert the zero polynomial")
    top = p.top_exponent()
    # u_i = coefficient of L^(top - i); u_0 is the leading coefficient
    u = {}
    for e, c in p.coeffs.items():
        u[top - e] = c
    out_depth = depth + top
    nterms = depth + top  # exponents -top - i >= -(depth + top)  =>  i <= depth
    c0 = Fraction(1) / u[0]
    cs = [c0]
    for i in range(1, depth + 1):
        acc = Fraction(0)
        for j in range(1, i + 1):
            if j in u:
                acc += u[j] * cs[i - j]
        cs.append(-acc / u[0])
    coeffs = {-top - i: cs[i] for i in range(depth + 1)}
    return LSeries(coeffs, out_depth)


def specialize(x, q):
    """Evaluate L -> q exactly; q must be nonzero if x has negative exponents."""
    if isinstance(x, LSeries):
        raise TypeError("specialize is defined on LPoly only")
    q = Fraction(q)
    if q == 0 and x.bottom_exponent() is not None and x.bottom_exponent() < 0:
        raise DivisionByZero("specializing negative powers of L at 0")
    total = Fraction(0)
    for e, c in x.coeffs.items():
        total += c * q ** e
    return total


# -- textual form ------------------------------------------------------

def _render_coeff(c):
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


def render(x):
    """`c_k*L^k + ...` with exponents descending."""
    if not x.coeffs:
        return "0"
    parts = []
    for e in sorted(x.coeffs, reverse=True):
        c = x.coeffs[e]
        mag = _render_coeff(abs(c))
        if e == 0:
            term = mag
        else:
            lpart = "L" if e == 1 else f"L^{e}"
            term = lpart if mag == "1" else f"{mag}*{lpart}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


def parse(text, depth=None):
    """Parse the rendering grammar back into LPoly (or LSeries if depth given)."""
    import re

    s = text.strip()
    if s == "0":
        return LSeries({}, depth) if depth is not None else LPoly()
    term_re = re.compile(
        r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*)?)?(L(?:\^(-?\d+))?)?\s*")
    coeffs = {}
    pos = 0
    first = True
    while pos < len(s):
        m = term_re.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ParseError(f"bad term at {s[pos:]!r}")
        sign_s, coeff_s, lpart, exp_s = m.groups()
        if not first and not sign_s:
            raise ParseError(f"missing sign at {s[pos:]!r}")
        sign = -1 if sign_s == "-" else 1
        c = Fraction(coeff_s) if coeff_s else Fraction(1)
        e = (int(exp_s) if exp_s else 1) if lpart else 0
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = m.end()
        first = False
    if depth is not None:
        return LSeries(coeffs, depth)
    return LPoly(coeffs)
