"""Catalog of motivic classes as exact L-polynomials.

Projective spaces, Grassmannians, symmetric products of projective
space, unordered configuration spaces, the rank-stratified tuple loci
I(u, n, r) (multisets) and K(u, n, r) (distinct points), the dependent
tuple classes C and D, and the Grassmannian factor of the weighted
average.  Everything here is purely symbolic; Y-dependent numerators
are supplied by the numeric side.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

from .lring import (DEFAULT_DEPTH, LPoly, LSeries, NonExactDivision, invert_poly,
                    relative_dimension)
from .params import ParamSet, ParameterViolation


class OutOfRange(ValueError):
    pass


class IncompleteInput(ValueError):
    pass


@dataclass(frozen=True)
class ClassExpr:
    value: LPoly
    label: str

    def __mul__(self, other):
        ov = other.value if isinstance(other, ClassExpr) else other
        ol = other.label if isinstance(other, ClassExpr) else str(other)
        return ClassExpr(self.value * ov, f"{self.label}*{ol}")

    def __str__(self):
        return f"{self.label} = {self.value}"


@dataclass(frozen=True)
class ZetaSeries:
    """Truncated motivic zeta function of P^k: coefficients of t^0..t^R."""

    base: ClassExpr
    terms: tuple


def proj_class(n):
    """[P^n] = 1 + L + ... + L^n."""
    if n < 0:
        raise OutOfRange("projective dimension must be >= 0")
    return ClassExpr(LPoly({i: 1 for i in range(n + 1)}), f"P({n})")


@functools.cache
def _gauss_vector(r, n):
    """Class of r-dimensional subspaces of an n-dimensional space.

    Product of (L^(n-r+j) - 1)/(L^j - 1); the division is exact.
    """
    if r < 0 or r > n:
        return LPoly.zero()
    num = LPoly.one()
    den = LPoly.one()
    for j in range(1, r + 1):
        num = num * (LPoly.L(n - r + j) - LPoly.one())
        den = den * (LPoly.L(j) - LPoly.one())
    try:
        return num.exact_div(den)
    except NonExactDivision as exc:  # impossible unless the ring is broken
        raise NonExactDivision(f"Gaussian binomial [{n},{r}] not exact") from exc


def grassmannian_class(k, n):
    """[G(k, n)], k-planes in P^n, as an integer L-polynomial."""
    if not 0 <= k <= n:
        raise OutOfRange(f"G({k},{n}) needs 0 <= k <= n")
    return ClassExpr(_gauss_vector(k + 1, n + 1), f"G({k},{n})")


def grassmann_through(u, n, r):
    """Class of r-planes in P^n through a fixed independent u-tuple.

    The quotient construction gives G(r-u, n-u); for u = 0 this is all
    of G(r, n).
    """
    if u == 0:
        return grassmannian_class(r, n)
    if r - u < -1:
        return ClassExpr(LPoly.zero(), f"G({r - u},{n - u})")
    return ClassExpr(_gauss_vector(r - u + 1, n - u + 1), f"G({r - u},{n - u})")


@functools.cache
def _sym_proj(k, r):
    """Coefficient of t^r in prod_i 1/(1 - L^i t), i = 0..k."""
    if r < 0:
        return LPoly.zero()
    # dp over the product factors; dp[j] = coeff of t^j so far
    dp = [LPoly.one()] + [LPoly.zero() for _ in range(r)]
    for i in range(k + 1):
        # multiply by 1/(1 - L^i t): new[j] = sum_{a<=j} L^(i*(j-a)) dp_old[a]
        for j in range(1, r + 1):
            dp[j] = dp[j] + dp[j - 1].shift(i)
    return dp[r]


def sym_proj_class(k, r):
    """[Sym^r P^k] via the zeta series of P^k."""
    if k < 0 or r < 0:
        raise OutOfRange("sym_proj_class needs k, r >= 0")
    return ClassExpr(_sym_proj(k, r), f"Sym({r},P({k}))")


def zeta_series(k, R):
    """Zeta series of P^k truncated at t^R."""
    return ZetaSeries(proj_class(k), tuple(_sym_proj(k, r) for r in range(R + 1)))


def uconf_class(sym_classes, n):
    """[UConf^n X] from [Sym^0 X] .. [Sym^n X] by the squarefree recursion.

    [UConf^n X] = [Sym^n X] - sum_{k>=1} [UConf^(n-2k) X][Sym^k X],
    with [UConf^0 X] = 1.
    """
    if len(sym_classes) < n + 1:
        raise IncompleteInput(f"need Sym^0..Sym^{n}, got {len(sym_classes)} entries")
    syms = [c.value if isinstance(c, ClassExpr) else c for c in sym_classes]
    uconf = [LPoly.one()]
    for m in range(1, n + 1):
        val = syms[m]
        for k in range(1, m // 2 + 1):
            val = val - uconf[m - 2 * k] * syms[k]
        uconf.append(val)
    label = getattr(sym_classes[1], "label", "X") if n >= 1 else "X"
    return ClassExpr(uconf[n], f"UConf({n},{label})")


@functools.cache
def _uconf_proj(k, r):
    syms = [sym_proj_class(k, j) for j in range(r + 1)]
    return uconf_class(syms, r).value


def uconf_proj_class(k, r):
    return ClassExpr(_uconf_proj(k, r), f"UConf({r},P({k}))")


@functools.cache
def _rank_locus(u, n, r, distinct):
    """[I_{u,n,r}] or (distinct=True) [K_{u,n,r}].

    Two-step recursion: peel off the Grassmannian of possible spans,
    then subtract the lower-rank strata inside the full tuple space of
    the span.
    """
    if u < 1 or u > min(r, n + 1):
        raise OutOfRange(f"rank {u} out of range for r={r}, n={n}")
    if u == 1:
        if distinct:
            # r >= 2 distinct points never have rank 1
            return proj_class(n).value if r == 1 else LPoly.zero()
        return proj_class(n).value
    if n > u - 1:
        return _gauss_vector(u, n + 1) * _rank_locus(u, u - 1, r, distinct)
    # n == u - 1: full-rank stratum of the whole tuple space
    total = _uconf_proj(n, r) if distinct else _sym_proj(n, r)
    val = total
    for v in range(1, u):
        val = val - _rank_locus(v, n, r, distinct)
    return val


def rank_locus_class(u, n, r, distinct=False):
    """Locus of unordered r-tuples in P^n of span-rank exactly u.

    I (multisets allowed) has base [I_{1,b,r}] = [P^b]; K (distinct
    points) has base [K_{1,b,r}] = 0 for r >= 2.
    """
    name = "K" if distinct else "I"
    return ClassExpr(_rank_locus(u, n, r, bool(distinct)), f"{name}({u},{n},{r})")


def dependent_tuple_classes(params: ParamSet):
    """The classes [C] and [D] of degenerate tuples in P^(n-m).

    [C] is the (k+1)-multisets that fail to be independent.  [D] is
    regime-dependent: dependent (d-k-1)-multisets in the low regime,
    distinct (d-k-1)-tuples spanning a proper subspace in the high one.
    """
    params.check_structural()
    nm = params.r
    r2 = params.r2
    r1 = params.r1
    if r2 > nm + 1:
        raise ParameterViolation(f"k+1 = {r2} exceeds n-m+1 = {nm + 1}")
    c_val = _sym_proj(nm, r2) - _rank_locus(r2, nm, r2, False)
    C = ClassExpr(c_val, f"C(n-m={nm},k={params.k})")
    if params.low_regime:
        d_val = _sym_proj(nm, r1) - _rank_locus(r1, nm, r1, False)
    else:
        d_val = _uconf_proj(nm, r1) - _rank_locus(nm + 1, nm, r1, True)
    D = ClassExpr(d_val, f"D(n-m={nm},d-k-1={r1})")
    return C, D


@dataclass(frozen=True)
class WeightedAverage:
    """Grassmannian factor of the approximate weighted average.

    The Y-dependent numerator [Y^(u)] has no L-polynomial form in
    general, so it stays an open slot: apply() plugs in a point count
    and a field size and returns the exact rational value of the term.
    """

    n: int
    m: int
    u: int
    factor: LSeries            # [G(n-m-u, n-u)] / [G(n-m, n)], truncated
    numerator_poly: LPoly      # [G(n-m-u, n-u)]
    denominator_poly: LPoly    # [G(n-m, n)]

    def apply(self, sym_count_value, q):
        from fractions import Fraction

        from .lring import specialize
        return Fraction(sym_count_value) * specialize(self.numerator_poly, q) \
            / specialize(self.denominator_poly, q)

    def relative_dimension(self):
        return relative_dimension(self.factor)


def weighted_average_class(n, m, u, depth=DEFAULT_DEPTH):
    if u > n - m:
        raise ParameterViolation(f"u = {u} exceeds n-m = {n - m}")
    if u < 0:
        raise ParameterViolation("u must be >= 0")
    num = grassmann_through(u, n, n - m).value
    den = grassmannian_class(n - m, n).value
    factor = invert_poly(den, depth) * num
    return WeightedAverage(n, m, u, factor.truncate(depth), num, den)


# -- CLI-facing catalog names ------------------------------------------

_NAME_RE = re.compile(r"\s*([A-Za-z]+)\s*\(")


def parse_class(text):
    """Parse catalog names: P(n), G(k,n), Sym(r,P(k)), UConf(r,P(k)),
    I(u,n,r), K(u,n,r), C(n,m,d,k), D(n,m,d,k)."""
    text = text.strip()
    m = re.fullmatch(r"P\((\d+)\)", text)
    if m:
        return proj_class(int(m.group(1)))
    m = re.fullmatch(r"G\((\d+)\s*,\s*(\d+)\)", text)
    if m:
        return grassmannian_class(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"Sym\((\d+)\s*,\s*P\((\d+)\)\)", text)
    if m:
        return sym_proj_class(int(m.group(2)), int(m.group(1)))
    m = re.fullmatch(r"UConf\((\d+)\s*,\s*P\((\d+)\)\)", text)
    if m:
        return uconf_proj_class(int(m.group(2)), int(m.group(1)))
    m = re.fullmatch(r"([IK])\((\d+)\s*,\s*(\d+)\s*,\s*(\d+)\)", text)
    if m:
        return rank_locus_class(int(m.group(2)), int(m.group(3)), int(m.group(4)),
                                distinct=(m.group(1) == "K"))
    m = re.fullmatch(r"([CD])\((\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\)", text)
    if m:
        ps = ParamSet(*(int(g) for g in m.groups()[1:]))
        c, d = dependent_tuple_classes(ps)
        return c if m.group(1) == "C" else d
    raise ValueError(f"unknown class expression {text!r}")
