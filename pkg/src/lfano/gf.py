"""Finite fields F_{p^e} with deterministic moduli, and multivariate
polynomials over them.

Elements are coefficient vectors over F_p; the modulus of each field is
the lexicographically smallest monic irreducible of its degree, so
every run of the library constructs identical towers.  Embeddings are
pinned by the smallest-root rule.
"""

from __future__ import annotations

import functools
import itertools
import threading
from dataclasses import dataclass


class NotPrime(ValueError):
    pass


class NoEmbedding(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class PolyParseError(ValueError):
    pass


_SIZE_CAP = 1 << 22  # largest table-backed field


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod(a, b, mod, p):
    e = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    for i in range(len(res) - 1, e - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(e):
                res[i - e + j] = (res[i - e + j] - c * mod[j]) % p
    res = res[:e]
    res += [0] * (e - len(res))
    return res


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_gcd_nonconst(a, mod, p):
    a = list(a)
    b = list(mod)

    def deg(x):
        d = len(x) - 1
        while d >= 0 and x[d] % p == 0:
            d -= 1
        return d

    while True:
        da, db = deg(a), deg(b)
        if da < 0:
            return db > 0
        if db < 0:
            return da > 0
        if da < db:
            a, b = b, a
            da, db = db, da
        inv = pow(b[db], p - 2, p)
        c = a[da] * inv % p
        for j in range(db + 1):
            a[da - db + j] = (a[da - db + j] - c * b[j]) % p


def _is_irreducible(coeffs, p):
    """coeffs: full monic coefficient list, low to high."""
    e = len(coeffs) - 1
    if e == 1:
        return True
    if coeffs[0] == 0:
        return False

    def frob_iter(poly, times):
        cur = poly
        for _ in range(times):
            acc = [1] + [0] * (e - 1)
            for _ in range(p):
                acc = _poly_mul_mod(acc, cur, coeffs, p)
            cur = acc
        return cur

    x = [0, 1] + [0] * (e - 2)
    xq = frob_iter(x, e)
    if xq != x:
        return False
    for d in _prime_divisors(e):
        g = list(frob_iter(x, e // d))
        g[1] = (g[1] - 1) % p
        if _poly_gcd_nonconst(g, coeffs, p):
            return False
    return True


@functools.cache
def _modulus(p, e):
    """Lex-smallest monic irreducible of degree e over F_p.

    Candidates are ordered by the integer whose base-p digits are the
    non-leading coefficients, most significant first.
    """
    if e == 1:
        return (0, 1)
    for c in range(p ** e):
        coeffs = [(c // p ** i) % p for i in range(e)] + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError("no irreducible found (unreachable)")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple

    @property
    def order(self):
        return self.p ** self.e

    def zero(self):
        return GFElem(self, (0,) * self.e)

    def one(self):
        return GFElem(self, (1,) + (0,) * (self.e - 1))

    def gen(self):
        """Class of x in F_p[x]/(modulus); the prime field's 1 when e = 1."""
        if self.e == 1:
            return self.one()
        return GFElem(self, (0, 1) + (0,) * (self.e - 2))

    def from_int(self, c):
        return GFElem(self, (c % self.p,) + (0,) * (self.e - 1))

    def from_code(self, code):
        rep = tuple((code // self.p ** i) % self.p for i in range(self.e))
        return GFElem(self, rep)

    def elements(self):
        for code in range(self.order):
            yield self.from_code(code)

    @functools.cache
    def multiplicative_generator(self):
        """Smallest generator in rep-lex (code) order."""
        n = self.order - 1
        divs = _prime_divisors(n)
        for code in range(1, self.order):
            g = self.from_code(code)
            if all((g ** (n // d)) != self.one() for d in divs):
                return g
        raise RuntimeError("no generator found (unreachable)")

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"


def field_make(p, e):
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** e > _SIZE_CAP:
        raise ValueError(f"field size {p}^{e} exceeds the supported cap")
    return FieldSpec(p, e, _modulus(p, e))


class GFElem:
    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = tuple(c % field.p for c in rep)

    def code(self):
        p = self.field.p
        return sum(c * p ** i for i, c in enumerate(self.rep))

    def is_zero(self):
        return all(c == 0 for c in self.rep)

    def __eq__(self, other):
        return isinstance(other, GFElem) and self.field == other.field and self.rep == other.rep

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.rep))

    def __add__(self, other):
        self._check(other)
        return GFElem(self.field, tuple(a + b for a, b in zip(self.rep, other.rep)))

    def __sub__(self, other):
        self._check(other)
        return GFElem(self.field, tuple(a - b for a, b in zip(self.rep, other.rep)))

    def __neg__(self):
        return GFElem(self.field, tuple(-a for a in self.rep))

    def __mul__(self, other):
        self._check(other)
        rep = _poly_mul_mod(list(self.rep), list(other.rep), list(self.field.modulus),
                            self.field.p)
        return GFElem(self.field, tuple(rep))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        return self ** (self.field.order - 2)

    def __pow__(self, n):
        if self.is_zero():
            if n == 0:
                raise ZeroDivisionError("0**0 in a finite field")
            return self
        n %= self.field.order - 1
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _check(self, other):
        if self.field != other.field:
            raise DimensionMismatch("elements of different fields")

    def __repr__(self):
        return f"GFElem({self.field!r}, {self.rep})"


def frobenius(x, base_power=None):
    """x -> x^(p^base_power); defaults to one application of x -> x^p."""
    k = base_power if base_power is not None else 1
    return x ** (x.field.p ** k)


def orbit_size(x, base_power):
    """Size of the orbit of x under x -> x^(p^base_power)."""
    q = x.field.p ** base_power
    y = x ** q
    size = 1
    while y != x:
        y = y ** q
        size += 1
    return size


_EMBED_CACHE = {}
_EMBED_LOCK = threading.Lock()


def _embedding_image(src: FieldSpec, dst: FieldSpec):
    """Image of src.gen() under the canonical embedding into dst.

    The smallest root (in code order) of src's modulus inside dst; the
    prime field embeds as constants.
    """
    if src.e == 1:
        return dst.one()
    key = (src.p, src.e, dst.e)
    img = _EMBED_CACHE.get(key)
    if img is not None:
        return img
    mod = src.modulus
    for code in range(dst.order):
        cand = dst.from_code(code)
        acc = dst.zero()
        power = dst.one()
        for c in mod:
            if c:
                acc = acc + power * dst.from_int(c)
            power = power * cand
        if acc.is_zero():
            with _EMBED_LOCK:
                _EMBED_CACHE[key] = cand
            return cand
    raise NoEmbedding("modulus has no root in the target field (unreachable)")


def embed(x, target: FieldSpec):
    """Canonical field embedding F_{p^a} -> F_{p^(ab)}."""
    src = x.field
    if src == target:
        return x
    if src.p != target.p or target.e % src.e != 0:
        raise NoEmbedding(f"no embedding {src!r} -> {target!r}")
    img = _embedding_image(src, target)
    acc = target.zero()
    power = target.one()
    for c in x.rep:
        if c:
            acc = acc + power * target.from_int(c)
        power = power * img
    return acc


# -- multivariate polynomials -------------------------------------------

class MPoly:
    """Multivariate polynomial with GFElem coefficients, sparse terms."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for ev, c in (terms or {}).items():
            if len(ev) != nvars:
                raise DimensionMismatch("exponent vector length mismatch")
            if not c.is_zero():
                clean[tuple(int(a) for a in ev)] = c
        self.terms = clean

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(ev) for ev in self.terms), default=-1)

    def is_homogeneous(self):
        degs = {sum(ev) for ev in self.terms}
        return len(degs) <= 1

    def map_coeffs(self, fn, field=None):
        out = {}
        for ev, c in self.terms.items():
            out[ev] = fn(c)
        return MPoly(field or self.field, self.nvars, out)

    def __add__(self, other):
        out = dict(self.terms)
        for ev, c in other.terms.items():
            cur = out.get(ev)
            out[ev] = c if cur is None else cur + c
        return MPoly(self.field, self.nvars, out)

    def __mul__(self, other):
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                ev = tuple(a + b for a, b in zip(ea, eb))
                c = ca * cb
                cur = out.get(ev)
                out[ev] = c if cur is None else cur + c
        return MPoly(self.field, self.nvars, out)

    def scale(self, c):
        return MPoly(self.field, self.nvars, {ev: c * v for ev, v in self.terms.items()})

    def derivative(self, var):
        out = {}
        for ev, c in self.terms.items():
            a = ev[var]
            if a == 0:
                continue
            nev = tuple(x - 1 if i == var else x for i, x in enumerate(ev))
            nc = c * self.field.from_int(a)
            if not nc.is_zero():
                cur = out.get(nev)
                out[nev] = nc if cur is None else cur + nc
        return MPoly(self.field, self.nvars, out)


def mpoly_eval(f: MPoly, point):
    if len(point) != f.nvars:
        raise DimensionMismatch(f"expected {f.nvars} coordinates")
    acc = f.field.zero()
    for ev, c in f.terms.items():
        t = c
        for x, a in zip(point, ev):
            if a:
                t = t * x ** a
        acc = acc + t
    return acc


def mpoly_substitute(f: MPoly, rows):
    """Restrict f to the plane spanned by the given rows.

    rows is a (k+1) x nvars matrix of GFElem; the result is the
    coefficient-level composition of f with x_i = sum_a s_a rows[a][i],
    a polynomial in the k+1 plane coordinates.  f must be homogeneous.
    """
    if not f.is_homogeneous():
        raise DimensionMismatch("substitution requires a homogeneous form")
    nrows = len(rows)
    if any(len(r) != f.nvars for r in rows):
        raise DimensionMismatch("row length must match the variable count")
    field = f.field
    linear = []
    for i in range(f.nvars):
        terms = {}
        for a in range(nrows):
            c = rows[a][i]
            if not c.is_zero():
                ev = tuple(1 if t == a else 0 for t in range(nrows))
                terms[ev] = c
        linear.append(MPoly(field, nrows, terms))
    one = MPoly(field, nrows, {(0,) * nrows: field.one()})
    acc = MPoly(field, nrows, {})
    for ev, c in f.terms.items():
        t = one.scale(c)
        for i, a in enumerate(ev):
            for _ in range(a):
                t = t * linear[i]
        acc = acc + t
    return acc


# -- polynomial text grammar --------------------------------------------

def mpoly_parse(text, field: FieldSpec, nvars):
    """Terms `c*x0^a0*x1^a1*...` joined by `+`; coefficients are
    integers on the prime field or `g^k` powers of the multiplicative
    generator on extensions."""
    import re

    f_terms = {}
    text = text.replace("-", "+-")
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:].strip()
        coeff = field.one()
        ev = [0] * nvars
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise PolyParseError(f"empty factor in {raw!r}")
            m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
            if m:
                idx = int(m.group(1))
                if idx >= nvars:
                    raise PolyParseError(f"variable x{idx} out of range")
                ev[idx] += int(m.group(2) or 1)
                continue
            m = re.fullmatch(r"g\^(\d+)", factor)
            if m:
                coeff = coeff * field.multiplicative_generator() ** int(m.group(1))
                continue
            m = re.fullmatch(r"g", factor)
            if m:
                coeff = coeff * field.multiplicative_generator()
                continue
            m = re.fullmatch(r"(\d+)", factor)
            if m:
                coeff = coeff * field.from_int(int(m.group(1)))
                continue
            raise PolyParseError(f"bad factor {factor!r}")
        if neg:
            coeff = -coeff
        key = tuple(ev)
        cur = f_terms.get(key)
        f_terms[key] = coeff if cur is None else cur + coeff
    return MPoly(field, nvars, f_terms)


def mpoly_render(f: MPoly):
    if f.is_zero():
        return "0"
    gen_log = {}
    field = f.field
    if field.e > 1:
        g = field.multiplicative_generator()
        x = field.one()
        for k in range(field.order - 1):
            gen_log[x.rep] = k
            x = x * g
    parts = []
    for ev in sorted(f.terms, reverse=True):
        c = f.terms[ev]
        if field.e == 1:
            cs = str(c.rep[0])
        else:
            k = gen_log[c.rep]
            cs = "1" if k == 0 else ("g" if k == 1 else f"g^{k}")
        factors = [] if cs == "1" and any(ev) else [cs]
        for i, a in enumerate(ev):
            if a == 1:
                factors.append(f"x{i}")
            elif a > 1:
                factors.append(f"x{i}^{a}")
        parts.append("*".join(factors) if factors else cs)
    return " + ".join(parts)
