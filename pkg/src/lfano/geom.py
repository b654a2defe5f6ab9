"""Projective geometry over finite fields.

Varieties are complete intersections given by homogeneous forms; the
module enumerates points and planes, classifies plane sections by
orbit profile, counts Fano planes, and produces symmetric-product and
Hilbert-square point counts from the zeta data of the variety.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field as dc_field
from math import lcm, prod

from . import gf
from ._core import tables as _tables
from .lring import specialize
from .motivic import grassmannian_class


class VarietyFormatError(ValueError):
    pass


class SmoothnessRequired(ValueError):
    pass


_SMOOTH_BUDGET = 2_000_000  # projective points we are willing to sweep


@dataclass
class VarietySpec:
    """Projective complete intersection over a finite field."""

    n: int
    field: gf.FieldSpec
    forms: tuple
    source_text: str = ""

    def __post_init__(self):
        for f in self.forms:
            if not f.is_homogeneous() or f.is_zero():
                raise VarietyFormatError("defining forms must be nonzero homogeneous")
            if f.nvars != self.n + 1:
                raise VarietyFormatError("form variable count must be n+1")
        self._smooth = {}
        self._counts = {}

    @property
    def s(self):
        return len(self.forms)

    @property
    def m(self):
        return self.n - self.s

    @property
    def degrees(self):
        return tuple(f.degree() for f in self.forms)

    @property
    def d(self):
        return prod(self.degrees) if self.forms else 1

    def content_hash(self):
        return hashlib.sha256(self.source_text.encode()).hexdigest()

    def base_change(self, e):
        if e == 1:
            return self
        big = gf.field_make(self.field.p, self.field.e * e)
        forms = tuple(f.map_coeffs(lambda c: gf.embed(c, big), big) for f in self.forms)
        v = VarietySpec(self.n, big, forms, self.source_text)
        return v

    def smooth_at_checked_points(self, e_max=2):
        """Jacobian rank s at every F_{q^e}-point for e <= e_max.

        Returns (flag, e_checked): e_checked can fall短 of e_max when
        the sweep would exceed the point budget.
        """
        key = e_max
        if key in self._smooth:
            return self._smooth[key]
        checked = 0
        ok = True
        for e in range(1, e_max + 1):
            nproj = (self.field.order ** (e * (self.n + 1)) - 1) // (self.field.order ** e - 1)
            if nproj > _SMOOTH_BUDGET:
                break
            Ye = self.base_change(e)
            jac = [[f.derivative(v) for v in range(self.n + 1)] for f in Ye.forms]
            for pt in enumerate_points(Ye, 1):
                rows = [[gf.mpoly_eval(df, pt) for df in row] for row in jac]
                if _gf_rank(rows, Ye.field) < self.s:
                    ok = False
                    break
            checked = e
            if not ok:
                break
        self._smooth[key] = (ok, checked)
        return ok, checked


def _gf_rank(rows, fld):
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    ri = 0
    for col in range(ncols):
        piv = next((r for r in range(ri, len(rows)) if not rows[r][col].is_zero()), None)
        if piv is None:
            continue
        rows[ri], rows[piv] = rows[piv], rows[ri]
        inv = rows[ri][col].inverse()
        for r in range(ri + 1, len(rows)):
            if rows[r][col].is_zero():
                continue
            f = rows[r][col] * inv
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[ri])]
        rank += 1
        ri += 1
        if ri == len(rows):
            break
    return rank


def parse_variety(text):
    """Plain-text variety file: `field p e`, `ambient n`, `form <poly>`."""
    fld = None
    n = None
    form_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "field":
            try:
                p, e = (int(t) for t in rest.split())
            except ValueError as exc:
                raise VarietyFormatError(f"line {lineno}: bad field line") from exc
            fld = gf.field_make(p, e)
        elif head == "ambient":
            try:
                n = int(rest)
            except ValueError as exc:
                raise VarietyFormatError(f"line {lineno}: bad ambient line") from exc
        elif head == "form":
            form_lines.append((lineno, rest.strip()))
        else:
            raise VarietyFormatError(f"line {lineno}: unknown directive {head!r}")
    if fld is None or n is None:
        raise VarietyFormatError("variety file needs `field` and `ambient` lines")
    forms = []
    for lineno, src in form_lines:
        try:
            forms.append(gf.mpoly_parse(src, fld, n + 1))
        except gf.PolyParseError as exc:
            raise VarietyFormatError(f"line {lineno}: {exc}") from exc
    return VarietySpec(n, fld, tuple(forms), source_text=text)


def load_variety(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_variety(fh.read())


# -- points ---------------------------------------------------------------

def _proj_reps(fld, nvars):
    elems = [fld.from_code(c) for c in range(fld.order)]
    one = fld.one()
    zero = fld.zero()
    for lead in range(nvars):
        for rest in itertools.product(elems, repeat=nvars - 1 - lead):
            yield (zero,) * lead + (one,) + rest


def enumerate_points(Y: VarietySpec, e):
    """Canonical representatives of Y(F_{q^e})."""
    Ye = Y.base_change(e)
    out = []
    for pt in _proj_reps(Ye.field, Ye.n + 1):
        if all(gf.mpoly_eval(f, pt).is_zero() for f in Ye.forms):
            out.append(pt)
    return out


def count_points(Y: VarietySpec, e):
    """#Y(F_{q^e}); cached, kernel-accelerated on big fields."""
    key = e
    if key in Y._counts:
        return Y._counts[key]
    from . import _core
    Ye = Y.base_change(e)
    fld = Ye.field
    nproj = (fld.order ** (Ye.n + 1) - 1) // (fld.order - 1)
    if nproj > 20000:
        tower = _tables.FieldTower(fld, [1])
        lt = tower.level(1)
        polys = []
        for f in Ye.forms:
            poly = {}
            for ev, c in f.terms.items():
                poly[ev] = int(lt.logt[c.code()])
            polys.append(poly)
        cnt = _core.count_projective_solutions((lt, polys), Ye.n + 1)
    else:
        cnt = len(enumerate_points(Ye, 1))
    Y._counts[key] = cnt
    return cnt


# -- planes ---------------------------------------------------------------

@dataclass(frozen=True)
class PlaneRep:
    """k-plane as the unique reduced-row-echelon spanning matrix."""

    k: int
    pivots: tuple
    rows: tuple  # (k+1) x (n+1) GFElem matrix

    @property
    def field(self):
        return self.rows[0][0].field


def enumerate_planes(k, n, fld: gf.FieldSpec):
    """Every k-plane of P^n over fld exactly once, grouped by pivot set."""
    elems = [fld.from_code(c) for c in range(fld.order)]
    zero = fld.zero()
    one = fld.one()
    for pivots in itertools.combinations(range(n + 1), k + 1):
        pivset = set(pivots)
        free = [(r, c) for r, pc in enumerate(pivots)
                for c in range(pc + 1, n + 1) if c not in pivset]
        for vals in itertools.product(elems, repeat=len(free)):
            rows = [[zero] * (n + 1) for _ in range(k + 1)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = one
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield PlaneRep(k, pivots, tuple(tuple(r) for r in rows))


def plane_contains(Y: VarietySpec, plane: PlaneRep):
    """Coefficient-level containment test, immune to x^q - x pitfalls."""
    return all(gf.mpoly_substitute(f, plane.rows).is_zero() for f in Y.forms)


@dataclass(frozen=True)
class OrbitProfile:
    kind: str                       # Transversal | Tangent | Contained | PositiveDim
    orbit_sizes: tuple              # descending, empty unless finite section
    geometric_count: int
    orbits: tuple = dc_field(default=(), repr=False, compare=False)

    @property
    def transversal(self):
        return self.kind == "Transversal"


def intersection_profile(Y: VarietySpec, plane: PlaneRep):
    """Orbit profile of Y cut by the plane.

    Contained planes are detected symbolically; otherwise geometric
    points are swept over F_{q^e}, e = 1..d, with the Bezout bound d
    certifying positive dimension.
    """
    restricted = [gf.mpoly_substitute(f, plane.rows) for f in Y.forms]
    if all(f.is_zero() for f in restricted):
        return OrbitProfile("Contained", (), -1)
    d = Y.d
    base = Y.field
    orbits = []
    total = 0
    for j in range(1, d + 1):
        fld = gf.field_make(base.p, base.e * j)
        lifted = [f.map_coeffs(lambda c: gf.embed(c, fld), fld) for f in restricted]
        sols = [pt for pt in _proj_reps(fld, plane.k + 1)
                if all(gf.mpoly_eval(f, pt).is_zero() for f in lifted)]
        if len(sols) > d:
            return OrbitProfile("PositiveDim", (), len(sols))
        seen = set()
        for pt in sols:
            if pt in seen:
                continue
            orb = [pt]
            cur = tuple(gf.frobenius(x, base.e) for x in pt)
            while cur != pt:
                orb.append(cur)
                cur = tuple(gf.frobenius(x, base.e) for x in cur)
            seen.update(orb)
            if len(orb) == j:
                orbits.append((j, tuple(orb)))
                total += j
        if total > d:
            return OrbitProfile("PositiveDim", (), total)
    sizes = tuple(sorted((s for s, _ in orbits), reverse=True))
    kind = "Transversal" if total == d else "Tangent"
    return OrbitProfile(kind, sizes, total, tuple(orbits))


def fano_count(Y: VarietySpec, k, e):
    """F_k points: k-planes over F_{q^e} contained in the base change."""
    Ye = Y.base_change(e)
    return sum(1 for pl in enumerate_planes(k, Ye.n, Ye.field) if plane_contains(Ye, pl))


def plane_count(k, n, fld):
    return int(specialize(grassmannian_class(k, n).value, fld.order))


# -- zeta-style counting ---------------------------------------------------

def sym_count(Y: VarietySpec, r, e):
    """Galois-stable effective 0-cycles of degree r (Newton recurrence)."""
    if r == 0:
        return 1
    N = [count_points(Y, e * j) for j in range(1, r + 1)]
    S = [1] + [0] * r
    for t in range(1, r + 1):
        S[t] = sum(N[i - 1] * S[t - i] for i in range(1, t + 1)) // t
    return S[r]


def uconf_count(Y: VarietySpec, r, e):
    """Galois-stable r-subsets of distinct geometric points."""
    if r == 0:
        return 1
    N = [count_points(Y, e * j) for j in range(1, r + 1)]
    o = {}
    for j in range(1, r + 1):
        o[j] = (N[j - 1] - sum(s * o[s] for s in range(1, j) if j % s == 0)) // j
    dp = [1] + [0] * r
    for s, cnt in o.items():
        for _ in range(cnt):
            for t in range(r, s - 1, -1):
                dp[t] += dp[t - s]
    return dp[r]


def hilb2_count(Y: VarietySpec, e):
    """F_{q^e}-points of the Hilbert square of a smooth Y."""
    ok, checked = Y.smooth_at_checked_points()
    if not ok:
        raise SmoothnessRequired("hilb2_count needs the smoothness flag")
    n1 = count_points(Y, e)
    n2 = count_points(Y, 2 * e)
    q = Y.field.order ** e
    pm1 = (q ** Y.m - 1) // (q - 1)  # number of P^(m-1) points
    return (n1 * n1 - n1) // 2 + (n2 - n1) // 2 + n1 * pm1


# -- orbit inventories on Y -------------------------------------------------

def orbit_inventory(Y: VarietySpec, e, max_size):
    """Frobenius orbits of geometric points of Y of size <= max_size,
    over the base F_{q^e}; returns [(size, points)] with coordinates in
    F_{q^(e*size)}."""
    Ye = Y.base_change(e)
    base = Ye.field
    out = []
    for j in range(1, max_size + 1):
        pts = enumerate_points(Ye, j)
        seen = set()
        for pt in pts:
            if pt in seen:
                continue
            orb = [pt]
            cur = tuple(gf.frobenius(x, base.e) for x in pt)
            while cur != pt:
                orb.append(cur)
                cur = tuple(gf.frobenius(x, base.e) for x in cur)
            seen.update(orb)
            if len(orb) == j:
                out.append((j, tuple(orb)))
    return out


def dependent_multiset_count(Y: VarietySpec, r, e):
    """Stable r-multisets of Y whose support is linearly dependent.

    Organized by the span of the support: rank-1 multisets repeat one
    rational point, rank-2 supports sit on a unique rational line.
    Supports r <= 3, which covers every tuple size the identities use
    at desk scale.
    """
    if r <= 1:
        return 0
    n1 = count_points(Y, e)
    if r == 2:
        return n1
    if r != 3:
        raise NotImplementedError("dependent multiset counting is implemented for r <= 3")
    Ye = Y.base_change(e)
    fld = Ye.field
    total = n1  # rank-1: {a, a, a}
    for line in enumerate_planes(1, Ye.n, fld):
        restricted = [gf.mpoly_substitute(f, line.rows) for f in Ye.forms]
        if all(f.is_zero() for f in restricted):
            ms = [fld.order ** j + 1 for j in (1, 2, 3)]
        else:
            ms = []
            for j in (1, 2, 3):
                fj = gf.field_make(fld.p, fld.e * j)
                lifted = [f.map_coeffs(lambda c: gf.embed(c, fj), fj) for f in restricted]
                ms.append(sum(1 for pt in _proj_reps(fj, 2)
                              if all(gf.mpoly_eval(f, pt).is_zero() for f in lifted)))
        m1, m2, m3 = ms
        # stable 3-multisets on the line minus the rank-1 ones
        s1 = m1
        s2 = (m1 * m1 + m2) // 2
        s3 = (m1 ** 3 + 3 * m1 * m2 + 2 * m3) // 6
        total += s3 - m1
    return total
