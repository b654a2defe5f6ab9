import itertools

import pytest

from lfano import geom, gf
from lfano.lring import specialize
from lfano.motivic import grassmannian_class

FERMAT = """field 2 1
ambient 3
form x0^3+x1^3+x2^3+x3^3
"""

CI22 = """field 2 1
ambient 5
form x0*x1+x2*x3+x4*x5
form x0*x2+x0*x5+x1^2+x2^2+x2*x4+x3*x4+x5^2
"""


def fermat():
    return geom.parse_variety(FERMAT)


def test_variety_derivations():
    Y = fermat()
    assert (Y.n, Y.m, Y.d, Y.s) == (3, 2, 3, 1)
    ci = geom.parse_variety(CI22)
    assert (ci.n, ci.m, ci.d, ci.s) == (5, 3, 4, 2)
    assert ci.degrees == (2, 2)


def test_variety_file_errors():
    with pytest.raises(geom.VarietyFormatError):
        geom.parse_variety("ambient 3\nform x0^2\n")
    with pytest.raises(geom.VarietyFormatError):
        geom.parse_variety("field 2 1\nambient 2\nform x0^2+x1\n")
    with pytest.raises(geom.VarietyFormatError):
        geom.parse_variety("field 2 1\nambient 2\nfrom x0^2\n")


def test_projective_space_counts():
    P3 = geom.parse_variety("field 2 1\nambient 3\n")
    assert len(geom.enumerate_points(P3, 1)) == 15
    assert geom.count_points(P3, 2) == 85


def test_fermat_point_counts():
    Y = fermat()
    assert geom.count_points(Y, 1) == 7
    assert geom.count_points(Y, 2) == 45
    assert geom.count_points(Y, 4) == 369


def test_smoothness_flag():
    assert fermat().smooth_at_checked_points()[0]
    cone = geom.parse_variety("field 2 1\nambient 3\nform x0^3+x1^3+x2^3\n")
    assert not cone.smooth_at_checked_points()[0]


def test_plane_counts_match_specialization():
    for q_spec, (p, e) in {2: (2, 1), 3: (3, 1), 4: (2, 2)}.items():
        fld = gf.field_make(p, e)
        for n in range(1, 5):
            for k in range(n + 1):
                got = sum(1 for _ in geom.enumerate_planes(k, n, fld))
                want = int(specialize(grassmannian_class(k, n).value, q_spec))
                assert got == want, (k, n, q_spec)


def test_plane_enumeration_unique():
    fld = gf.field_make(2, 1)
    seen = set()
    for pl in geom.enumerate_planes(1, 3, fld):
        key = tuple(tuple(x.rep for x in row) for row in pl.rows)
        assert key not in seen
        seen.add(key)
    assert len(seen) == 35


def test_plane_contains():
    Y = fermat()
    fld = Y.field
    # zero ideal contains any plane
    P3 = geom.parse_variety("field 2 1\nambient 3\n")
    any_plane = next(geom.enumerate_planes(1, 3, fld))
    assert geom.plane_contains(P3, any_plane)
    # the line {x0=x1, x2=x3} lies on the Fermat cubic in char 2
    rows = ((fld.one(), fld.one(), fld.zero(), fld.zero()),
            (fld.zero(), fld.zero(), fld.one(), fld.one()))
    line = geom.PlaneRep(1, (0, 2), rows)
    assert geom.plane_contains(Y, line)
    # a line through a non-point of Y
    rows2 = ((fld.one(), fld.zero(), fld.zero(), fld.zero()),
             (fld.zero(), fld.one(), fld.zero(), fld.zero()))
    assert not geom.plane_contains(Y, geom.PlaneRep(1, (0, 1), rows2))


def test_fano_counts():
    Y = fermat()
    assert geom.fano_count(Y, 1, 1) == 3
    assert geom.fano_count(Y, 1, 2) == 27
    assert geom.fano_count(Y, 0, 1) == geom.count_points(Y, 1)


def test_tangent_line_profile():
    conic = geom.parse_variety("field 3 1\nambient 2\nform x0*x2+2*x1^2\n")
    fld = conic.field
    rows = ((fld.one(), fld.zero(), fld.zero()), (fld.zero(), fld.one(), fld.zero()))
    prof = geom.intersection_profile(conic, geom.PlaneRep(1, (0, 1), rows))
    assert prof.kind == "Tangent"
    assert prof.geometric_count == 1


def test_contained_profile():
    Y = fermat()
    fld = Y.field
    rows = ((fld.one(), fld.one(), fld.zero(), fld.zero()),
            (fld.zero(), fld.zero(), fld.one(), fld.one()))
    prof = geom.intersection_profile(Y, geom.PlaneRep(1, (0, 2), rows))
    assert prof.kind == "Contained"
    assert prof.orbit_sizes == ()


def test_transversal_profile_ci22():
    ci = geom.parse_variety(CI22)
    found = None
    for pl in geom.enumerate_planes(2, 5, ci.field):
        prof = geom.intersection_profile(ci, pl)
        if prof.kind == "Transversal":
            found = (pl, prof)
            break
    pl, prof = found
    assert sum(prof.orbit_sizes) == 4
    assert all(s <= 4 for s in prof.orbit_sizes)


def test_profile_invariant_under_coordinate_permutation():
    ci = geom.parse_variety(CI22)
    perm = (5, 3, 0, 1, 4, 2)
    permuted = []
    for f in ci.forms:
        terms = {}
        for ev, c in f.terms.items():
            nev = tuple(ev[perm.index(i)] for i in range(6))
            terms[nev] = c
        permuted.append(gf.MPoly(ci.field, 6, terms))
    ci_p = geom.VarietySpec(5, ci.field, tuple(permuted))
    from collections import Counter
    profs, profs_p = Counter(), Counter()
    planes = itertools.islice(geom.enumerate_planes(2, 5, ci.field), 120)
    for pl in planes:
        profs[(geom.intersection_profile(ci, pl).kind,)] += 1
    # permute every plane's columns, reclassify against the permuted variety
    for pl in itertools.islice(geom.enumerate_planes(2, 5, ci.field), 120):
        rows = tuple(tuple(row[perm.index(i)] for i in range(6)) for row in pl.rows)
        prof = geom.intersection_profile(ci_p, geom.PlaneRep(2, pl.pivots, rows))
        profs_p[(prof.kind,)] += 1
    assert profs == profs_p


def test_sym_counts():
    P1 = geom.parse_variety("field 2 1\nambient 1\n")
    assert geom.sym_count(P1, 2, 1) == 7
    assert geom.sym_count(P1, 0, 1) == 1
    Y = fermat()
    assert geom.sym_count(Y, 2, 1) == (7 * 7 + 45) // 2


def test_hilb2():
    Y = fermat()
    assert geom.hilb2_count(Y, 1) == (49 - 7) // 2 + (45 - 7) // 2 + 7 * 3
    cone = geom.parse_variety("field 2 1\nambient 3\nform x0^3+x1^3+x2^3\n")
    with pytest.raises(geom.SmoothnessRequired):
        geom.hilb2_count(cone, 1)


def test_hilb2_sym_blowup_relation():
    # hilb2 - sym2 = N1 (#P^(m-1) - 1), the diagonal blow-up correction
    for e in (1, 2):
        Y = fermat()
        q = 2 ** e
        n1 = geom.count_points(Y, e)
        pm1 = (q ** Y.m - 1) // (q - 1)
        assert geom.hilb2_count(Y, e) - geom.sym_count(Y, 2, e) == n1 * (pm1 - 1)


def test_uconf_count_matches_catalog():
    from lfano.motivic import uconf_proj_class
    P2 = geom.parse_variety("field 2 1\nambient 2\n")
    for r in range(1, 4):
        assert geom.uconf_count(P2, r, 1) == \
            int(specialize(uconf_proj_class(2, r).value, 2))


def test_dependent_multiset_count():
    Y = fermat()
    assert geom.dependent_multiset_count(Y, 1, 1) == 0
    assert geom.dependent_multiset_count(Y, 2, 1) == 7
    # brute-force oracle for r = 3 over F_2: classify all stable
    # 3-multisets of the cubic surface by the rank of their support
    n3 = geom.dependent_multiset_count(Y, 3, 1)
    inv = geom.orbit_inventory(Y, 1, 3)
    big = gf.field_make(2, 6)

    def lift(orb):
        return [tuple(gf.embed(x, big) for x in pt) for pt in orb]

    def rank(pts):
        rows = [list(p) for p in pts]
        return geom._gf_rank(rows, big)

    count = 0
    items = [(size, lift(orb)) for size, orb in inv]
    # multisets = orbit multiset choices with total size 3
    n = len(items)
    for i in range(n):
        s_i, o_i = items[i]
        if s_i == 3 and rank(o_i) <= 2:
            count += 1            # a single 3-orbit
        if s_i == 1:
            if rank(o_i * 3) <= 2:
                count += 1        # {a, a, a} always rank 1
            for j in range(n):
                s_j, o_j = items[j]
                if s_j == 2 and rank(o_i + o_j) <= 2:
                    count += 1    # {a} + 2-orbit
                if s_j == 1 and j > i and rank(o_i + o_i + o_j) <= 2:
                    count += 2    # {a,a,b} and {a,b,b}
            for j in range(i + 1, n):
                s_j, o_j = items[j]
                if s_j != 1:
                    continue
                for k in range(j + 1, n):
                    s_k, o_k = items[k]
                    if s_k == 1 and rank(o_i + o_j + o_k) <= 2:
                        count += 1  # three distinct rational points
    assert n3 == count
