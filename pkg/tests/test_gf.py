import random

import pytest

from lfano import gf


def test_moduli_deterministic():
    assert gf.field_make(2, 1).modulus == (0, 1)
    assert gf.field_make(2, 2).modulus == (1, 1, 1)
    assert gf.field_make(3, 2).modulus == (1, 0, 1)
    assert gf.field_make(2, 4).modulus == (1, 1, 0, 0, 1)


def test_not_prime():
    with pytest.raises(gf.NotPrime):
        gf.field_make(6, 1)


def test_field_axioms_small():
    for p, e in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]:
        F = gf.field_make(p, e)
        for x in F.elements():
            assert x ** F.order == x
        g = F.multiplicative_generator()
        seen = set()
        x = F.one()
        for _ in range(F.order - 1):
            seen.add(x.rep)
            x = x * g
        assert len(seen) == F.order - 1


def test_embed_is_homomorphism():
    F4 = gf.field_make(2, 2)
    F16 = gf.field_make(2, 4)
    for a in F4.elements():
        for b in F4.elements():
            assert gf.embed(a, F16) + gf.embed(b, F16) == gf.embed(a + b, F16)
            assert gf.embed(a, F16) * gf.embed(b, F16) == gf.embed(a * b, F16)
    assert gf.embed(F4.zero(), F16).is_zero()
    assert gf.embed(F4.one(), F16) == F16.one()


def test_embed_tower_compatible():
    F2 = gf.field_make(2, 1)
    F4 = gf.field_make(2, 2)
    F16 = gf.field_make(2, 4)
    for a in F2.elements():
        assert gf.embed(gf.embed(a, F4), F16) == gf.embed(a, F16)


def test_embed_incompatible():
    with pytest.raises(gf.NoEmbedding):
        gf.embed(gf.field_make(2, 2).one(), gf.field_make(2, 3))


def test_frobenius_fixes_base():
    F16 = gf.field_make(2, 4)
    fixed = [x for x in F16.elements() if gf.frobenius(x, 1) == x]
    assert len(fixed) == 2
    g = F16.multiplicative_generator()
    assert gf.orbit_size(g, 1) == 4


def test_frobenius_additive_multiplicative():
    F9 = gf.field_make(3, 2)
    for a in F9.elements():
        for b in F9.elements():
            assert gf.frobenius(a + b) == gf.frobenius(a) + gf.frobenius(b)
            assert gf.frobenius(a * b) == gf.frobenius(a) * gf.frobenius(b)


def test_orbit_sizes_divide_degree():
    F = gf.field_make(2, 4)
    total = 0
    for x in F.elements():
        s = gf.orbit_size(x, 1)
        assert 4 % s == 0
        total += 1
    assert total == 16


def test_mpoly_substitute_zero_on_plane():
    F = gf.field_make(2, 1)
    f = gf.mpoly_parse("x0*x1", F, 4)
    rows = [[F.one(), F.zero(), F.zero(), F.zero()],
            [F.zero(), F.zero(), F.one(), F.zero()]]
    assert gf.mpoly_substitute(f, rows).is_zero()


def test_substitute_char2_conic_line():
    # x0^2 + x0 x1 restricted to the line x0 = x1 = s vanishes in char 2
    F = gf.field_make(2, 1)
    f = gf.mpoly_parse("x0^2+x0*x1", F, 2)
    rows = [[F.one(), F.one()]]
    assert gf.mpoly_substitute(f, rows).is_zero()
    # and pointwise over F4 as a cross-check
    F4 = gf.field_make(2, 2)
    f4 = f.map_coeffs(lambda c: gf.embed(c, F4), F4)
    for t in F4.elements():
        assert gf.mpoly_eval(f4, (t, t)).is_zero()


def test_eval_constant_term():
    F = gf.field_make(3, 1)
    f = gf.mpoly_parse("x0^2+2*x1+1", F, 2)
    # not homogeneous, but eval still works
    assert gf.mpoly_eval(f, (F.zero(), F.zero())) == F.from_int(1)


def test_substitute_matches_pointwise():
    rng = random.Random(11)
    F = gf.field_make(3, 1)
    F9 = gf.field_make(3, 2)
    f = gf.mpoly_parse("x0^2+2*x0*x2+x1*x2", F, 3)
    rows = [[F.from_int(rng.randrange(3)) for _ in range(3)] for _ in range(2)]
    rows[0][0] = F.one()
    sub = gf.mpoly_substitute(f, rows)
    sub9 = sub.map_coeffs(lambda c: gf.embed(c, F9), F9)
    f9 = f.map_coeffs(lambda c: gf.embed(c, F9), F9)
    rows9 = [[gf.embed(c, F9) for c in row] for row in rows]
    for _ in range(20):
        t = [F9.from_code(rng.randrange(9)) for _ in range(2)]
        x = [sum((rows9[a][i] * t[a] for a in range(2)), F9.zero()) for i in range(3)]
        assert gf.mpoly_eval(sub9, t) == gf.mpoly_eval(f9, x)


def test_substitute_requires_homogeneous():
    F = gf.field_make(2, 1)
    f = gf.mpoly_parse("x0^2+x1", F, 2)
    with pytest.raises(gf.DimensionMismatch):
        gf.mpoly_substitute(f, [[F.one(), F.zero()]])


def test_poly_grammar_roundtrip():
    F4 = gf.field_make(2, 2)
    f = gf.mpoly_parse("g^2*x0^2+g*x0*x1+x1^2", F4, 2)
    assert gf.mpoly_parse(gf.mpoly_render(f), F4, 2).terms == f.terms
    with pytest.raises(gf.PolyParseError):
        gf.mpoly_parse("x9", F4, 2)
    with pytest.raises(gf.PolyParseError):
        gf.mpoly_parse("y0+x1", F4, 2)
