import pytest

from lfano import motivic as mv
from lfano.lring import LPoly, specialize
from lfano.params import ParamSet, ParameterViolation


def test_proj_class():
    assert mv.proj_class(0).value == LPoly.one()
    assert mv.proj_class(2).value == LPoly({0: 1, 1: 1, 2: 1})
    assert specialize(mv.proj_class(3).value, 2) == 15


def test_grassmannian_values():
    g = mv.grassmannian_class(1, 3).value
    assert g == LPoly({4: 1, 3: 1, 2: 2, 1: 1, 0: 1})
    assert specialize(g, 2) == 35
    assert specialize(g, 3) == 130
    assert specialize(mv.grassmannian_class(2, 5).value, 2) == 1395
    assert mv.grassmannian_class(0, 4).value == mv.proj_class(4).value


def test_grassmannian_symmetry():
    for n in range(1, 9):
        for k in range(n):
            assert mv.grassmannian_class(k, n).value == \
                mv.grassmannian_class(n - k - 1, n).value


def test_grassmannian_degree():
    for n in range(1, 7):
        for k in range(n + 1):
            assert mv.grassmannian_class(k, n).value.top_exponent() == (k + 1) * (n - k)


def test_sym_proj():
    assert mv.sym_proj_class(1, 2).value == LPoly({0: 1, 1: 1, 2: 1})
    assert specialize(mv.sym_proj_class(1, 2).value, 2) == 7
    for k in range(4):
        assert mv.sym_proj_class(k, 1).value == mv.proj_class(k).value
        assert mv.sym_proj_class(k, 0).value == LPoly.one()
    for k in range(1, 5):
        for r in range(1, 5):
            assert mv.sym_proj_class(k, r).value.top_exponent() == k * r


def test_zeta_series():
    z = mv.zeta_series(2, 4)
    assert z.terms[0] == LPoly.one()
    assert z.terms[1] == mv.proj_class(2).value


def test_uconf_examples():
    # [UConf^1 X] = [X] and [UConf^3 X] = [Sym^3 X] - [X]^2
    p2 = [mv.sym_proj_class(2, j) for j in range(4)]
    u1 = mv.uconf_class(p2, 1).value
    assert u1 == mv.proj_class(2).value
    u3 = mv.uconf_class(p2, 3).value
    x = mv.proj_class(2).value
    assert u3 == mv.sym_proj_class(2, 3).value - x * x
    assert mv.uconf_proj_class(1, 2).value == LPoly({2: 1})
    assert specialize(mv.uconf_proj_class(1, 2).value, 2) == 4


def test_uconf_affine_line_squarefree_counts():
    # stable root sets of squarefree monic polynomials: q^n - q^(n-1)
    for n in range(2, 6):
        syms = [mv.ClassExpr(LPoly({j: 1}), f"Sym({j},A1)") for j in range(n + 1)]
        u = mv.uconf_class(syms, n).value
        for q in (2, 3, 5):
            assert specialize(u, q) == q ** n - q ** (n - 1)


def test_uconf_incomplete_input():
    with pytest.raises(mv.IncompleteInput):
        mv.uconf_class([mv.sym_proj_class(1, 0)], 2)


def test_rank_locus_bases():
    for b in range(1, 4):
        for r in range(1, 4):
            assert mv.rank_locus_class(1, b, r).value == mv.proj_class(b).value
    assert mv.rank_locus_class(1, 2, 3, distinct=True).value.is_zero()
    assert mv.rank_locus_class(1, 2, 1, distinct=True).value == mv.proj_class(2).value
    # [I_2] = [G(1,b)]([Sym^r P^1] - [P^1])
    for b in (2, 3):
        for r in (2, 3, 4):
            expect = mv.grassmannian_class(1, b).value * \
                (mv.sym_proj_class(1, r).value - mv.proj_class(1).value)
            assert mv.rank_locus_class(2, b, r).value == expect
    # [K_2] = [G(1,b)][UConf_r P^1]
    for b in (2, 3):
        for r in (2, 3):
            expect = mv.grassmannian_class(1, b).value * mv.uconf_proj_class(1, r).value
            assert mv.rank_locus_class(2, b, r, distinct=True).value == expect


def test_rank_locus_out_of_range():
    with pytest.raises(mv.OutOfRange):
        mv.rank_locus_class(5, 2, 3)


def test_stratification_completeness():
    for n in range(1, 6):
        for r in range(1, 6):
            tot = LPoly.zero()
            totk = LPoly.zero()
            for u in range(1, min(r, n + 1) + 1):
                tot = tot + mv.rank_locus_class(u, n, r).value
                totk = totk + mv.rank_locus_class(u, n, r, distinct=True).value
            assert tot == mv.sym_proj_class(n, r).value, (n, r)
            assert totk == mv.uconf_proj_class(n, r).value, (n, r)


def test_dependent_tuple_classes():
    # k = 0: a single point is never linearly dependent
    C, D = mv.dependent_tuple_classes(ParamSet(5, 3, 4, 0))
    assert C.value.is_zero()
    # low-regime degree formula for D at (n-m, d-k-1) = (3, 2)
    ps = ParamSet(8, 5, 5, 2)
    assert ps.low_regime
    C2, D2 = mv.dependent_tuple_classes(ps)
    nm, dk2 = 3, ps.d - ps.k - 2
    assert D2.value.top_exponent() == nm * dk2 + dk2 - 1
    # deg C = (n-m)k + k - 1
    assert C2.value.top_exponent() == nm * ps.k + ps.k - 1


def test_weighted_average():
    wa = mv.weighted_average_class(5, 3, 1, depth=16)
    assert wa.relative_dimension().value == -1 * 3
    wa0 = mv.weighted_average_class(5, 3, 0, depth=16)
    assert wa0.factor.eq_mod(LPoly.one(), 16)
    assert all(k >= -16 for k in wa.factor.coeffs)
    with pytest.raises(ParameterViolation):
        mv.weighted_average_class(5, 3, 4)
    assert wa.apply(7, 2) == 7 * specialize(wa.numerator_poly, 2) / \
        specialize(wa.denominator_poly, 2)


def test_parse_class_names():
    assert mv.parse_class("P(3)").value == mv.proj_class(3).value
    assert mv.parse_class("G(2,5)").value == mv.grassmannian_class(2, 5).value
    assert mv.parse_class("Sym(3,P(2))").value == mv.sym_proj_class(2, 3).value
    assert mv.parse_class("UConf(2,P(1))").value == mv.uconf_proj_class(1, 2).value
    assert mv.parse_class("I(2,3,4)").value == mv.rank_locus_class(2, 3, 4).value
    assert mv.parse_class("K(2,3,4)").value == \
        mv.rank_locus_class(2, 3, 4, distinct=True).value
    with pytest.raises(ValueError):
        mv.parse_class("Spec(1)")
