from fractions import Fraction

import pytest

from lfano import geom, yfy
from lfano.lring import specialize
from lfano.motivic import grassmann_through, grassmannian_class
from lfano.params import ParamSet, RegimeMismatch

CI22 = """field 2 1
ambient 5
form x0*x1+x2*x3+x4*x5
form x0*x2+x0*x5+x1^2+x2^2+x2*x4+x3*x4+x5^2
"""

CUBIC = """field 2 1
ambient 3
form x0^3+x1^3+x2^3+x3^3
"""


@pytest.fixture(scope="module")
def ci22():
    return geom.parse_variety(CI22)


@pytest.fixture(scope="module")
def cubic():
    return geom.parse_variety(CUBIC)


@pytest.fixture(scope="module")
def census(ci22):
    return yfy.stratum_counts(ci22, ParamSet(5, 3, 4, 0), 1,
                              pq="full", with_mn=True, collect=True)


def test_census_against_naive_oracle(census):
    # frozen from an independent single-threaded naive recount
    assert census.n_planes == 1395
    assert census.kind_histogram == {"Transversal": 288, "Tangent": 902,
                                     "PositiveDim": 205, "Contained": 0}
    assert (census.W, census.V, census.J) == (384, 384, 384)
    assert census.B1 == census.B2 == census.T1 == census.T2 == 0
    assert census.A == census.R == 0
    assert (census.P, census.Q) == (1344, 2561)
    assert (census.M, census.N) == (0, 439)
    assert census.bijection_failures == 0


def test_census_invariants(census):
    census.check_invariants()
    assert census.W == census.J + census.B1
    assert census.gen_W == census.gen_V


def test_incidence_cross_check(census, ci22):
    # every (rational point, plane through it) pair lands in exactly one bucket
    g2 = int(specialize(grassmann_through(1, 5, 2).value, 2))
    n1 = geom.count_points(ci22, 1)
    assert census.V + census.Q == n1 * g2


def test_stratum_counts_worker_invariance(ci22):
    ps = ParamSet(5, 3, 4, 0)
    a = yfy.stratum_counts(ci22, ps, 1, pq="cheap", with_mn=False, workers=1)
    b = yfy.stratum_counts(ci22, ps, 1, pq="cheap", with_mn=False, workers=3)
    assert a.as_dict() == b.as_dict()


def test_verify_extended_ci22(ci22):
    rep = yfy.verify_extended(ci22, ParamSet(5, 3, 4, 0), [1])
    assert rep["ok"]
    assert rep["rows"][0]["lhs"] == rep["rows"][0]["rhs"] == 384
    assert rep["has_exclusions"]  # planes through lines of Y


def test_verify_extended_cubic_degenerates(cubic):
    # B and T empty, the relation reduces to the classic correspondence
    rep = yfy.verify_extended(cubic, ParamSet(3, 2, 3, 1), [1, 2])
    assert rep["ok"] and not rep["has_exclusions"]
    for row in rep["rows"]:
        c = row["counts"]
        assert c["B1"] == c["B2"] == c["T1"] == c["T2"] == 0
        assert c["A"] > 0 and c["R"] > 0  # contained lines contribute


def test_verify_partition_low_regime(ci22):
    ps = ParamSet(5, 3, 4, 2)
    assert ps.low_regime
    rep = yfy.verify_partition(ci22, ps, 1)
    assert rep["ok"]
    assert rep["long_side"]["lhs"] == rep["long_side"]["rhs"] == 2945
    assert rep["short_side"]["lhs"] == rep["short_side"]["rhs"]
    assert rep["short_side"]["dependent_M"] == 439


def test_verify_partition_regime_gate(ci22):
    with pytest.raises(RegimeMismatch):
        yfy.verify_partition(ci22, ParamSet(5, 3, 4, 0), 1)


def test_verify_classic(cubic):
    rep = yfy.verify_classic(cubic, [1, 2])
    assert rep["ok"] and rep["smooth_flag"]
    by_e = {r["e"]: r for r in rep["rows"]}
    assert by_e[1]["sym2"] == 47 and by_e[1]["hilb2"] == 61
    assert by_e[1]["fano_lines"] == 3
    assert by_e[2]["points"] == 45 and by_e[2]["fano_lines"] == 27
    assert by_e[2]["sym2"] == 1197


def test_dimension_probe_examples():
    g25 = grassmannian_class(2, 5).value
    est = yfy.dimension_probe(lambda q: int(specialize(g25, q)), [2, 3, 4, 5])
    assert est.rounded() == 9
    est0 = yfy.dimension_probe(lambda q: 0, [2, 3, 4])
    assert est0.is_bottom
    with pytest.raises(yfy.InsufficientSamples):
        yfy.dimension_probe(lambda q: q, [2, 3])


def test_dimension_probe_variety():
    counts = {}
    for q, (p, e) in {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}.items():
        text = CI22.replace("field 2 1", f"field {p} 1")
        counts[q] = geom.count_points(geom.parse_variety(text).base_change(e), 1)
    est = yfy.dimension_probe(lambda q: counts[q], [2, 3, 4, 5])
    assert est.rounded() == 3


def test_refine_profile_and_subset_count():
    assert yfy.refine_profile((4,), 2) == (2, 2)
    assert yfy.refine_profile((3, 1), 3) == (1, 1, 1, 1)
    assert yfy.refine_profile((2, 2), 1) == (2, 2)
    assert yfy.stable_subset_count((1, 1, 1, 1), 3) == 4
    assert yfy.stable_subset_count((2, 2), 3) == 0
    assert yfy.stable_subset_count((2, 1, 1), 3) == 2


def test_per_plane_subset_conservation(census):
    # sum over subset sizes of stable-subset counts = 2^(number of orbits)
    from lfano import _core
    for kind, word in zip(census.kinds, census.profiles):
        if kind != _core.KIND_TRANSVERSAL:
            continue
        sizes = yfy.unpack_profile(word)
        total = sum(yfy.stable_subset_count(sizes, r) for r in range(sum(sizes) + 1))
        assert total == 2 ** len(sizes)


def test_langweil_check(ci22):
    diag = yfy.langweil_check(ci22, ParamSet(5, 3, 4, 0), [1, 2, 3, 4])
    assert diag.n_transversal == 288
    assert diag.dichotomy_ok and diag.alpha_range_ok
    assert diag.alpha_zero_rule_ok and diag.alpha_full_rule_ok
    assert all(r == 0 for r in diag.bound_residuals)
    # fully split sections contribute C(4,3) = 4 stable long subsets
    assert max(diag.alpha_by_e[1]) == 4
    # and every alpha at e divisible by all orbit sizes equals C(4,1)
    assert min(diag.alpha_by_e[4]) >= 1


def test_averaged_table_exact_residual(ci22):
    from lfano.cli import _variety_mod
    loader = lambda q: _variety_mod(CI22, q)
    tab = yfy.averaged_table([(loader, ParamSet(5, 3, 4, 0))], [2, 3], workers=1)
    row = tab["rows"][0]
    for q, terms in row["terms"].items():
        assert terms["exact_residual"] == 0, q
    assert row["probes"]["term2_J"] is None  # needs >= 3 censused fields
