from fractions import Fraction

import pytest

from asf_lab import transition as trn
from asf_lab import typea_roots as tr
from asf_lab import valuation as val

CASES = [((0,), 3), ((1,), 2), ((2,), 3), ((3,), 2), ((1, 0), 3), ((1, 1), 3), ((0, 1), 5)]


@pytest.fixture(scope="module")
def reports():
    return {case: trn.verify_instance(trn.build_instance(val.make_gamma(*case))) for case in CASES}


def test_e_constants():
    assert trn.e_constant(tr.LeviPartition.whole(2)) == 1
    assert trn.e_constant(tr.LeviPartition.torus(2)) == 1
    for L in tr.enumerate_levis(3):
        assert trn.e_constant(L) == 1


def test_inverse_constants_are_partition_moebius():
    A2, G2 = tr.LeviPartition.torus(2), tr.LeviPartition.whole(2)
    assert trn.e_inverse_constant(A2, G2) == -1
    A3, G3 = tr.LeviPartition.torus(3), tr.LeviPartition.whole(3)
    assert trn.e_inverse_constant(A3, G3) == 2
    assert trn.e_inverse_constant(A3, tr.LeviPartition.from_key("12|3")) == -1


def test_inverse_constants_invert_the_levi_matrix():
    levis = tr.enumerate_levis(3)
    for M in levis:
        for L in levis:
            if not M.refines(L):
                continue
            s = sum(trn.e_levi_volume(M, K) * trn.e_inverse_constant(K, L)
                    for K in levis if M.refines(K) and K.refines(L))
            assert s == (1 if M == L else 0)


def test_literal_inverse_volume_differs_beyond_gl2():
    A2, G2 = tr.LeviPartition.torus(2), tr.LeviPartition.whole(2)
    assert trn.e_inverse_volume(A2, G2) == trn.e_inverse_constant(A2, G2)
    A3, G3 = tr.LeviPartition.torus(3), tr.LeviPartition.whole(3)
    assert trn.e_inverse_volume(A3, G3) == Fraction(1, 2)


@pytest.mark.parametrize("case", CASES)
def test_count_from_orbitals(reports, case):
    r = reports[case]
    assert r["f_to_w"] and r["integral"]
    assert int(r["count_predicted"]) == r["count_direct"]


@pytest.mark.parametrize("case", CASES)
def test_orbitals_from_counts(reports, case):
    r = reports[case]
    assert r["w_to_f"] and r["orbital_from_counts"] == r["orbital_direct"]


@pytest.mark.parametrize("case", CASES)
def test_round_trip(reports, case):
    assert reports[case]["round_trip"] and reports[case]["ok"]


def test_gl2_trivial_orbital():
    r = trn.verify_instance(trn.build_instance(val.make_gamma((0,), 5)))
    assert r["orbital_from_counts"] == "0"


def test_literal_variant_flags(reports):
    assert reports[((2,), 3)]["w_to_f_literal_volumes"]
    assert not reports[((1, 1), 3)]["w_to_f_literal_volumes"]


def test_constants_independent_of_q():
    a = trn.build_instance(val.make_gamma((1, 1), 3))
    b = trn.build_instance(val.make_gamma((1, 1), 5))
    pa = [(M.key(), L.key(), d["v"], d["e"]) for M, L, _, d in trn.count_summands(a)]
    pb = [(M.key(), L.key(), d["v"], d["e"]) for M, L, _, d in trn.count_summands(b)]
    assert pa == pb


def test_discriminant_exponents_are_integers():
    inst = trn.build_instance(val.make_gamma((1, 2), 3))
    assert inst.disc[tr.LeviPartition.whole(3)] == 1 + 1 + 2
    assert inst.disc[tr.LeviPartition.from_key("1|23")] == 2


@pytest.mark.parametrize("case", [((1,), 3), ((1, 1), 3), ((1, 2), 3), ((2, 1), 3)])
def test_levi_reduction(case):
    g = val.make_gamma(*case)
    for M in tr.enumerate_levis(g.n):
        rep = trn.reduction_report(M, g)
        assert rep["ok"], rep


def test_mismatch_is_raised_for_corrupt_counts():
    inst = trn.build_instance(val.make_gamma((1,), 3))
    G = tr.LeviPartition.whole(2)
    bad = dict(inst.counts)
    bad[G] += 1
    assert trn.orbitals_from_counts(inst, bad) != inst.orbitals[G]
