import pytest
from hypothesis import given, settings, strategies as st

from asf_lab import valuation as val
from asf_lab.fq import LPoly


def gamma(q, *entries, K=8):
    return val.GammaSpec(q, K, tuple(LPoly(q, e) for e in entries))


data = st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.lists(st.integers(0, 4), min_size=d, max_size=d).map(tuple),
    st.permutations(list(range(1, d + 2))).map(tuple)))


def test_gl2_root_valuation():
    for k in range(4):
        g = gamma(5, {0: 1}, {0: 1, k: 1} if k else {0: 2})
        assert val.root_valuation(g)[(1, 2)] == k


def test_gl3_example_minimal_form():
    # vals: (1,2)=1, (1,3)=2, (2,3)=1
    g = gamma(5, {}, {1: 1}, {2: 1})
    R = val.root_valuation(g)
    m = val.minimal_form(R, 3)
    assert m.n == (2, 1) and m.w == (1, 3, 2)


def test_constant_valuations():
    R = val.valuation_from_datum((3, 3, 3))
    m = val.minimal_form(R, 4)
    assert m.n == (3, 3, 3) and m.w == (1, 2, 3, 4)


def test_inconsistent_map_rejected():
    R = {(1, 2): 0, (2, 1): 0, (1, 3): 1, (3, 1): 1, (2, 3): 2, (3, 2): 2}
    with pytest.raises(val.InconsistentValuation):
        val.minimal_form(R, 3)


def test_precision_error():
    g = gamma(3, {0: 1}, {0: 1, 9: 1}, K=5)
    with pytest.raises(val.PrecisionError):
        val.root_valuation(g)


def test_make_gamma_examples():
    g = val.make_gamma((2,), 5)
    assert g.entries[1] - g.entries[0] == LPoly.monomial(5, 2)
    g = val.make_gamma((0, 1), 5)
    R = val.root_valuation(g)
    assert (R[(1, 2)], R[(2, 3)], R[(1, 3)]) == (0, 1, 0)
    g = val.make_gamma((1, 1), 5)
    assert set(val.root_valuation(g).values()) == {1}


def test_make_gamma_is_deterministic_and_variants_differ():
    assert val.make_gamma((1, 1), 5) == val.make_gamma((1, 1), 5)
    gs = {val.make_gamma((1, 1), 3, variant=v) for v in range(3)}
    assert len(gs) == 3


@pytest.mark.parametrize("n", [(0, 0), (1, 1), (2, 2), (0, 0, 0)])
def test_make_gamma_needs_enough_residues(n):
    with pytest.raises(val.RealizationError, match="larger q"):
        val.make_gamma(n, 2)


def test_bad_inputs():
    with pytest.raises(ValueError):
        val.make_gamma((-1,), 3)
    with pytest.raises(ValueError):
        val.make_gamma((1,), 4)


def test_json_round_trip():
    g = val.make_gamma((1, 2), 5)
    assert val.GammaSpec.from_json(g.to_json()) == g


def test_filtration_example():
    f = val.filtration(val.RootValuationDatum((1, 2)))
    assert f.levels == (1, 2)
    assert [L.key() for L in f.levis] == ["123", "1|23"]


@given(data)
@settings(max_examples=150, deadline=None)
def test_minimal_form_reconstructs_map(d):
    n, w = d
    R = val.valuation_from_datum(n, w)
    m = val.minimal_form(R, len(n) + 1)
    assert val.satisfies_min_rule(R, m.w)
    assert val.valuation_from_datum(m.n, m.w) == R
    # the identity ordering reads back the datum whenever it is admissible
    if w == tuple(range(1, len(n) + 2)):
        assert m.n == n


@given(data)
@settings(max_examples=100, deadline=None)
def test_ultrametric(d):
    n, w = d
    R = val.valuation_from_datum(n, w)
    size = len(n) + 1
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            for k in range(1, size + 1):
                if len({i, j, k}) == 3:
                    assert R[(i, k)] >= min(R[(i, j)], R[(j, k)])


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3).map(tuple))
@settings(max_examples=40, deadline=None)
def test_make_gamma_round_trip(n):
    g = val.make_gamma(n, 5)
    assert val.minimal_form(val.root_valuation(g), len(n) + 1).n == n


@given(data)
@settings(max_examples=60, deadline=None)
def test_filtration_coarsens(d):
    n, w = d
    f = val.filtration(val.RootValuationDatum(n, w))
    assert list(f.levels) == sorted(set(n))
    for big, small in zip(f.levis, f.levis[1:]):
        assert small.refines(big) and small != big
    if f.levels[0] == min(n):
        assert f.levis[0].is_whole()
