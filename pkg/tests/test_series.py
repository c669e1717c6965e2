import pytest
from hypothesis import given, settings, strategies as st

from asf_lab import series as ser
from asf_lab import transition as trn
from asf_lab import valuation as val


def test_interpolation_recovers_polynomial():
    counts = {q: 1 + q + q * q for q in (2, 3, 5, 7, 11)}
    fit = ser.interpolate_q(counts, 2)
    assert fit.ok and fit.coeffs == (1, 1, 1) and fit.consistency == (7, 11)
    assert ser.poly_str(fit.coeffs) == "q^2 + q + 1"


def test_interpolation_needs_primes():
    with pytest.raises(ser.FitError):
        ser.interpolate_q({2: 3, 3: 4}, 1)


def test_interpolation_rejects_high_degree():
    counts = {q: q ** 3 for q in (2, 3, 5, 7)}
    assert not ser.interpolate_q(counts, 1).ok


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_interpolation_stable_under_extra_prime(coeffs):
    primes = [2, 3, 5, 7, 11, 13]
    counts = {q: ser.poly_eval(coeffs, q) for q in primes}
    cap = len(coeffs) - 1
    a = ser.interpolate_q({q: counts[q] for q in primes[:cap + 3]}, cap)
    b = ser.interpolate_q(counts, cap)
    assert a.ok and b.ok and a.coeffs == b.coeffs


def test_rational_fit_geometric():
    q = 3
    data = ser.univariate([sum(q ** k for k in range(n + 1)) for n in range(9)])
    fit = ser.fit_rational(data, [(k,) for k in range(7)], [(7,), (8,)])
    assert fit.verdict == "certified"
    assert fit.denominator == {(0,): 1, (1,): -4, (2,): 3}


def test_rational_fit_refutes_wrong_data():
    values = [sum(2 ** k for k in range(n + 1)) for n in range(9)]
    values[8] += 1
    fit = ser.fit_rational(ser.univariate(values), [(k,) for k in range(7)], [(7,), (8,)])
    assert fit.verdict == "refuted"


def test_rational_fit_bivariate():
    # 1 / ((1 - t1)(1 - t2)): every coefficient is 1
    data = {(i, j): 1 for i in range(4) for j in range(4)}
    train = [k for k in data if sum(k) <= 3]
    fit = ser.fit_rational(data, train, [k for k in data if sum(k) > 3])
    assert fit.verdict == "certified"


def test_training_set_must_be_downward_closed():
    with pytest.raises(ser.FitError):
        ser.fit_rational({(0,): 1, (2,): 1}, [(0,), (2,)], [])


def test_inconclusive_when_data_too_short():
    fit = ser.fit_rational(ser.univariate([1, 5]), [(0,), (1,)], [])
    assert fit.verdict == "inconclusive"


def test_gl2_grid_polynomials():
    grid = ser.build_grid(1, [(0,), (1,), (2,)], [2, 3, 5, 7, 11])
    for n in range(3):
        assert grid.polynomials[(n,)].coeffs == (1,) * (n + 1)
    assert grid.to_csv().splitlines()[0] == "n,q,count"


def test_cross_theorem_coherence():
    # polynomials from the count formula equal those from direct counts
    primes = [2, 3, 5, 7]
    direct = {q: ser.count_for((2,), q).count for q in primes}
    predicted = {q: trn.predict_count(trn.build_instance(val.make_gamma((2,), q))) for q in primes}
    assert ser.interpolate_q(direct, 2).coeffs == ser.interpolate_q(predicted, 2).coeffs


def test_expected_degree():
    assert ser.expected_degree((3,)) == 3
    assert ser.expected_degree((1, 2)) == 4


@pytest.mark.parametrize("n, q", [((1,), 3), ((2,), 3), ((1, 1), 3)])
def test_datum_independence(n, q):
    rep = ser.datum_independence_check(n, q)
    assert rep["verdict"] == "independent"
