from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from asf_lab import typea_roots as tr


def levis(n):
    return tr.enumerate_levis(n)


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (3, 5), (4, 15)])
def test_levi_count_is_bell_number(n, expected):
    assert len(levis(n)) == expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_parabolics_per_levi(n):
    G = tr.LeviPartition.whole(n)
    for M in levis(n):
        assert len(tr.parabolics(M)) == factorial(len(M.blocks))
        # F(M) is the disjoint union of P(L) over L ⊇ M
        union = [P for L in tr.coarsenings(M) for P in tr.parabolics(L)]
        assert len(union) == len(set(union)) == len(tr.parabolic_sets(M)[2])
    assert tr.parabolics(G) and len(tr.parabolics(G)) == 1


def test_keys_round_trip():
    M = tr.LeviPartition.from_key("13|2")
    assert M.blocks == ((1, 3), (2,))
    assert M.key() == "13|2"
    P = tr.parabolic_from_key("2|13")
    assert P.key() == "2|13" and P.levi == M


def test_gl2_simple_coroot_and_covolume():
    B = tr.parabolic_from_key("1|2")
    assert tr.simple_coroots(B) == [(1, -1)]
    assert tr.covolume_sq(B) == 2


def test_gl3_borel_covolume():
    assert tr.covolume_sq(tr.parabolic_from_key("1|2|3")) == 3
    assert tr.covolume_sq(tr.parabolic_from_key("12|3")) == Fraction(3, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_positive_coroot_sum(n):
    # 2ρ^∨: the sum over all positive coroots is (d, d−2, …, −d) along the ordering
    d = n - 1
    for B in tr.borels(n):
        s = [sum(c) for c in zip(*tr.positive_coroots(B))]
        order = [b[0] for b in B.ordered_blocks]
        assert [s[i - 1] for i in order] == list(range(d, -d - 1, -2))


def test_theta_torus_gl3():
    A = tr.LeviPartition.torus(3)
    L, L2 = tr.LeviPartition.from_key("12|3"), tr.LeviPartition.from_key("1|23")
    assert tr.theta_coefficient(A, L, L2) == 1
    assert tr.theta_coefficient(A, L, L) == 0


levi_pairs = st.integers(2, 4).flatmap(
    lambda n: st.tuples(st.sampled_from(levis(n)), st.sampled_from(levis(n)), st.sampled_from(levis(n))))


@given(levi_pairs)
@settings(max_examples=80, deadline=None)
def test_theta_symmetry_and_dimension(triple):
    M, L, L2 = triple
    if not (M.refines(L) and M.refines(L2)):
        return
    t = tr.theta_coefficient(M, L, L2)
    assert t == tr.theta_coefficient(M, L2, L)
    if t != 0:
        assert tr.dim_a(M, L) + tr.dim_a(M, L2) == tr.dim_a(M)


def _random_lattice_vector(M, ints):
    v = [Fraction(0)] * M.n
    for b, m in zip(M.blocks, ints):
        for i in b:
            v[i - 1] = Fraction(m, len(b))
    return tuple(v)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.sampled_from(levis(n)), st.sampled_from(levis(n)),
    st.lists(st.integers(-30, 30), min_size=n, max_size=n))))
@settings(max_examples=120, deadline=None)
def test_projection_lattice_compatibility(data):
    M, L, ints = data
    if not M.refines(L):
        M, L = L, M
    if not M.refines(L):
        return
    n = M.n
    lam = _random_lattice_vector(M, ints)
    assert tr.in_lattice(lam, M)
    # π_L(Λ_M) ⊆ (1/n!) Λ_L
    scaled = tuple(x * factorial(n) for x in tr.project(lam, L))
    assert tr.in_lattice(scaled, L)
    # Λ_L ⊆ π_L(Λ_M): lift μ ∈ Λ_L onto one M-block inside each block of L
    mu = _random_lattice_vector(L, ints)
    lift = [Fraction(0)] * n
    for C, m in zip(L.blocks, ints):
        b = next(b for b in M.blocks if set(b) <= set(C))
        for i in b:
            lift[i - 1] = Fraction(m, len(b))
    assert tr.in_lattice(lift, M) and tr.project(lift, L) == mu


def test_compose_and_restrict():
    Q = tr.parabolic_from_key("12|3")
    R = tr.parabolic_from_key("2|1|3", Q.levi)
    P = tr.compose(R, Q)
    assert P.key() == "2|1|3" and tr.contained_in(P, Q)
    assert tr.restrict(P, Q.levi) == R


def test_normalization_is_covolume_ratio():
    A = tr.LeviPartition.torus(3)
    assert tr.normalization_sq(A, tr.LeviPartition.whole(3)) == 3
