"""Exact linear transitions between fundamental-domain counts and weighted orbital integrals."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import random

from . import asf_engine as eng
from . import gm_calculus as gm
from . import typea_roots as tr


class TransitionMismatch(AssertionError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# gm constants (independent of q)

@lru_cache(maxsize=None)
def e_constant(L):
    """e_L: volume of π_L of the e-family of (G, A)."""
    A = tr.LeviPartition.torus(L.n)
    return gm.volume_limit(gm.project(gm.e_family(A), L))


@lru_cache(maxsize=None)
def e_levi_volume(K, L):
    """E^L_K: volume of π_K of the (L, A)-family e (a lattice-point count of a point)."""
    A = tr.LeviPartition.torus(L.n)
    return gm.volume_limit(gm.project(gm.e_family(A, L), K))


def _between(M, L):
    return [K for K in tr.enumerate_levis(M.n) if M.refines(K) and K.refines(L)]


@lru_cache(maxsize=None)
def e_inverse_constant(M, L):
    """(e^{-1})^L_M as the inverse of the unitriangular Levi matrix (E^K_M).

    These are the coefficients for which volumes are recovered from facet
    lattice counts: sum_{M ⊆ K ⊆ L} E^K_M (e^{-1})^L_K = δ_{M,L}.
    """
    if M == L:
        return Fraction(1)
    return -sum((e_levi_volume(M, K) * e_inverse_constant(K, L)
                 for K in _between(M, L) if K != M), Fraction(0))


@lru_cache(maxsize=None)
def e_inverse_volume(M, L):
    """Volume in a_M^L of π_M of the (L, A)-family e^{-1} (literal reading)."""
    A = tr.LeviPartition.torus(L.n)
    return gm.volume_limit(gm.project(gm.e_inverse(A, L), M))


def facet_volume(x0_borel, M, L):
    """v_M^L(Ec(x0)): volume of a Q-facet of Ec_M(x0), Q ∈ 𝒫(L) (independence asserted)."""
    if M == L:
        return Fraction(1)
    h = _ec_from_borel(x0_borel, M)
    vals = {gm.hull_volume_direct(gm.facet(h, Q)) for Q in tr.parabolics(L)}
    if len(vals) != 1:
        raise TransitionMismatch(f"facet volume depends on Q for M={M.key()}, L={L.key()}: {vals}")
    return vals.pop()


def _ec_from_borel(borel, M):
    if M.is_torus():
        return gm.OrthogonalSet(M, dict(borel))
    return gm.OrthogonalSet(M, {P: tr.project(borel[eng._borel_inside(P)], M) for P in tr.parabolics(M)})


def ec_volume(x0_borel, L):
    """Ec(x0)_L: volume of (H_Q(x0))_{Q ∈ 𝒫(L)} in a_L^G."""
    return gm.hull_volume_direct(_ec_from_borel(x0_borel, L))


def disc_exponent_levi(R, M):
    """Σ_{α ∈ Φ^+(M)} val α(γ)."""
    return sum(v for (i, j), v in R.items() if i < j and M.block_of(i) == M.block_of(j))


# ---------------------------------------------------------------------------
# instances

@dataclass
class TransitionInstance:
    gamma: object
    x0: object
    counts: dict = field(default_factory=dict)      # Levi -> |F^M|
    orbitals: dict = field(default_factory=dict)    # Levi -> J_A^M(γ, 1_{m∩k})
    disc: dict = field(default_factory=dict)        # Levi -> Σ_{Φ+(M)} val

    @property
    def q(self):
        return self.gamma.q

    @property
    def n(self):
        return self.gamma.n


def build_instance(gamma, x0=None):
    n = gamma.n
    x0 = x0 or eng.find_regular_point(gamma)
    R = eng.root_valuation(gamma) if n > 1 else {}
    inst = TransitionInstance(gamma, x0)
    for M in tr.enumerate_levis(n):
        inst.counts[M] = eng.levi_count(gamma, M) if not M.is_whole() else \
            eng.fundamental_domain_count(gamma, x0).count
        inst.orbitals[M] = eng.levi_orbital(gamma, M)
        inst.disc[M] = disc_exponent_levi(R, M)
    return inst


def _pairs(n):
    levis = tr.enumerate_levis(n)
    return [(M, L) for M in levis for L in levis if M.refines(L)]


def count_summands(inst, orbitals=None):
    """Summands (M, L, value) of the count formula, before the overall power of q."""
    orbitals = orbitals or inst.orbitals
    b0 = eng.borel_vectors(inst.x0)
    A = tr.LeviPartition.torus(inst.n)
    out = []
    for M, L in _pairs(inst.n):
        sign = (-1) ** tr.dim_a(A, M)
        v = facet_volume(b0, M, L)
        e = e_constant(L)
        out.append((M, L, sign * orbitals[M] * v * e, {"J": orbitals[M], "v": v, "e": e}))
    return out


def predict_count(inst, orbitals=None):
    """|F_γ| = q^{Σ_{Φ+} val} Σ_{M ⊆ L} (−1)^{dim a_A^M} J_A^M(γ) v_M^L(Ec(x0)) e_L."""
    total = sum((s for _, _, s, _ in count_summands(inst, orbitals)), Fraction(0))
    return total * Fraction(inst.q) ** inst.disc[tr.LeviPartition.whole(inst.n)]


def orbital_summands(inst, counts=None, literal=False):
    counts = counts or inst.counts
    einv = e_inverse_volume if literal else e_inverse_constant
    b0 = eng.borel_vectors(inst.x0)
    A = tr.LeviPartition.torus(inst.n)
    out = []
    for M, L in _pairs(inst.n):
        sign = (-1) ** tr.dim_a(A, L)
        c = Fraction(counts[M]) / Fraction(inst.q) ** inst.disc[M]
        ei = einv(M, L)
        ev = ec_volume(b0, L)
        out.append((M, L, sign * c * ei * ev, {"F": counts[M], "einv": ei, "ec": ev}))
    return out


def orbitals_from_counts(inst, counts=None, literal=False):
    """J_A(γ, 1_k) = Σ_{M ⊆ L} (−1)^{dim a_A^L} |D^M|^{1/2} |F^M| (e^{-1})^L_M Ec(x0)_L.

    ``literal`` swaps the inverse-matrix constants for plain family volumes
    of e^{-1}; the two agree for GL_2 but not beyond.
    """
    return sum((s for _, _, s, _ in orbital_summands(inst, counts, literal)), Fraction(0))


def _report(summands, label):
    return [{"M": M.key(), "L": L.key(), label: str(s), **{k: str(v) for k, v in parts.items()}}
            for M, L, s, parts in summands]


def verify_instance(inst):
    """Both theorems plus the round trip; returns a JSON-ready report."""
    G = tr.LeviPartition.whole(inst.n)
    pred = predict_count(inst)
    back = orbitals_from_counts(inst)
    back_literal = orbitals_from_counts(inst, literal=True)
    # round trip: counts predicted blockwise for every Levi, then back to orbitals
    pred_counts = {}
    for M in tr.enumerate_levis(inst.n):
        if M.is_whole():
            pred_counts[M] = pred
        else:
            value = Fraction(1)
            for b in M.blocks:
                sub = build_instance(eng.block_gamma(inst.gamma, b))
                value *= predict_count(sub)
            pred_counts[M] = value
    round_trip = orbitals_from_counts(inst, pred_counts)
    report = {
        "n": inst.n, "q": inst.q, "x0": inst.x0.fingerprint(),
        "count_direct": inst.counts[G], "count_predicted": str(pred),
        "orbital_direct": str(inst.orbitals[G]), "orbital_from_counts": str(back),
        "orbital_round_trip": str(round_trip),
        "orbital_from_counts_literal_volumes": str(back_literal),
        "count_summands": _report(count_summands(inst), "summand"),
        "orbital_summands": _report(orbital_summands(inst), "summand"),
    }
    report["f_to_w"] = pred == inst.counts[G]
    report["w_to_f"] = back == inst.orbitals[G]
    report["round_trip"] = round_trip == inst.orbitals[G] and all(
        pred_counts[M] == inst.counts[M] for M in pred_counts)
    report["w_to_f_literal_volumes"] = back_literal == inst.orbitals[G]
    report["integral"] = pred.denominator == 1
    report["ok"] = report["f_to_w"] and report["w_to_f"] and report["round_trip"] and report["integral"]
    return report


# ---------------------------------------------------------------------------
# Levi reduction

def reduce_weighted(M, gamma, xi_draws=3, seed=0):
    """J_M(γ, 1_k) = Σ_L θ_A^G(M, L) J_A^L(γ, 1_{l∩k}).

    For the test function 1_k every constant term φ^Q is 1_{l∩k} (the
    unipotent volume factor is 1), so the chamber Q^ξ_L only enters as a
    consistency check; several ξ draws must give the same value.
    """
    n = gamma.n
    A = tr.LeviPartition.torus(n)
    rng = random.Random(seed)
    values = []
    for _ in range(xi_draws):
        xi = gm.random_xi(A, M, rng) if not M.is_torus() else None
        total = Fraction(0)
        for L in tr.enumerate_levis(n):
            theta = tr.theta_coefficient(A, M, L)
            if theta == 0:
                continue
            if xi is not None:
                gm.descent_parabolic(A, M, L, xi)
            total += theta * eng.levi_orbital(gamma, L)
        values.append(total)
    if len(set(values)) != 1:
        raise TransitionMismatch(f"ξ-dependence in reduction: {values}")
    return values[0]


def reduction_report(M, gamma):
    via = reduce_weighted(M, gamma)
    direct = eng.weighted_orbital(gamma, M)
    return {"M": M.key(), "reduced": str(via), "direct": str(direct), "ok": via == direct}
