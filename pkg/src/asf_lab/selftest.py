"""A quick invariant suite, cheap enough to run from the command line."""

import random
import time
from fractions import Fraction

from . import asf_engine as eng
from . import gm_calculus as gm
from . import transition as trn
from . import typea_roots as tr
from . import valuation as val


def _gm_sets():
    rng = random.Random(7)
    for n in (2, 3):
        for M in tr.enumerate_levis(n):
            if M.is_whole():
                continue
            for _ in range(3):
                yield gm.random_positive_set(M, rng)


def check_gm_volumes():
    for h in _gm_sets():
        if gm.volume_limit(gm.exp_family(h)) != gm.hull_volume_direct(h):
            return False, f"volume mismatch on {h.to_json()}"
    return True, ""


def check_gm_counts():
    for h in _gm_sets():
        if h.is_integral() and gm.lattice_count(h, "formula") != gm.lattice_count(h, "enumeration"):
            return False, f"count mismatch on {h.to_json()}"
    return True, ""


def check_valuation_roundtrip():
    rng = random.Random(3)
    for _ in range(20):
        d = rng.randint(1, 3)
        n = tuple(rng.randint(0, 3) for _ in range(d))
        perm = list(range(1, d + 2))
        rng.shuffle(perm)
        R = val.valuation_from_datum(n, tuple(perm))
        m = val.minimal_form(R, d + 1)
        if val.valuation_from_datum(m.n, m.w) != R:
            return False, f"datum {n} under {perm}"
        g = val.make_gamma(n, 5)
        if val.minimal_form(val.root_valuation(g), d + 1).n != n:
            return False, f"make_gamma {n}"
    return True, ""


def check_gl2_counts():
    for n in range(3):
        for q in (2, 3):
            c = eng.fundamental_domain_count(val.make_gamma((n,), q)).count
            if c != sum(q ** k for k in range(n + 1)):
                return False, f"GL2 n={n} q={q}: {c}"
    return True, ""


def check_transition():
    for n_tuple, q in (((1,), 2), ((2,), 3), ((1, 0), 3)):
        rep = trn.verify_instance(trn.build_instance(val.make_gamma(n_tuple, q)))
        if not rep["ok"]:
            return False, f"transition failed for {n_tuple} at q={q}"
    return True, ""


def check_orbit_reps():
    g = val.make_gamma((1, 1), 3)
    reps = eng.orbit_representatives(g)
    expect = 3 ** eng.discriminant_exponent(g)
    if len(reps) != expect:
        return False, f"{len(reps)} representatives, expected {expect}"
    if eng.weighted_orbital(g, tr.LeviPartition.whole(3)) != Fraction(1):
        return False, "J_G ≠ 1"
    return True, ""


CHECKS = [
    ("gm volume: limit = hull", check_gm_volumes),
    ("gm count: formula = enumeration", check_gm_counts),
    ("valuation: minimal form round trip", check_valuation_roundtrip),
    ("engine: GL2 counts 1 + q + ... + q^n", check_gl2_counts),
    ("engine: orbit representatives and J_G", check_orbit_reps),
    ("transition: both directions", check_transition),
]


def run_selftest(log=None):
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        ok, detail = fn()
        dt = time.perf_counter() - t0
        if log:
            log.info("%s %s (%.2fs)", "PASS" if ok else "FAIL", name, dt)
        results.append({"check": name, "ok": ok, "detail": detail})
    return results
