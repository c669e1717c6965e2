"""asf-lab command line: counts, orbital integrals, transitions, series fits, gm calculator."""

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import asf_engine as eng
from . import gm_calculus as gm
from . import series as ser
from . import transition as trn
from . import typea_roots as tr
from . import valuation as val

log = logging.getLogger("asf_lab")

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers

def parse_datum(text, d):
    parts = [int(x) for x in text.split(",") if x.strip() != ""]
    if len(parts) != d or any(x < 0 for x in parts):
        raise UsageError(f"datum {text!r} must be {d} nonnegative integers")
    return tuple(parts)


def parse_primes(text):
    qs = [int(x) for x in text.split(",") if x.strip()]
    bad = [q for q in qs if not val.is_prime(q)]
    if bad:
        raise UsageError(f"not prime: {bad}")
    return qs


def parse_box(text, d):
    """'0..2' → all data with entries in 0..2."""
    lo, hi = (int(x) for x in text.split(".."))
    from itertools import product
    return [tuple(p) for p in product(range(lo, hi + 1), repeat=d)]


# ---------------------------------------------------------------------------
# cached computations

def cached(args, kind, payload, compute):
    if not args.no_cache:
        hit = eng.cache_get(kind, payload, args.cache_dir)
        if hit is not None:
            log.info("cache hit %s %s", kind, payload)
            return hit
    result = compute()
    if not args.no_cache:
        eng.cache_put(kind, payload, result, args.cache_dir)
    return result


def count_record(args, n, q, variant=0):
    payload = {"d": len(n), "n": list(n), "q": q, "variant": variant,
               "window": args.window, "mu": 0}

    def compute():
        gamma = val.make_gamma(n, q, variant=variant)
        return eng.fundamental_domain_count(gamma, N=args.window, datum=n).to_json()

    log.info("count n=%s q=%d", ",".join(map(str, n)), q)
    return cached(args, "count", payload, compute)


def orbital_value(args, n, q, levi=None, level=0, variant=0):
    payload = {"d": len(n), "n": list(n), "q": q, "variant": variant, "levi": levi,
               "level": level, "window": args.window}

    def compute():
        gamma = val.make_gamma(n, q, variant=variant)
        if level:
            gamma = gamma.scaled(level)
        M = tr.LeviPartition.from_key(levi) if levi else None
        return str(eng.weighted_orbital(gamma, M, level=level, N=args.window))

    log.info("orbital n=%s q=%d", ",".join(map(str, n)), q)
    return Fraction(cached(args, "orbital", payload, compute))


# ---------------------------------------------------------------------------
# output

def emit(args, payload, csv_text=None):
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        envelope = {"engine_version": eng.ENGINE_VERSION, "command": args.command}
        text = json.dumps({"payload": payload, "envelope": envelope}, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_count(args):
    data = [parse_datum(t, args.d) for t in args.n] if args.n else parse_box(args.box, args.d)
    primes = parse_primes(args.q)
    rows, polys = [], {}
    lines = ["n,q,count"]
    for n in data:
        counts = {}
        for q in primes:
            rec = count_record(args, n, q, args.variant)
            counts[q] = rec["count"]
            rows.append({"n": list(n), "q": q, "count": rec["count"], "window": rec["window"]})
            lines.append(f"\"{','.join(map(str, n))}\",{q},{rec['count']}")
        cap = ser.expected_degree(n)
        key = ",".join(map(str, n))
        if len(primes) >= cap + 2:
            polys[key] = ser.interpolate_q(counts, cap).to_json()
        else:
            polys[key] = {"ok": False, "message": f"need {cap + 2} primes to certify degree ≤ {cap}"}
        poly_text = polys[key].get("polynomial", polys[key]["message"])
        lines.append(f"# F_{key}(q): {poly_text}")
    emit(args, {"counts": rows, "polynomials": polys}, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_orbital(args):
    data = [parse_datum(t, args.d) for t in args.n]
    primes = parse_primes(args.q)
    rows = []
    lines = ["n,q,levi,value"]
    for n in data:
        for q in primes:
            v = orbital_value(args, n, q, args.levi, args.level, args.variant)
            rows.append({"n": list(n), "q": q, "levi": args.levi or "A", "level": args.level, "value": str(v)})
            lines.append(f"\"{','.join(map(str, n))}\",{q},{args.levi or 'A'},{v}")
    emit(args, {"orbitals": rows}, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_transition(args):
    n = parse_datum(args.n, args.d)
    reports = []
    ok = True
    for q in parse_primes(args.q):
        log.info("transition n=%s q=%d", args.n, q)
        gamma = val.make_gamma(n, q, variant=args.variant)
        rep = trn.verify_instance(trn.build_instance(gamma))
        if args.levi:
            rep["reduction"] = trn.reduction_report(tr.LeviPartition.from_key(args.levi), gamma)
            ok = ok and rep["reduction"]["ok"]
        ok = ok and rep["ok"]
        reports.append(rep)
    emit(args, {"reports": reports, "ok": ok})
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_series(args):
    q = args.q
    if args.d == 1:
        pts = [(k,) for k in range(args.n_max + 1)]
        train = [p for p in pts if p[0] <= args.train]
    else:
        pts = parse_box(args.box, args.d)
        top = max(sum(p) for p in pts)
        train = [p for p in pts if sum(p) < top]
    validate = [p for p in pts if p not in train]
    data = {}
    for p in pts:
        if args.quantity == "count":
            data[p] = count_record(args, p, q)["count"]
        else:
            data[p] = orbital_value(args, p, q)
    fit = ser.fit_rational(data, train, validate)
    payload = {"q": q, "quantity": args.quantity, "data": {",".join(map(str, k)): str(v) for k, v in data.items()},
               "fit": fit.to_json(), "rational_function": ser.series_str(fit)}
    emit(args, payload)
    return EXIT_OK if fit.verdict == "certified" else EXIT_INVARIANT


def _load_set(path):
    with open(path) as fh:
        return gm.OrthogonalSet.from_json(json.load(fh))


def cmd_gm(args):
    h = _load_set(args.set)
    verdict = gm.validate(h)
    out = {"verdict": verdict.status, "witness": list(verdict.witness), "reason": verdict.reason}
    if args.action == "validate":
        emit(args, out)
        return EXIT_OK
    if verdict.status != "positive":
        emit(args, out)
        return EXIT_COMPUTE
    if args.action == "volume":
        direct = gm.hull_volume_direct(h)
        limit = gm.volume_limit(gm.exp_family(h))
        c, m = gm.NormalizedValue(direct, gm.normalization(h.levi, h.ambient)).canonical()
        out.update({"volume_rational": str(direct), "volume_limit": str(limit),
                    "normalization_squared": str(gm.normalization(h.levi, h.ambient)),
                    "volume_euclidean": f"{c}*sqrt({m})", "agree": direct == limit})
        emit(args, out)
        return EXIT_OK if direct == limit else EXIT_INVARIANT
    if not h.is_integral():
        emit(args, {**out, "error": "lattice counts need an integral set"})
        return EXIT_COMPUTE
    a = gm.lattice_count(h, "formula")
    b = gm.lattice_count(h, "enumeration")
    out.update({"count": a, "count_formula": a, "count_enumeration": b, "agree": a == b})
    emit(args, out)
    return EXIT_OK if a == b else EXIT_INVARIANT


def cmd_selftest(args):
    from .selftest import run_selftest
    results = run_selftest(log)
    emit(args, {"checks": results, "ok": all(r["ok"] for r in results)})
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_INVARIANT


# ---------------------------------------------------------------------------

def build_parser():
    p = Parser(prog="asf-lab", description=__doc__)
    p.add_argument("--cache-dir", default=None, help="cache directory (default: $ASF_CACHE_DIR)")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--window", type=int, default=None, help="ε-window N (default: automatic)")
    p.add_argument("--quiet", "-q", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    c = sub.add_parser("count", help="fundamental-domain counts and their q-polynomials")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--n", action="append", help="datum, comma separated (repeatable)")
    c.add_argument("--box", default="0..1", help="all data with entries in lo..hi (if no --n)")
    c.add_argument("--q", required=True, help="comma separated primes")
    c.add_argument("--variant", type=int, default=0)
    c.set_defaults(func=cmd_count)

    o = sub.add_parser("orbital", help="weighted orbital integrals J_M(γ, 1_k)")
    o.add_argument("--d", type=int, required=True)
    o.add_argument("--n", action="append", required=True)
    o.add_argument("--q", required=True)
    o.add_argument("--levi", default=None, help="Levi key such as 12|3 (default: the torus)")
    o.add_argument("--level", type=int, default=0, help="use ε^level γ against 1_{ε^level k}")
    o.add_argument("--variant", type=int, default=0)
    o.set_defaults(func=cmd_orbital)

    t = sub.add_parser("transition", help="verify the count/orbital transition identities")
    t.add_argument("action", choices=["verify"])
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--n", required=True)
    t.add_argument("--q", required=True)
    t.add_argument("--levi", default=None, help="also check the Levi reduction for this Levi")
    t.add_argument("--variant", type=int, default=0)
    t.set_defaults(func=cmd_transition)

    s = sub.add_parser("series", help="fit and predict generating series")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--quantity", choices=["count", "orbital"], default="count")
    s.add_argument("--n-max", type=int, default=8)
    s.add_argument("--train", type=int, default=6, help="train on n ≤ this (d = 1)")
    s.add_argument("--box", default="0..2", help="data box for d ≥ 2; the top layer is held out")
    s.set_defaults(func=cmd_series)

    g = sub.add_parser("gm", help="orthogonal-set calculator")
    g.add_argument("action", choices=["validate", "volume", "count"])
    g.add_argument("--set", required=True, help="orthogonal set JSON file")
    g.set_defaults(func=cmd_gm)

    st = sub.add_parser("selftest", help="run the invariant suite")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.handlers[:] = [handler]
    log.propagate = False
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"asf-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (eng.InvariantViolation, trn.TransitionMismatch) as exc:
        print(f"asf-lab: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (val.RealizationError, val.PrecisionError, eng.WindowError, gm.GMError,
            ser.FitError, OSError, ValueError, KeyError) as exc:
        print(f"asf-lab: computation error ({type(exc).__module__}): {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
