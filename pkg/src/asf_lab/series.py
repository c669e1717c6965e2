"""Polynomial interpolation in q and exact rational fits of generating series."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
import csv
import io
import json

from . import asf_engine as eng
from . import valuation as val
from .linalg import solve


class FitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials in q

def poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_str(coeffs, var="q"):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mon and c == 1:
            terms.append(mon)
        elif mon:
            terms.append(f"{c}*{mon}")
        else:
            terms.append(str(c))
    return " + ".join(terms) or "0"


@dataclass
class Interpolation:
    coeffs: tuple          # ascending powers of q
    degree: int
    fitted: tuple          # primes used to determine the polynomial
    consistency: tuple     # extra primes that landed on it
    ok: bool
    message: str = ""

    def __call__(self, q):
        return poly_eval(self.coeffs, q)

    def to_json(self):
        return {"polynomial": poly_str(self.coeffs), "coeffs": [str(c) for c in self.coeffs],
                "degree": self.degree, "fitted": list(self.fitted),
                "consistency": list(self.consistency), "ok": self.ok, "message": self.message}


def interpolate_q(counts, cap, min_consistency=2):
    """Lowest-degree polynomial (degree ≤ cap) through all (q, count) points."""
    pts = sorted((int(q), Fraction(c)) for q, c in counts.items())
    if len(pts) < cap + 2:
        raise FitError(f"need at least {cap + 2} primes for degree cap {cap}, got {len(pts)}")
    for deg in range(cap + 1):
        base = pts[:deg + 1]
        cols = [[Fraction(q) ** k for q, _ in base] for k in range(deg + 1)]
        coeffs = solve(cols, [c for _, c in base])
        if coeffs is None:
            continue
        if all(poly_eval(coeffs, q) == c for q, c in pts[deg + 1:]):
            extra = tuple(q for q, _ in pts[deg + 1:])
            ok = len(extra) >= min_consistency
            msg = "" if ok else f"only {len(extra)} consistency primes"
            return Interpolation(tuple(coeffs), deg, tuple(q for q, _ in base), extra, ok, msg)
    return Interpolation((), -1, (), (), False, f"no polynomial of degree ≤ {cap} fits")


# ---------------------------------------------------------------------------
# rational fits

def _monomials(d, total):
    return [m for m in product(range(total + 1), repeat=d) if sum(m) <= total]


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


@dataclass
class RationalFit:
    numerator: dict        # exponent tuple -> Fraction
    denominator: dict      # exponent tuple -> Fraction, constant term 1
    train: list
    validate: list
    predictions: dict = field(default_factory=dict)
    verdict: str = "inconclusive"

    def to_json(self):
        fmt = lambda p: {",".join(map(str, k)): str(v) for k, v in sorted(p.items()) if v}
        return {"numerator": fmt(self.numerator), "denominator": fmt(self.denominator),
                "train": [list(k) for k in self.train], "validate": [list(k) for k in self.validate],
                "predictions": {",".join(map(str, k)): str(v) for k, v in self.predictions.items()},
                "verdict": self.verdict}

    def predict(self, data, target):
        """Coefficient at ``target`` of P/Q given the lower coefficients in ``data``."""
        acc = self.numerator.get(target, Fraction(0))
        for m, c in self.denominator.items():
            if any(m) and _leq(m, target):
                acc -= c * data[_sub(target, m)]
        return acc


def _try_fit(data, train, qmons, pmons):
    qmons = [m for m in qmons if any(m)]
    unknowns = len(qmons) + len(pmons)
    if unknowns >= len(train):
        return None
    cols = []
    for m in qmons:
        cols.append([data[_sub(n, m)] if _leq(m, n) else Fraction(0) for n in train])
    for m in pmons:
        cols.append([Fraction(-1) if n == m else Fraction(0) for n in train])
    rhs = [-data[n] for n in train]
    x = solve(cols, rhs)
    if x is None:
        return None
    zero = tuple(0 for _ in train[0])
    den = {zero: Fraction(1)}
    den.update({m: c for m, c in zip(qmons, x[:len(qmons)])})
    num = {m: c for m, c in zip(pmons, x[len(qmons):])}
    return num, den


def fit_rational(data, train, validate, max_total=6):
    """Smallest exact fit P/Q (Q(0) = 1) of a power series known on ``train``.

    ``data`` maps exponent tuples to exact values; ``train`` must be
    downward closed.  Candidates are ordered by denominator degree, then
    numerator degree, then their sum; the first fit reproducing every
    training coefficient is checked against ``validate``.
    """
    data = {tuple(k): Fraction(v) for k, v in data.items()}
    train = sorted(tuple(k) for k in train)
    validate = sorted(tuple(k) for k in validate)
    tset = set(train)
    for n in train:
        for m in _monomials(len(n), sum(n)):
            if _leq(m, n) and m not in tset:
                raise FitError("training set must be downward closed")
    d = len(train[0])
    candidates = sorted(((dq, dp) for dq in range(max_total + 1) for dp in range(max_total + 1)
                         if dq + dp <= max_total), key=lambda c: (c[0] + c[1], c[0]))
    for dq, dp in candidates:
        res = _try_fit(data, train, _monomials(d, dq), _monomials(d, dp))
        if res is None:
            continue
        num, den = res
        fit = RationalFit(num, den, train, validate)
        known = {k: data[k] for k in train}
        for target in sorted(validate, key=sum):
            fit.predictions[target] = fit.predict({**known, **fit.predictions}, target)
        fit.verdict = "certified" if all(fit.predictions[t] == data[t] for t in validate) else "refuted"
        return fit
    return RationalFit({}, {}, train, validate, verdict="inconclusive")


def univariate(values):
    """{(k,): v} from a list of coefficients."""
    return {(k,): Fraction(v) for k, v in enumerate(values)}


def series_str(fit, var="t"):
    if not fit.denominator:
        return "no fit with fewer unknowns than training coefficients"
    def ps(p):
        terms = []
        for m, c in sorted(p.items()):
            if c == 0:
                continue
            mon = "*".join(f"{var}{i + 1}^{e}" if len(m) > 1 else f"{var}^{e}"
                           for i, e in enumerate(m) if e)
            terms.append(f"{c}" + (f"*{mon}" if mon else ""))
        return " + ".join(terms) or "0"
    return f"({ps(fit.numerator)}) / ({ps(fit.denominator)})"


# ---------------------------------------------------------------------------
# grids

def count_for(n_tuple, q, variant=0):
    gamma = val.make_gamma(n_tuple, q, variant=variant)
    return eng.fundamental_domain_count(gamma, datum=n_tuple)


def orbital_for(n_tuple, q, variant=0):
    gamma = val.make_gamma(n_tuple, q, variant=variant)
    return eng.weighted_orbital(gamma)


def expected_degree(n_tuple):
    """Σ_{α>0} val α(γ): the dimension of the fundamental domain, used as degree cap."""
    R = val.valuation_from_datum(tuple(n_tuple))
    return sum(v for (i, j), v in R.items() if i < j)


@dataclass
class SeriesGrid:
    d: int
    counts: dict = field(default_factory=dict)       # n -> {q: count}
    polynomials: dict = field(default_factory=dict)  # n -> Interpolation

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "q", "count"])
        for n in sorted(self.counts):
            for q in sorted(self.counts[n]):
                w.writerow([",".join(map(str, n)), q, self.counts[n][q]])
        return buf.getvalue()


def build_grid(d, data_points, primes, cap=None, progress=None):
    grid = SeriesGrid(d)
    for n in data_points:
        n = tuple(n)
        grid.counts[n] = {}
        for q in primes:
            if progress:
                progress(f"count n={n} q={q}")
            grid.counts[n][q] = count_for(n, q).count
        c = cap if cap is not None else expected_degree(n)
        if len(primes) >= c + 2:
            grid.polynomials[n] = interpolate_q(grid.counts[n], c)
    return grid


def datum_independence_check(n_tuple, q, variants=3, orbitals=True):
    """Counts (and J_A) agree across distinct γ with the same root valuation datum."""
    rows = []
    for v in range(variants):
        gamma = val.make_gamma(n_tuple, q, variant=v)
        row = {"variant": v, "entries": gamma.to_json()["entries"],
               "count": eng.fundamental_domain_count(gamma).count}
        if orbitals:
            row["orbital"] = str(eng.weighted_orbital(gamma))
        rows.append(row)
    same = len({r["count"] for r in rows}) == 1 and (
        not orbitals or len({r["orbital"] for r in rows}) == 1)
    distinct = len({json.dumps(r["entries"]) for r in rows}) == len(rows)
    return {"n": list(n_tuple), "q": q, "variants": rows, "distinct_gammas": distinct,
            "verdict": "independent" if same and distinct else "MISMATCH" if not same else "degenerate"}
