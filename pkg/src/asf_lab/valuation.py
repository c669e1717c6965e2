"""Root valuation data of split regular elements γ = diag(a_1, …, a_n)."""

from dataclasses import dataclass, field
from itertools import product
import json

from . import typea_roots as tr
from .fq import LPoly


class PrecisionError(ValueError):
    pass


class InconsistentValuation(ValueError):
    pass


class RealizationError(ValueError):
    pass


def is_prime(q):
    return q >= 2 and all(q % k for k in range(2, int(q ** 0.5) + 1))


@dataclass(frozen=True)
class GammaSpec:
    """Diagonal entries as truncated series over F_q, known modulo ε^K.

    ``exact`` marks entries that are exact polynomials (as produced by
    make_gamma), which can then be used at any precision.
    """

    q: int
    K: int
    entries: tuple
    exact: bool = False

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"q={self.q} must be prime")
        for a in self.entries:
            if not a.is_zero() and a.val() < 0:
                raise ValueError("γ must be integral")

    @property
    def n(self):
        return len(self.entries)

    def precision_ok(self, needed):
        return self.exact or self.K >= needed

    def scaled(self, r):
        """ε^r γ (exactness and precision shift along)."""
        return GammaSpec(self.q, self.K + r, tuple(a.shift(r) for a in self.entries), self.exact)

    def diff(self, i, j):
        return (self.entries[i - 1] - self.entries[j - 1]).truncate(self.K)

    def to_json(self):
        d = {"q": self.q, "K": self.K, "entries": [[list(t) for t in a.pairs()] for a in self.entries]}
        if self.exact:
            d["exact"] = True
        return d

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        q = data["q"]
        ents = tuple(LPoly.from_pairs(q, [(int(e), int(c)) for e, c in a]).truncate(data["K"])
                     for a in data["entries"])
        return cls(q, data["K"], ents, bool(data.get("exact", False)))


def root_valuation(gamma):
    """{(i, j): val(a_i − a_j)} for all i ≠ j."""
    R = {}
    for i in range(1, gamma.n + 1):
        for j in range(i + 1, gamma.n + 1):
            d = gamma.diff(i, j)
            if d.is_zero():
                raise PrecisionError(f"a_{i} − a_{j} vanishes modulo ε^{gamma.K}")
            R[(i, j)] = R[(j, i)] = d.val()
    return R


@dataclass(frozen=True)
class RootValuationDatum:
    n: tuple
    w: tuple = field(default=())

    def __str__(self):
        return ",".join(str(x) for x in self.n)


def _prefix_ok(R, w):
    k = len(w)
    if k < 2:
        return True
    last = w[-1]
    m = None
    for i in range(k - 2, -1, -1):
        step = R[(w[i], w[i + 1])]
        m = step if m is None else min(m, step)
        if R[(w[i], last)] != m:
            return False
    return True


def satisfies_min_rule(R, w):
    return all(_prefix_ok(R, w[:k]) for k in range(2, len(w) + 1))


def minimal_form(R, n=None):
    """Lexicographically least ordering w in which every root obeys the min rule."""
    if n is None:
        n = max(max(i, j) for i, j in R) if R else 1
    idx = list(range(1, n + 1))

    def search(w, rest):
        if not rest:
            return w
        for x in rest:
            w2 = w + (x,)
            if _prefix_ok(R, w2):
                found = search(w2, [y for y in rest if y != x])
                if found:
                    return found
        return None

    w = search((), idx)
    if w is None:
        raise InconsistentValuation("no ordering satisfies the min rule")
    if not satisfies_min_rule(R, w):
        raise AssertionError("minimal form failed exhaustive check")
    return RootValuationDatum(tuple(R[(w[k], w[k + 1])] for k in range(n - 1)), w)


def valuation_from_datum(n_tuple, w=None):
    """The map R determined by a datum read along the ordering w."""
    size = len(n_tuple) + 1
    w = w or tuple(range(1, size + 1))
    R = {}
    for a in range(size):
        for b in range(a + 1, size):
            v = min(n_tuple[a:b])
            R[(w[a], w[b])] = R[(w[b], w[a])] = v
    return R


@dataclass(frozen=True)
class RootFiltration:
    levels: tuple
    levis: tuple


def filtration(datum):
    """Breaking points m_1 < … < m_l and the Levis of the root subsystems val ≥ m_i."""
    n_tuple = datum.n
    size = len(n_tuple) + 1
    w = datum.w or tuple(range(1, size + 1))
    levels = tuple(sorted(set(n_tuple))) or (0,)
    levis = []
    for m in levels:
        blocks, cur = [], [w[0]]
        for k, v in enumerate(n_tuple):
            if v >= m:
                cur.append(w[k + 1])
            else:
                blocks.append(cur)
                cur = [w[k + 1]]
        blocks.append(cur)
        levis.append(tr.LeviPartition(blocks, size))
    return RootFiltration(levels, tuple(levis))


def _variants(d, q):
    units = range(1, q)
    for tail in product(range(q), repeat=d):
        for coeffs in product(units, repeat=d):
            yield coeffs, tail


def _build(n_tuple, q, coeffs, tail):
    entries = [LPoly.zero(q)]
    for k, c, t in zip(n_tuple, coeffs, tail):
        entries.append(entries[-1] + LPoly(q, {k: c, k + 1: t}))
    return entries


def make_gamma(n_tuple, q, K=None, variant=0):
    """A split regular γ in minimal form with datum n over F_q.

    Entries are partial sums a_{l+1} = a_l + c_l ε^{n_l} + t_l ε^{n_l+1};
    ``variant`` indexes the admissible (c, t) choices in a fixed order,
    variant 0 being all c_l = 1, t = 0 when admissible.
    """
    n_tuple = tuple(int(x) for x in n_tuple)
    if any(x < 0 for x in n_tuple):
        raise ValueError("datum entries must be nonnegative")
    if not is_prime(q):
        raise ValueError(f"q={q} must be prime")
    d = len(n_tuple)
    if K is None:
        K = 2 * max(n_tuple, default=0) + 2
    seen = 0
    for coeffs, tail in _variants(d, q):
        ents = _build(n_tuple, q, coeffs, tail)
        g = GammaSpec(q, max(K, max(n_tuple, default=0) + 2), tuple(ents), True)
        try:
            R = root_valuation(g)
        except PrecisionError:
            continue
        if R != valuation_from_datum(n_tuple) and d > 0:
            continue
        if seen == variant:
            return GammaSpec(q, K, tuple(ents), True)
        seen += 1
    if seen == 0:
        raise RealizationError(
            f"no split regular γ over F_{q} has datum {n_tuple}: "
            f"it needs more distinct residues than F_{q} provides; use a larger q")
    raise RealizationError(f"only {seen} variants exist for datum {n_tuple} over F_{q}")
