"""(G,M)-orthogonal sets and (G,M)-families: volumes, lattice counts, facets.

Every object lives relative to an ambient Levi (default: G itself), so the
same code handles (L,M)-families obtained as facets.  Volumes are computed in
the coroot normalisation (the simple-coroot lattice has covolume one) and can
be converted to the euclidean normalisation with :class:`NormalizedValue`.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
import json

from scipy.spatial import ConvexHull

from . import typea_roots as tr
from .laurent import LaurentSeriesQ, TAYLOR
from .linalg import det, rank, solve

GUARD_TERMS = 4


class GMError(ValueError):
    pass


def _vec(v):
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class NormalizedValue:
    """rational * sqrt(radicand): a volume in the euclidean normalisation."""

    rational: Fraction
    radicand: Fraction

    def __float__(self):
        return float(self.rational) * float(self.radicand) ** 0.5

    def squared(self):
        return self.rational * self.rational * self.radicand

    def canonical(self):
        """(coefficient, squarefree integer) with value coefficient*sqrt(integer)."""
        num, den = self.radicand.numerator, self.radicand.denominator
        m = num * den
        coef = self.rational / den
        k = 2
        while k * k <= m:
            while m % (k * k) == 0:
                m //= k * k
                coef *= k
            k += 1
        return coef, m

    def __eq__(self, other):
        if not isinstance(other, NormalizedValue):
            return NotImplemented
        if self.rational == 0 or other.rational == 0:
            return self.rational == other.rational
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __str__(self):
        if self.rational == 0:
            return "0"
        c, m = self.canonical()
        return str(c) if m == 1 else f"{c}*sqrt({m})"


def normalization(M, ambient=None):
    ambient = ambient or tr.LeviPartition.whole(M.n)
    return tr.normalization_sq(M, ambient)


# ---------------------------------------------------------------------------
# orthogonal sets

class OrthogonalSet:
    """Points of a_M indexed by 𝒫^ambient(M)."""

    def __init__(self, levi, points, ambient=None):
        self.levi = levi
        self.ambient = ambient or tr.LeviPartition.whole(levi.n)
        self.points = {}
        for P, v in points.items():
            if isinstance(P, str):
                P = tr.parabolic_from_key(P, self.ambient)
            self.points[P] = _vec(v)

    @property
    def n(self):
        return self.levi.n

    def parabolics(self):
        return tr.parabolics(self.levi, self.ambient)

    def __getitem__(self, P):
        return self.points[P]

    def translate(self, v):
        v = _vec(v)
        return OrthogonalSet(self.levi, {P: tuple(a + b for a, b in zip(p, v))
                                         for P, p in self.points.items()}, self.ambient)

    def __add__(self, other):
        return OrthogonalSet(self.levi, {P: tuple(a + b for a, b in zip(p, other.points[P]))
                                         for P, p in self.points.items()}, self.ambient)

    def __sub__(self, other):
        return OrthogonalSet(self.levi, {P: tuple(a - b for a, b in zip(p, other.points[P]))
                                         for P, p in self.points.items()}, self.ambient)

    def __neg__(self):
        return OrthogonalSet(self.levi, {P: tuple(-a for a in p)
                                         for P, p in self.points.items()}, self.ambient)

    def is_integral(self):
        return all(tr.in_lattice(p, self.levi) for p in self.points.values())

    def to_json(self):
        d = {"n": self.n, "levi": self.levi.key(),
             "points": {P.key(): [str(x) for x in p] for P, p in
                        sorted(self.points.items(), key=lambda kv: kv[0].key())}}
        if not self.ambient.is_whole():
            d["ambient"] = self.ambient.key()
        return d

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        levi = tr.LeviPartition.from_key(data["levi"])
        if levi.n != data["n"]:
            raise GMError("levi key does not match n")
        ambient = tr.LeviPartition.from_key(data["ambient"]) if "ambient" in data else None
        return cls(levi, {k: [Fraction(x) for x in v] for k, v in data["points"].items()}, ambient)

    def __repr__(self):
        return f"OrthogonalSet({self.levi.key()}, {self.to_json()['points']})"


@dataclass
class Verdict:
    status: str  # positive | orthogonal-not-positive | invalid
    witness: tuple = ()
    reason: str = ""

    def __bool__(self):
        return self.status == "positive"


def validate(h):
    """Classify an orthogonal set: positive / orthogonal-not-positive / invalid."""
    Ps = h.parabolics()
    for P in Ps:
        if P not in h.points:
            return Verdict("invalid", (P.key(),), "missing parabolic key")
        if not tr.is_constant_on_blocks(h.points[P], h.levi):
            return Verdict("invalid", (P.key(),), "point not in a_M")
    if len(h.points) != len(Ps):
        return Verdict("invalid", (), "unexpected parabolic keys")
    status = "positive"
    witness = ()
    for P, P2, beta in tr.adjacent_pairs(h.levi, h.ambient):
        diff = [a - b for a, b in zip(h.points[P], h.points[P2])]
        c = solve([beta], diff)
        if c is None:
            return Verdict("invalid", (P.key(), P2.key()), "difference not along the coroot")
        if c[0] < 0 and status == "positive":
            status = "orthogonal-not-positive"
            witness = (P.key(), P2.key())
    return Verdict(status, witness)


def _affine_coords(h):
    """Coroot coordinates of the points relative to the first one."""
    Ps = h.parabolics()
    base = tr.basis(h.levi, h.ambient)
    origin = h.points[Ps[0]]
    out = []
    for P in Ps:
        d = [a - b for a, b in zip(h.points[P], origin)]
        x = solve(base, d)
        if x is None:
            raise GMError("points do not share one affine slice")
        out.append(tuple(x))
    return out


def _exact_hull_volume(points):
    """Exact volume of the convex hull of rational points in R^k."""
    k = len(points[0]) if points else 0
    if k == 0:
        return Fraction(1)
    pts = sorted(set(points))
    if k == 1:
        return max(p[0] for p in pts) - min(p[0] for p in pts)
    o = pts[0]
    diffs = [[a - b for a, b in zip(p, o)] for p in pts[1:]]
    if rank(diffs) < k:
        return Fraction(0)
    hull = ConvexHull([[float(x) for x in p] for p in pts])
    centre = tuple(sum(p[i] for p in pts) / len(pts) for i in range(k))
    vol = Fraction(0)
    for simplex in hull.simplices:
        rows = [[a - b for a, b in zip(pts[j], centre)] for j in simplex]
        vol += abs(det(rows))
    return vol / factorial(k)


def hull_volume_direct(h):
    """Volume of the convex hull E(h) (coroot normalisation), computed geometrically."""
    if tr.dim_a(h.levi, h.ambient) == 0:
        return Fraction(1)
    return _exact_hull_volume(_affine_coords(h))


def hull_volume_euclidean(h):
    return NormalizedValue(hull_volume_direct(h), normalization(h.levi, h.ambient))


# ---------------------------------------------------------------------------
# symbolic families

@dataclass(frozen=True)
class Member:
    """const * prod F_kind(<λ, v>) over the listed terms."""

    const: Fraction = Fraction(1)
    terms: tuple = ()

    def __mul__(self, other):
        return Member(self.const * other.const, self.terms + other.terms)

    def evaluate(self, mu, prec):
        s = LaurentSeriesQ.constant(self.const, prec)
        for kind, v in self.terms:
            c = tr.dot(mu, v)
            s = s * LaurentSeriesQ.taylor(TAYLOR[kind](prec), c, prec)
        return s


class SymbolicFamily:
    """A (ambient, M)-family with exponential-polynomial members."""

    def __init__(self, levi, members, kind, ambient=None):
        self.levi = levi
        self.ambient = ambient or tr.LeviPartition.whole(levi.n)
        self.members = members
        self.kind = kind

    def parabolics(self):
        return tr.parabolics(self.levi, self.ambient)

    def evaluate(self, P, mu, prec):
        return self.members[P].evaluate(mu, prec)

    def __mul__(self, other):
        return SymbolicFamily(self.levi, {P: m * other.members[P] for P, m in self.members.items()},
                              "product", self.ambient)


def exp_family(h):
    return SymbolicFamily(h.levi, {P: Member(Fraction(1), (("exp", p),)) for P, p in h.points.items()},
                          "exponential", h.ambient)


def e_family(M, ambient=None):
    """e_P(λ) = d_P(λ) / c̄_P(λ) = prod_α <λ,α^∨> / (1 - e^{-<λ,α^∨>})."""
    ambient = ambient or tr.LeviPartition.whole(M.n)
    return SymbolicFamily(M, {P: Member(Fraction(1), tuple(("x/(1-e^-x)", a) for a in tr.simple_coroots(P)))
                              for P in tr.parabolics(M, ambient)}, "e-family", ambient)


def e_inverse(M, ambient=None):
    ambient = ambient or tr.LeviPartition.whole(M.n)
    return SymbolicFamily(M, {P: Member(Fraction(1), tuple(("(1-e^-x)/x", a) for a in tr.simple_coroots(P)))
                              for P in tr.parabolics(M, ambient)}, "inverse", ambient)


def constant_family(M, c=1, ambient=None):
    ambient = ambient or tr.LeviPartition.whole(M.n)
    return SymbolicFamily(M, {P: Member(Fraction(c)) for P in tr.parabolics(M, ambient)}, "constant", ambient)


def generic_directions(M, ambient=None, count=3, start=0):
    """Deterministic directions μ ∈ a_M^* with distinct block values."""
    out = []
    j = start
    while len(out) < count:
        vals = {b: Fraction((k + 1) ** (j % 3 + 1) + k * (j + 2) + (j // 3) * k * k)
                for k, b in enumerate(M.blocks)}
        mu = [Fraction(0)] * M.n
        for b, x in vals.items():
            for i in b:
                mu[i - 1] = x
        if is_generic(mu, M, ambient):
            out.append(tuple(mu))
        j += 1
    return out


def is_generic(mu, M, ambient=None):
    return all(tr.dot(mu, a) != 0 for P in tr.parabolics(M, ambient) for a in tr.simple_coroots(P))


def volume_limit(f, mu=None, order=None):
    """Constant term at t = 0 of sum_P f_P(tμ) / prod_α <tμ, α^∨> (coroot normalisation)."""
    if mu is None:
        mu = generic_directions(f.levi, f.ambient, 1)[0]
    mu = _vec(mu)
    if not is_generic(mu, f.levi, f.ambient):
        raise GMError(f"direction {mu} is not generic for {f.levi}")
    k = tr.dim_a(f.levi, f.ambient)
    if order is None:
        order = k + 1 + GUARD_TERMS
    if order < k + 1:
        raise GMError(f"working order {order} too small; need at least {k + 1}")
    total = LaurentSeriesQ.constant(0, order - k)
    for P in f.parabolics():
        denom = Fraction(1)
        for a in tr.simple_coroots(P):
            denom *= tr.dot(mu, a)
        total = total + f.evaluate(P, mu, order).shift(-k) * (1 / denom)
    pp = total.principal_part()
    if pp:
        raise GMError(f"pole does not cancel (not a family?): {pp}")
    return total.coeff(0)


def volume(f, mu=None):
    return NormalizedValue(volume_limit(f, mu), normalization(f.levi, f.ambient))


# ---------------------------------------------------------------------------
# lattice points

def in_hull(lam, h):
    """λ ∈ E(h) ⟺ h_P − λ is a nonnegative combination of Δ_P^∨ for every P."""
    lam = _vec(lam)
    for P in h.parabolics():
        diff = [a - b for a, b in zip(h.points[P], lam)]
        cor = tr.simple_coroots(P)
        if not cor:
            if any(diff):
                return False
            continue
        x = solve(cor, diff)
        if x is None or any(c < 0 for c in x):
            return False
    return True


def lattice_points(h):
    """Enumerate E(h) ∩ Λ_M through a bounding box on the block multiplicities."""
    M = h.levi
    pts = list(h.points.values())
    ranges = []
    for b in M.blocks:
        vals = [p[b[0] - 1] * len(b) for p in pts]
        lo, hi = min(vals), max(vals)
        ranges.append(range(int(lo.__floor__()), int(hi.__ceil__()) + 1))
    out = []

    def rec(k, acc):
        if k == len(M.blocks):
            lam = [Fraction(0)] * M.n
            for b, m in zip(M.blocks, acc):
                for i in b:
                    lam[i - 1] = Fraction(m, len(b))
            if in_hull(lam, h):
                out.append(tuple(lam))
            return
        for m in ranges[k]:
            rec(k + 1, acc + [m])

    rec(0, [])
    return out


def lattice_count(h, mode="formula", mu=None):
    """|E(h) ∩ Λ_M| for an integral positive orthogonal set."""
    if mode == "enumeration":
        return len(lattice_points(h))
    if mode != "formula":
        raise GMError(f"unknown mode {mode}")
    if not h.is_integral():
        raise GMError("formula mode needs an integral orthogonal set")
    value = volume_limit(exp_family(h) * e_family(h.levi, h.ambient), mu)
    if value.denominator != 1:
        raise GMError(f"non-integral lattice count {value}")
    return int(value)


# ---------------------------------------------------------------------------
# facets and projections

def facet(f, Q):
    """The Q-facet: an (L, M)-object with L the Levi of Q ∈ 𝓕^ambient(M)."""
    L = Q.levi
    if Q.ambient != f.ambient or not f.levi.refines(L):
        raise GMError("Q must contain M inside the same ambient")
    Rs = tr.parabolics(f.levi, L)
    if isinstance(f, OrthogonalSet):
        return OrthogonalSet(f.levi, {R: f.points[tr.compose(R, Q)] for R in Rs}, L)
    return SymbolicFamily(f.levi, {R: f.members[tr.compose(R, Q)] for R in Rs}, f.kind, L)


def project(f, L, check=True):
    """π_L: the (ambient, L)-object from restriction to a_L^*."""
    if not f.levi.refines(L) or not L.refines(f.ambient):
        raise GMError("need M ⊆ L ⊆ ambient")
    Qs = tr.parabolics(L, f.ambient)
    Ps = f.parabolics()
    groups = {Q: [P for P in Ps if tr.contained_in(P, Q)] for Q in Qs}
    if isinstance(f, OrthogonalSet):
        pts = {}
        for Q, members in groups.items():
            vals = {tr.project(f.points[P], L) for P in members}
            if check and len(vals) != 1:
                raise GMError(f"projection to {L} depends on the parabolic inside {Q}")
            pts[Q] = tr.project(f.points[members[0]], L)
        return OrthogonalSet(L, pts, f.ambient)
    if check:
        prec = tr.dim_a(f.levi, f.ambient) + 1 + GUARD_TERMS
        for mu in generic_directions(L, f.ambient, 2):
            for Q, members in groups.items():
                ref = f.evaluate(members[0], mu, prec)
                for P in members[1:]:
                    s = f.evaluate(P, mu, prec)
                    if any(ref.coeff(k) != s.coeff(k) for k in range(prec)):
                        raise GMError(f"restriction to a_{L.key()} not independent of P in {Q}")
    return SymbolicFamily(L, {Q: f.members[ms[0]] for Q, ms in groups.items()}, f.kind, f.ambient)


def embed_facet(fq, Q):
    """ι(r^Q): view a Q-facet as a (G,M)-family, P ↦ r^Q_{P∩L}."""
    M = fq.levi
    out = {}
    for P in tr.parabolics(M, Q.ambient):
        R = tr.restrict(P, Q.levi)
        out[P] = fq.members[R] if isinstance(fq, SymbolicFamily) else fq.points[R]
    if isinstance(fq, OrthogonalSet):
        return OrthogonalSet(M, out, Q.ambient)
    return SymbolicFamily(M, out, fq.kind, Q.ambient)


# ---------------------------------------------------------------------------
# descent

def descent_parabolic(M, L, L2, xi, ambient=None):
    """Q^ξ_{L'} ∈ 𝒫(L'): chamber of the point (ξ + a_L^G) ∩ a_{L'}^G, or None if θ = 0."""
    ambient = ambient or tr.LeviPartition.whole(M.n)
    if tr.theta_coefficient(M, L, L2, ambient) == 0:
        return None
    xi = _vec(xi)
    # y = ξ + u with u ∈ a_L^G and y ∈ a_{L'}^G
    bl = tr.basis(L, ambient)
    bl2 = tr.basis(L2, ambient)
    x = solve(bl2 + [tuple(-c for c in v) for v in bl], list(xi))
    if x is None:
        raise GMError("ξ + a_L^G misses a_L'^G")
    y = [sum((c * v[i] for c, v in zip(x[:len(bl2)], bl2)), Fraction(0)) for i in range(M.n)]
    vals = {b: y[b[0] - 1] for b in L2.blocks}
    for amb in ambient.blocks:
        inside = [vals[b] for b in L2.blocks if set(b) <= set(amb)]
        if len(set(inside)) != len(inside):
            raise GMError("ξ is not generic")
    order = []
    for amb in ambient.blocks:
        inside = [b for b in L2.blocks if set(b) <= set(amb)]
        order.extend(sorted(inside, key=lambda b: -vals[b]))
    return tr.ParabolicChain(order, ambient)


def random_xi(M, L, rng):
    """A random rational vector in a_M^L."""
    base = tr.basis(M, L)
    coeffs = [Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in base]
    return tuple(sum((c * v[i] for c, v in zip(coeffs, base)), Fraction(0)) for i in range(M.n))


def descent_terms(f, L, xi):
    """[(L', θ_M^G(L,L'), Q^ξ_{L'}, r_M^{Q^ξ_{L'}})] for the descent formula."""
    out = []
    for L2 in tr.coarsenings(f.levi, f.ambient):
        theta = tr.theta_coefficient(f.levi, L, L2, f.ambient)
        if theta == 0:
            continue
        Q = descent_parabolic(f.levi, L, L2, xi, f.ambient)
        fac = facet(f, Q)
        vol = volume_limit(exp_family(fac) if isinstance(fac, OrthogonalSet) else fac)
        out.append((L2, theta, Q, vol))
    return out


def descent_volume(f, L, xi):
    """sum_{L'} θ_M^G(L,L') r_M^{Q^ξ_{L'}}; should equal the volume of π_L(f)."""
    return sum((theta * vol for _, theta, _, vol in descent_terms(f, L, xi)), Fraction(0))


# ---------------------------------------------------------------------------
# random instances

def random_positive_set(M, rng, ambient=None, spread=4):
    """A random integral positive orthogonal set in a_M.

    Sum of three positive pieces: a zonotope (nonnegative weights on pairs of
    indices, projected to a_M), a chamber orbit (block at position k of P gets
    value m_k/|B| with m decreasing), and a translation by an element of Λ_M.
    """
    ambient = ambient or tr.LeviPartition.whole(M.n)
    n = M.n
    w = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if ambient.block_of(i) == ambient.block_of(j):
                w[(i, j)] = rng.randint(0, spread)
    shift = [rng.randint(-3, 3) for _ in range(n)]
    masses = {}
    for amb in ambient.blocks:
        k = sum(1 for b in M.blocks if set(b) <= set(amb))
        masses[amb] = sorted((rng.randint(-spread, spread) for _ in range(k)), reverse=True)
    pts = {}
    for P in tr.parabolics(M, ambient):
        order = [i for b in P.ordered_blocks for i in b]
        pos = {i: k for k, i in enumerate(order)}
        v = [Fraction(x) for x in shift]
        for (i, j), c in w.items():
            a, b = (i, j) if pos[i] < pos[j] else (j, i)
            v[a - 1] += c
            v[b - 1] -= c
        v = list(tr.project(v, M))
        for amb in ambient.blocks:
            inside = [b for b in P.ordered_blocks if set(b) <= set(amb)]
            for m, b in zip(masses[amb], inside):
                for i in b:
                    v[i - 1] += Fraction(m, len(b))
        pts[P] = tuple(v)
    return OrthogonalSet(M, pts, ambient)
