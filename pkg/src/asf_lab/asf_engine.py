"""Brute-force enumeration of γ-stable lattices and the data built on them.

A lattice L = g·O^n is stored in column Hermite form: g upper triangular,
g_ii = ε^{h_i}, and g_ij (i < j) a Laurent polynomial with exponents in
[-N, h_i).  Retraction vectors are reported without the conventional minus
sign: for the Borel with flag e_1 ⊂ (e_1, e_2) ⊂ … the vector is h itself.
"""

from dataclasses import dataclass, field, asdict
from fractions import Fraction
from itertools import combinations, permutations, product
from functools import lru_cache
from math import prod
import hashlib
import json
import os
import tempfile

from . import gm_calculus as gm
from . import typea_roots as tr
from .fq import LPoly
from .linalg import nullspace_mod_p, rank_mod_p
from .valuation import GammaSpec, PrecisionError, root_valuation

ENGINE_VERSION = "asf-engine-1"
WINDOW_CAP = 12


class WindowError(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    pass


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class LatticeRep:
    q: int
    h: tuple
    x: tuple  # LPoly per pair (i, j), i < j, row-major
    window: int

    @property
    def n(self):
        return len(self.h)

    @property
    def det_val(self):
        return sum(self.h)

    def entry(self, i, j):
        """g[i][j] with 0-based indices."""
        if i == j:
            return LPoly.monomial(self.q, self.h[i])
        if i > j:
            return LPoly.zero(self.q)
        return self.x[_pair_index(self.n, i, j)]

    def matrix(self):
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def key(self):
        return (self.h, tuple(tuple(a.pairs()) for a in self.x))

    def fingerprint(self):
        return hashlib.sha256(repr(self.key()).encode()).hexdigest()[:16]

    def min_entry_val(self):
        vals = list(self.h) + [a.val() for a in self.x if not a.is_zero()]
        return min(vals)

    def __repr__(self):
        return f"LatticeRep(h={self.h}, x={list(self.x)})"


def _pair_index(n, i, j):
    # position of (i, j), i < j, in row-major order of the strict upper triangle
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def standard_lattice(n, q):
    return LatticeRep(q, (0,) * n, tuple(LPoly.zero(q) for _ in range(n * (n - 1) // 2)), 0)


def diagonal_lattice(h, q):
    n = len(h)
    return LatticeRep(q, tuple(h), tuple(LPoly.zero(q) for _ in range(n * (n - 1) // 2)), 0)


def triangular_inverse(g, k):
    """Inverse of the leading k×k block of an upper triangular g with monomial diagonal."""
    q = g[0][0].p
    inv = [[LPoly.zero(q) for _ in range(k)] for _ in range(k)]
    for i in range(k - 1, -1, -1):
        d = -g[i][i].val()
        inv[i][i] = LPoly.monomial(q, d)
        for j in range(i + 1, k):
            s = LPoly.zero(q)
            for m in range(i + 1, j + 1):
                if not g[i][m].is_zero() and not inv[m][j].is_zero():
                    s = s + g[i][m] * inv[m][j]
            inv[i][j] = -(s.shift(d))
    return inv


def _negative_part(a):
    return {e: c for e, c in a.terms.items() if e < 0}


def _gamma_entries(gamma, level):
    if not gamma.precision_ok(0):
        raise PrecisionError("γ precision")
    return [a.shift(-level) for a in gamma.entries]


def stable_lattices_with_diagonal(gamma, h, N, level=0):
    """All lattices with diagonal ε^h in window N stable under ε^{-level}γ."""
    n = len(h)
    q = gamma.q
    if any(x < -N or x > N for x in h):
        return []
    if not gamma.precision_ok(2 * N + 2 + level):
        raise PrecisionError(f"γ known modulo ε^{gamma.K}; window {N} needs ε^{2 * N + 2 + level}")
    a = _gamma_entries(gamma, level)
    diag = [LPoly.monomial(q, x) for x in h]
    out = []

    def column(j, g):
        if j == n:
            xs = tuple(g[r][c] for r in range(n) for c in range(r + 1, n))
            out.append(LatticeRep(q, tuple(h), xs, N))
            return
        inv = triangular_inverse(g, j) if j else []
        unknowns = [(i, e) for i in range(j) for e in range(-N, h[i])]
        # γ g_j − a_j g_j = sum_{i<j} (a_i − a_j) x_ij e_i must lie in the span of columns < j
        images = []
        rows = {}
        for i, e in unknowns:
            coef = (a[i] - a[j]).shift(e)
            img = {}
            for k in range(i + 1):
                u = inv[k][i] * coef
                for ex, c in _negative_part(u).items():
                    img[(k, ex)] = c
                    rows.setdefault((k, ex), None)
            images.append(img)
        row_keys = list(rows)
        mat = [[img.get(rk, 0) for img in images] for rk in row_keys]
        if unknowns:
            basis = nullspace_mod_p(mat, len(unknowns), q) if mat else [
                [1 if t == s else 0 for t in range(len(unknowns))] for s in range(len(unknowns))]
        else:
            basis = []
        for combo in product(range(q), repeat=len(basis)):
            vec = [0] * len(unknowns)
            for c, b in zip(combo, basis):
                if c:
                    vec = [(v + c * w) % q for v, w in zip(vec, b)]
            col = {}
            for (i, e), c in zip(unknowns, vec):
                if c:
                    col.setdefault(i, {})[e] = c
            g2 = [row[:] for row in g]
            for i in range(j):
                g2[i][j] = LPoly(q, col.get(i, {}))
            g2[j][j] = diag[j]
            column(j + 1, g2)

    g0 = [[LPoly.zero(q) for _ in range(n)] for _ in range(n)]
    g0[0][0] = diag[0]
    column(1, g0)
    # column 0 imposes nothing: γ e_1 = a_1 e_1
    return out


def _integer_points(box, total):
    """Integer vectors inside the coordinate box with given coordinate sum."""
    n = len(box)
    out = []

    def rec(k, acc, s):
        if k == n - 1:
            v = total - s
            if box[k][0] <= v <= box[k][1]:
                out.append(tuple(acc + [v]))
            return
        for v in range(box[k][0], box[k][1] + 1):
            rec(k + 1, acc + [v], s + v)

    if n == 0:
        return [()]
    rec(0, [], 0)
    return out


def enumerate_fixed_lattices(gamma, N, mu, level=0):
    """Every γ-stable lattice with det valuation μ inside the window N, in canonical order."""
    n = gamma.n
    out = []
    for h in _integer_points([(-N, N)] * n, mu):
        out.extend(stable_lattices_with_diagonal(gamma, h, N, level))
    return out


# ---------------------------------------------------------------------------
# retraction vectors

def _det(m):
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        a, b = m[0]
        c, d = m[1]
        if a.is_zero() or d.is_zero():
            return -(b * c)
        if b.is_zero() or c.is_zero():
            return a * d
        return a * d - b * c
    q = m[0][0].p
    total = LPoly.zero(q)
    for perm in permutations(range(k)):
        term = None
        for r, c in enumerate(perm):
            e = m[r][c]
            if e.is_zero():
                term = None
                break
            term = e if term is None else term * e
        if term is None:
            continue
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        total = total + (term if inv % 2 == 0 else -term)
    return total


@lru_cache(maxsize=None)
def _minor_index(n):
    """Row sets S with the column sets that can give a nonzero minor of an upper triangular matrix."""
    out = []
    for k in range(1, n + 1):
        for S in combinations(range(n), k):
            out.append((S, [C for C in combinations(range(n), k) if C[0] >= S[0]]))
    return out


@lru_cache(maxsize=None)
def _borel_index(n):
    out = []
    for B in tr.borels(n):
        sigma = [b[0] - 1 for b in B.ordered_blocks]
        steps = [(sigma[k], tuple(sorted(sigma[k:])), tuple(sorted(sigma[k + 1:]))) for k in range(n)]
        out.append((B, steps))
    return out


def _row_subset_valuations(L):
    """f(S) = min over column sets C of val det g[S, C], for every row set S."""
    g = L.matrix()
    f = {(): 0}
    for S, cols in _minor_index(L.n):
        best = None
        for C in cols:
            d = _det([[g[r][c] for c in C] for r in S])
            if not d.is_zero():
                v = d.val()
                if best is None or v < best:
                    best = v
        f[S] = best
    return f


def borel_vectors(L):
    """{Borel chain: H_B(L)} for every ordering σ of the coordinates."""
    f = _row_subset_valuations(L)
    out = {}
    for B, steps in _borel_index(L.n):
        vec = [0] * L.n
        for i, tail, rest in steps:
            vec[i] = f[tail] - f[rest]
        out[B] = tuple(vec)
    return out


def _borel_inside(P):
    return tr.ParabolicChain([(i,) for b in P.ordered_blocks for i in sorted(b)], P.ambient)


def hp_vector(L, P, borel=None):
    """H_P(L): block average of the vector for any Borel inside P."""
    borel = borel or borel_vectors(L)
    v = borel[_borel_inside(P)]
    return tr.project(v, P.levi)


def ec(L, M=None, borel=None):
    M = M or tr.LeviPartition.torus(L.n)
    borel = borel or borel_vectors(L)
    if M.is_torus():
        return gm.OrthogonalSet(M, {B: v for B, v in borel.items()})
    return gm.OrthogonalSet(M, {P: hp_vector(L, P, borel) for P in tr.parabolics(M)})


def ec_contained(inner, outer):
    """Ec(x) ⊆ Ec(x0) via H_σ(x) ≺_σ H_σ(x0) for every Borel σ (both given as borel dicts)."""
    for B, v0 in outer.items():
        v = inner[B]
        s = 0
        order = [b[0] - 1 for b in B.ordered_blocks]
        for k, i in enumerate(order):
            s += v0[i] - v[i]
            if k < len(order) - 1 and s < 0:
                return False
        if s != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# regular points

def residue_matrix(L, gamma, level=0):
    """(g^{-1} ε^{-level}γ g) mod ε over F_q (entries must be integral)."""
    g = L.matrix()
    inv = triangular_inverse(g, L.n)
    a = _gamma_entries(gamma, level)
    n = L.n
    res = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s = LPoly.zero(L.q)
            for k in range(i, j + 1):
                if not inv[i][k].is_zero() and not g[k][j].is_zero():
                    s = s + inv[i][k] * a[k] * g[k][j]
            if not s.is_zero() and s.val() < 0:
                raise InvariantViolation("lattice is not γ-stable")
            res[i][j] = s.coeff(0)
    return res


def is_regular(L, gamma, level=0):
    A = residue_matrix(L, gamma, level)
    q = L.q
    n = L.n
    eig = {a.coeff(0) % q for a in _gamma_entries(gamma, level)}
    for lam in eig:
        B = [[(A[i][j] - (lam if i == j else 0)) % q for j in range(n)] for i in range(n)]
        if rank_mod_p(B, q) != n - 1:
            return False
    return True


def find_regular_point(gamma, N=None, level=0, h=None, skip=()):
    """First regular lattice in canonical order (diagonal h, default 0)."""
    n = gamma.n
    N = N if N is not None else default_window(gamma)
    h = tuple(h) if h is not None else (0,) * n
    for L in stable_lattices_with_diagonal(gamma, h, N, level):
        if L.key() in skip:
            continue
        if is_regular(L, gamma, level):
            return L
    raise WindowError(f"no regular point with diagonal {h} in window {N}; enlarge the window")


def second_regular_point(gamma, x0, N=None, level=0):
    """An independent regular base point on the same component, with a different diagonal."""
    n = gamma.n
    N = N if N is not None else default_window(gamma)
    if n == 1:
        return x0
    for r in range(1, N + 1):
        for h in _integer_points([(-r, r)] * n, x0.det_val):
            if h == x0.h:
                continue
            for L in stable_lattices_with_diagonal(gamma, h, N, level):
                if is_regular(L, gamma, level):
                    return L
    raise WindowError("no second regular base point found in window")


# ---------------------------------------------------------------------------
# fundamental domains

def discriminant_exponent(gamma):
    """Σ_{α>0} val α(γ): |D(γ)|^{1/2} = q^{-this}."""
    if gamma.n < 2:
        return 0
    R = root_valuation(gamma)
    return sum(v for (i, j), v in R.items() if i < j)


def default_window(gamma):
    if gamma.n < 2:
        return 2
    return discriminant_exponent(gamma) + 2


@dataclass
class CountRecord:
    d: int
    n: tuple
    q: int
    window: int
    component: int
    count: int
    x0: str
    engine_version: str = ENGINE_VERSION
    metadata: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        d["n"] = list(self.n)
        return d


def hull_box(borel):
    n = len(next(iter(borel.values())))
    return [(min(v[i] for v in borel.values()), max(v[i] for v in borel.values())) for i in range(n)]


def _in_window(L, N):
    return all(-N <= x <= N for x in L.h) and L.min_entry_val() >= -N


def fundamental_domain(gamma, x0=None, N=None, level=0):
    """(lattices of F_γ within window N, lattices within N+1) for base point x0."""
    N = N if N is not None else default_window(gamma)
    x0 = x0 or find_regular_point(gamma, N, level)
    b0 = borel_vectors(x0)
    box = hull_box(b0)
    inside, wider = [], []
    for h in _integer_points(box, x0.det_val):
        for L in stable_lattices_with_diagonal(gamma, h, N + 1, level):
            if ec_contained(borel_vectors(L), b0):
                wider.append(L)
                if _in_window(L, N):
                    inside.append(L)
    return inside, wider


def fundamental_domain_count(gamma, x0=None, N=None, level=0, datum=None, cap=WINDOW_CAP):
    """|F_γ(F_q)|, saturation-verified by comparing windows N and N+1."""
    N = N if N is not None else default_window(gamma)
    x0 = x0 or find_regular_point(gamma, N, level)
    while True:
        inside, wider = fundamental_domain(gamma, x0, N, level)
        if len(inside) == len(wider):
            break
        if N >= cap:
            raise WindowError(f"window saturation failed up to N={N}")
        N += 1
    return CountRecord(gamma.n - 1, tuple(datum or ()), gamma.q, N, x0.det_val, len(inside),
                       x0.fingerprint(), metadata={"x0_h": list(x0.h), "saturated": True})


def weight_v_gamma(x, x0, check=True):
    """|{λ ∈ Λ_A : λ + Ec(x) ⊆ Ec(x0)}|, by translation and by lattice_count(λ(x,x0))."""
    bx, b0 = borel_vectors(x), borel_vectors(x0)
    lam = gm.OrthogonalSet(tr.LeviPartition.torus(x.n), {B: tuple(Fraction(a - b) for a, b in zip(b0[B], bx[B]))
                                                         for B in b0})
    if gm.validate(lam).status != "positive":
        return 0
    boxx, box0 = hull_box(bx), hull_box(b0)
    diff_box = [(lo0 - lox, hi0 - hix) for (lox, hix), (lo0, hi0) in zip(boxx, box0)]
    count = 0
    for l in _integer_points(diff_box, x0.det_val - x.det_val):
        moved = {B: tuple(a + b for a, b in zip(v, l)) for B, v in bx.items()}
        if ec_contained(moved, b0):
            count += 1
    if check:
        formula = gm.lattice_count(lam, "formula")
        if formula != count:
            raise InvariantViolation(f"v_γ mismatch: translation {count}, formula {formula}")
    return count


def orbit_representatives(gamma, N=None, level=0):
    """One lattice per Λ_A-orbit of X_γ: those with diagonal h = 0."""
    N = N if N is not None else default_window(gamma)
    return stable_lattices_with_diagonal(gamma, (0,) * gamma.n, N, level)


def weighted_orbital(gamma, M=None, level=0, N=None):
    """J_M(γ, 1_{ε^level 𝔨}) = |D(γ)|^{1/2} Σ_{x ∈ Λ\\X} vol(Ec_M(x)) (coroot normalisation).

    The stability condition is taken for ε^{-level}γ; the discriminant is that of γ.
    """
    n = gamma.n
    M = M or tr.LeviPartition.torus(n)
    N = N if N is not None else default_window(gamma) + max(level, 0)
    reps = orbit_representatives(gamma, N, level)
    total = Fraction(0)
    for x in reps:
        if M.is_whole():
            total += 1
        else:
            total += gm.hull_volume_direct(ec(x, M))
    return total / Fraction(gamma.q) ** discriminant_exponent(gamma)


def block_gamma(gamma, block):
    return GammaSpec(gamma.q, gamma.K, tuple(gamma.entries[i - 1] for i in sorted(block)), gamma.exact)


def levi_orbital(gamma, M):
    """J_A^M(γ, 1_{𝔪∩𝔨}) as the product over the blocks of M."""
    return prod((weighted_orbital(block_gamma(gamma, b)) for b in M.blocks), start=Fraction(1))


def levi_count(gamma, M):
    """|F_γ^M(F_q)| as the product of blockwise fundamental-domain counts."""
    return prod(fundamental_domain_count(block_gamma(gamma, b)).count for b in M.blocks)


# ---------------------------------------------------------------------------
# cache

def cache_dir():
    d = os.environ.get("ASF_CACHE_DIR")
    if d:
        return d
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "asf-lab")


def cache_key(kind, payload):
    blob = json.dumps({"kind": kind, "payload": payload, "version": ENGINE_VERSION}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_get(kind, payload, directory=None):
    path = os.path.join(directory or cache_dir(), cache_key(kind, payload) + ".json")
    try:
        with open(path) as fh:
            return json.load(fh)["result"]
    except (OSError, ValueError, KeyError):
        return None


def cache_put(kind, payload, result, directory=None):
    directory = directory or cache_dir()
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, cache_key(kind, payload) + ".json")
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump({"kind": kind, "payload": payload, "version": ENGINE_VERSION, "result": result},
                  fh, sort_keys=True)
    os.replace(tmp, path)
    return path
