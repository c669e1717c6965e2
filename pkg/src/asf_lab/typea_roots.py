"""Type A root datum of GL_n: Levis as set partitions, parabolics as orderings.

Indices are 1-based throughout.  A Levi subgroup containing the diagonal
torus is a set partition of {1..n}; a parabolic with Levi factor M is an
ordering of the blocks of M.  Relative parabolics (inside an intermediate
Levi L) are orderings of the blocks of M in which every block of L appears as
a contiguous run, the runs following the canonical order of L.

Coroot and volume constants are reported in two normalisations:

* euclidean: the standard dot product on R^n (``*_sq`` values are squared
  covolumes, kept rational);
* coroot: the lattice spanned by the simple coroots of any parabolic has
  covolume one.  This is the "rational coordinate" used by the identities.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .linalg import det, solve


def _canon(blocks):
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


class LeviPartition:
    """A set partition of {1..n}; the singleton partition is the torus A."""

    __slots__ = ("n", "blocks", "_index")

    def __init__(self, blocks, n=None):
        blocks = _canon(blocks)
        flat = sorted(i for b in blocks for i in b)
        if n is None:
            n = len(flat)
        if flat != list(range(1, n + 1)) or any(len(b) == 0 for b in blocks):
            raise ValueError(f"not a set partition of 1..{n}: {blocks}")
        self.n = n
        self.blocks = blocks
        self._index = {i: k for k, b in enumerate(blocks) for i in b}

    @classmethod
    def torus(cls, n):
        return cls([(i,) for i in range(1, n + 1)], n)

    @classmethod
    def whole(cls, n):
        return cls([tuple(range(1, n + 1))], n)

    @classmethod
    def from_key(cls, key):
        blocks = [tuple(int(c) for c in part) for part in key.split("|")]
        return cls(blocks)

    def key(self):
        return "|".join("".join(str(i) for i in b) for b in self.blocks)

    def block_of(self, i):
        return self.blocks[self._index[i]]

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, LeviPartition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"Levi({self.key()})"

    def is_torus(self):
        return all(len(b) == 1 for b in self.blocks)

    def is_whole(self):
        return len(self.blocks) == 1

    def refines(self, other):
        """True when self ⊆ other as Levi subgroups (self is finer)."""
        return all(set(b) <= set(other.block_of(b[0])) for b in self.blocks)

    def dim_a(self):
        return len(self.blocks)


class ParabolicChain:
    """An ordering of the blocks of a Levi, relative to an ambient Levi.

    With the default ambient (one block) this is a parabolic of G.
    """

    __slots__ = ("ordered_blocks", "ambient", "levi")

    def __init__(self, ordered_blocks, ambient=None):
        ordered = tuple(tuple(sorted(b)) for b in ordered_blocks)
        self.levi = LeviPartition(ordered)
        n = self.levi.n
        self.ambient = ambient if ambient is not None else LeviPartition.whole(n)
        self.ordered_blocks = ordered
        self._check()

    def _check(self):
        runs = self.runs()
        seen = tuple(tuple(sorted(i for b in run for i in b)) for run in runs)
        if seen != self.ambient.blocks:
            raise ValueError(f"ordering {self.key()} not compatible with {self.ambient}")

    def runs(self):
        """Split the ordering into the consecutive runs lying in one ambient block."""
        runs = []
        for b in self.ordered_blocks:
            amb = self.ambient.block_of(b[0])
            if runs and self.ambient.block_of(runs[-1][0][0]) == amb:
                runs[-1].append(b)
            else:
                runs.append([b])
        return runs

    def key(self):
        return "|".join("".join(str(i) for i in b) for b in self.ordered_blocks)

    def __eq__(self, other):
        return (isinstance(other, ParabolicChain)
                and self.ordered_blocks == other.ordered_blocks
                and self.ambient == other.ambient)

    def __hash__(self):
        return hash((self.ordered_blocks, self.ambient.blocks))

    def __repr__(self):
        return f"P({self.key()})"

    def simple_pairs(self):
        """Consecutive block pairs (B, B') inside one ambient block: the simple roots."""
        out = []
        for run in self.runs():
            out.extend(zip(run, run[1:]))
        return out


def parabolic_from_key(key, ambient=None):
    return ParabolicChain([tuple(int(c) for c in part) for part in key.split("|")], ambient)


# ---------------------------------------------------------------------------
# enumeration

def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def _levi_sort_key(levi):
    return (-len(levi.blocks), tuple(b[0] for b in levi.blocks), levi.blocks)


def enumerate_levis(n):
    """All Levis of GL_n containing the diagonal torus, each once, fixed order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    levis = {LeviPartition(p, n) for p in _set_partitions(list(range(1, n + 1)))}
    return sorted(levis, key=_levi_sort_key, reverse=False)


def coarsenings(M, ambient=None):
    """𝓛^ambient(M): Levis L with M ⊆ L ⊆ ambient."""
    ambient = ambient or LeviPartition.whole(M.n)
    return [L for L in enumerate_levis(M.n) if M.refines(L) and L.refines(ambient)]


def parabolics(M, ambient=None):
    """𝒫^ambient(M): compatible orderings of the blocks of M."""
    ambient = ambient or LeviPartition.whole(M.n)
    groups = []
    for ab in ambient.blocks:
        inside = [b for b in M.blocks if set(b) <= set(ab)]
        groups.append(inside)
    result = [()]
    for g in groups:
        result = [r + p for r in result for p in permutations(g)]
    out = [ParabolicChain(r, ambient) for r in result]
    out.sort(key=lambda P: tuple(b[0] for b in P.ordered_blocks))
    return out


def parabolic_sets(M, ambient=None):
    """(𝒫(M), 𝓛(M), 𝓕(M)) relative to the ambient Levi (default G)."""
    P = parabolics(M, ambient)
    L = coarsenings(M, ambient)
    F = [Q for Lv in L for Q in parabolics(Lv, ambient)]
    return P, L, F


def borels(n, ambient=None):
    return parabolics(LeviPartition.torus(n), ambient)


def compose(R, Q):
    """R N_Q: R ∈ 𝒫^L(M), Q ∈ 𝒫(L) (both relative to the same outer ambient)."""
    L = Q.levi
    if R.ambient != L:
        raise ValueError("R must be relative to the Levi of Q")
    order = []
    for lb in Q.ordered_blocks:
        order.extend(b for b in R.ordered_blocks if set(b) <= set(lb))
    return ParabolicChain(order, Q.ambient)


def restrict(P, L):
    """P ∩ L for P ∈ 𝒫(M), M ⊆ L: the induced element of 𝒫^L(M)."""
    order = []
    for lb in L.blocks:
        order.extend(b for b in P.ordered_blocks if set(b) <= set(lb))
    return ParabolicChain(order, L)


def contained_in(P, Q):
    """True when the parabolic P (Levi M) lies in Q (Levi L ⊇ M), same ambient."""
    if not P.levi.refines(Q.levi):
        return False
    pos = {i: k for k, b in enumerate(Q.ordered_blocks) for i in b}
    seq = [pos[b[0]] for b in P.ordered_blocks]
    return seq == sorted(seq)


def coarsen(P, L):
    """The unique Q ∈ 𝒫(L) containing P, relative to P's ambient."""
    order = []
    for b in P.ordered_blocks:
        lb = L.block_of(b[0])
        if lb not in order:
            order.append(lb)
    return ParabolicChain(order, P.ambient)


# ---------------------------------------------------------------------------
# vectors in a_M

def block_coroot(B, C, n):
    """Projection to a_M of the coroot separating adjacent blocks B, C."""
    v = [Fraction(0)] * n
    for i in B:
        v[i - 1] += Fraction(1, len(B))
    for i in C:
        v[i - 1] -= Fraction(1, len(C))
    return tuple(v)


def simple_coroots(P):
    n = P.levi.n
    return [block_coroot(B, C, n) for B, C in P.simple_pairs()]


def dot(u, v):
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def gram_det(vectors):
    return det([[dot(u, v) for v in vectors] for u in vectors]) if vectors else Fraction(1)


def covolume_sq(P):
    """Squared euclidean covolume of the simple coroot lattice of P."""
    return gram_det(simple_coroots(P))


def simple_data(P):
    """(simple root pairs, simple coroots, squared euclidean covolume)."""
    return P.simple_pairs(), simple_coroots(P), covolume_sq(P)


@lru_cache(maxsize=None)
def normalization_sq(M, ambient):
    """Squared euclidean covolume for the pair (M, ambient); constant over 𝒫(M)."""
    values = {covolume_sq(P) for P in parabolics(M, ambient)}
    if len(values) != 1:
        raise AssertionError(f"covolume depends on the parabolic for {M} in {ambient}")
    return values.pop()


def adjacency(P, P2):
    """The coroot β^∨ in Δ_P^∨ ∩ −Δ_{P'}^∨ if P, P' differ by one swap, else None."""
    if P.levi != P2.levi or P.ambient != P2.ambient:
        raise ValueError("parabolics must share Levi and ambient")
    a, b = P.ordered_blocks, P2.ordered_blocks
    diff = [k for k in range(len(a)) if a[k] != b[k]]
    if len(diff) != 2 or diff[1] != diff[0] + 1:
        return None
    k = diff[0]
    if a[k] != b[k + 1] or a[k + 1] != b[k]:
        return None
    if (a[k], a[k + 1]) not in P.simple_pairs():
        return None
    return block_coroot(a[k], a[k + 1], P.levi.n)


def adjacent_pairs(M, ambient=None):
    Ps = parabolics(M, ambient)
    out = []
    for i, P in enumerate(Ps):
        for P2 in Ps[i + 1:]:
            beta = adjacency(P, P2)
            if beta is not None:
                out.append((P, P2, beta))
    return out


def project(v, L):
    """Orthogonal projection π_L: average over the blocks of L."""
    out = [Fraction(0)] * L.n
    for b in L.blocks:
        avg = sum((Fraction(v[i - 1]) for i in b), Fraction(0)) / len(b)
        for i in b:
            out[i - 1] = avg
    return tuple(out)


def is_constant_on_blocks(v, M):
    return all(len({Fraction(v[i - 1]) for i in b}) == 1 for b in M.blocks)


def in_lattice(v, M):
    """Membership in Λ_M: constant on blocks with |B|·value integral."""
    if not is_constant_on_blocks(v, M):
        return False
    return all((Fraction(v[b[0] - 1]) * len(b)).denominator == 1 for b in M.blocks)


def central_part(v):
    """π_G: the average over all coordinates, as a scalar."""
    return sum((Fraction(x) for x in v), Fraction(0)) / len(v)


def dim_a(M, ambient=None):
    """dim a_M^ambient."""
    ambient = ambient or LeviPartition.whole(M.n)
    return len(M.blocks) - len(ambient.blocks)


def basis(M, ambient=None):
    """A Z-basis of the coroot lattice in a_M^ambient (simple coroots of the first parabolic)."""
    return simple_coroots(parabolics(M, ambient)[0])


def coords(v, M, ambient=None):
    """Coordinates of v ∈ a_M^ambient in the coroot basis; None if v is outside."""
    return solve(basis(M, ambient), [Fraction(x) for x in v])


def theta_coefficient(M, L, L2, ambient=None):
    """θ_M^G(L, L') in the coroot normalisation.

    Zero unless a_M^L ⊕ a_M^{L'} → a_M^G is an isomorphism; otherwise the
    absolute determinant of the two coroot bases expressed in the coroot
    basis of a_M^G.
    """
    ambient = ambient or LeviPartition.whole(M.n)
    if not (M.refines(L) and M.refines(L2) and L.refines(ambient) and L2.refines(ambient)):
        raise ValueError("need M ⊆ L, L' ⊆ ambient")
    bl, bl2 = basis(M, L), basis(M, L2)
    if len(bl) + len(bl2) != dim_a(M, ambient):
        return Fraction(0)
    gb = basis(M, ambient)
    mat = [coords_of(v, gb) for v in bl + bl2]
    return abs(det(mat))


def coords_of(v, base):
    x = solve(base, [Fraction(c) for c in v])
    if x is None:
        raise ValueError("vector outside the span")
    return x


def theta_euclidean_sq(M, L, L2, ambient=None):
    """Squared θ in the euclidean normalisation (rational)."""
    ambient = ambient or LeviPartition.whole(M.n)
    t = theta_coefficient(M, L, L2, ambient)
    if t == 0:
        return Fraction(0)
    return t * t * normalization_sq(M, L) * normalization_sq(M, L2) / normalization_sq(M, ambient)


def positive_coroots(P):
    """All positive coroots e_i − e_j of a Borel ordering (i before j)."""
    n = P.levi.n
    order = [b[0] for b in P.ordered_blocks]
    out = []
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            v = [0] * n
            v[order[a] - 1] = 1
            v[order[b] - 1] = -1
            out.append(tuple(v))
    return out


def roots(n):
    """All roots as ordered pairs (i, j), i ≠ j: the root e_i − e_j."""
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
