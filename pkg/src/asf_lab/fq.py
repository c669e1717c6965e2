"""Laurent polynomials over a prime field F_p in the uniformizer ε."""


class LPoly:
    """sum c_k ε^k with finitely many nonzero c_k in F_p (stored as {k: c})."""

    __slots__ = ("p", "terms")

    def __init__(self, p, terms=None):
        self.p = p
        t = {}
        for k, c in (terms or {}).items():
            c %= p
            if c:
                t[k] = c
        self.terms = t

    @classmethod
    def zero(cls, p):
        return cls(p)

    @classmethod
    def monomial(cls, p, k, c=1):
        return cls(p, {k: c})

    @classmethod
    def from_pairs(cls, p, pairs):
        t = {}
        for k, c in pairs:
            t[k] = t.get(k, 0) + c
        return cls(p, t)

    def pairs(self):
        return sorted(self.terms.items())

    def is_zero(self):
        return not self.terms

    def val(self):
        """ε-adic valuation; None for zero."""
        return min(self.terms) if self.terms else None

    def degree(self):
        return max(self.terms) if self.terms else None

    def coeff(self, k):
        return self.terms.get(k, 0)

    def lead(self):
        return self.terms[self.val()]

    def truncate(self, k):
        """Drop every term of exponent >= k."""
        return LPoly(self.p, {e: c for e, c in self.terms.items() if e < k})

    def shift(self, k):
        return LPoly(self.p, {e + k: c for e, c in self.terms.items()})

    def scale(self, a):
        return LPoly(self.p, {e: c * a for e, c in self.terms.items()})

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return LPoly(self.p, t)

    def __neg__(self):
        return LPoly(self.p, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        t = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                t[a + b] = t.get(a + b, 0) + x * y
        return LPoly(self.p, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LPoly) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, tuple(self.pairs())))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}e^{k}" for k, c in self.pairs())


def inverse_unit_series(a, prec):
    """Inverse of a unit power series a (val 0) modulo ε^prec."""
    p = a.p
    if a.val() != 0:
        raise ValueError("not a unit")
    inv0 = pow(a.coeff(0), p - 2, p)
    out = {0: inv0}
    for k in range(1, prec):
        s = sum(a.coeff(j) * out.get(k - j, 0) for j in range(1, k + 1))
        out[k] = (-s * inv0) % p
    return LPoly(p, out)
