"""Truncated Laurent series in one variable t with exact rational coefficients."""

from fractions import Fraction
from math import factorial


class LaurentSeriesQ:
    """sum_{k >= val} c_k t^k, known exactly for exponents k < prec."""

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val, coeffs, prec):
        coeffs = [Fraction(c) for c in coeffs[: max(0, prec - val)]]
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    @classmethod
    def constant(cls, c, prec):
        return cls(0, [c], prec)

    @classmethod
    def taylor(cls, taylor_coeffs, scale, prec):
        """F(scale * t) for F = sum taylor_coeffs[k] x^k (exact up to t^prec)."""
        scale = Fraction(scale)
        if prec <= 0:
            return cls(0, [], prec)
        if len(taylor_coeffs) < prec:
            raise ValueError("not enough Taylor coefficients for the requested order")
        return cls(0, [taylor_coeffs[k] * scale ** k for k in range(prec)], prec)

    def coeff(self, k):
        if k >= self.prec:
            raise ValueError(f"coefficient t^{k} beyond precision {self.prec}")
        i = k - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def shift(self, k):
        return LaurentSeriesQ(self.val + k, self.coeffs, self.prec + k)

    def __add__(self, other):
        if not isinstance(other, LaurentSeriesQ):
            other = LaurentSeriesQ.constant(other, self.prec)
        prec = min(self.prec, other.prec)
        val = min(self.val, other.val)
        return LaurentSeriesQ(val, [self.coeff(k) + other.coeff(k) for k in range(val, prec)], prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeriesQ(self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeriesQ):
            other = Fraction(other)
            return LaurentSeriesQ(self.val, [c * other for c in self.coeffs], self.prec)
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        out = [Fraction(0)] * max(0, prec - val)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= len(out):
                    break
                out[k] += a * b
        return LaurentSeriesQ(val, out, prec)

    __rmul__ = __mul__

    def order(self):
        """Exponent of the lowest nonzero known coefficient (None if all known vanish)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.val + i
        return None

    def inverse(self):
        o = self.order()
        if o is None:
            raise ZeroDivisionError("series vanishes to working precision")
        lead = self.coeff(o)
        n = self.prec - o  # relative precision
        a = [self.coeff(o + k) for k in range(n)]
        inv = [Fraction(0)] * n
        inv[0] = 1 / lead
        for k in range(1, n):
            s = sum((a[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0))
            inv[k] = -s / lead
        return LaurentSeriesQ(-o, inv, n - o)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeriesQ):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def principal_part(self):
        return {k: self.coeff(k) for k in range(self.val, min(0, self.prec)) if self.coeff(k)}

    def is_unit(self):
        return self.order() == 0

    def __repr__(self):
        terms = [f"{c}*t^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms or ["0"]) + f" + O(t^{self.prec})"


# Taylor coefficient tables for the analytic factors used by families.

def exp_taylor(n):
    return [Fraction(1, factorial(k)) for k in range(n)]


def bernoulli_plus(n):
    """B_k with B_1 = +1/2, k < n (so x/(1 - e^{-x}) = sum B_k x^k / k!)."""
    b = [Fraction(0)] * max(n, 1)
    b[0] = Fraction(1)
    for m in range(1, n):
        s = sum((Fraction(factorial(m + 1), factorial(k) * factorial(m + 1 - k)) * b[k]
                 for k in range(m)), Fraction(0))
        b[m] = -s / (m + 1)
    if n > 1:
        b[1] = Fraction(1, 2)
    return b[:n]


def x_over_one_minus_exp_neg_taylor(n):
    return [bk / factorial(k) for k, bk in enumerate(bernoulli_plus(n))]


def one_minus_exp_neg_over_x_taylor(n):
    return [Fraction((-1) ** k, factorial(k + 1)) for k in range(n)]


TAYLOR = {
    "exp": exp_taylor,
    "x/(1-e^-x)": x_over_one_minus_exp_neg_taylor,
    "(1-e^-x)/x": one_minus_exp_neg_over_x_taylor,
}
