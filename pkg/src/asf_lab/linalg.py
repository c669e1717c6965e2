"""Small exact linear algebra kernels over Q (Fractions) and over F_p."""

from fractions import Fraction


def det(rows):
    """Determinant of a square matrix of Fractions/ints by fraction elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for r in range(c + 1, n):
            f = a[r][c] / p
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return sign * result


def rref(rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return a, []
    m, n = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def rank(rows):
    return len(rref(rows)[1]) if rows else 0


def solve(columns, target):
    """Exact coefficients x with sum x_i * columns[i] == target, or None.

    The system may be overdetermined; inconsistency returns None.
    """
    m = len(target)
    k = len(columns)
    aug = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(m)]
    red, pivots = rref(aug)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, c in zip(red, pivots):
        x[c] = row[k]
    return x


def mod_inverse(a, p):
    return pow(a, p - 2, p)


def nullspace_mod_p(rows, ncols, p):
    """Basis of the kernel of a matrix over F_p (rows as int lists)."""
    a = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    m = len(a)
    for c in range(ncols):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = mod_inverse(a[r][c], p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(a, pivots):
            v[pc] = (-row[fc]) % p
        basis.append(v)
    return basis


def rank_mod_p(rows, p):
    if not rows:
        return 0
    n = len(rows[0])
    return n - len(nullspace_mod_p(rows, n, p))
