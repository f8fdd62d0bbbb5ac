"""Exact rational linear algebra on lists of Fractions."""
from fractions import Fraction
from math import lcm


def vec_mat(v, M):
    n = len(M[0]) if M else 0
    out = [Fraction(0)] * n
    for i, vi in enumerate(v):
        if vi:
            row = M[i]
            for j in range(n):
                if row[j]:
                    out[j] += vi * row[j]
    return out


def mat_vec(M, v):
    return [sum((a * b for a, b in zip(row, v) if a), Fraction(0)) for row in M]


def mat_mul(A, B):
    return [vec_mat(row, B) for row in A]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_pow(M, k):
    result = identity(len(M))
    base = [list(r) for r in M]
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


class SingularSystem(ArithmeticError):
    pass


def solve(A, b):
    """Solve A x = b exactly for square nonsingular A.

    Rows are first scaled to integers, then eliminated with the Bareiss
    fraction-free scheme so intermediate entries stay integral.
    """
    n = len(A)
    rows = []
    for i in range(n):
        entries = [Fraction(x) for x in A[i]] + [Fraction(b[i])]
        den = lcm(*(x.denominator for x in entries))
        rows.append([int(x * den) for x in entries])
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if rows[r][k] != 0), None)
        if piv is None:
            raise SingularSystem("matrix is singular")
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
        pk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            f = ri[k]
            for j in range(k + 1, n + 1):
                # exact division is guaranteed by Sylvester's identity
                ri[j] = (pk[k] * ri[j] - f * pk[j]) // prev
            ri[k] = 0
        prev = pk[k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(rows[i][n])
        for j in range(i + 1, n):
            s -= rows[i][j] * x[j]
        x[i] = s / rows[i][i]
    return x
