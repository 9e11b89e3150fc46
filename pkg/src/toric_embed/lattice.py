"""Exact integer and rational linear algebra.

Vectors are plain tuples (``int`` for lattice/dual vectors, ``Fraction`` for
points of the real span).  Matrices are lists of row lists.  Everything here is
arbitrary precision; nothing touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DegenerateInputError, DimensionError

LatticeVector = tuple[int, ...]
DualVector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]
IntegerMatrix = list[list[int]]


def pairing(m: Sequence, e: Sequence):
    """Return the dot product <m, e>."""
    if len(m) != len(e):
        raise DimensionError(f"pairing of vectors of length {len(m)} and {len(e)}")
    return sum(a * b for a, b in zip(m, e))


def gcd_of(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def primitive(v: Sequence[int]) -> LatticeVector:
    """Divide an integer vector by the gcd of its coordinates."""
    g = gcd_of(v)
    if g == 0:
        raise DegenerateInputError("primitive() of the zero vector")
    return tuple(int(x) // g for x in v)


def is_integral(v) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int_vector(v) -> LatticeVector:
    if not is_integral(v):
        raise DegenerateInputError(f"vector {fmt_vec(v)} is not integral")
    return tuple(int(Fraction(x)) for x in v)


def scale_to_primitive(v) -> LatticeVector:
    """Positive rational multiple of ``v`` that is a primitive integer vector."""
    if all(type(x) is int for x in v):
        return primitive(v)
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive([int(x * den) for x in fr])


def add(u, v):
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


# -- matrices ---------------------------------------------------------------


def identity(n: int) -> IntegerMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    if A and B and len(A[0]) != len(B):
        raise DimensionError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def smith_normal_form(A: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d1 | d2 | ...``.  The pivot at each stage is the entry of least
    nonzero absolute value in the remaining block, ties broken by (row, col),
    so the transforms are reproducible.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for M in (D, U):
            rd, rs = M[dst], M[src]
            for c in range(len(rd)):
                rd[c] += q * rs[c]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return U, D, V
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            for M in (D, U):
                M[t] = [-x for x in M[t]]
    return U, D, V


def _row_to_integers(row):
    den = 1
    for x in row:
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    return [int(Fraction(x) * den) for x in row]


def rank_rational(A) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    M = [_row_to_integers(row) for row in A]
    if not M or not M[0]:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                M[i][j] = (M[r][c] * M[i][j] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == rows:
            break
    return r


def rref(A):
    """Reduced row echelon form over Q.  Returns (R, pivot_columns)."""
    R = [[Fraction(x) for x in row] for row in A]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def nullspace(A, ncols: int | None = None) -> list[RationalVector]:
    """Basis of {x : A x = 0} over Q."""
    if not A:
        if ncols is None:
            raise DimensionError("nullspace of an empty matrix needs ncols")
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(A)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -R[row_idx][f]
        basis.append(tuple(v))
    return basis


def solve(A, b) -> RationalVector | None:
    """One rational solution of A x = b, or None if inconsistent."""
    if len(A) != len(b):
        raise DimensionError("right-hand side length mismatch")
    if not A:
        return ()
    n = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row_idx, pc in enumerate(pivots):
        x[pc] = R[row_idx][n]
    return tuple(x)


def inverse(A):
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DegenerateInputError("matrix is singular")
    return [row[n:] for row in R]


def determinant(A):
    """Exact determinant (Bareiss)."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else Fraction(1)
