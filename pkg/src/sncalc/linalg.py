"""Exact integer and rational linear algebra.

Everything here is exact: integer work uses Python's arbitrary-precision
ints (Bareiss elimination, Smith normal form), rational work uses
fractions.Fraction.  No floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .errors import SingularMatrixError

__all__ = [
    "TorsionGroup",
    "det_exact",
    "solve_rational",
    "smith_normal_form",
    "is_negative_definite",
    "torsion_of_cokernel",
    "kernel_basis",
    "solve_integer",
    "identity_matrix",
    "mat_mul",
]

Matrix = Sequence[Sequence[int]]


def _check_rectangular(m) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(row) != cols for row in m):
        raise ValueError("matrix is not rectangular")
    return rows, cols


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    ra, ca = _check_rectangular(a)
    rb, cb = _check_rectangular(b)
    if ca != rb:
        raise ValueError("dimension mismatch")
    return [[sum(a[i][k] * b[k][j] for k in range(ca)) for j in range(cb)] for i in range(ra)]


def det_exact(m) -> Fraction:
    """Exact determinant of a square integer or rational matrix."""
    rows, cols = _check_rectangular(m)
    if rows != cols:
        raise ValueError("determinant of a non-square matrix")
    if rows == 0:
        return Fraction(1)
    if all(isinstance(x, int) for row in m for x in row):
        return Fraction(_det_bareiss([list(row) for row in m]))
    return _det_fraction([[Fraction(x) for x in row] for row in m])


def _det_bareiss(a: list[list[int]]) -> int:
    """Fraction-free elimination; all intermediate divisions are exact."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _det_fraction(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def solve_rational(m, b) -> list[Fraction]:
    """Unique solution of m x = b over the rationals.

    Raises SingularMatrixError when the matrix is singular; the result is
    re-checked against the inputs before returning.
    """
    rows, cols = _check_rectangular(m)
    if rows != cols:
        raise ValueError("solve requires a square matrix")
    if len(b) != rows:
        raise ValueError("right-hand side has wrong length")
    a = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(m)]
    n = rows
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular")
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
        inv = 1 / a[k][k]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k] * inv
                for j in range(k, n + 1):
                    a[i][j] -= f * a[k][j]
    x = [a[i][n] / a[i][i] for i in range(n)]
    for i in range(n):
        if sum(Fraction(m[i][j]) * x[j] for j in range(n)) != Fraction(b[i]):
            raise AssertionError("back-substitution check failed")
    return x


def smith_normal_form(m) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (u, s, v) with u m v = s, u and v unimodular, s diagonal.

    Diagonal entries are nonnegative and each divides the next.  The
    postconditions are asserted on every call; at the matrix sizes this
    package sees the cost is negligible.
    """
    rows, cols = _check_rectangular(m)
    if any(not isinstance(x, int) for row in m for x in row):
        raise ValueError("Smith normal form needs an integer matrix")
    s = [list(row) for row in m]
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def row_sub(i, j, q):  # row i -= q * row j
        for c in range(cols):
            s[i][c] -= q * s[j][c]
        for c in range(rows):
            u[i][c] -= q * u[j][c]

    def col_sub(i, j, q):  # col i -= q * col j
        for r in range(rows):
            s[r][i] -= q * s[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(rows, cols):
        # move a smallest-magnitude nonzero of the trailing block to (t, t)
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    row_sub(i, t, q)
                    if s[i][t] != 0:  # remainder beats the pivot
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    col_sub(j, t, q)
                    if s[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the whole trailing block for the chain
            offender = next(
                (
                    i
                    for i in range(t + 1, rows)
                    if any(s[i][j] % s[t][t] for j in range(t + 1, cols))
                ),
                None,
            )
            if offender is None:
                break
            row_sub(t, offender, -1)
        t += 1

    for k in range(min(rows, cols)):
        if s[k][k] < 0:
            for c in range(cols):
                s[k][c] = -s[k][c]
            for c in range(rows):
                u[k][c] = -u[k][c]

    assert mat_mul(mat_mul(u, [list(row) for row in m]), v) == s
    assert abs(_det_bareiss([row[:] for row in u])) == 1
    assert abs(_det_bareiss([row[:] for row in v])) == 1
    diag = [s[k][k] for k in range(min(rows, cols))]
    assert all(
        s[i][j] == 0 for i in range(rows) for j in range(cols) if i != j
    )
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]) if a)
    return u, s, v


def is_negative_definite(m) -> bool:
    """Sylvester's criterion: leading principal minors alternate in sign
    starting negative.  The matrix must be symmetric."""
    rows, cols = _check_rectangular(m)
    if rows != cols:
        raise ValueError("definiteness of a non-square matrix")
    for i in range(rows):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise ValueError("matrix is not symmetric")
    for k in range(1, rows + 1):
        minor = det_exact([row[:k] for row in m[:k]])
        if minor * (-1) ** k <= 0:
            return False
    return True


@dataclass(frozen=True)
class TorsionGroup:
    """A finite abelian group by its invariant factors (each divides the next)."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = self.invariant_factors
        if any(f <= 1 for f in fs):
            raise ValueError("invariant factors must exceed 1")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError("invariant factors must form a divisibility chain")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        return " x ".join(f"Z{f}" for f in self.invariant_factors)


def torsion_of_cokernel(m) -> TorsionGroup:
    """Torsion of Z^rows / (column span of m), read off the Smith form."""
    _, s, _ = smith_normal_form(m)
    diag = [s[k][k] for k in range(min(len(s), len(s[0]) if s else 0))]
    return TorsionGroup(tuple(d for d in diag if d > 1))


def kernel_basis(m) -> list[list[Fraction]]:
    """A basis of the rational null space of m (solutions of m x = 0)."""
    rows, cols = _check_rectangular(m)
    a = [[Fraction(x) for x in row] for row in m]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = 1 / a[r][c]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c] * inv
                for j in range(c, cols):
                    a[i][j] -= f * a[r][j]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    free = [c for c in range(cols) if c not in pivots]
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][fc] / a[i][pc]
        basis.append(vec)
    return basis


def solve_integer(a, b) -> tuple[list[int], list[list[int]]] | None:
    """All integer solutions of a x = b: a particular one plus a lattice basis.

    Returns None when no integer solution exists (including the case where
    the system is rationally inconsistent).
    """
    rows, cols = _check_rectangular(a)
    if len(b) != rows:
        raise ValueError("right-hand side has wrong length")
    u, s, v = smith_normal_form(a)
    ub = [sum(u[i][k] * b[k] for k in range(rows)) for i in range(rows)]
    y = [0] * cols
    for i in range(rows):
        d = s[i][i] if i < cols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d != 0:
                return None
            y[i] = ub[i] // d
    x0 = [sum(v[r][c] * y[c] for c in range(cols)) for r in range(cols)]
    rank = sum(1 for i in range(min(rows, cols)) if s[i][i] != 0)
    lattice = [[v[r][c] for r in range(cols)] for c in range(rank, cols)]
    return x0, lattice
