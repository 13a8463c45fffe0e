"""Exact integer matrix kernel.

Matrices are tuples of row tuples holding Python ints, so every entry is an
arbitrary precision integer and nothing can wrap around.  All functions are
pure; inputs are never mutated.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    """Normalise nested iterables to a rectangular tuple-of-tuples of ints."""
    out = []
    for row in rows:
        r = []
        for v in row:
            if isinstance(v, bool) or not isinstance(v, int):
                # accept integral numpy scalars and similar, refuse floats
                if hasattr(v, "__index__"):
                    v = v.__index__()
                else:
                    raise InputError(f"non-integer matrix entry {v!r}")
            r.append(v)
        out.append(tuple(r))
    if out and any(len(r) != len(out[0]) for r in out):
        raise InputError("ragged matrix")
    return tuple(out)


def as_vector(v: Iterable[int]) -> Vector:
    return as_matrix([v])[0]


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def diagonal(entries: Sequence[int]) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Matrix, ncols: int | None = None) -> Matrix:
    if not m:
        return zeros(ncols or 0, 0)
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ra and ca != rb:
        raise InputError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    if not b:
        return zeros(ra, 0)
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(m: Matrix, v: Sequence[int]) -> Vector:
    if m and len(m[0]) != len(v):
        raise InputError(f"matrix with {len(m[0])} columns applied to length-{len(v)} vector")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def congruence(g: Matrix, u: Matrix) -> Matrix:
    """Return ``u^T g u``."""
    n = len(u[0]) if u else 0
    return matmul(matmul(transpose(u, n), g), u)


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return as_matrix(out)


def is_symmetric(m: Matrix) -> bool:
    r, c = shape(m)
    return r == c and all(m[i][j] == m[j][i] for i in range(r) for j in range(i))


def det(m: Matrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    r, c = shape(m)
    if r != c:
        raise InputError(f"determinant of non-square {r}x{c} matrix")
    n = r
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows only: echelon shape, positive pivots, entries
    above each pivot reduced into ``[0, pivot)``.  The result depends only on
    the row lattice, so it is a canonical basis.
    """
    a = [list(r) for r in rows]
    r = 0
    for c in range(ncols):
        found = False
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            found = True
            i0 = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[i0] = a[i0], a[r]
            clean = True
            p = a[r][c]
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return as_matrix(a[:r])


def integer_kernel(m: Matrix, ncols: int | None = None) -> Matrix:
    """Saturated integer basis of ``{v : m v = 0}``, returned as columns.

    The columns are the rows of the Hermite normal form of the kernel
    lattice, so the basis is canonical and ordered by pivot position.
    ``ncols`` is only needed when ``m`` has no rows.
    """
    r, c = shape(m)
    n = c if r else (ncols if ncols is not None else 0)
    if ncols is not None and r and ncols != c:
        raise InputError("ncols disagrees with matrix width")
    aug = [list(m[i][j] for i in range(r)) + [int(j == k) for k in range(n)] for j in range(n)]
    h = hermite_rows(aug, r + n)
    kernel_rows = [row[r:] for row in h if not any(row[:r])]
    kernel_rows = hermite_rows(kernel_rows, n)
    if not kernel_rows:
        return zeros(n, 0)
    return transpose(kernel_rows)


def signature_triple(g: Matrix) -> tuple[int, int, int]:
    """``(n_plus, n_minus, n_zero)`` from exact rational congruence
    diagonalisation of a symmetric matrix."""
    if not is_symmetric(g):
        raise InputError("signature of a non-symmetric matrix")
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    pos = neg = zero = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
            if j is None:
                zero += 1
                continue
            if a[j][j] != 0:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                # shear b_k <- b_k + b_j; new pivot is 2 a[k][j] != 0
                for t in range(n):
                    a[k][t] += a[j][t]
                for t in range(n):
                    a[t][k] += a[t][j]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        # Schur complement; row and column k are then discarded
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / p
                for t in range(k + 1, n):
                    a[i][t] -= f * a[k][t]
        for i in range(k + 1, n):
            a[i][k] = a[k][i] = 0
    return pos, neg, zero


def signature(g: Matrix) -> int:
    p, q, _ = signature_triple(g)
    return p - q


def inverse_unimodular(m: Matrix) -> Matrix:
    """Integer inverse of a matrix with determinant +-1."""
    r, c = shape(m)
    if r != c:
        raise InputError("inverse of a non-square matrix")
    n = r
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise InputError("singular matrix has no inverse")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [x / p for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    inv = []
    for row in a:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise InputError("matrix is not unimodular; inverse is not integral")
        inv.append(tuple(int(v) for v in vals))
    return tuple(inv)


def columns(m: Matrix) -> list[Vector]:
    return [tuple(col) for col in zip(*m)] if m and m[0] else []


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    if not cols:
        return zeros(nrows, 0)
    return tuple(zip(*[tuple(c) for c in cols]))


def solve_integer(basis: Matrix, v: Sequence[int]) -> Vector | None:
    """Integer ``y`` with ``basis @ y = v`` for a full-column-rank ``basis``,
    or None when ``v`` is not in the integer span of its columns."""
    cols = columns(basis)
    k = len(cols)
    if k == 0:
        return () if not any(v) else None
    gram = [[Fraction(sum(a * b for a, b in zip(ci, cj))) for cj in cols] for ci in cols]
    rhs = [Fraction(sum(a * b for a, b in zip(ci, v))) for ci in cols]
    a = [row + [r] for row, r in zip(gram, rhs)]
    for c in range(k):
        piv = next((i for i in range(c, k) if a[i][c] != 0), None)
        if piv is None:
            raise InputError("basis columns are linearly dependent")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(k):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    y = [row[k] for row in a]
    if any(t.denominator != 1 for t in y):
        return None
    y = tuple(int(t) for t in y)
    if matvec(basis, y) != tuple(v):
        return None
    return y
