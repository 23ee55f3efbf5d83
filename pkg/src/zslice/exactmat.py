"""Exact integer linear algebra on plain nested lists.

Matrices are ``list[list[int]]`` in row-major order. Python integers are
arbitrary precision, so nothing here can overflow. Every routine returns
fresh lists and leaves its arguments untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, VerificationError

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# construction and elementary arithmetic


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def copy(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in a]


def shape(a: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(a)
    cols = len(a[0]) if rows else 0
    for row in a:
        if len(row) != cols:
            raise InputError("ragged matrix")
    return rows, cols


def is_square(a) -> bool:
    rows, cols = shape(a)
    return rows == cols


def transpose(a) -> Matrix:
    rows, cols = shape(a)
    return [[a[i][j] for i in range(rows)] for j in range(cols)]


def matmul(a, b) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise InputError(f"shape mismatch: {ra}x{ca} times {rb}x{cb}")
    bt = transpose(b) if rb else [[] for _ in range(cb)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def add(a, b) -> Matrix:
    if shape(a) != shape(b):
        raise InputError("shape mismatch in addition")
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b) -> Matrix:
    if shape(a) != shape(b):
        raise InputError("shape mismatch in subtraction")
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c: int, a) -> Matrix:
    return [[c * x for x in row] for row in a]


def block_diag(*blocks) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    k = 0
    for b in blocks:
        m = len(b)
        for i in range(m):
            for j in range(m):
                out[k + i][k + j] = b[i][j]
        k += m
    return out


def is_symmetric(a) -> bool:
    rows, cols = shape(a)
    return rows == cols and all(a[i][j] == a[j][i] for i in range(rows) for j in range(i))


def bilinear(u: Sequence[int], a, v: Sequence[int]) -> int:
    """``uᵀ·a·v``."""
    return sum(ui * x for ui, x in zip(u, matvec(a, v)))


def column(a, j: int) -> list[int]:
    return [row[j] for row in a]


def from_columns(cols: Sequence[Sequence[int]]) -> Matrix:
    if not cols:
        return []
    return [list(r) for r in zip(*cols)]


# ---------------------------------------------------------------------------
# determinant, adjugate, inverse


def determinant(a) -> int:
    """Fraction-free Bareiss elimination."""
    rows, cols = shape(a)
    if rows != cols:
        raise InputError("determinant of a non-square matrix")
    n = rows
    if n == 0:
        return 1
    m = copy(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _minor(a, i: int, j: int) -> Matrix:
    return [row[:j] + row[j + 1:] for r, row in enumerate(a) if r != i]


def rational_inverse(a) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over Q; raises on singular input."""
    n, cols = shape(a)
    if n != cols:
        raise InputError("inverse of a non-square matrix")
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise InputError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [row[n:] for row in m]


def adjugate(a) -> Matrix:
    """Classical adjoint: ``a · adjugate(a) == det(a) · I``."""
    n, cols = shape(a)
    if n != cols:
        raise InputError("adjugate of a non-square matrix")
    if n == 0:
        return []
    det = determinant(a)
    if det != 0:
        inv = rational_inverse(a)
        adj = []
        for row in inv:
            out = []
            for x in row:
                y = x * det
                assert y.denominator == 1
                out.append(int(y))
            adj.append(out)
    else:
        adj = [[(-1) ** (i + j) * determinant(_minor(a, j, i)) for j in range(n)]
               for i in range(n)]
    if __debug__:
        if matmul(a, adj) != scale(det, identity(n)):
            raise VerificationError("adjugate identity failed")
    return adj


def inverse_unimodular(a) -> Matrix:
    det = determinant(a)
    if det not in (1, -1):
        raise InputError(f"matrix is not unimodular (det = {det})")
    return scale(det, adjugate(a))


def congruent_transform(a, t) -> Matrix:
    """``tᵀ·a·t``."""
    ra, ca = shape(a)
    rt, _ = shape(t)
    if ra != ca or rt != ra:
        raise InputError("congruence needs a square a and t with matching rows")
    return matmul(matmul(transpose(t), a), t)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """``u · a · w == diag(d)`` padded with zeros to the shape of ``a``."""

    d: tuple[int, ...]
    u: Matrix
    w: Matrix

    def diagonal_matrix(self, rows: int, cols: int) -> Matrix:
        out = zeros(rows, cols)
        for i, x in enumerate(self.d):
            out[i][i] = x
        return out


def snf(a) -> SnfResult:
    """Smith normal form with unimodular certificates.

    Pivots on the entry of least absolute value. Invariant factors are
    non-negative, satisfy ``d[i] | d[i+1]``, and zeros come last.
    """
    rows, cols = shape(a)
    m = copy(a)
    u = identity(rows)
    w = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (m, w):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c*row_src
        m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for mat in (m, w):
            for row in mat:
                row[dst] += c * row[src]

    r = min(rows, cols)
    for t in range(r):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = m[i][j]
                    if x and (best is None or abs(x) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = m[t][t]
            clean = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // p))
                    clean = clean and m[i][t] == 0
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // p))
                    clean = clean and m[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if m[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
    d = tuple(m[i][i] for i in range(r))
    res = SnfResult(d, u, w)
    if __debug__:
        if matmul(matmul(u, a), w) != res.diagonal_matrix(rows, cols):
            raise VerificationError("SNF certificate failed")
    return res


def invariant_factors(a) -> tuple[int, ...]:
    return snf(a).d


def complete_basis(vectors: Sequence[Sequence[int]], n: int) -> Matrix:
    """Unimodular ``n×n`` matrix whose leading columns are ``vectors``.

    The vectors must span a primitive sublattice of ``Z^n``.
    """
    k = len(vectors)
    if k == 0:
        return identity(n)
    e = from_columns(vectors)
    res = snf(e)
    if any(x != 1 for x in res.d):
        raise InputError("vectors do not span a primitive sublattice")
    p = inverse_unimodular(res.u)
    # first k columns of p equal e·w; undo w on those columns
    w_inv = inverse_unimodular(res.w)
    corr = block_diag(w_inv, identity(n - k))
    out = matmul(p, corr)
    assert [column(out, j) for j in range(k)] == [list(v) for v in vectors]
    return out


def solve_unit_functional(row: Sequence[int]) -> list[int]:
    """Integer vector ``f`` with ``row · f == 1``; the row must be primitive."""
    res = snf([list(row)])
    if not res.d or res.d[0] != 1:
        raise InputError("functional is not primitive")
    # u·row·w = (1, 0, ...) with u = (±1)
    f = column(res.w, 0)
    return [res.u[0][0] * x for x in f]


# ---------------------------------------------------------------------------
# signature


def signature(s) -> int:
    """Exact signature by rational congruence diagonalization."""
    if not is_symmetric(s):
        raise InputError("signature needs a symmetric matrix")
    g = [[Fraction(x) for x in row] for row in s]
    sig = 0
    while g:
        n = len(g)
        k = next((i for i in range(n) if g[i][i] != 0), None)
        if k is not None:
            p = g[k][k]
            sig += 1 if p > 0 else -1
            rest = [i for i in range(n) if i != k]
            g = [[g[i][j] - g[i][k] * g[k][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if g[i][j] != 0), None)
        if pair is None:
            break
        # hyperbolic plane span(e_i, e_j) with Gram [[0, b], [b, 0]] contributes 0
        i, j = pair
        b = g[i][j]
        rest = [k for k in range(n) if k not in pair]
        # project e_k onto the orthogonal complement of the plane
        proj = {k: (g[k][j] / b, g[k][i] / b) for k in rest}

        def form(k, l):
            # the projected e_l is orthogonal to the plane, so only e_k survives
            cl_i, cl_j = proj[l]
            return g[k][l] - cl_i * g[k][i] - cl_j * g[k][j]

        g = [[form(k, l) for l in rest] for k in rest]
    return sig


def inertia(s) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts."""
    n = len(s)
    rank = n - nullity(s)
    sig = signature(s)
    pos = (rank + sig) // 2
    neg = rank - pos
    return pos, neg, n - rank


def rank(a) -> int:
    return sum(1 for x in snf(a).d if x != 0)


def nullity(a) -> int:
    return len(a) - rank(a) if a else 0
