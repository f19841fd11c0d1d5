"""Exact integer linear algebra on sparse rows.

Rows are ``dict[int, int]`` mapping a column index to a nonzero entry.  All
arithmetic is Python ``int``; nothing here ever touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass

Row = dict


def addmul(target: Row, source: Row, q: int) -> None:
    """``target += q * source`` in place, dropping zeros."""
    if q == 0:
        return
    for c, v in source.items():
        x = target.get(c, 0) + q * v
        if x:
            target[c] = x
        else:
            target.pop(c, None)


def scale(row: Row, q: int) -> Row:
    return {c: q * v for c, v in row.items()} if q else {}


def _eliminate(rows: list[Row], tags: list[Row] | None = None):
    """Integer row echelon by Euclidean pivoting.

    Returns ``(pivots, zero_tags)``: pivot rows in increasing pivot column
    (each paired with its tag) and the tags of rows reduced to zero.
    """
    active = []
    for i, r in enumerate(rows):
        t = dict(tags[i]) if tags is not None else None
        active.append((dict(r), t))
    zero_tags = [t for r, t in active if not r]
    active = [(r, t) for r, t in active if r]
    pivots = []
    while active:
        c = min(min(r) for r, _ in active)
        group = [(r, t) for r, t in active if c in r]
        rest = [(r, t) for r, t in active if c not in r]
        while len(group) > 1:
            group.sort(key=lambda rt: (abs(rt[0][c]), len(rt[0])))
            p, pt = group[0]
            keep = [group[0]]
            for r, t in group[1:]:
                q = r[c] // p[c]
                addmul(r, p, -q)
                if t is not None:
                    addmul(t, pt, -q)
                if c in r:
                    keep.append((r, t))
                elif r:
                    rest.append((r, t))
                else:
                    zero_tags.append(t)
            group = keep
        p, pt = group[0]
        if p[c] < 0:
            p = scale(p, -1)
            pt = scale(pt, -1) if pt is not None else None
        pivots.append((c, p, pt))
        active = rest
    return pivots, zero_tags


def hermite(rows: list[Row]) -> list[Row]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivot columns increase strictly, pivots are positive and entries above a
    pivot lie in ``[0, pivot)``.  The result is unique for a given lattice.
    """
    pivots, _ = _eliminate(rows)
    out = [p for _, p, _ in pivots]
    cols = [c for c, _, _ in pivots]
    for i, (c, p) in enumerate(zip(cols, out)):
        d = p[c]
        for j in range(i):
            x = out[j].get(c)
            if x is not None:
                q = x // d
                if q:
                    addmul(out[j], p, -q)
    return out


def rank(rows: list[Row]) -> int:
    pivots, _ = _eliminate(rows)
    return len(pivots)


def left_kernel(rows: list[Row]) -> list[Row]:
    """A basis of ``{x in Z^len(rows) : sum_i x_i rows[i] = 0}`` in Hermite form."""
    tags = [{i: 1} for i in range(len(rows))]
    _, zero_tags = _eliminate(rows, tags)
    return hermite(zero_tags)


def pivot_column(row: Row) -> int:
    return min(row)


def reduce_by_hermite(h: list[Row], vec: Row) -> tuple[Row, Row]:
    """Reduce ``vec`` modulo the lattice with Hermite basis ``h``.

    Returns ``(remainder, coefficients)`` with ``vec = remainder + sum c_i h_i``.
    The remainder is the canonical coset representative.
    """
    r = dict(vec)
    coeffs: Row = {}
    for i, row in enumerate(h):
        c = pivot_column(row)
        x = r.get(c)
        if x is None:
            continue
        q = x // row[c]
        if q:
            addmul(r, row, -q)
            coeffs[i] = q
    return r, coeffs


def solve_in_lattice(h: list[Row], vec: Row) -> Row | None:
    """Coordinates of ``vec`` in the Hermite basis ``h``, or ``None``."""
    r, coeffs = reduce_by_hermite(h, vec)
    return coeffs if not r else None


def same_lattice(a: list[Row], b: list[Row]) -> bool:
    return hermite(a) == hermite(b)


# ---------------------------------------------------------------------------
# dense Smith normal form for small residual matrices

@dataclass
class Smith:
    """``U * A * V = D`` with ``D`` diagonal, ``d_1 | d_2 | ...``."""

    diagonal: list[int]
    U: list[list[int]]
    V: list[list[int]]
    nrows: int
    ncols: int


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_dense(a: list[list[int]], ncols: int) -> Smith:
    A = [list(r) for r in a]
    nr = len(A)
    U = _identity(nr)
    V = _identity(ncols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def row_op(dst, src, q):  # row_dst -= q * row_src
        for M in (A, U):
            rd, rs = M[dst], M[src]
            for k in range(len(rd)):
                rd[k] -= q * rs[k]

    def col_op(dst, src, q):  # col_dst -= q * col_src
        for M in (A, V):
            for r in M:
                r[dst] -= q * r[src]

    diag = []
    t = 0
    while t < min(nr, ncols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, nr) for j in range(t, ncols) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, nr):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility condition
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, ncols)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            row_op(t, bad[0], -1)
        if A[t][t] < 0:
            for k in range(len(A[t])):
                A[t][k] = -A[t][k]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return Smith(diag, U, V, nr, ncols)


def unimodular_inverse(a: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a square integer matrix with determinant +-1."""
    from fractions import Fraction

    k = len(a)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
         for i, row in enumerate(a)]
    for c in range(k):
        p = next(r for r in range(c, k) if M[r][c])
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(k):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    out = [[x for x in row[k:]] for row in M]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def solve_mod2(columns: list[list[int]], target: list[int]) -> list[int] | None:
    """Some ``a`` in {0,1}^len(columns) with ``sum a_j columns[j] = target`` mod 2."""
    k = len(columns)
    dim = len(target)
    rows = [[columns[j][i] & 1 for j in range(k)] + [target[i] & 1] for i in range(dim)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, dim) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(dim):
            if i != r and rows[i][c]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[k] for row in rows[r:]):
        return None
    a = [0] * k
    for i, c in enumerate(pivots):
        a[c] = rows[i][k]
    return a
