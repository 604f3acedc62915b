"""Exact dense linear algebra over a Field.

Matrices are row-major lists of lists of field elements. Empty matrices
(0 rows or 0 columns) are fully supported; a matrix with 0 columns and r
rows is represented as r empty rows, and a matrix with 0 rows is [].
Because [] loses the column count, every function takes explicit shape
information where it matters, or works with (rows, cols) carried by the
caller.

All eliminations use least-index pivoting (first row with a nonzero
entry in the leftmost unresolved column), so results are deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Tuple

from .fields import Elem, Field

Mat = List[List[Elem]]


# ---------------------------------------------------------------------------
# construction and shape helpers
# ---------------------------------------------------------------------------

def zeros(field: Field, rows: int, cols: int) -> Mat:
    z = field.zero()
    return [[z] * cols for _ in range(rows)]


def identity(field: Field, n: int) -> Mat:
    z, o = field.zero(), field.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def mat_from_rows(field: Field, rows: List[List[int]]) -> Mat:
    return [[field.of_int(x) if isinstance(x, int) else x for x in row] for row in rows]


def nrows(m: Mat) -> int:
    return len(m)


def ncols(m: Mat) -> int:
    return len(m[0]) if m else 0


def shape(m: Mat) -> Tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def copy_mat(m: Mat) -> Mat:
    return [row[:] for row in m]


def mat_eq(a: Mat, b: Mat) -> bool:
    return a == b


def is_zero_mat(m: Mat) -> bool:
    return all(x == 0 for row in m for x in row)


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def add(field: Field, a: Mat, b: Mat) -> Mat:
    assert shape(a) == shape(b), "shape mismatch in add"
    return [[field.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(field: Field, a: Mat, b: Mat) -> Mat:
    assert shape(a) == shape(b), "shape mismatch in sub"
    return [[field.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def neg(field: Field, a: Mat) -> Mat:
    return [[field.neg(x) for x in row] for row in a]


def scalar_mul(field: Field, c: Elem, a: Mat) -> Mat:
    return [[field.mul(c, x) for x in row] for row in a]


def mul(field: Field, a: Mat, b: Mat, a_cols: Optional[int] = None,
        b_cols: Optional[int] = None) -> Mat:
    """Matrix product a @ b.

    A matrix with zero rows is represented by [] and its column count is
    unknowable from the data, so products through zero-dimensional middle
    spaces need the hints: `a_cols` (= rows of b) and `b_cols` give the
    true shapes, making a (r x 0) @ (0 x c) product come out as the r x c
    zero matrix rather than an r x 0 stub.
    """
    ra = len(a)
    ca = len(a[0]) if a else (a_cols if a_cols is not None else 0)
    rb = len(b)
    cb = len(b[0]) if b else (b_cols if b_cols is not None else 0)
    if a and b:
        assert ca == rb, "shape mismatch in mul: %dx%d @ %dx%d" % (ra, ca, rb, cb)
    if ra == 0 or cb == 0:
        return [[] for _ in range(ra)]
    if ca == 0:
        return zeros(field, ra, cb)
    out = []
    fmul, fadd, z = field.mul, field.add, field.zero()
    for i in range(ra):
        arow = a[i]
        orow = [z] * cb
        for k in range(ca):
            x = arow[k]
            if x == 0:
                continue
            brow = b[k]
            for j in range(cb):
                y = brow[j]
                if y != 0:
                    orow[j] = fadd(orow[j], fmul(x, y))
        out.append(orow)
    return out


def transpose(m: Mat, cols: Optional[int] = None) -> Mat:
    if not m:
        return [[] for _ in range(cols)] if cols else []
    return [list(col) for col in zip(*m)]


def hstack(blocks: List[Mat], rows: int) -> Mat:
    """Concatenate matrices left to right; all must have `rows` rows."""
    out = [[] for _ in range(rows)]
    for b in blocks:
        assert len(b) == rows or ncols(b) == 0, "row mismatch in hstack"
        if len(b) == rows:
            for i in range(rows):
                out[i].extend(b[i])
    return out


def vstack(blocks: List[Mat]) -> Mat:
    out: Mat = []
    for b in blocks:
        out.extend(copy_mat(b))
    return out


def block_diag(field: Field, blocks: List[Tuple[Mat, int, int]]) -> Mat:
    """Block diagonal from (matrix, rows, cols) triples (shapes made explicit
    so zero-size blocks keep their place)."""
    total_r = sum(r for _, r, _ in blocks)
    total_c = sum(c for _, _, c in blocks)
    out = zeros(field, total_r, total_c)
    r0 = c0 = 0
    for m, r, c in blocks:
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = m[i][j]
        r0 += r
        c0 += c
    return out


def block_matrix(field: Field, grid: List[List[Optional[Mat]]],
                 row_dims: List[int], col_dims: List[int]) -> Mat:
    """Assemble a matrix from a grid of blocks; None means a zero block.
    Explicit row/column dimensions keep zero-size blocks unambiguous."""
    out = zeros(field, sum(row_dims), sum(col_dims))
    r0 = 0
    for bi, rdim in enumerate(row_dims):
        c0 = 0
        for bj, cdim in enumerate(col_dims):
            blk = grid[bi][bj]
            if blk is not None:
                assert (len(blk) == rdim or rdim == 0) and \
                    (rdim == 0 or cdim == 0 or ncols(blk) == cdim), \
                    "block (%d,%d) shape mismatch" % (bi, bj)
                for i in range(rdim):
                    for j in range(cdim):
                        out[r0 + i][c0 + j] = blk[i][j]
            c0 += cdim
        r0 += rdim
    return out


def submatrix(m: Mat, rows: List[int], cols: List[int]) -> Mat:
    return [[m[i][j] for j in cols] for i in rows]


def columns(m: Mat, idx: List[int]) -> Mat:
    return [[row[j] for j in idx] for row in m]


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def rref(field: Field, m: Mat) -> Tuple[Mat, List[int]]:
    """Reduced row echelon form with least-index pivoting.

    Returns (R, pivots) where pivots lists the pivot column of each
    nonzero row of R in order.
    """
    a = copy_mat(m)
    rows, cols = shape(a)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = field.inv(a[r][c])
        if inv != 1:
            a[r] = [x if x == 0 else field.mul(inv, x) for x in a[r]]
        row_r = a[r]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x if y == 0 else field.sub(x, field.mul(f, y))
                        for x, y in zip(a[i], row_r)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(field: Field, m: Mat) -> int:
    if field.char == 0 and m and m[0]:
        return _rank_qq(m)
    return len(rref(field, m)[1])


def _rank_qq(m: Mat) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination.

    Each row is scaled by the lcm of its denominators (rank-preserving),
    after which all arithmetic is exact integer arithmetic; the division
    by the previous pivot is exact by Sylvester's identity.
    """
    a: List[List[int]] = []
    for row in m:
        scale = 1
        for x in row:
            scale = lcm(scale, Fraction(x).denominator)
        a.append([int(x * scale) for x in row])
    rows, cols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        row_r = a[r]
        p = row_r[c]
        for i in range(r + 1, rows):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, cols):
                ai[j] = (p * ai[j] - f * row_r[j]) // prev
            ai[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r


def det(field: Field, m: Mat) -> Elem:
    rows, cols = shape(m)
    assert rows == cols, "det of non-square matrix"
    a = copy_mat(m)
    d = field.one()
    for c in range(cols):
        pivot_row = None
        for i in range(c, rows):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return field.zero()
        if pivot_row != c:
            a[c], a[pivot_row] = a[pivot_row], a[c]
            d = field.neg(d)
        d = field.mul(d, a[c][c])
        inv = field.inv(a[c][c])
        for i in range(c + 1, rows):
            if a[i][c] != 0:
                f = field.mul(a[i][c], inv)
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[c])]
    return d


def inverse(field: Field, m: Mat) -> Optional[Mat]:
    rows, cols = shape(m)
    assert rows == cols, "inverse of non-square matrix"
    if rows == 0:
        return []
    aug = hstack([m, identity(field, rows)], rows)
    r, pivots = rref(field, aug)
    if pivots[:rows] != list(range(rows)):
        return None
    return [row[rows:] for row in r]


def solve(field: Field, a: Mat, b: Mat, a_cols: Optional[int] = None) -> Optional[Mat]:
    """Solve a @ x = b exactly; returns the least-index-pivot solution or
    None when inconsistent. `b` must have the same number of rows as `a`."""
    ra = len(a)
    ca = len(a[0]) if a else (a_cols if a_cols is not None else 0)
    rb, cb = shape(b)
    assert ra == rb, "row mismatch in solve"
    if ca == 0:
        return [] if is_zero_mat(b) else None
    aug = hstack([a, b], ra) if ra else []
    r, pivots = rref(field, aug)
    x = zeros(field, ca, cb)
    for i, c in enumerate(pivots):
        if c >= ca:
            return None  # pivot in the augmented part: inconsistent
        for j in range(cb):
            x[c][j] = r[i][ca + j]
    return x


def kernel_basis(field: Field, m: Mat, m_cols: Optional[int] = None) -> Mat:
    """Columns form the standard echelon basis of ker(m) (one column per
    free variable, in increasing column order)."""
    rows = len(m)
    cols = len(m[0]) if m else (m_cols if m_cols is not None else 0)
    if cols == 0:
        return []
    if rows == 0:
        return identity(field, cols)
    r, pivots = rref(field, m)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = zeros(field, cols, len(free))
    for j, fc in enumerate(free):
        basis[fc][j] = field.one()
        for i, pc in enumerate(pivots):
            basis[pc][j] = field.neg(r[i][fc])
    return basis


def complement(field: Field, b: Mat, ambient_dim: int) -> Mat:
    """Greedy standard-basis completion: columns e_i (least index first)
    extending the column space of `b` to all of F^ambient_dim. Returns the
    chosen standard basis columns as a matrix."""
    cols_b = ncols(b)
    if not b:
        b = [[] for _ in range(ambient_dim)]
    chosen: List[int] = []
    current = copy_mat(b)
    current_rank = rank(field, current) if cols_b else 0
    for i in range(ambient_dim):
        e = zeros(field, ambient_dim, 1)
        e[i][0] = field.one()
        cand = hstack([current, e], ambient_dim)
        if rank(field, cand) > current_rank:
            chosen.append(i)
            current = cand
            current_rank += 1
        if current_rank == ambient_dim:
            break
    assert current_rank == ambient_dim, "complement: input columns not independent enough"
    out = zeros(field, ambient_dim, len(chosen))
    for j, i in enumerate(chosen):
        out[i][j] = field.one()
    return out


def column_space_eq(field: Field, a: Mat, b: Mat) -> bool:
    """Do the columns of a and b span the same subspace? Decided by rref of
    the transposes (row space comparison)."""
    ra = rref(field, transpose(a))[0]
    rb = rref(field, transpose(b))[0]
    ra = [row for row in ra if any(x != 0 for x in row)]
    rb = [row for row in rb if any(x != 0 for x in row)]
    return ra == rb
