"""Exact integer and field linear algebra shared by the whole engine.

Everything here is arbitrary precision: integer matrices are lists of lists
of Python ints, field matrices hold Fractions (or any field-like values
supporting +, -, *, /, bool).  No floating point anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    ma, na = len(A), len(A[0]) if A else 0
    nb = len(B[0]) if B else 0
    assert na == len(B), "incompatible shapes"
    out = [[0] * nb for _ in range(ma)]
    for i in range(ma):
        Ai = A[i]
        row = out[i]
        for k in range(na):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(nb):
                    if Bk[j]:
                        row[j] += a * Bk[j]
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def is_unimodular(U) -> bool:
    n = len(U)
    if any(len(row) != n for row in U):
        return False
    return abs(det_int(U)) == 1


def det_int(A) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [[int(x) for x in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


class SNF(NamedTuple):
    """U @ M @ V == D with U, V unimodular and D diagonal, d_i | d_{i+1} >= 0."""

    D: list
    U: list
    V: list
    rank: int

    @property
    def diagonal(self) -> list[int]:
        r = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(r)]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(M) -> SNF:
    """Smith normal form over the integers, with unimodular transforms."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear the pivot column, improving the pivot as we go
            moved = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        moved = True
            if moved:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        moved = True
            if moved:
                continue
            # pivot must divide every remaining entry
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
        if t == m or t == n:
            break
    return SNF(A, U, V, sum(1 for i in range(min(m, n)) if A[i][i]))


def kernel_basis_int(M) -> list[list[int]]:
    """Basis of the integer kernel lattice {v : M v = 0}, as column vectors."""
    m = len(M)
    n = len(M[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    snf = smith_normal_form(M)
    return [[snf.V[i][j] for i in range(n)] for j in range(snf.rank, n)]


def rank_field_dense(M, *, copy=True) -> int:
    """Rank of a dense matrix over a field (Fraction or field-like entries)."""
    if not M or not M[0]:
        return 0
    A = [list(row) for row in M] if copy else M
    m, n = len(A), len(A[0])
    rank = 0
    col = 0
    while rank < m and col < n:
        piv = None
        for i in range(rank, m):
            if A[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = A[rank][col]
        for i in range(rank + 1, m):
            if A[i][col]:
                c = A[i][col] / inv
                A[i] = [a - c * b for a, b in zip(A[i], A[rank])]
        rank += 1
        col += 1
    return rank


def invert_field_dense(M):
    """Inverse of a square matrix over a field; None when singular."""
    n = len(M)
    A = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    one = None
    for r in range(n):
        piv = None
        for i in range(r, n):
            if A[i][r]:
                piv = i
                break
        if piv is None:
            return None
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][r]
        if one is None:
            one = inv / inv
        A[r] = [a / inv for a in A[r]]
        for i in range(n):
            if i != r and A[i][r]:
                c = A[i][r]
                A[i] = [a - c * b for a, b in zip(A[i], A[r])]
    return [row[n:] for row in A]


class SparseMatrix:
    """Integer/Fraction matrix stored as {column -> {row -> value}}."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols: dict[int, dict[int, object]] = cols if cols is not None else {}

    @classmethod
    def from_dense(cls, M):
        m = len(M)
        n = len(M[0]) if m else 0
        out = cls(m, n)
        for i, row in enumerate(M):
            for j, v in enumerate(row):
                if v:
                    out.set(i, j, v)
        return out

    @classmethod
    def identity(cls, n):
        out = cls(n, n)
        for i in range(n):
            out.set(i, i, 1)
        return out

    def set(self, i, j, v):
        assert 0 <= i < self.nrows and 0 <= j < self.ncols
        col = self.cols.setdefault(j, {})
        if v:
            col[i] = v
        else:
            col.pop(i, None)

    def add_to(self, i, j, v):
        if not v:
            return
        col = self.cols.setdefault(j, {})
        w = col.get(i, 0) + v
        if w:
            col[i] = w
        else:
            del col[i]

    def get(self, i, j):
        return self.cols.get(j, {}).get(i, 0)

    def entries(self):
        for j, col in self.cols.items():
            for i, v in col.items():
                yield i, j, v

    def is_zero(self) -> bool:
        return all(not col for col in self.cols.values())

    def nnz(self) -> int:
        return sum(len(col) for col in self.cols.values())

    def to_dense(self):
        M = [[0] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            M[i][j] = v
        return M

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """self @ other."""
        assert self.ncols == other.nrows, (self.ncols, other.nrows)
        out = SparseMatrix(self.nrows, other.ncols)
        for j, col in other.cols.items():
            acc: dict[int, object] = {}
            for k, v in col.items():
                for i, w in self.cols.get(k, {}).items():
                    x = acc.get(i, 0) + w * v
                    if x:
                        acc[i] = x
                    else:
                        del acc[i]
            if acc:
                out.cols[j] = acc
        return out

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        out = SparseMatrix(self.nrows, self.ncols)
        for i, j, v in self.entries():
            out.add_to(i, j, v)
        for i, j, v in other.entries():
            out.add_to(i, j, v)
        return out

    def scaled(self, c) -> "SparseMatrix":
        out = SparseMatrix(self.nrows, self.ncols)
        if c:
            for i, j, v in self.entries():
                out.set(i, j, c * v)
        return out

    def __neg__(self):
        return self.scaled(-1)

    def transpose(self) -> "SparseMatrix":
        out = SparseMatrix(self.ncols, self.nrows)
        for i, j, v in self.entries():
            out.set(j, i, v)
        return out

    def paste(self, block: "SparseMatrix", row_off: int, col_off: int, scale=1):
        for i, j, v in block.entries():
            self.add_to(i + row_off, j + col_off, scale * v)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return (self + other.scaled(-1)).is_zero()

    def __hash__(self):
        raise TypeError("SparseMatrix is unhashable")

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


_DENSE_CORE_LIMIT = 600


def invariant_factors_sparse(S: SparseMatrix) -> list[int]:
    """Invariant factors d_1 | d_2 | ... (including 1s) of an integer matrix.

    Unit pivots are eliminated sparsely with Markowitz-style selection; the
    leftover core (normally tiny for boundary-like matrices) goes through the
    dense routine.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, j, v in S.entries():
        rows.setdefault(i, {})[j] = int(v)
        cols.setdefault(j, set()).add(i)
    ones = 0
    while True:
        best = None
        best_cost = None
        for i, row in rows.items():
            li = len(row)
            for j, v in row.items():
                if v == 1 or v == -1:
                    cost = (li - 1) * (len(cols[j]) - 1)
                    if best_cost is None or cost < best_cost:
                        best = (i, j, v)
                        best_cost = cost
                        if cost == 0:
                            break
            if best_cost == 0:
                break
        if best is None:
            break
        i0, j0, v0 = best
        pivot_row = rows.pop(i0)
        for j in pivot_row:
            cols[j].discard(i0)
        for i in list(cols.get(j0, ())):
            row = rows[i]
            c = row[j0] * v0  # row_i -= c * pivot_row  (v0 inverse is v0)
            for j, w in pivot_row.items():
                x = row.get(j, 0) - c * w
                if x:
                    row[j] = x
                    cols.setdefault(j, set()).add(i)
                else:
                    if j in row:
                        del row[j]
                        cols[j].discard(i)
        cols.pop(j0, None)
        ones += 1
    # dense core
    live_rows = sorted(i for i, row in rows.items() if row)
    live_cols = sorted({j for i in live_rows for j in rows[i]})
    factors = [1] * ones
    if live_rows:
        if len(live_rows) > _DENSE_CORE_LIMIT and len(live_cols) > _DENSE_CORE_LIMIT:
            raise RuntimeError(
                f"dense SNF core too large: {len(live_rows)}x{len(live_cols)}"
            )
        ci = {j: k for k, j in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for k, i in enumerate(live_rows):
            for j, v in rows[i].items():
                dense[k][ci[j]] = v
        factors.extend(smith_normal_form(dense).invariant_factors)
    return factors


def rank_sparse_field(S: SparseMatrix) -> int:
    """Rank over Q (or any field the entries live in)."""
    rows: dict[int, dict[int, object]] = {}
    cols: dict[int, set[int]] = {}
    for i, j, v in S.entries():
        rows.setdefault(i, {})[j] = Fraction(v) if isinstance(v, int) else v
        cols.setdefault(j, set()).add(i)
    rank = 0
    while True:
        best = None
        best_cost = None
        for i, row in rows.items():
            li = len(row)
            for j in row:
                cost = (li - 1) * (len(cols[j]) - 1)
                if best_cost is None or cost < best_cost:
                    best = (i, j)
                    best_cost = cost
                    if cost == 0:
                        break
            if best_cost == 0:
                break
        if best is None:
            break
        i0, j0 = best
        pivot_row = rows.pop(i0)
        v0 = pivot_row[j0]
        for j in pivot_row:
            cols[j].discard(i0)
        for i in list(cols.get(j0, ())):
            row = rows[i]
            c = row[j0] / v0
            for j, w in pivot_row.items():
                x = row.get(j, 0) - c * w
                if x:
                    row[j] = x
                    cols.setdefault(j, set()).add(i)
                else:
                    if j in row:
                        del row[j]
                        cols[j].discard(i)
        cols.pop(j0, None)
        rank += 1
    return rank
