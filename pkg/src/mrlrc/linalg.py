"""Dense exact linear algebra over one level of a field tower.

Matrices are immutable row-major lists of int element codes.  Everything
here is plain Gaussian elimination with deterministic pivoting (first
nonzero entry per column, columns scanned left to right), which is all
the desk-scale constructions need.
"""

from __future__ import annotations

from itertools import combinations

from .errors import ParameterError
from .gf import Field, FieldTower


class FieldMatrix:
    """rows x cols matrix over tower level `level`; entries row-major."""

    __slots__ = ("tower", "level", "rows", "cols", "data")

    def __init__(self, tower: FieldTower, level: str, rows: int, cols: int, data):
        if rows < 0 or cols < 0:
            raise ParameterError("negative matrix dimension")
        data = list(data)
        if len(data) != rows * cols:
            raise ParameterError("entry count does not match dimensions")
        size = tower.level_size(level)
        for e in data:
            if not 0 <= e < size:
                raise ParameterError(f"entry {e} out of range for level {level}")
        self.tower = tower
        self.level = level
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, tower, level, row_lists) -> "FieldMatrix":
        row_lists = [list(r) for r in row_lists]
        rows = len(row_lists)
        cols = len(row_lists[0]) if row_lists else 0
        flat = []
        for r in row_lists:
            if len(r) != cols:
                raise ParameterError("ragged rows")
            flat.extend(r)
        return cls(tower, level, rows, cols, flat)

    @classmethod
    def identity(cls, tower, level, n) -> "FieldMatrix":
        data = [0] * (n * n)
        for i in range(n):
            data[i * n + i] = 1
        return cls(tower, level, n, n, data)

    @classmethod
    def zero(cls, tower, level, rows, cols) -> "FieldMatrix":
        return cls(tower, level, rows, cols, [0] * (rows * cols))

    def field(self) -> Field:
        return self.tower.field(self.level)

    def at(self, i, j):
        return self.data[i * self.cols + j]

    def row(self, i) -> list:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def column(self, j) -> list:
        return self.data[j :: self.cols] if self.cols else []

    def transpose(self) -> "FieldMatrix":
        data = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            base = i * self.cols
            for j in range(self.cols):
                data[j * self.rows + i] = self.data[base + j]
        return FieldMatrix(self.tower, self.level, self.cols, self.rows, data)

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.tower == other.tower
            and self.level == other.level
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"FieldMatrix({self.level}, {self.rows}x{self.cols})"


def _echelonize(F: Field, work: list[list[int]], reduced: bool = True) -> list[int]:
    """In-place Gaussian elimination; returns the pivot column list."""
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    sub, mul, inv = F.sub, F.mul, F.inv
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        f = inv(prow[c])
        if f != 1:
            for t in range(c, ncols):
                if prow[t]:
                    prow[t] = mul(f, prow[t])
        lo = 0 if reduced else r + 1
        for i in range(lo, nrows):
            if i == r:
                continue
            row = work[i]
            g = row[c]
            if g:
                for t in range(c, ncols):
                    if prow[t]:
                        row[t] = sub(row[t], mul(g, prow[t]))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(M: FieldMatrix):
    """Reduced row-echelon form: (R, rank, pivot columns)."""
    if M.rows == 0:
        return M, 0, []
    work = M.to_rows()
    pivots = _echelonize(M.field(), work)
    R = FieldMatrix.from_rows(M.tower, M.level, work)
    return R, len(pivots), pivots


def rank(M: FieldMatrix) -> int:
    work = M.to_rows()
    return len(_echelonize(M.field(), work, reduced=False))


def _rank_rows(F: Field, row_lists) -> int:
    """Rank of a list of coefficient rows (consumed as scratch)."""
    work = [list(r) for r in row_lists]
    return len(_echelonize(F, work, reduced=False))


def solve(M: FieldMatrix, b) -> list[int] | None:
    """One solution of M x = b (free variables zero), or None."""
    b = list(b)
    if len(b) != M.rows:
        raise ParameterError("right-hand side length mismatch")
    F = M.field()
    work = [M.row(i) + [b[i]] for i in range(M.rows)]
    pivots = _echelonize(F, work)
    if M.cols in pivots:
        return None  # a pivot in the augmented column: inconsistent
    x = [0] * M.cols
    for i, c in enumerate(pivots):
        x[c] = work[i][M.cols]
    return x


def kernel(M: FieldMatrix) -> FieldMatrix:
    """Matrix whose rows are a basis of {x : M x^T = 0}.

    One basis row per rref free column, in ascending column order.
    """
    R, rk, pivots = rref(M)
    F = M.field()
    pivset = set(pivots)
    free = [c for c in range(M.cols) if c not in pivset]
    rows = []
    for fcol in free:
        v = [0] * M.cols
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R.at(i, fcol))
        rows.append(v)
    if not rows:
        return FieldMatrix(M.tower, M.level, 0, M.cols, [])
    return FieldMatrix.from_rows(M.tower, M.level, rows)


def matmul(A: FieldMatrix, B: FieldMatrix) -> FieldMatrix:
    if A.cols != B.rows:
        raise ParameterError("inner dimensions do not match")
    if A.level != B.level or A.tower != B.tower:
        raise ParameterError("matrix level mismatch")
    F = A.field()
    add, mul = F.add, F.mul
    brows = B.to_rows()
    out = []
    for i in range(A.rows):
        arow = A.row(i)
        acc = [0] * B.cols
        for k, aik in enumerate(arow):
            if aik:
                brow = brows[k]
                for j in range(B.cols):
                    v = brow[j]
                    if v:
                        acc[j] = add(acc[j], mul(aik, v))
        out.append(acc)
    return FieldMatrix.from_rows(A.tower, A.level, out) if out else FieldMatrix(
        A.tower, A.level, 0, B.cols, []
    )


def vec_mat(v, M: FieldMatrix) -> list[int]:
    """Row vector times matrix."""
    v = list(v)
    if len(v) != M.rows:
        raise ParameterError("vector length mismatch")
    F = M.field()
    add, mul = F.add, F.mul
    acc = [0] * M.cols
    for k, vk in enumerate(v):
        if vk:
            row = M.row(k)
            for j in range(M.cols):
                e = row[j]
                if e:
                    acc[j] = add(acc[j], mul(vk, e))
    return acc


def mat_vec(M: FieldMatrix, v) -> list[int]:
    """Matrix times column vector."""
    v = list(v)
    if len(v) != M.cols:
        raise ParameterError("vector length mismatch")
    F = M.field()
    add, mul = F.add, F.mul
    out = []
    for i in range(M.rows):
        row = M.row(i)
        acc = 0
        for j, e in enumerate(row):
            if e and v[j]:
                acc = add(acc, mul(e, v[j]))
        out.append(acc)
    return out


def columns_independent(M: FieldMatrix, idxs) -> bool:
    """True iff the selected columns have rank len(idxs)."""
    idxs = list(idxs)
    for j in idxs:
        if not 0 <= j < M.cols:
            raise ParameterError(f"column index {j} out of range")
    if len(idxs) > M.rows:
        return False
    # rank of the transposed selection: each selected column becomes a row
    rows = [[M.at(i, j) for i in range(M.rows)] for j in idxs]
    return _rank_rows(M.field(), rows) == len(idxs)


def is_mds_parity_check(A: FieldMatrix, delta: int) -> bool:
    """True iff every delta-subset of columns of A is independent.

    A must have exactly delta rows; decided by exhausting all C(cols, delta)
    subsets, which doubles as an oracle for constructor bugs.
    """
    if delta > A.cols:
        raise ParameterError("delta exceeds the number of columns")
    if A.rows != delta:
        raise ParameterError("matrix must have exactly delta rows")
    if delta == 0:
        return True
    cols = [A.column(j) for j in range(A.cols)]
    if any(not any(c) for c in cols):
        return False
    F = A.field()
    for sel in combinations(range(A.cols), delta):
        if _rank_rows(F, [cols[j] for j in sel]) != delta:
            return False
    return True
