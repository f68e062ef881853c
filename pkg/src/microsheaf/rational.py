"""Exact linear algebra over the rationals.

Everything downstream (cochain complexes, sheaf homs, transfer formulas,
characteristic cycle counts) reduces to solving linear systems over Q.
Matrices carry one of two storage layouts: dense rows for small sizes,
a triplet dict above ``DENSE_LIMIT``.  Both layouts must produce identical
answers; the test suite drives every operation through both.

Scalars are ``fractions.Fraction`` throughout; no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

DENSE_LIMIT = 64


def as_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


class QMatrix:
    """Immutable-by-convention rational matrix.

    Entries are addressed (row, col).  Construction from explicit rows or
    from a triplet dict; the backing store is chosen by size unless forced
    with ``storage=``.
    """

    __slots__ = ("nrows", "ncols", "_rows", "_data")

    def __init__(self, nrows, ncols, entries=None, storage=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimension")
        self.nrows = nrows
        self.ncols = ncols
        if storage is None:
            storage = "dense" if max(nrows, ncols, 1) <= DENSE_LIMIT else "sparse"
        if storage == "dense":
            self._rows = [[ZERO] * ncols for _ in range(nrows)]
            self._data = None
        elif storage == "sparse":
            self._rows = None
            self._data = {}
        else:
            raise ValueError(f"unknown storage {storage!r}")
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = as_q(v)

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], storage=None) -> "QMatrix":
        rows = [[as_q(x) for x in r] for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        m = cls(nrows, ncols, storage=storage)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if x:
                    m[i, j] = x
        return m

    @classmethod
    def identity(cls, n: int, storage=None) -> "QMatrix":
        m = cls(n, n, storage=storage)
        for i in range(n):
            m[i, i] = ONE
        return m

    @classmethod
    def zero(cls, nrows: int, ncols: int, storage=None) -> "QMatrix":
        return cls(nrows, ncols, storage=storage)

    def copy(self) -> "QMatrix":
        m = QMatrix(self.nrows, self.ncols, storage=self.storage)
        if self._rows is not None:
            m._rows = [r[:] for r in self._rows]
        else:
            m._data = dict(self._data)
        return m

    # -- entry access ----------------------------------------------------

    @property
    def storage(self) -> str:
        return "dense" if self._rows is not None else "sparse"

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"({i},{j}) out of range {self.nrows}x{self.ncols}")
        if self._rows is not None:
            return self._rows[i][j]
        return self._data.get((i, j), ZERO)

    def __setitem__(self, ij, v) -> None:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"({i},{j}) out of range {self.nrows}x{self.ncols}")
        v = as_q(v)
        if self._rows is not None:
            self._rows[i][j] = v
        elif v:
            self._data[(i, j)] = v
        else:
            self._data.pop((i, j), None)

    def items(self):
        """Yield ((i, j), value) over nonzero entries."""
        if self._rows is not None:
            for i, row in enumerate(self._rows):
                for j, v in enumerate(row):
                    if v:
                        yield (i, j), v
        else:
            yield from self._data.items()

    def row(self, i) -> list[Fraction]:
        if self._rows is not None:
            return self._rows[i][:]
        r = [ZERO] * self.ncols
        for (a, b), v in self._data.items():
            if a == i:
                r[b] = v
        return r

    def col(self, j) -> list[Fraction]:
        if self._rows is not None:
            return [r[j] for r in self._rows]
        c = [ZERO] * self.nrows
        for (a, b), v in self._data.items():
            if b == j:
                c[a] = v
        return c

    def is_zero(self) -> bool:
        return all(not v for _, v in self.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return dict(self.items()) == dict(other.items())

    def __hash__(self):
        raise TypeError("QMatrix is unhashable")

    def __repr__(self):
        if self.nrows * self.ncols <= 36:
            body = "; ".join(
                " ".join(str(self[i, j]) for j in range(self.ncols))
                for i in range(self.nrows)
            )
            return f"QMatrix({self.nrows}x{self.ncols}: {body})"
        return f"QMatrix({self.nrows}x{self.ncols}, nnz={sum(1 for _ in self.items())})"

    # -- arithmetic -------------------------------------------------------

    def _result(self, nrows, ncols) -> "QMatrix":
        return QMatrix(nrows, ncols)

    def __add__(self, other) -> "QMatrix":
        self._same_shape(other)
        m = self.copy()
        for (i, j), v in other.items():
            m[i, j] = m[i, j] + v
        return m

    def __sub__(self, other) -> "QMatrix":
        self._same_shape(other)
        m = self.copy()
        for (i, j), v in other.items():
            m[i, j] = m[i, j] - v
        return m

    def __neg__(self) -> "QMatrix":
        m = self._result(self.nrows, self.ncols)
        for (i, j), v in self.items():
            m[i, j] = -v
        return m

    def scale(self, c) -> "QMatrix":
        c = as_q(c)
        m = self._result(self.nrows, self.ncols)
        if c:
            for (i, j), v in self.items():
                m[i, j] = c * v
        return m

    def _same_shape(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError(
                f"shape mismatch {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}"
            )

    def __mul__(self, other) -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        out = self._result(self.nrows, other.ncols)
        # group other's entries by row for sparse-friendly products
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (k, j), v in other.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), u in self.items():
            hits = by_row.get(k)
            if not hits:
                continue
            for j, v in hits:
                key = (i, j)
                acc[key] = acc.get(key, ZERO) + u * v
        for (i, j), v in acc.items():
            if v:
                out[i, j] = v
        return out

    def apply(self, vec: list[Fraction]) -> list[Fraction]:
        """Matrix times column vector."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        out = [ZERO] * self.nrows
        for (i, j), v in self.items():
            if vec[j]:
                out[i] = out[i] + v * vec[j]
        return out

    def transpose(self) -> "QMatrix":
        m = self._result(self.ncols, self.nrows)
        for (i, j), v in self.items():
            m[j, i] = v
        return m

    # -- elimination-based queries ---------------------------------------

    def _echelon(self):
        """Row-reduce a working copy; returns (rows, pivots).

        rows: list of reduced rows (RREF), pivots: list of pivot column
        indices in row order.
        """
        rows = [self.row(i) for i in range(self.nrows)]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            piv = None
            for i in range(r, self.nrows):
                if rows[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = ONE / rows[r][c]
            if inv != ONE:
                rows[r] = [x * inv for x in rows[r]]
            for i in range(self.nrows):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return rows, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel_basis(self) -> list[list[Fraction]]:
        """Basis of the right kernel, as column vectors."""
        rows, pivots = self._echelon()
        pivset = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        basis = []
        for fc in free:
            v = [ZERO] * self.ncols
            v[fc] = ONE
            for r, pc in enumerate(pivots):
                v[pc] = -rows[r][fc]
            basis.append(v)
        return basis

    def column_space_pivots(self) -> list[int]:
        """Indices of a maximal independent subset of columns."""
        return self._echelon()[1]

    def solve(self, rhs: list[Fraction]):
        """One solution x of self @ x = rhs, or None if inconsistent."""
        if len(rhs) != self.nrows:
            raise ValueError("rhs length mismatch")
        aug = QMatrix(self.nrows, self.ncols + 1)
        for (i, j), v in self.items():
            aug[i, j] = v
        for i, v in enumerate(rhs):
            if v:
                aug[i, self.ncols] = as_q(v)
        rows, pivots = aug._echelon()
        if self.ncols in pivots:
            return None
        x = [ZERO] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = rows[r][self.ncols]
        return x

    def solve_matrix(self, rhs: "QMatrix"):
        """X with self @ X = rhs, or None.  Solves all columns in one sweep."""
        if rhs.nrows != self.nrows:
            raise ValueError("rhs shape mismatch")
        k = rhs.ncols
        aug = QMatrix(self.nrows, self.ncols + k, storage=self.storage)
        for (i, j), v in self.items():
            aug[i, j] = v
        for (i, j), v in rhs.items():
            aug[i, self.ncols + j] = v
        rows, pivots = aug._echelon()
        real = [p for p in pivots if p < self.ncols]
        if len(real) != len(pivots):
            return None
        out = QMatrix(self.ncols, k)
        for r, pc in enumerate(pivots):
            for j in range(k):
                v = rows[r][self.ncols + j]
                if v:
                    out[pc, j] = v
        return out

    # -- assembly ---------------------------------------------------------

    @classmethod
    def block(cls, grid: list[list["QMatrix | None"]], row_sizes, col_sizes) -> "QMatrix":
        nrows = sum(row_sizes)
        ncols = sum(col_sizes)
        out = cls(nrows, ncols)
        roff = 0
        for bi, rs in enumerate(row_sizes):
            coff = 0
            for bj, cs in enumerate(col_sizes):
                blk = grid[bi][bj]
                if blk is not None:
                    if (blk.nrows, blk.ncols) != (rs, cs):
                        raise ValueError("block shape mismatch")
                    for (i, j), v in blk.items():
                        out[roff + i, coff + j] = v
                coff += cs
            roff += rs
        return out

    @classmethod
    def from_columns(cls, cols: list[list[Fraction]], nrows=None) -> "QMatrix":
        if nrows is None:
            if not cols:
                raise ValueError("need nrows for empty column list")
            nrows = len(cols[0])
        m = cls(nrows, len(cols))
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise ValueError("ragged columns")
            for i, v in enumerate(c):
                if v:
                    m[i, j] = v
        return m


def sparse_rank(m: "QMatrix") -> int:
    """Rank by sparse Gaussian elimination with shortest-row pivoting."""
    rows: dict[int, dict[int, Fraction]] = {}
    by_col: dict[int, set] = {}
    for (i, j), v in m.items():
        rows.setdefault(i, {})[j] = v
        by_col.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        # pick the shortest row
        i = min(rows, key=lambda r: len(rows[r]))
        row = rows.pop(i)
        if not row:
            continue
        rank += 1
        # pivot on its sparsest column
        j = min(row, key=lambda c: len(by_col.get(c, ())))
        piv = row[j]
        for c in row:
            by_col.get(c, set()).discard(i)
        targets = list(by_col.get(j, ()))
        for r in targets:
            other = rows.get(r)
            if other is None or j not in other:
                by_col.get(j, set()).discard(r)
                continue
            f = other[j] / piv
            for c, v in row.items():
                cur = other.get(c)
                new = (cur - f * v) if cur is not None else -f * v
                if new:
                    if cur is None:
                        by_col.setdefault(c, set()).add(r)
                    other[c] = new
                else:
                    if cur is not None:
                        other.pop(c)
                        by_col.get(c, set()).discard(r)
            if not other:
                rows.pop(r, None)
    return rank


class IncrementalBasis:
    """Row-echelon accumulator for greedy independent-set selection.

    try_add(v) reduces v against the current rows; a nonzero remainder is
    normalized, recorded, and True is returned."""

    def __init__(self, length: int):
        self.length = length
        self.rows = []      # reduced rows
        self.pivots = []    # pivot column per row

    def reduce(self, v):
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                for i, x in enumerate(row):
                    if x:
                        v[i] -= f * x
        return v

    def try_add(self, v) -> bool:
        r = self.reduce(v)
        for p, x in enumerate(r):
            if x:
                inv = ONE / x
                if inv != ONE:
                    r = [y * inv for y in r]
                self.rows.append(r)
                self.pivots.append(p)
                return True
        return False

    def rank(self) -> int:
        return len(self.rows)


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]

def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]

def vec_scale(c, u):
    c = as_q(c)
    return [c * a for a in u]

def vec_is_zero(u):
    return all(not a for a in u)

def zero_vec(n):
    return [ZERO] * n

def unit_vec(n, i):
    v = [ZERO] * n
    v[i] = ONE
    return v
