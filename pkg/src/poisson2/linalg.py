"""Exact dense and sparse linear algebra over GF(2^k).

The dense :class:`Matrix` bit-packs GF(2) rows into uint64 words and keeps
GF(2^k) entries as uint8 with table-driven row operations, so elimination is
numpy-vectorized either way. Row reduction is deterministic: columns are
scanned left to right and the pivot is the topmost unprocessed row, which
pins down reduced echelon forms, kernel bases, and everything downstream
that reports basis vectors.

For constraint systems too large to hold densely (cochain subspaces, the
truncated enveloping quotients) there are incremental sparse eliminators
whose rows are index sets (GF(2)) or index->coefficient dicts (GF(2^k)).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .field import DivisionByZero, Field, FieldError, GF2


class NotASubspace(FieldError):
    """Claimed subspace has a vector outside the ambient span."""


Vector = tuple[int, ...]


class Matrix:
    """Immutable-by-convention exact matrix over a :class:`Field`."""

    __slots__ = ("field", "nrows", "ncols", "_bits", "_rows")

    def __init__(self, field: Field, nrows: int, ncols: int, *, _bits=None, _rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if field.degree == 1:
            nwords = max(1, (ncols + 63) >> 6)
            self._bits = np.zeros((nrows, nwords), dtype=np.uint64) if _bits is None else _bits
            self._rows = None
        else:
            self._rows = np.zeros((nrows, ncols), dtype=np.uint8) if _rows is None else _rows
            self._bits = None

    # ---- construction ----------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "Matrix":
        rows = list(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        m = cls(field, len(rows), ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise FieldError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    m._put(i, j, field.validate_scalar(v))
        return m

    @classmethod
    def from_support_rows(cls, field: Field, supports: Sequence[Iterable[int]], ncols: int) -> "Matrix":
        """Rows given as index sets (GF(2)) — entries are 1 on the support."""
        m = cls(field, len(supports), ncols)
        for i, sup in enumerate(supports):
            for j in sup:
                m._put(i, j, 1)
        return m

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m._put(i, i, 1)
        return m

    def copy(self) -> "Matrix":
        if self.field.degree == 1:
            return Matrix(self.field, self.nrows, self.ncols, _bits=self._bits.copy())
        return Matrix(self.field, self.nrows, self.ncols, _rows=self._rows.copy())

    # ---- entry access ----------------------------------------------------

    def _put(self, i: int, j: int, v: int) -> None:
        if self.field.degree == 1:
            w, b = divmod(j, 64)
            if v & 1:
                self._bits[i, w] |= np.uint64(1 << b)
            else:
                self._bits[i, w] &= np.uint64(~(1 << b) & 0xFFFFFFFFFFFFFFFF)
        else:
            self._rows[i, j] = v

    def entry(self, i: int, j: int) -> int:
        if self.field.degree == 1:
            w, b = divmod(j, 64)
            return int(self._bits[i, w] >> np.uint64(b)) & 1
        return int(self._rows[i, j])

    def row(self, i: int) -> Vector:
        return tuple(self.entry(i, j) for j in range(self.ncols))

    def rows_list(self) -> list[Vector]:
        return [self.row(i) for i in range(self.nrows)]

    def row_support(self, i: int) -> tuple[int, ...]:
        if self.field.degree == 1:
            out = []
            for w in range(self._bits.shape[1]):
                word = int(self._bits[i, w])
                while word:
                    low = word & -word
                    out.append(w * 64 + low.bit_length() - 1)
                    word ^= low
            return tuple(out)
        return tuple(int(j) for j in np.nonzero(self._rows[i])[0])

    def stack(self, other: "Matrix") -> "Matrix":
        if other.ncols != self.ncols or other.field != self.field:
            raise FieldError("stack shape/field mismatch")
        if self.field.degree == 1:
            return Matrix(self.field, self.nrows + other.nrows, self.ncols,
                          _bits=np.vstack([self._bits, other._bits]))
        return Matrix(self.field, self.nrows + other.nrows, self.ncols,
                      _rows=np.vstack([self._rows, other._rows]))

    # ---- elimination -----------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form.

        Returns:
            (R, pivots) where ``pivots[r]`` is the pivot column of row r.
            Deterministic: leftmost pivot columns, topmost rows first.
        """
        if self.field.degree == 1:
            return self._rref_gf2()
        return self._rref_gfk()

    def _rref_gf2(self) -> tuple["Matrix", tuple[int, ...]]:
        R = self._bits.copy()
        nrows = self.nrows
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            if r >= nrows:
                break
            w, b = divmod(c, 64)
            col = (R[r:, w] >> np.uint64(b)) & np.uint64(1)
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                R[[r, p]] = R[[p, r]]
            hot = np.nonzero((R[:, w] >> np.uint64(b)) & np.uint64(1))[0]
            hot = hot[hot != r]
            if hot.size:
                R[hot] ^= R[r]
            pivots.append(c)
            r += 1
        out = Matrix(self.field, nrows, self.ncols, _bits=R)
        return out, tuple(pivots)

    def _rref_gfk(self) -> tuple["Matrix", tuple[int, ...]]:
        MUL = self.field.mul_table_np()
        INV = self.field.inv_table_np()
        R = self._rows.copy()
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            if r >= self.nrows:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                R[[r, p]] = R[[p, r]]
            piv = R[r, c]
            if piv != 1:
                R[r] = MUL[INV[piv], R[r]]
            col = R[:, c].copy()
            col[r] = 0
            hot = np.nonzero(col)[0]
            if hot.size:
                R[hot] ^= MUL[R[hot, c][:, None], R[r][None, :]]
            pivots.append(c)
            r += 1
        out = Matrix(self.field, self.nrows, self.ncols, _rows=R)
        return out, tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[Vector]:
        """Basis of the right kernel {x : M x = 0}, one vector per free column.

        Vectors come out in ascending free-column order; with the pivot
        convention of :meth:`rref` this makes the basis canonical.
        """
        R, pivots = self.rref()
        pivset = set(pivots)
        basis: list[Vector] = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            v = [0] * self.ncols
            v[f] = 1
            for r, p in enumerate(pivots):
                coef = R.entry(r, f)
                if coef:
                    v[p] = coef  # char 2: -c == c
            basis.append(tuple(v))
        return basis

    def solve(self, rhs: Sequence[int]) -> Vector | None:
        """One solution x of M x = rhs, or None if inconsistent.

        Free variables are set to zero, so the answer is deterministic.
        """
        if len(rhs) != self.nrows:
            raise FieldError("rhs length mismatch")
        aug = Matrix(self.field, self.nrows, self.ncols + 1)
        if self.field.degree == 1:
            aug._bits[:, : self._bits.shape[1]] = self._bits
        else:
            aug._rows[:, : self.ncols] = self._rows
        for i, v in enumerate(rhs):
            if v:
                aug._put(i, self.ncols, v)
        R, pivots = aug.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        x = [0] * self.ncols
        for r, p in enumerate(pivots):
            x[p] = R.entry(r, self.ncols)
        return tuple(x)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows or self.field != other.field:
            raise FieldError("matmul shape/field mismatch")
        out = Matrix(self.field, self.nrows, other.ncols)
        if self.field.degree == 1:
            acc = np.zeros((self.nrows, other._bits.shape[1]), dtype=np.uint64)
            for k in range(self.ncols):
                w, b = divmod(k, 64)
                hot = np.nonzero((self._bits[:, w] >> np.uint64(b)) & np.uint64(1))[0]
                if hot.size:
                    acc[hot] ^= other._bits[k]
            out._bits = acc
        else:
            MUL = self.field.mul_table_np()
            acc = np.zeros((self.nrows, other.ncols), dtype=np.uint8)
            for k in range(self.ncols):
                col = self._rows[:, k]
                hot = np.nonzero(col)[0]
                if hot.size:
                    acc[hot] ^= MUL[col[hot][:, None], other._rows[k][None, :]]
            out._rows = acc
        return out

    def apply(self, vec: Sequence[int]) -> Vector:
        """M @ vec for a single dense vector."""
        col = Matrix.from_rows(self.field, [[v] for v in vec], 1)
        return tuple(self.matmul(col).entry(i, 0) for i in range(self.nrows))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.field, self.nrows, self.ncols) != (other.field, other.nrows, other.ncols):
            return False
        if self.field.degree == 1:
            return bool(np.array_equal(self._bits, other._bits))
        return bool(np.array_equal(self._rows, other._rows))

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        raise TypeError("Matrix is unhashable")


#### module-level wrappers matching the operation names ####################


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    return m.rref()


def rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> list[Vector]:
    return m.kernel_basis()


def solve(m: Matrix, rhs: Sequence[int]) -> Vector | None:
    return m.solve(rhs)


def span_rank(field: Field, vectors: Sequence[Sequence[int]], ncols: int) -> int:
    if not vectors:
        return 0
    return Matrix.from_rows(field, vectors, ncols).rank()


def quotient_dim(field: Field, big: Sequence[Sequence[int]], small: Sequence[Sequence[int]], ncols: int) -> int:
    """dim(span(big) / span(small)), requiring span(small) <= span(big).

    Raises:
        NotASubspace: some vector of ``small`` lies outside span(big).
    """
    rb = span_rank(field, big, ncols)
    if small:
        joint = list(big) + list(small)
        if span_rank(field, joint, ncols) != rb:
            raise NotASubspace("claimed subspace escapes the ambient span")
    rs = span_rank(field, small, ncols)
    return rb - rs


def in_span(field: Field, vectors: Sequence[Sequence[int]], vec: Sequence[int], ncols: int) -> bool:
    r = span_rank(field, vectors, ncols)
    return span_rank(field, list(vectors) + [vec], ncols) == r


#### sparse incremental eliminators ########################################


class IntGF2:
    """GF(2) eliminator whose rows are Python ints used as bitsets.

    Geared to systems with very many rows over a moderate column count: a
    row XOR is one arbitrary-precision int operation, so reduction cascades
    run at C speed no matter how dense rows get. The pivot of a stored row
    is its highest set bit.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, int] = {}

    def add_row(self, coords: Iterable[int]) -> int | None:
        """Insert a row given by column indices (duplicates XOR-fold).

        Returns the new pivot, or None if the row reduced to zero.
        """
        row = 0
        for c in coords:
            row ^= 1 << c
        return self.add_int(row)

    def add_int(self, row: int) -> int | None:
        rows = self.rows
        while row:
            p = row.bit_length() - 1
            stored = rows.get(p)
            if stored is None:
                rows[p] = row
                return p
            row ^= stored
        return None

    @property
    def rank_(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.rows]

    def reduce_int(self, row: int) -> int:
        """Normal form: clears every pivot bit, keeps free-column bits."""
        out = 0
        rows = self.rows
        while row:
            p = row.bit_length() - 1
            stored = rows.get(p)
            if stored is None:
                out |= 1 << p
                row ^= 1 << p
            else:
                row ^= stored
        return out

    def contains(self, coords: Iterable[int]) -> bool:
        row = 0
        for c in coords:
            row ^= 1 << c
        return self.reduce_int(row) == 0

    def kernel_supports(self) -> list[set[int]]:
        """Kernel basis as index sets, one per free column, ascending.

        Back-substitution walks pivots in increasing order; a stored row's
        tail sits strictly below its pivot, so the popcount parity of
        row & v is exactly the tail contribution.
        """
        pivs = sorted(self.rows)
        rowlist = [self.rows[p] for p in pivs]
        out: list[set[int]] = []
        for f in self.free_columns():
            v = 1 << f
            for p, r in zip(pivs, rowlist):
                if (r & v).bit_count() & 1:
                    v |= 1 << p
            sup = set()
            while v:
                low = v & -v
                sup.add(low.bit_length() - 1)
                v ^= low
            out.append(sup)
        return out


class SparseGF2:
    """Row reduction for large sparse GF(2) systems, rows as index sets.

    The pivot of a row is its largest column index. Insertion forward-reduces
    a row against stored pivots; :meth:`finalize` back-substitutes so every
    stored row's tail avoids all pivots, after which normal forms and kernel
    vectors are single-pass reads.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, set[int]] = {}
        self._final = False

    def add_row(self, coords: Iterable[int]) -> int | None:
        """Insert a row (indices XOR-folded). Returns its pivot, or None."""
        row: set[int] = set()
        for c in coords:
            if c in row:
                row.discard(c)
            else:
                row.add(c)
        while row:
            p = max(row)
            stored = self.rows.get(p)
            if stored is None:
                self.rows[p] = row
                self._final = False
                return p
            row ^= stored
        return None

    @property
    def rank_(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.rows]

    def finalize(self) -> None:
        if self._final:
            return
        for p in sorted(self.rows):
            row = self.rows[p]
            # tail indices are < p, and their rows are already clean, so one
            # substitution pass leaves no pivot in the tail
            for q in [q for q in row if q != p and q in self.rows]:
                if q in row:
                    row ^= self.rows[q]
        self._final = True

    def reduce(self, coords: Iterable[int]) -> set[int]:
        """Normal form of a vector modulo the stored row space."""
        self.finalize()
        row: set[int] = set()
        for c in coords:
            row.symmetric_difference_update((c,))
        for p in [q for q in row if q in self.rows]:
            if p in row:
                row ^= self.rows[p]
        # one pass suffices after finalize: tails contain no pivots
        return row

    def contains(self, coords: Iterable[int]) -> bool:
        return not self.reduce(coords)

    def kernel_vectors(self) -> list[frozenset[int]]:
        """Kernel basis of the stored system, one vector per free column."""
        self.finalize()
        by_tail: dict[int, list[int]] = {}
        for p, row in self.rows.items():
            for q in row:
                if q != p:
                    by_tail.setdefault(q, []).append(p)
        out = []
        for f in self.free_columns():
            sup = {f}
            sup.update(by_tail.get(f, ()))
            out.append(frozenset(sup))
        return out


class SparseGFk:
    """GF(2^k) analogue of :class:`SparseGF2`; rows are {col: coeff} dicts."""

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}
        self._final = False

    def _axpy(self, dst: dict[int, int], coef: int, src: dict[int, int]) -> None:
        mul = self.field.mul
        for c, v in src.items():
            w = dst.get(c, 0) ^ mul(coef, v)
            if w:
                dst[c] = w
            else:
                dst.pop(c, None)

    def add_row(self, items: Iterable[tuple[int, int]]) -> int | None:
        row: dict[int, int] = {}
        for c, v in items:
            w = row.get(c, 0) ^ v
            if w:
                row[c] = w
            else:
                row.pop(c, None)
        while row:
            p = max(row)
            stored = self.rows.get(p)
            if stored is None:
                piv = row[p]
                if piv != 1:
                    inv = self.field.inv(piv)
                    row = {c: self.field.mul(inv, v) for c, v in row.items()}
                self.rows[p] = row
                self._final = False
                return p
            self._axpy(row, row[p], stored)
        return None

    @property
    def rank_(self) -> int:
        return len(self.rows)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.rows]

    def finalize(self) -> None:
        if self._final:
            return
        for p in sorted(self.rows):
            row = self.rows[p]
            hot = [q for q in list(row) if q != p and q in self.rows]
            for q in hot:
                if q in row:
                    self._axpy(row, row[q], self.rows[q])
            row[p] = 1
        self._final = True

    def reduce(self, items: Iterable[tuple[int, int]]) -> dict[int, int]:
        self.finalize()
        row: dict[int, int] = {}
        for c, v in items:
            w = row.get(c, 0) ^ v
            if w:
                row[c] = w
            else:
                row.pop(c, None)
        for p in [q for q in list(row) if q in self.rows]:
            if p in row:
                self._axpy(row, row[p], self.rows[p])
        return row

    def contains(self, items: Iterable[tuple[int, int]]) -> bool:
        return not self.reduce(items)
