"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; matrices are immutable and backed by
``python-flint`` rational matrices so that elimination on systems with a few
thousand unknowns stays fast.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Sequence

import flint

__all__ = [
    "Matrix",
    "NoSolution",
    "rank",
    "nullspace",
    "solve",
    "rref",
    "integer_rank",
    "SparseRows",
    "sparse_rank",
    "sparse_nullspace",
    "sparse_pivots",
    "sparse_solve",
    "column_space_basis",
    "complement_pivots",
]


class NoSolution(ArithmeticError):
    """Raised by :func:`solve` when ``m x = b`` is inconsistent."""


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if not isinstance(x, Fraction):
        x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _to_fraction(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class Matrix:
    """Dense immutable matrix over the rationals."""

    __slots__ = ("_m", "_h")

    def __init__(self, m: flint.fmpq_mat):
        self._m = m
        self._h = None

    # -- construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        if cols is None:
            if nr == 0:
                raise ValueError("cannot infer column count of an empty row list")
            cols = len(rows[0])
        flat = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(_to_fmpq(x) for x in r)
        return cls(flint.fmpq_mat(nr, cols, flat))

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Iterable) -> "Matrix":
        flat = [_to_fmpq(x) for x in entries]
        if len(flat) != rows * cols:
            raise ValueError("entries length must equal rows * cols")
        return cls(flint.fmpq_mat(rows, cols, flat))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(flint.fmpq_mat(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = flint.fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls(m)

    @classmethod
    def column(cls, entries: Sequence) -> "Matrix":
        return cls.from_flat(len(entries), 1, entries)

    @classmethod
    def hstack(cls, blocks: Sequence["Matrix"], rows: int | None = None) -> "Matrix":
        if not blocks:
            return cls.zeros(rows or 0, 0)
        nr = blocks[0].rows
        out = flint.fmpq_mat(nr, sum(b.cols for b in blocks))
        c0 = 0
        for b in blocks:
            if b.rows != nr:
                raise ValueError("hstack: row counts differ")
            bm = b._m
            for i in range(nr):
                for j in range(b.cols):
                    v = bm[i, j]
                    if v:
                        out[i, c0 + j] = v
            c0 += b.cols
        return cls(out)

    @classmethod
    def vstack(cls, blocks: Sequence["Matrix"], cols: int | None = None) -> "Matrix":
        if not blocks:
            return cls.zeros(0, cols or 0)
        return cls.hstack([b.T for b in blocks]).T

    # -- accessors --------------------------------------------------------
    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def flint(self) -> flint.fmpq_mat:
        return self._m

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(_to_fraction(x) for x in self._m.entries())

    def tolist(self) -> list[list[Fraction]]:
        c = self.cols
        e = self.entries
        return [list(e[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return _to_fraction(self._m[ij])

    def is_zero(self) -> bool:
        m = self._m
        return m == flint.fmpq_mat(m.nrows(), m.ncols())

    def nonzero(self):
        """Yield ``(i, j, value)`` for every nonzero entry as flint scalars."""
        m = self._m
        c = self.cols
        for k, v in enumerate(m.entries()):
            if v:
                yield k // c, k % c, v

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        m = self._m
        out = flint.fmpq_mat(len(rows), len(cols))
        if not rows or not cols:
            return Matrix(out)
        ents = m.entries()
        n = self.cols
        for a, i in enumerate(rows):
            base = i * n
            for b, j in enumerate(cols):
                v = ents[base + j]
                if v:
                    out[a, b] = v
        return Matrix(out)

    # -- arithmetic -------------------------------------------------------
    @property
    def T(self) -> "Matrix":
        return Matrix(self._m.transpose())

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.rows, other.cols)
        return Matrix(self._m * other._m)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(self._m + other._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix(self._m - other._m)

    def __neg__(self) -> "Matrix":
        return Matrix(-self._m)

    def scale(self, c) -> "Matrix":
        return Matrix(self._m * _to_fmpq(c))

    def kron(self, other: "Matrix") -> "Matrix":
        r1, c1 = self.shape
        r2, c2 = other.shape
        out = flint.fmpq_mat(r1 * r2, c1 * c2)
        b = list(other.nonzero())
        for i, j, v in self.nonzero():
            for k, l, w in b:
                out[i * r2 + k, j * c2 + l] = v * w
        return Matrix(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._m == other._m

    def __hash__(self) -> int:
        # a sample of entries is enough: equality is decided by __eq__
        if self._h is None:
            r, c = self.shape
            n = r * c
            m = self._m
            picks = sorted({k * n // 97 for k in range(97)}) if n else []
            self._h = hash((r, c, tuple(str(m[k // c, k % c]) for k in picks)))
        return self._h

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, {[[str(x) for x in r] for r in self.tolist()]})"


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns (leftmost pivoting)."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.rows, m.cols), []
    R, r = m.flint.rref()
    pivots = []
    j = 0
    for i in range(r):
        while not R[i, j]:
            j += 1
        pivots.append(j)
        j += 1
    return Matrix(R), pivots


def integer_rank(m: Matrix) -> int:
    """Rank computed on the integer matrix obtained by clearing denominators."""
    if m.rows == 0 or m.cols == 0:
        return 0
    num, _den = m.flint.numer_denom()
    return num.rank()


def rank(m: Matrix) -> int:
    """Rank over the rationals."""
    return integer_rank(m)


def nullspace(m: Matrix) -> Matrix:
    """Columns form the echelon basis of ``{x : m x = 0}``.

    Each basis vector has a 1 in one free coordinate and 0 in the others.
    """
    n = m.cols
    if m.rows == 0:
        return Matrix.identity(n)
    R, pivots = rref(m)
    free = [j for j in range(n) if j not in set(pivots)]
    out = flint.fmpq_mat(n, len(free))
    Rm = R.flint
    for c, f in enumerate(free):
        out[f, c] = 1
        for i, pj in enumerate(pivots):
            v = Rm[i, f]
            if v:
                out[pj, c] = -v
    return Matrix(out)


def solve(m: Matrix, b: Matrix) -> Matrix:
    """Return ``x`` with ``m @ x == b`` (free variables set to zero).

    Raises :class:`NoSolution` if the system is inconsistent and
    :class:`ValueError` when the row counts disagree.
    """
    if m.rows != b.rows:
        raise ValueError(f"row count mismatch: {m.rows} vs {b.rows}")
    n, k = m.cols, b.cols
    if m.rows == 0:
        return Matrix.zeros(n, k)
    aug = Matrix.hstack([m, b])
    R, pivots = rref(aug)
    if any(p >= n for p in pivots):
        raise NoSolution("inconsistent linear system")
    out = flint.fmpq_mat(n, k)
    Rm = R.flint
    for i, pj in enumerate(pivots):
        for c in range(k):
            v = Rm[i, n + c]
            if v:
                out[pj, c] = v
    return Matrix(out)


def column_space_basis(m: Matrix) -> Matrix:
    """Echelon basis (as columns) of the column space of ``m``."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.rows, 0)
    R, pivots = rref(m.T)
    return R.submatrix(range(len(pivots)), range(m.rows)).T


def complement_pivots(m: Matrix) -> list[int]:
    """Indices of standard basis vectors spanning a complement of col(m).

    These are the non-pivot coordinates of the row-reduced basis of the column
    space, so quotient bases are chosen deterministically.
    """
    if m.cols == 0:
        return list(range(m.rows))
    _R, pivots = rref(m.T)
    ps = set(pivots)
    return [i for i in range(m.rows) if i not in ps]


# -- sparse exact elimination ------------------------------------------------

SparseRows = list  # list[dict[int, flint.fmpq]]


def _markowitz(rows: SparseRows, record: bool, skip=None):
    """Eliminate ``rows`` in place using low-count pivots.

    Returns the list of ``(pivot_col, pivot_row)`` in elimination order; each
    pivot row only involves its pivot column and columns eliminated later or
    never. When ``record`` is false the pivot rows are not kept.
    """
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    heap = [(len(rs), c) for c, rs in col_rows.items() if c != skip]
    heapq.heapify(heap)
    pivots = []
    while heap:
        cnt, c = heapq.heappop(heap)
        rs = col_rows.get(c)
        if not rs:
            continue
        if len(rs) != cnt:
            heapq.heappush(heap, (len(rs), c))
            continue
        pr = min(rs, key=lambda i: len(rows[i]))
        prow = rows[pr]
        for cc in prow:
            col_rows[cc].discard(pr)
        inv = 1 / prow[c]
        touched = set()
        for i in list(rs):
            r = rows[i]
            f = r[c] * inv
            for cc, v in prow.items():
                nv = r.get(cc, 0) - f * v
                if nv:
                    if cc not in r:
                        col_rows[cc].add(i)
                    r[cc] = nv
                elif cc in r:
                    del r[cc]
                    col_rows[cc].discard(i)
                touched.add(cc)
        del col_rows[c]
        rows[pr] = {}
        touched.discard(c)
        touched.discard(skip)
        for cc in touched:
            rs2 = col_rows.get(cc)
            if rs2:
                heapq.heappush(heap, (len(rs2), cc))
        pivots.append((c, prow if record else None))
    return pivots


def _as_rows(rows) -> SparseRows:
    out = []
    for r in rows:
        d = {c: _to_fmpq(v) for c, v in r.items() if v}
        if d:
            out.append(d)
    return out


def sparse_rank(rows, ncols: int | None = None) -> int:
    """Rank of a sparse matrix given as a list of ``{column: value}`` rows."""
    return len(_markowitz(_as_rows(rows), record=False))


def sparse_solve(columns: Sequence[dict], rhs: dict) -> dict[int, Fraction]:
    """A solution ``x`` of ``Σ_k x_k columns[k] = rhs`` (sparse vectors keyed by
    row).  Unknowns that are never pivots are set to zero.

    Raises :class:`NoSolution` when the system is inconsistent.
    """
    RHS = -1
    eqs: dict = {}
    for k, col in enumerate(columns):
        for r, v in col.items():
            if v:
                eqs.setdefault(r, {})[k] = _to_fmpq(v)
    for r, v in rhs.items():
        if v:
            eqs.setdefault(r, {})[RHS] = _to_fmpq(v)
    rows = [e for e in eqs.values() if e]
    piv = _markowitz(rows, record=True, skip=RHS)
    for r in rows:
        if r:
            raise NoSolution("inconsistent sparse system")
    x: dict[int, flint.fmpq] = {}
    for c, prow in reversed(piv):
        acc = prow.get(RHS, flint.fmpq(0))
        for cc, v in prow.items():
            if cc != c and cc != RHS and cc in x:
                acc -= v * x[cc]
        if acc:
            x[c] = acc / prow[c]
    return {k: _to_fraction(v) for k, v in x.items()}


def sparse_pivots(rows, raw: bool = False) -> tuple[list[int], list[dict]]:
    """Pivot columns and a basis of the row space.

    Standard basis vectors of the non-pivot columns span a complement of the
    row space.  With ``raw`` the basis keeps flint scalars.
    """
    piv = _markowitz(_as_rows(rows), record=True)
    cols = [c for c, _ in piv]
    if raw:
        return cols, [r for _, r in piv]
    basis = [{k: _to_fraction(v) for k, v in r.items()} for _, r in piv]
    return cols, basis


def sparse_nullspace(rows, ncols: int) -> list[dict[int, Fraction]]:
    """Basis of ``{x : row . x = 0 for every row}`` as sparse vectors.

    The basis is indexed by the free (never pivoted) columns in increasing
    order; the vector for free column ``f`` has ``x_f = 1`` and zero on every
    other free column.
    """
    piv = _markowitz(_as_rows(rows), record=True)
    pivcols = {c for c, _ in piv}
    free = [j for j in range(ncols) if j not in pivcols]
    expr: dict[int, dict[int, flint.fmpq]] = {}
    for c, prow in reversed(piv):
        inv = -1 / prow[c]
        acc: dict[int, flint.fmpq] = {}
        for cc, v in prow.items():
            if cc == c:
                continue
            sub = expr.get(cc)
            if sub is None:
                sub = {cc: flint.fmpq(1)}
            for f, w in sub.items():
                nv = acc.get(f, 0) + v * w
                if nv:
                    acc[f] = nv
                else:
                    acc.pop(f, None)
        expr[c] = {f: w * inv for f, w in acc.items()}
    basis = [{f: Fraction(1)} for f in free]
    index = {f: k for k, f in enumerate(free)}
    for c, e in expr.items():
        for f, w in e.items():
            basis[index[f]][c] = _to_fraction(w)
    return basis
