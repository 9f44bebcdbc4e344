"""Dense matrices over GF(q)((t)).

Matrices are immutable tuples of rows.  Structural equality (``==``) compares
stored coefficients and precision; use :meth:`Matrix.is_zero` for certified
mathematical comparisons of inexact data.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import PrecisionExhausted, RankDeficient
from .laurent import Field, LaurentScalar, scalar_from_json


class Matrix:
    __slots__ = ("field", "rows", "nrows", "ncols", "_hash")

    def __init__(self, field: Field, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        self.rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self._hash = None

    @classmethod
    def _raw(cls, field, rows, ncols=None):
        m = object.__new__(cls)
        m.field = field
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0]) if rows else (ncols or 0)
        m._hash = None
        return m

    # --- constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, n: int, m: int | None = None) -> Matrix:
        m = n if m is None else m
        z = field.zero
        return cls._raw(field, tuple((z,) * m for _ in range(n)), m)

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        return cls.diagonal(field, [field.one] * n)

    @classmethod
    def diagonal(cls, field: Field, entries: Sequence[LaurentScalar]) -> Matrix:
        n = len(entries)
        z = field.zero
        return cls._raw(field, tuple(tuple(entries[i] if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def unit(cls, field: Field, n: int, i: int, j: int, value=None) -> Matrix:
        """The matrix unit ``E_{i,j}`` (0-based), optionally scaled."""
        z = field.zero
        v = field.one if value is None else field.coerce(value)
        return cls._raw(field, tuple(tuple(v if (a, b) == (i, j) else z for b in range(n)) for a in range(n)), n)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence[LaurentScalar]], nrows: int | None = None) -> Matrix:
        if not cols:
            return cls._raw(field, tuple(() for _ in range(nrows or 0)), 0)
        n = len(cols[0])
        return cls._raw(field, tuple(tuple(c[i] for c in cols) for i in range(n)))

    @classmethod
    def from_json(cls, field: Field, data) -> Matrix:
        return cls(field, [[scalar_from_json(field, x) for x in row] for row in data])

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.rows]

    # --- access ---------------------------------------------------------------
    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix._raw(self.field, tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def embed(self, n: int, positions: Sequence[int]) -> Matrix:
        """Place this square block at ``positions`` of an ``n x n`` zero matrix."""
        z = self.field.zero
        out = [[z] * n for _ in range(n)]
        for a, i in enumerate(positions):
            for b, j in enumerate(positions):
                out[i][j] = self.rows[a][b]
        return Matrix._raw(self.field, tuple(tuple(r) for r in out), n)

    # --- arithmetic -------------------------------------------------------------
    def __add__(self, other: Matrix) -> Matrix:
        return Matrix._raw(self.field, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        return Matrix._raw(self.field, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix._raw(self.field, tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> Matrix:
        c = self.field.coerce(c)
        return Matrix._raw(self.field, tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def shift(self, k: int) -> Matrix:
        return Matrix._raw(self.field, tuple(tuple(a.shift(k) for a in r) for r in self.rows), self.ncols)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        z = self.field.zero
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    if a.is_exact_zero or b.is_exact_zero:
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Matrix._raw(self.field, tuple(out), other.ncols)

    def apply(self, v: Sequence[LaurentScalar]) -> tuple:
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, v):
                if a.is_exact_zero or b.is_exact_zero:
                    continue
                acc = acc + a * b
            out.append(acc)
        return tuple(out)

    @property
    def T(self) -> Matrix:
        return Matrix._raw(self.field, tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def is_exact(self) -> bool:
        return all(x.is_exact for r in self.rows for x in r)

    def equals(self, other: Matrix) -> bool:
        """Certified mathematical equality."""
        return self.shape == other.shape and (self - other).is_zero()

    def inverse(self) -> Matrix:
        return inverse(self)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(repr(x) for x in r) for r in self.rows)
        return f"Matrix[{body}]"


def _pick_pivot(column_entries: Iterable[tuple[int, LaurentScalar]]):
    """Prefer exact monomials, then any determinate nonzero entry."""
    best = None
    saw_indeterminate = False
    for idx, x in column_entries:
        if x.coeffs:
            score = (0 if (x.prec is None and len(x.coeffs) == 1) else 1, 0 if x.prec is None else 1)
            if best is None or score < best[0]:
                best = (score, idx)
        elif x.prec is not None:
            saw_indeterminate = True
    return (None if best is None else best[1]), saw_indeterminate


def row_echelon(m: Matrix):
    """Reduced row echelon form over F; returns ``(rows, pivot_columns)``."""
    rows = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        if r >= len(rows):
            break
        idx, indeterminate = _pick_pivot((i, rows[i][c]) for i in range(r, len(rows)))
        if idx is None:
            if indeterminate:
                raise PrecisionExhausted(f"column {c}: pivot cannot be certified")
            continue
        rows[r], rows[idx] = rows[idx], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_exact_zero:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                rows[i][c] = m.field.zero
        pivots.append(c)
        r += 1
    return rows, pivots


def _is_monomial(x: LaurentScalar) -> bool:
    return x.prec is None and len(x.coeffs) == 1


def row_echelon_ff(m: Matrix):
    """Reduced echelon form without series division.

    Rows are cleared by cross-multiplication ``p·row_i - a·row_r``; a pivot is
    normalised to 1 only when it is an exact monomial.  Exact input therefore
    stays exact and rank is certified.  Returns ``(rows, pivots)`` where pivot
    entries may be non-unit polynomials.
    """
    rows = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        if r >= len(rows):
            break
        idx, indeterminate = _pick_pivot((i, rows[i][c]) for i in range(r, len(rows)))
        if idx is None:
            if indeterminate:
                raise PrecisionExhausted(f"column {c}: pivot cannot be certified")
            continue
        rows[r], rows[idx] = rows[idx], rows[r]
        p = rows[r][c]
        if _is_monomial(p):
            inv = p.inverse()
            rows[r] = [x * inv for x in rows[r]]
            p = m.field.one
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_exact_zero:
                a = rows[i][c]
                rows[i] = [p * x - a * y for x, y in zip(rows[i], rows[r])]
                rows[i][c] = m.field.zero
        pivots.append(c)
        r += 1
    return rows, pivots


def nullspace(m: Matrix) -> list[tuple]:
    """A basis of ``{v : m v = 0}`` over F (exact for exact input)."""
    rows, pivots = row_echelon_ff(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    f = m.field
    basis = []
    for fc in free:
        used = [k for k, pc in enumerate(pivots) if not rows[k][fc].is_exact_zero]
        heads = {k: rows[k][pivots[k]] for k in used}
        v = [f.zero] * m.ncols
        scale = f.one
        for k in used:
            if heads[k] != f.one:
                scale = scale * heads[k]
        v[fc] = scale
        for k in used:
            others = f.one
            for k2 in used:
                if k2 != k and heads[k2] != f.one:
                    others = others * heads[k2]
            v[pivots[k]] = -(rows[k][fc] * others)
        basis.append(tuple(v))
    return basis


def rank(m: Matrix) -> int:
    return len(row_echelon_ff(m)[1])


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    f = m.field
    aug = Matrix._raw(f, tuple(r + Matrix.identity(f, n).rows[i] for i, r in enumerate(m.rows)), 2 * n)
    rows, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise RankDeficient("matrix is singular")
    return Matrix._raw(f, tuple(tuple(r[n:]) for r in rows[:n]), n)


def vec(m: Matrix) -> tuple:
    """Row-major flattening, the coordinates of End(V) used for matrix lattices."""
    return tuple(x for r in m.rows for x in r)


def unvec(field: Field, v: Sequence[LaurentScalar], n: int) -> Matrix:
    return Matrix._raw(field, tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n)), n)
