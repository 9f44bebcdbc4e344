"""Full-rank o_F-lattices in F^n and Smith reduction over o_F = GF(q)[[t]].

A lattice is stored by its canonical basis: a lower-triangular matrix whose
column ``i`` has ``t**d_i`` on the diagonal, zeros above it, and below it
entries ``(k, i)`` reduced to Laurent polynomials of degree ``< d_k``.  This
representative is unique, is always exact, and has an exact inverse, so
equality of lattices is equality of canonical keys.
"""

from __future__ import annotations

from typing import Sequence

from .errors import PrecisionExhausted, RankDeficient
from .laurent import INFINITY, Field, LaurentScalar
from .matrix import Matrix


def _hermite(field: Field, n: int, generators: Sequence[Sequence[LaurentScalar]]):
    remaining = [list(c) for c in generators]
    basis: list[list[LaurentScalar]] = []
    diag: list[int] = []
    zero = field.zero
    for i in range(n):
        best = None
        best_score = None
        floor = INFINITY
        for idx, c in enumerate(remaining):
            x = c[i]
            if x.coeffs:
                score = (x.val, 0 if (x.prec is None and len(x.coeffs) == 1) else 1)
                if best is None or score < best_score:
                    best, best_score = idx, score
            elif x.prec is not None:
                floor = min(floor, x.prec)
        if best is None:
            if floor < INFINITY:
                raise PrecisionExhausted(f"row {i}: no certified pivot")
            raise RankDeficient(f"generators do not span F^{n} (row {i})")
        v = best_score[0]
        if floor <= v:
            raise PrecisionExhausted(f"row {i}: pivot t^{v} not certified minimal")
        p = remaining.pop(best)
        u = p[i].unit_part()
        if not (u.prec is None and u.coeffs == (1,)):
            uinv = u.inverse()
            p = [x if x.is_exact_zero else x * uinv for x in p]
        p[i] = field.t(v)
        for c in remaining:
            x = c[i]
            if x.is_exact_zero:
                continue
            f = x.shift(-v)
            for k in range(i + 1, n):
                b = p[k]
                if not b.is_exact_zero:
                    c[k] = c[k] - f * b
            c[i] = zero
        basis.append(p)
        diag.append(v)
    for i in range(n):
        col = basis[i]
        for k in range(i + 1, n):
            x = col[k]
            if x.is_exact_zero:
                continue
            low = x.truncate_below(diag[k])
            f = (x - low).shift(-diag[k])
            if f.coeffs or not f.is_exact:
                bk = basis[k]
                for r in range(k + 1, n):
                    if not bk[r].is_exact_zero:
                        col[r] = col[r] - f * bk[r]
            col[k] = low
    return tuple(diag), basis


class Lattice:
    """A full-rank o_F-submodule of F^n, held in canonical form."""

    __slots__ = ("field", "n", "diag", "_cols", "_key", "_inv")

    def __init__(self, field: Field, n: int, diag, cols):
        self.field = field
        self.n = n
        self.diag = tuple(diag)
        self._cols = tuple(tuple(c) for c in cols)
        self._key = None
        self._inv = None

    @classmethod
    def from_generators(cls, field: Field, n: int, generators: Sequence[Sequence[LaurentScalar]]) -> Lattice:
        diag, cols = _hermite(field, n, generators)
        return cls(field, n, diag, cols)

    @classmethod
    def from_basis(cls, basis: Matrix) -> Lattice:
        return cls.from_generators(basis.field, basis.nrows, basis.columns())

    @classmethod
    def diagonal(cls, field: Field, exps: Sequence[int]) -> Lattice:
        """``⊕ t^{exps[k]} o e_k``."""
        n = len(exps)
        z = field.zero
        cols = [[field.t(e) if r == k else z for r in range(n)] for k, e in enumerate(exps)]
        return cls(field, n, exps, cols)

    @classmethod
    def standard(cls, field: Field, n: int) -> Lattice:
        return cls.diagonal(field, [0] * n)

    # --- canonical data -----------------------------------------------------------
    @property
    def basis(self) -> Matrix:
        return Matrix.from_columns(self.field, self._cols)

    def columns(self):
        return self._cols

    def key(self):
        if self._key is None:
            entries = tuple(
                (k, i, self._cols[i][k].key())
                for i in range(self.n)
                for k in range(i + 1, self.n)
                if not self._cols[i][k].is_exact_zero
            )
            self._key = (self.n, self.diag, entries)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Lattice(n={self.n}, diag={self.diag})"

    def det_valuation(self) -> int:
        return sum(self.diag)

    def is_diagonal(self) -> bool:
        return not self.key()[2]

    # --- linear algebra -------------------------------------------------------------
    def basis_inverse(self) -> Matrix:
        """Exact inverse of the canonical basis (lower triangular, monomial diagonal)."""
        if self._inv is None:
            n = self.n
            f = self.field
            z = f.zero
            B = self._cols  # B[col][row]
            X = [[z] * n for _ in range(n)]
            for j in range(n):
                X[j][j] = f.t(-self.diag[j])
                for i in range(j + 1, n):
                    acc = z
                    for k in range(j, i):
                        b = B[k][i]
                        if b.is_exact_zero or X[k][j].is_exact_zero:
                            continue
                        acc = acc + b * X[k][j]
                    X[i][j] = (-acc).shift(-self.diag[i])
            self._inv = Matrix(f, X)
        return self._inv

    def coordinates(self, v: Sequence[LaurentScalar]) -> list[LaurentScalar]:
        """Solve ``basis · x = v`` by forward substitution."""
        n = self.n
        x = []
        for i in range(n):
            acc = v[i]
            for j in range(i):
                b = self._cols[j][i]
                if b.is_exact_zero or x[j].is_exact_zero:
                    continue
                acc = acc - b * x[j]
            x.append(acc.shift(-self.diag[i]))
        return x

    def contains(self, v: Sequence[LaurentScalar]) -> bool:
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        return all(c.val_at_least(0) for c in self.coordinates(v))

    def contains_lattice(self, other: Lattice) -> bool:
        return all(self.contains(c) for c in other.columns())

    def std_dual(self) -> Lattice:
        """``{w : w^T L ⊆ o}``, the dual for the standard bilinear pairing."""
        return Lattice.from_basis(self.basis_inverse().T)

    def shift(self, k: int) -> Lattice:
        """``t^k · L``."""
        if k == 0:
            return self
        return Lattice(self.field, self.n, [d + k for d in self.diag],
                       [[x.shift(k) for x in c] for c in self._cols])

    def image(self, g: Matrix) -> Lattice:
        """``g · L`` for an invertible ``g``."""
        return Lattice.from_basis(g @ self.basis)

    def __add__(self, other: Lattice) -> Lattice:
        return lattice_sum(self, other)

    def __and__(self, other: Lattice) -> Lattice:
        return lattice_intersect(self, other)


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    if L1.n != L2.n:
        raise ValueError("ambient dimensions differ")
    return Lattice.from_generators(L1.field, L1.n, list(L1.columns()) + list(L2.columns()))


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    if L1.n != L2.n:
        raise ValueError("ambient dimensions differ")
    return lattice_sum(L1.std_dual(), L2.std_dual()).std_dual()


def lattice_contains(L: Lattice, v) -> bool:
    return L.contains(v)


def preimage_of_standard(M: Matrix) -> Lattice:
    """``{w in F^d : M w ∈ o^m}`` for ``M`` of full column rank ``d``."""
    rows = [r for r in M.rows if not all(x.is_exact_zero for x in r)]
    try:
        gen = Lattice.from_generators(M.field, M.ncols, rows)
    except RankDeficient as exc:
        raise RankDeficient("map is not injective on the subspace") from exc
    return gen.std_dual()


def subspace_lattice_intersect(L: Lattice, S: Matrix) -> Lattice:
    """``{w : S·w ∈ L}`` in the coordinates given by the columns of ``S``."""
    if S.nrows != L.n:
        raise ValueError("dimension mismatch")
    return preimage_of_standard(L.basis_inverse() @ S)


def smith_reduce(m: Matrix):
    """Smith form over o_F of a matrix with full column rank.

    Returns ``(d, U, W)`` with ``U @ m @ W`` equal to the ``t**d_k`` diagonal
    (padded with zero rows), ``d`` non-decreasing, ``U`` and ``W`` in GL(o_F).
    """
    f = m.field
    r, c = m.shape
    A = [list(row) for row in m.rows]
    U = [list(row) for row in Matrix.identity(f, r).rows]
    W = [list(row) for row in Matrix.identity(f, c).rows]
    d = []
    for k in range(c):
        best = None
        floor = INFINITY
        for i in range(k, r):
            for j in range(k, c):
                x = A[i][j]
                if x.coeffs:
                    if best is None or x.val < best[0]:
                        best = (x.val, i, j)
                elif x.prec is not None:
                    floor = min(floor, x.prec)
        if best is None:
            if floor < INFINITY:
                raise PrecisionExhausted("Smith pivot cannot be certified")
            raise RankDeficient("matrix does not have full column rank")
        v, pi, pj = best
        if floor <= v:
            raise PrecisionExhausted("Smith pivot not certified minimal")
        A[k], A[pi] = A[pi], A[k]
        U[k], U[pi] = U[pi], U[k]
        for row in A:
            row[k], row[pj] = row[pj], row[k]
        for row in W:
            row[k], row[pj] = row[pj], row[k]
        uinv = A[k][k].unit_part().inverse()
        A[k] = [x * uinv for x in A[k]]
        U[k] = [x * uinv for x in U[k]]
        A[k][k] = f.t(v)
        for i in range(k + 1, r):
            x = A[i][k]
            if x.is_exact_zero:
                continue
            fac = x.shift(-v)
            A[i] = [a - fac * b for a, b in zip(A[i], A[k])]
            U[i] = [a - fac * b for a, b in zip(U[i], U[k])]
            A[i][k] = f.zero
        for j in range(k + 1, c):
            x = A[k][j]
            if x.is_exact_zero:
                continue
            fac = x.shift(-v)
            for row in A:
                row[j] = row[j] - fac * row[k]
            for row in W:
                row[j] = row[j] - fac * row[k]
            A[k][j] = f.zero
        d.append(v)
    return d, Matrix(f, U), Matrix(f, W)
