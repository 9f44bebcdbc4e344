"""ε-hermitian spaces in Witt-decomposed coordinates and the adjoint involution.

Basis order is ``e_1, ..., e_r, e_{-r}, ..., e_{-1}, e_{(0,1)}, ..., e_{(0,n-2r)}``.
The Gram matrix pairs ``e_i`` with ``e_{-i}`` (value 1 above the anti-diagonal
block, ε below it) and carries the unit diagonal ``D`` on the anisotropic
part.  Only involutions of the first kind are modelled: σ₀ is the identity on
F, so ``σ(A) = J⁻¹ Aᵀ J``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BadWittData
from .laurent import Field, LaurentScalar
from .matrix import Matrix


@dataclass(frozen=True, order=True)
class WittIndex:
    """``kind`` is ``"h"`` (hyperbolic, ``k`` in ±1..±r) or ``"a"`` (anisotropic, ``k >= 1``)."""

    kind: str
    k: int

    def partner(self) -> WittIndex:
        return WittIndex("h", -self.k) if self.kind == "h" else self

    @property
    def is_positive(self) -> bool:
        return self.kind == "h" and self.k > 0

    def __str__(self):
        return str(self.k) if self.kind == "h" else f"(0,{self.k})"


@dataclass(frozen=True)
class UnitImage:
    """Shape of ``σ(E_{i,j})``: ``fixed``, ``antifixed`` or ``swapped`` onto ``lam·E_{k,l}``."""

    kind: str
    k: int
    l: int
    lam: LaurentScalar


class HermitianSpace:
    """An ε-hermitian space with a Witt basis (possibly a coordinate subspace of one)."""

    def __init__(self, field: Field, labels: Sequence[WittIndex], epsilon: int, gram: Matrix):
        self.field = field
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.epsilon = epsilon
        self.gram = gram
        self.gram_inv = gram.inverse()
        self._pos = {lab: p for p, lab in enumerate(self.labels)}
        self._unit_cache: dict = {}

    @property
    def witt_rank(self) -> int:
        return sum(1 for lab in self.labels if lab.is_positive)

    @property
    def anisotropic_units(self) -> tuple:
        return tuple(self.gram[p, p] for p, lab in enumerate(self.labels) if lab.kind == "a")

    def position(self, label: WittIndex) -> int:
        return self._pos[label]

    def partner_position(self, p: int) -> int:
        return self._pos[self.labels[p].partner()]

    def positive_positions(self) -> list[int]:
        return [p for p, lab in enumerate(self.labels) if lab.is_positive]

    def restrict(self, positions: Sequence[int]) -> HermitianSpace:
        """The coordinate subspace spanned by ``positions`` (must be partner-closed)."""
        positions = list(positions)
        if {self.partner_position(p) for p in positions} != set(positions):
            raise BadWittData("restriction must contain whole hyperbolic pairs")
        return HermitianSpace(self.field, [self.labels[p] for p in positions], self.epsilon,
                              self.gram.submatrix(positions, positions))

    def is_hyperbolic_plane(self) -> bool:
        return self.n == 2 and self.witt_rank == 1

    # --- the involution ---------------------------------------------------------
    def sigma(self, A: Matrix) -> Matrix:
        return self.gram_inv @ A.T @ self.gram

    def form(self, v, w) -> LaurentScalar:
        return _dot(v, self.gram.apply(w), self.field)

    def unit_image(self, i: int, j: int) -> UnitImage:
        hit = self._unit_cache.get((i, j))
        if hit is None:
            img = self.sigma(Matrix.unit(self.field, self.n, i, j))
            support = [(a, b) for a in range(self.n) for b in range(self.n) if not img[a, b].is_zero()]
            if len(support) != 1:
                raise BadWittData("Gram matrix is not monomial")
            k, l = support[0]
            lam = img[k, l]
            if (k, l) == (i, j) and lam == self.field.one:
                kind = "fixed"
            elif (k, l) == (i, j) and lam == -self.field.one:
                kind = "antifixed"
            else:
                kind = "swapped"
            hit = UnitImage(kind, k, l, lam)
            self._unit_cache[(i, j)] = hit
        return hit

    def skew_project(self, A: Matrix) -> Matrix:
        half = self.field.scalar(pow(2, self.field.q - 2, self.field.q))
        return (A - self.sigma(A)).scale(half)

    def skew_basis(self) -> list[Matrix]:
        """One skew-projected matrix unit per non-fixed σ-orbit of units."""
        seen = set()
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if (i, j) in seen:
                    continue
                img = self.unit_image(i, j)
                seen.add((i, j))
                seen.add((img.k, img.l))
                if img.kind == "fixed":
                    continue
                out.append(self.skew_project(Matrix.unit(self.field, self.n, i, j)))
        return out

    def __repr__(self):
        return f"HermitianSpace(n={self.n}, r={self.witt_rank}, epsilon={self.epsilon:+d})"


def _dot(v, w, field):
    acc = field.zero
    for a, b in zip(v, w):
        if a.is_exact_zero or b.is_exact_zero:
            continue
        acc = acc + a * b
    return acc


def witt_labels(n: int, r: int) -> list[WittIndex]:
    return ([WittIndex("h", i) for i in range(1, r + 1)]
            + [WittIndex("h", -i) for i in range(r, 0, -1)]
            + [WittIndex("a", k) for k in range(1, n - 2 * r + 1)])


def make_witt_space(field: Field, n: int, r: int, epsilon: int, D: Sequence = ()) -> HermitianSpace:
    """Assemble the block Gram matrix ``[[0, M, 0], [εM, 0, 0], [0, 0, D]]``."""
    D = [field.coerce(d) for d in D]
    if epsilon not in (1, -1):
        raise BadWittData("epsilon must be +1 or -1")
    if r < 0 or n - 2 * r != len(D):
        raise BadWittData(f"n - 2r = {n - 2 * r} but {len(D)} anisotropic units given")
    if epsilon == -1 and D:
        raise BadWittData("alternating forms have no anisotropic part")
    for d in D:
        if d.valuation() != 0:
            raise BadWittData(f"anisotropic entry {d!r} is not a unit")
    z = field.zero
    J = [[z] * n for _ in range(n)]
    for i in range(r):
        J[i][2 * r - 1 - i] = field.one
        J[2 * r - 1 - i][i] = field.scalar(epsilon)
    for k, d in enumerate(D):
        J[2 * r + k][2 * r + k] = d
    return HermitianSpace(field, witt_labels(n, r), epsilon, Matrix(field, J))


def apply_involution(space: HermitianSpace, A: Matrix) -> Matrix:
    return space.sigma(A)


def involution_on_unit(space: HermitianSpace, i: int, j: int) -> UnitImage:
    return space.unit_image(i, j)


def skew_project(space: HermitianSpace, A: Matrix) -> Matrix:
    return space.skew_project(A)


def form_value(space: HermitianSpace, v, w) -> LaurentScalar:
    return space.form(v, w)


def block_involution(space: HermitianSpace, A: Matrix) -> Matrix:
    """σ evaluated through the 3×3 block closed form (independent of ``J⁻¹AᵀJ``).

    Only valid on spaces built by :func:`make_witt_space` with the anisotropic
    diagonal ``D``.
    """
    f = space.field
    r = space.witt_rank
    n = space.n
    eps = f.scalar(space.epsilon)
    D = list(space.anisotropic_units)
    Dinv = [d.inverse() for d in D]
    a = A.rows
    z = f.zero
    out = [[z] * n for _ in range(n)]

    def rev(i):  # index reflection inside an r-block
        return r - 1 - i

    for i in range(r):
        for j in range(r):
            # tilde(B)_{ij} = B_{r-1-j, r-1-i}
            out[i][j] = a[r + rev(j)][r + rev(i)]                 # Ã22
            out[i][r + j] = eps * a[rev(j)][r + rev(i)]           # ε Ã12
            out[r + i][j] = eps * a[r + rev(j)][rev(i)]           # ε Ã21
            out[r + i][r + j] = a[rev(j)][rev(i)]                 # Ã11
    m = n - 2 * r
    for i in range(r):
        for k in range(m):
            # (M A32^T D)_{ik} = A32^T_{r-1-i, k} D_k = A[2r+k][r + r-1-i] D_k
            out[i][2 * r + k] = eps * a[2 * r + k][r + rev(i)] * D[k]
            out[r + i][2 * r + k] = a[2 * r + k][rev(i)] * D[k]
            # (D^{-1} A23^T M)_{k i} = D_k^{-1} A23^T_{k, r-1-i} = D_k^{-1} A[r + r-1-i][2r+k]
            out[2 * r + k][i] = eps * Dinv[k] * a[r + rev(i)][2 * r + k]
            out[2 * r + k][r + i] = Dinv[k] * a[rev(i)][2 * r + k]
    for k in range(m):
        for l in range(m):
            out[2 * r + k][2 * r + l] = Dinv[k] * a[2 * r + l][2 * r + k] * D[l]
    return Matrix(f, out)
