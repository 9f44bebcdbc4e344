"""Square lattice functions, Lie-algebra filtrations and the extension predicate.

Matrix lattices live in F^{n²} with row-major coordinates.  Filtrations of a
subspace of End(V) spanned by matrices ``A_1, ..., A_d`` are returned as
lattices in F^d (coordinates with respect to that spanning list), which is
how 𝔥_x and 𝔤_y ∩ 𝔥 are compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .beta import BetaDatum, h_subspace_basis
from .errors import DoesNotSplit, NotSelfDual
from .hermitian import HermitianSpace
from .lattice import Lattice, lattice_intersect, preimage_of_standard
from .lattice_functions import LatticeFunction, eval_fn, frac, is_self_dual, restrict
from .matrix import Matrix, vec


def exponent_matrix(fn: LatticeFunction, s) -> list[list[int]]:
    """``⌈s + α_j - α_i⌉``, the exponents of the split square lattice function."""
    s = frac(s)
    a = fn.alpha
    return [[math.ceil(s + a[j] - a[i]) for j in range(fn.dim)] for i in range(fn.dim)]


def square_jumps(fn: LatticeFunction) -> set:
    out = set()
    for x in fn.alpha:
        for y in fn.alpha:
            d = x - y
            out.add(d - math.floor(d))
    return out


def _conj(fn: LatticeFunction, A: Matrix) -> Matrix:
    if fn.transform is None:
        return A
    return fn.g_inv() @ A @ fn.transform


@lru_cache(maxsize=200_000)
def endo_preimage(fn: LatticeFunction, s, mats: tuple) -> Lattice:
    """``{w ∈ F^d : Σ w_k A_k ∈ 𝔤̃_{fn,s}}`` for linearly independent ``A_k``."""
    exps = exponent_matrix(fn, s)
    n = fn.dim
    conj = [_conj(fn, A) for A in mats]
    rows = [[C[i, j].shift(-exps[i][j]) for C in conj] for i in range(n) for j in range(n)]
    return preimage_of_standard(Matrix(fn.field, rows))


def endo_in_filtration(fn: LatticeFunction, s, A: Matrix) -> bool:
    exps = exponent_matrix(fn, s)
    C = _conj(fn, A)
    return all(C[i, j].val_at_least(exps[i][j]) for i in range(fn.dim) for j in range(fn.dim))


def square_filtration(fn: LatticeFunction, s) -> Lattice:
    """``𝔤̃_{fn,s} = g (⊕ 𝔭^{⌈s+α_j-α_i⌉} E_{i,j}) g⁻¹`` as a lattice in F^{n²}."""
    exps = exponent_matrix(fn, s)
    n = fn.dim
    f = fn.field
    if fn.transform is None:
        return Lattice.diagonal(f, [exps[i][j] for i in range(n) for j in range(n)])
    g, gi = fn.transform, fn.g_inv()
    gens = [vec(g @ Matrix.unit(f, n, i, j, f.t(exps[i][j])) @ gi) for i in range(n) for j in range(n)]
    return Lattice.from_generators(f, n * n, gens)


def hom_lattice(L1: Lattice, L2: Lattice) -> Lattice:
    """``Hom_o(L1, L2) = {a : a L1 ⊆ L2}`` in F^{n²}."""
    f = L1.field
    n = L1.n
    B1i = L1.basis_inverse()
    B2 = L2.basis
    gens = [vec(B2 @ Matrix.unit(f, n, i, j) @ B1i) for i in range(n) for j in range(n)]
    return Lattice.from_generators(f, n * n, gens)


def square_filtration_by_hom(fn: LatticeFunction, s) -> Lattice:
    """Definition route: ``∩_r Hom(Λ_r, Λ_{r+s})`` over one period of ``r``."""
    s = frac(s)
    rs = set()
    for a in fn.alpha:
        for b in (a, a - s):
            rs.add(b - math.floor(b))
    out = None
    for r in sorted(rs):
        H = hom_lattice(eval_fn(fn, r), eval_fn(fn, r + s))
        out = H if out is None else lattice_intersect(out, H)
    return out


def lie_filtration_g(space: HermitianSpace, y: LatticeFunction, s, basis: Sequence[Matrix] | None = None) -> Lattice:
    """𝔤_{y,s} in the coordinates of ``space.skew_basis()`` (or a given basis)."""
    if not is_self_dual(space, y):
        raise NotSelfDual("𝔤_y needs a self-dual lattice function")
    return endo_preimage(y, frac(s), tuple(basis or space.skew_basis()))


# --- 𝔥 side ---------------------------------------------------------------------

def _direct_sum(field, blocks: Sequence[Lattice]) -> Lattice:
    d = sum(b.n for b in blocks)
    gens = []
    off = 0
    z = field.zero
    for b in blocks:
        for col in b.columns():
            v = [z] * d
            v[off:off + b.n] = col
            gens.append(v)
        off += b.n
    return Lattice.from_generators(field, d, gens)


def h_filtration(datum: BetaDatum, x: Mapping[int, LatticeFunction], s) -> Lattice:
    """𝔥_{x,s} = ⊕ 𝔥_{x_i,s}, computed from the component points alone."""
    s = frac(s)
    blocks = [endo_preimage(x[i], s, tuple(datum.component_basis(i))) for i in datum.h_indices]
    return _direct_sum(datum.field, blocks)


def _h_basis(datum: BetaDatum) -> tuple:
    key = "_h_basis"
    if key not in datum._bases:
        datum._bases[key] = tuple(h_subspace_basis(datum))
    return datum._bases[key]


def g_cap_h(datum: BetaDatum, y: LatticeFunction, s) -> Lattice:
    """The preimage of 𝔤_{y,s} under the embedding of 𝔥 (an intersection inside 𝔤)."""
    return endo_preimage(y, frac(s), _h_basis(datum))


@dataclass
class ExtensionCheck:
    holds: bool
    witness: Fraction | None = None
    points: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.holds


def extension_breakpoints(y: LatticeFunction, x: Mapping[int, LatticeFunction]) -> list:
    pts = square_jumps(y)
    for fn in x.values():
        pts |= square_jumps(fn)
    return sorted(pts)


def is_extension(datum: BetaDatum, y: LatticeFunction, x: Mapping[int, LatticeFunction]) -> ExtensionCheck:
    """``𝔥_x = 𝔤_y ∩ 𝔥`` at every jump of either side in one period."""
    pts = extension_breakpoints(y, x)
    for s in pts:
        if h_filtration(datum, x, s) != g_cap_h(datum, y, s):
            return ExtensionCheck(False, s, pts)
    return ExtensionCheck(True, None, pts)


def idempotents_in_order(datum: BetaDatum, y: LatticeFunction) -> bool:
    """All ``1^i`` lie in the hereditary order 𝔤̃_{y,0}."""
    return all(endo_in_filtration(y, 0, P) for P in datum.idempotents)


def component_restrict(datum: BetaDatum, y: LatticeFunction) -> dict:
    """``y_i(s) = Λ_s ∩ V_i`` for every component (J₋ pieces included)."""
    if not idempotents_in_order(datum, y):
        raise DoesNotSplit("lattice function does not split under V = ⊕ V_i")
    return {c.index: restrict(y, c.positions) for c in datum.components}


def check_componentwise(datum: BetaDatum, y: LatticeFunction, x: Mapping[int, LatticeFunction]) -> bool:
    """``𝔥_{x_i} = 𝔤_{y_i} ∩ 𝔥_i`` for every i in J_{0,+}; False if y does not split."""
    try:
        ys = component_restrict(datum, y)
    except DoesNotSplit:
        return False
    for i in datum.h_indices:
        mats = tuple(datum.component_basis(i))
        pts = sorted(square_jumps(ys[i]) | square_jumps(x[i]))
        for s in pts:
            if endo_preimage(x[i], s, mats) != endo_preimage(ys[i], s, mats):
                return False
    return True


# --- difference recovery (instrumented run of the E = F argument) ------------------

@dataclass
class DifferenceReport:
    direct: dict
    recovered: dict
    undetermined: list
    fixed_units: list


def recover_differences(space: HermitianSpace, y: LatticeFunction) -> DifferenceReport:
    """Read ``α_j - α_i`` off 𝔤_y ∩ F(E_{i,j} - σ(E_{i,j})) for every non-fixed unit.

    Pairs whose unit is σ-fixed are then recovered, when possible, as
    ``(α_k - α_i) + (α_j - α_k)`` through a third index ``k``.
    """
    f = space.field
    n = space.n
    pts = sorted(square_jumps(y))
    direct = {}
    fixed = []
    for i in range(n):
        for j in range(n):
            img = space.unit_image(i, j)
            if img.kind == "fixed":
                fixed.append((i, j))
                continue
            X = Matrix.unit(f, n, i, j) - space.sigma(Matrix.unit(f, n, i, j))
            direct[(i, j)] = min(endo_preimage(y, c, (X,)).diag[0] - c for c in pts)
    recovered = {}
    undetermined = []
    for (i, j) in fixed:
        for k in range(n):
            if (i, k) in direct and (k, j) in direct:
                recovered[(i, j)] = (k, direct[(i, k)] + direct[(k, j)])
                break
        else:
            undetermined.append((i, j))
    return DifferenceReport(direct, recovered, undetermined, fixed)
