"""The skew element β, its component fields E_i and the embedding of 𝔥 into 𝔤.

Scenario data supplies the factorization of the minimal polynomial of β into
coprime factors, one per component; this module only verifies it.  The
idempotents ``1^i`` are produced from the factors by CRT interpolation and
must come out as coordinate projections in the Witt basis, so that every
``V_i = 1^i V`` is spanned by basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import (
    FactorizationMismatch,
    IndexOutOfRange,
    NotRepresentable,
    NotSkew,
    TwoZeroComponents,
    ZeroComponentInJ,
)
from .hermitian import HermitianSpace
from .lattice import Lattice
from .laurent import Field, LaurentScalar
from .matrix import Matrix, nullspace, unvec, vec


# --- polynomials over F, coefficient lists low -> high ---------------------------

def _trim(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def poly_mul(a, b, field: Field):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def poly_sub(a, b, field: Field):
    n = max(len(a), len(b))
    a = list(a) + [field.zero] * (n - len(a))
    b = list(b) + [field.zero] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def poly_divmod(a, b, field: Field):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = b[-1].inverse()
    q = [field.zero] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        c = r[-1] * lead_inv
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
        r = _trim(r[:-1])
    return _trim(q), r


def poly_inverse_mod(a, m, field: Field):
    """``s`` with ``s·a ≡ 1 (mod m)``; raises if not coprime."""
    r0, r1 = _trim(m), poly_divmod(a, m, field)[1]
    s0, s1 = [], [field.one]
    while r1:
        q, r = poly_divmod(r0, r1, field)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, field), field)
    if len(r0) != 1:
        raise FactorizationMismatch("component polynomials are not coprime")
    inv = r0[0].inverse()
    return poly_divmod([c * inv for c in s0], m, field)[1]


def poly_eval_matrix(p, A: Matrix) -> Matrix:
    """Horner evaluation ``p(A)``."""
    f = A.field
    n = A.nrows
    out = Matrix.zeros(f, n)
    for c in reversed(list(p)):
        out = out @ A + Matrix.identity(f, n).scale(c)
    return out


# --- the datum ----------------------------------------------------------------

@dataclass
class ComponentField:
    index: int
    min_poly: list
    e: int
    f: int
    positions: tuple
    block_beta: Matrix
    uniformizer: Matrix
    uniformizer_inv: Matrix
    unit_generator: Matrix | None = None
    h_gram: Matrix | None = None
    is_zero: bool = False

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def dim(self) -> int:
        return len(self.positions)

    @property
    def dim_over_E(self) -> int:
        return self.dim // self.degree

    def integral_generators(self) -> list[Matrix]:
        gens = [self.uniformizer]
        if self.unit_generator is not None:
            gens.append(self.unit_generator)
        return gens


@dataclass
class BetaDatum:
    """β with its component decomposition; the groups G, H, G_i, H_i are names only."""

    space: HermitianSpace
    beta: Matrix
    components: list[ComponentField]
    idempotents: list[Matrix]
    J0: list[int]
    Jplus: list[int]
    Jminus: list[int]
    pairing: dict
    has_gl1_factor: bool
    i0: int | None
    _bases: dict = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def h_indices(self) -> list[int]:
        """Indices of J_{0,+} in component order."""
        return sorted(self.J0 + self.Jplus)

    @property
    def translatable(self) -> list[int]:
        return sorted(self.Jplus + ([self.i0] if self.i0 is not None else []))

    def component(self, i: int) -> ComponentField:
        if not 0 <= i < len(self.components):
            raise IndexOutOfRange(f"no component {i}")
        return self.components[i]

    def component_space(self, i: int) -> HermitianSpace:
        """The restricted form on V_i (only meaningful for J₀ indices)."""
        return self.space.restrict(self.component(i).positions)

    def component_basis(self, i: int) -> list[Matrix]:
        """F-basis of 𝔥_i: skew E_i-linear endos of V_i (J₀) or all of End_{E_i}(V_i) (J₊)."""
        if i not in self._bases:
            self._bases[i] = _component_basis(self, i)
        return self._bases[i]

    def kind(self, i: int) -> str:
        if i in self.J0:
            return "J0"
        if i in self.Jplus:
            return "J+"
        if i in self.Jminus:
            return "J-"
        raise IndexOutOfRange(f"no component {i}")


def _commutator_rows(A_block: Matrix, m: int, field: Field):
    rows = []
    units = [Matrix.unit(field, m, a, b) for a in range(m) for b in range(m)]
    images = [vec(u @ A_block - A_block @ u) for u in units]
    for r in range(m * m):
        rows.append([img[r] for img in images])
    return rows


def _component_basis(datum: BetaDatum, i: int) -> list[Matrix]:
    comp = datum.component(i)
    f = datum.field
    m = comp.dim
    rows = _commutator_rows(comp.block_beta, m, f)
    if i in datum.J0:
        sub = datum.component_space(i)
        units = [Matrix.unit(f, m, a, b) for a in range(m) for b in range(m)]
        images = [vec(sub.sigma(u) + u) for u in units]
        rows += [[img[r] for img in images] for r in range(m * m)]
    elif i not in datum.Jplus:
        raise IndexOutOfRange(f"component {i} is not in J0 ∪ J+")
    return [unvec(f, v, m) for v in nullspace(Matrix(f, rows))]


def embed_component_endo(datum: BetaDatum, i: int, a: Matrix) -> Matrix:
    """Image of ``a ∈ End(V_i)`` in End(V): extension by zero, then ``a - a^σ`` on J₊."""
    comp = datum.component(i)
    ext = a.embed(datum.n, comp.positions)
    if i in datum.J0:
        return ext
    if i in datum.Jplus:
        return ext - datum.space.sigma(ext)
    raise IndexOutOfRange(f"component {i} is in J-; embed its J+ partner instead")


def h_subspace_basis(datum: BetaDatum) -> list[Matrix]:
    """F-basis of the embedded 𝔥 ⊆ End(V), concatenated over J_{0,+} in index order."""
    out = []
    for i in datum.h_indices:
        out += [embed_component_endo(datum, i, b) for b in datum.component_basis(i)]
    return out


def _diag_positions(P: Matrix):
    f = P.field
    n = P.nrows
    pos = []
    for a in range(n):
        for b in range(n):
            x = P[a, b]
            if a != b and not x.is_zero():
                return None
            if a == b and not x.is_zero():
                if not (x - f.one).is_zero():
                    return None
                pos.append(a)
    return tuple(pos)


def validate_beta(space: HermitianSpace, beta: Matrix, components: Sequence[dict],
                  has_gl1_factor: bool | None = None) -> BetaDatum:
    """Verify the decomposition of β and build idempotents and index classes.

    Each entry of ``components`` holds ``min_poly`` (list of scalars, low to
    high), ``e``, ``f`` and optionally ``uniformizer``, ``unit_generator``
    (matrices on V_i coordinates) and ``h_i``.
    """
    f = space.field
    n = space.n
    if beta.shape != (n, n):
        raise ValueError("beta has the wrong shape")
    if not (space.sigma(beta) + beta).is_zero():
        raise NotSkew("σ(β) ≠ -β")
    polys = [_trim([f.coerce(c) for c in comp["min_poly"]]) for comp in components]
    if not polys or any(len(p) < 2 for p in polys):
        raise FactorizationMismatch("every component needs a polynomial of degree >= 1")
    zero_polys = [i for i, p in enumerate(polys) if len(p) == 2 and p[0].is_zero()]
    if len(zero_polys) > 1:
        raise TwoZeroComponents(f"components {zero_polys} of β vanish")
    prod = [f.one]
    for p in polys:
        prod = poly_mul(prod, p, f)
    if not poly_eval_matrix(prod, beta).is_zero():
        raise FactorizationMismatch("product of component polynomials does not kill β")

    idempotents = []
    for i, p in enumerate(polys):
        rest = [f.one]
        for j, q in enumerate(polys):
            if j != i:
                rest = poly_mul(rest, q, f)
        s = poly_inverse_mod(rest, p, f)
        idempotents.append(poly_eval_matrix(poly_mul(s, rest, f), beta))

    ident = Matrix.identity(f, n)
    total = Matrix.zeros(f, n)
    for i, e in enumerate(idempotents):
        total = total + e
        if not (e @ beta - beta @ e).is_zero():
            raise FactorizationMismatch(f"1^{i} does not commute with β")
        for j, e2 in enumerate(idempotents):
            target = e if i == j else Matrix.zeros(f, n)
            if not (e @ e2 - target).is_zero():
                raise FactorizationMismatch("idempotents are not orthogonal")
        if e.is_zero():
            raise FactorizationMismatch(f"component {i} has V_{i} = 0")
    if not (total - ident).is_zero():
        raise FactorizationMismatch("idempotents do not sum to 1")

    # σ permutes the idempotents
    pairing = {}
    for i, e in enumerate(idempotents):
        se = space.sigma(e)
        hits = [j for j, e2 in enumerate(idempotents) if (se - e2).is_zero()]
        if len(hits) != 1:
            raise FactorizationMismatch(f"σ(1^{i}) is not an idempotent of the decomposition")
        pairing[i] = hits[0]
    J0 = [i for i in pairing if pairing[i] == i]
    Jplus = [i for i in pairing if pairing[i] > i]
    Jminus = [i for i in pairing if pairing[i] < i]

    comps = []
    zero_idx = []
    for i, (cdata, p, e) in enumerate(zip(components, polys, idempotents)):
        pos = _diag_positions(e)
        if pos is None:
            raise NotRepresentable(f"1^{i} is not a coordinate projection in the Witt basis")
        block = beta.submatrix(pos, pos)
        if not poly_eval_matrix(p, block).is_zero():
            raise FactorizationMismatch(f"component polynomial {i} does not kill β_{i}")
        is_zero = block.is_zero()
        if is_zero:
            zero_idx.append(i)
        deg = len(p) - 1
        ei, fi = int(cdata.get("e", 1)), int(cdata.get("f", 1))
        if ei * fi != deg:
            raise FactorizationMismatch(f"component {i}: e·f = {ei * fi} ≠ degree {deg}")
        if len(pos) % deg:
            raise FactorizationMismatch(f"component {i}: dim V_i not divisible by [E_i:F]")
        m = len(pos)
        unif = cdata.get("uniformizer")
        if unif is None:
            if ei != 1:
                raise FactorizationMismatch(f"component {i} is ramified; a uniformizer is required")
            unif = Matrix.identity(f, m).shift(1)
        if unif.shape != (m, m) or not (unif @ block - block @ unif).is_zero():
            raise FactorizationMismatch(f"component {i}: uniformizer must commute with β_{i}")
        if Lattice.from_basis(unif).det_valuation() * ei != m:
            raise FactorizationMismatch(f"component {i}: uniformizer does not have valuation 1/{ei}")
        ug = cdata.get("unit_generator")
        if ug is not None and not (ug @ block - block @ ug).is_zero():
            raise FactorizationMismatch(f"component {i}: unit generator must commute with β_{i}")
        if fi > 1 and ug is None:
            raise FactorizationMismatch(f"component {i}: residue degree {fi} needs a unit generator")
        comps.append(ComponentField(i, p, ei, fi, pos, block, unif, unif.inverse(), ug,
                                    cdata.get("h_i"), is_zero))

    if len(zero_idx) > 1:
        raise TwoZeroComponents(f"components {zero_idx} of β vanish")
    if zero_idx and zero_idx[0] not in J0:
        raise ZeroComponentInJ(f"zero component {zero_idx[0]} is swapped by σ")

    i0 = None
    for i in J0:
        c = comps[i]
        sub = space.restrict(c.positions)
        if c.degree == 1 and sub.is_hyperbolic_plane() and space.epsilon == 1:
            i0 = i
    gl1 = i0 is not None or any(comps[i].dim_over_E == 1 for i in Jplus)
    if has_gl1_factor is not None and bool(has_gl1_factor) != gl1:
        raise FactorizationMismatch(f"has_gl1_factor flag is {has_gl1_factor} but data say {gl1}")
    return BetaDatum(space, beta, comps, idempotents, J0, Jplus, Jminus, pairing, gl1, i0)
