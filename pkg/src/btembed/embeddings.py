"""The maps j and j_β, their inverse on the image, translations, and the
grid harnesses for uniqueness and for classifying compatible maps.

A point of the building of H is a dict ``{i: LatticeFunction}`` over the
indices of J_{0,+}; each function lives on the coordinates of V_i.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .beta import BetaDatum
from .errors import (
    BadComponentPoint,
    DoesNotSplit,
    GridMissesJBeta,
    InvalidTranslation,
    NotAffine,
    NotATranslation,
    NotCompatibleSample,
    NotInImage,
    NotPositiveIndex,
    NotProductDecomposable,
    NotRepresentable,
    OutputNotSelfDual,
)
from .filtrations import component_restrict, is_extension
from .hermitian import HermitianSpace
from .lattice_functions import (
    LatticeFunction,
    as_split,
    direct_sum,
    dual_fn,
    frac,
    is_oE_component,
    is_oE_function,
    is_self_dual,
    offset_between,
    restrict,
    same_function,
    split,
    translate,
)
from .matrix import Matrix
from .rigidity import equivariant_translation

HPoint = Mapping[int, LatticeFunction]


# --- j and j_β ---------------------------------------------------------------------

def sharp_dual(datum: BetaDatum, i: int, fn: LatticeFunction) -> LatticeFunction:
    """``Λ_i^{#_i}`` on V_{-i}: the h-pairing dual of a function on V_i."""
    if i not in datum.Jplus:
        raise NotPositiveIndex(f"component {i} is not in J+")
    f = datum.field
    n = datum.n
    pos = datum.component(i).positions
    rest = [p for p in range(n) if p not in pos]
    filler = split(f, [0] * len(rest))
    full = direct_sum(f, n, [(pos, fn), (rest, filler)])
    return restrict(dual_fn(datum.space, full), datum.component(datum.pairing[i]).positions)


def check_h_point(datum: BetaDatum, x: HPoint) -> None:
    if sorted(x) != datum.h_indices:
        raise BadComponentPoint(f"expected components {datum.h_indices}, got {sorted(x)}")
    for i in datum.h_indices:
        comp = datum.component(i)
        fn = x[i]
        if fn.dim != comp.dim:
            raise BadComponentPoint(f"component {i}: dimension {fn.dim} ≠ {comp.dim}")
        if i in datum.J0 and not is_self_dual(datum.component_space(i), fn):
            raise BadComponentPoint(f"component {i}: not self-dual on V_{i}")
        if not is_oE_component(comp, fn):
            raise BadComponentPoint(f"component {i}: not an o_E-lattice function")


def assemble_j(datum: BetaDatum, ys: HPoint) -> LatticeFunction:
    """``(Λ_i) ↦ Σ_{J_{0,+}} Λ_i + Σ_{J₊} Λ_i^{#_i}``."""
    if sorted(ys) != datum.h_indices:
        raise BadComponentPoint(f"expected components {datum.h_indices}, got {sorted(ys)}")
    parts = []
    for i in datum.h_indices:
        parts.append((datum.component(i).positions, ys[i]))
        if i in datum.Jplus:
            parts.append((datum.component(datum.pairing[i]).positions, sharp_dual(datum, i, ys[i])))
    y = direct_sum(datum.field, datum.n, parts)
    if not is_self_dual(datum.space, y):
        raise OutputNotSelfDual("assembled lattice function is not self-dual")
    return y


def j_beta(datum: BetaDatum, x: HPoint) -> LatticeFunction:
    """Forget the o_E-structure of each component, then apply j."""
    check_h_point(datum, x)
    return assemble_j(datum, x)


def factorize(datum: BetaDatum, y: LatticeFunction) -> dict:
    """The unique ``τ(y)`` with ``j(τ(y)) = y``; raises NotInImage off the image of j_β."""
    try:
        parts = component_restrict(datum, y)
    except (DoesNotSplit, NotRepresentable) as exc:
        raise NotInImage(str(exc)) from exc
    ys = {i: parts[i] for i in datum.h_indices}
    try:
        check_h_point(datum, ys)
    except BadComponentPoint as exc:
        raise NotInImage(str(exc)) from exc
    if not same_function(assemble_j(datum, ys), y):
        raise NotInImage("J- components are not the sharp duals of the J+ components")
    return ys


def is_E_fixed(datum: BetaDatum, y: LatticeFunction) -> bool:
    return is_oE_function(datum, y).holds


# --- translations -----------------------------------------------------------------------

@dataclass(frozen=True)
class Translation:
    shifts: tuple = ()  # sorted (index, Fraction) pairs with nonzero shift

    @classmethod
    def of(cls, shifts: Mapping[int, object] | None = None) -> Translation:
        items = {int(i): frac(s) for i, s in (shifts or {}).items()}
        return cls(tuple(sorted((i, s) for i, s in items.items() if s != 0)))

    def get(self, i: int) -> Fraction:
        return dict(self.shifts).get(i, Fraction(0))

    def is_identity(self) -> bool:
        return not self.shifts

    def validate(self, datum: BetaDatum) -> None:
        for i, _ in self.shifts:
            if i not in datum.translatable:
                raise InvalidTranslation(f"component {i} admits no translation")

    def to_json(self) -> dict:
        return {str(i): f"{s.numerator}/{s.denominator}" for i, s in self.shifts}


def _o2_positive_slot(datum: BetaDatum, i: int) -> int:
    sub = datum.component_space(i)
    return sub.positive_positions()[0]


def so2_parameter(datum: BetaDatum, i: int, fn: LatticeFunction) -> Fraction:
    """The coordinate ``α`` of ``fn = Λ^α`` on the O₂-type component."""
    s = as_split(fn)
    if s is None:
        raise NotRepresentable("O2-type component outside its apartment")
    return s.alpha[_o2_positive_slot(datum, i)]


def so2_shift(datum: BetaDatum, i: int, fn: LatticeFunction, shift) -> LatticeFunction:
    """``Λ^α ↦ Λ^{α+s′}``."""
    a = so2_parameter(datum, i, fn) + frac(shift)
    p = _o2_positive_slot(datum, i)
    alpha = [a if k == p else -a for k in range(2)]
    return split(datum.field, alpha)


def apply_translation(datum: BetaDatum, t: Translation, x: HPoint) -> dict:
    t.validate(datum)
    out = dict(x)
    for i, s in t.shifts:
        if i in datum.Jplus:
            out[i] = translate(x[i], s)
        else:
            out[i] = so2_shift(datum, i, x[i], s)
    return out


# --- grids --------------------------------------------------------------------------------

def _grid_values(N: int, K: int) -> list[Fraction]:
    return [Fraction(k, N) for k in range(-K, K + 1)]


def self_dual_split_points(space: HermitianSpace, N: int, K: int) -> list[LatticeFunction]:
    """Apartment points with α_{-i} = -α_i, anisotropic coordinates 0, α_i ∈ {k/N : |k| ≤ K}."""
    pos = space.positive_positions()
    out = []
    for vals in itertools.product(_grid_values(N, K), repeat=len(pos)):
        alpha = [Fraction(0)] * space.n
        for p, v in zip(pos, vals):
            alpha[p] = v
            alpha[space.partner_position(p)] = -v
        out.append(split(space.field, alpha))
    return out


def h_grid(datum: BetaDatum, N: int, K: int) -> list[dict]:
    """Apartment points of the building of H on the grid, in a fixed order."""
    per = []
    for i in datum.h_indices:
        comp = datum.component(i)
        if i in datum.J0:
            cands = self_dual_split_points(datum.component_space(i), N, K)
        else:
            cands = [split(datum.field, v) for v in itertools.product(_grid_values(N, K), repeat=comp.dim)]
        per.append([c for c in cands if is_oE_component(comp, c)])
    return [dict(zip(datum.h_indices, combo)) for combo in itertools.product(*per)]


def on_grid(space: HermitianSpace, y: LatticeFunction, N: int, K: int) -> LatticeFunction | None:
    """The standard-apartment form of ``y`` if it is a grid point, else ``None``."""
    s = as_split(y)
    if s is None:
        return None
    for a in s.alpha:
        if (a * N).denominator != 1 or abs(a * N) > K:
            return None
    if not is_self_dual(space, s):
        return None
    return s


def point_key(fn: LatticeFunction):
    return (0 if fn.transform is None else 1, fn.alpha, repr(fn.transform))


def dedupe(points: Iterable[LatticeFunction]) -> list[LatticeFunction]:
    out: list[LatticeFunction] = []
    for p in points:
        q = as_split(p) or p
        if not any(same_function(q, r) for r in out):
            out.append(q)
    return sorted(out, key=point_key)


def random_isometry(space: HermitianSpace, rng: random.Random, depth: int = 2):
    """A product of Cayley transforms ``(1+X)(1-X)^{-1}`` of nilpotent skew ``X``; exact."""
    f = space.field
    n = space.n
    ident = Matrix.identity(f, n)
    g, gi = ident, ident
    units = [(i, j) for i in range(n) for j in range(n) if i != j]
    made = 0
    while made < depth:
        i, j = rng.choice(units)
        if space.unit_image(i, j).kind == "fixed":
            continue
        c = f.laurent([rng.randrange(1, f.q)], rng.randrange(-1, 2))
        X = space.skew_project(Matrix.unit(f, n, i, j)).scale(c)
        powers = [ident, X]
        while not powers[-1].is_zero() and len(powers) <= n + 1:
            powers.append(powers[-1] @ X)
        if not powers[-1].is_zero():
            continue
        geo = Matrix.zeros(f, n)  # (1 - X)^{-1}
        geo_neg = Matrix.zeros(f, n)  # (1 + X)^{-1}
        for k, P in enumerate(powers[:-1]):
            geo = geo + P
            geo_neg = geo_neg + (P if k % 2 == 0 else -P)
        c_fwd = (ident + X) @ geo
        c_inv = (ident - X) @ geo_neg
        g, gi = c_fwd @ g, gi @ c_inv
        made += 1
    return g, gi


def conjugate_point(y: LatticeFunction, g: Matrix, gi: Matrix) -> LatticeFunction:
    base = y.transform or Matrix.identity(y.field, y.dim)
    base_i = y.g_inv() or Matrix.identity(y.field, y.dim)
    return LatticeFunction(y.field, y.alpha, g @ base, base_i @ gi)


# --- uniqueness ---------------------------------------------------------------------------

@dataclass
class SearchResult:
    compatible: list
    expected: list
    family_dimension: int
    j_beta: LatticeFunction
    candidates: int = 0
    pairs: list = dc_field(default_factory=list, repr=False)

    @property
    def matches_expected(self) -> bool:
        return len(self.compatible) == len(self.expected) and all(
            same_function(a, b) for a, b in zip(self.compatible, self.expected))

    @property
    def is_unique(self) -> bool:
        return len(self.compatible) == 1 and same_function(self.compatible[0], self.j_beta)


def translation_family(datum: BetaDatum, x: HPoint, N: int, K: int) -> list[LatticeFunction]:
    """Grid trace of ``{j_β(t(x))}`` over all translations t."""
    idx = datum.translatable
    shifts = [Fraction(k, N) for k in range(-2 * K, 2 * K + 1)]
    pts = []
    for combo in itertools.product(shifts, repeat=len(idx)):
        t = Translation.of(dict(zip(idx, combo)))
        y = on_grid(datum.space, j_beta(datum, apply_translation(datum, t, x)), N, K)
        if y is not None:
            pts.append(y)
    return dedupe(pts)


def uniqueness_search(datum: BetaDatum, x: HPoint, N: int = 4, K: int = 4,
                      conjugates: int = 0, seed: int = 0) -> SearchResult:
    """Every grid point y (plus random conjugate-apartment points) that extends x."""
    jb = j_beta(datum, x)
    if on_grid(datum.space, jb, N, K) is None:
        raise GridMissesJBeta(f"j_β(x) is not a grid point at N={N}, K={K}")
    cands = self_dual_split_points(datum.space, N, K)
    rng = random.Random(seed)
    extra = []
    for _ in range(conjugates):
        g, gi = random_isometry(datum.space, rng)
        extra.append(conjugate_point(rng.choice(cands), g, gi))
    found = [y for y in cands + extra if is_extension(datum, y, x)]
    expected = translation_family(datum, x, N, K)
    return SearchResult(dedupe(found), expected, len(datum.translatable), as_split(jb) or jb,
                        len(cands) + len(extra), [(y, x) for y in found])


# --- classification of compatible maps ------------------------------------------------------

def classify_compatible_map(datum: BetaDatum, samples: Sequence[tuple]) -> Translation:
    """Recover the translation t with ``φ = j_β ∘ t`` from samples ``(x, φ(x))``."""
    psis = []
    for x, y in samples:
        if not is_extension(datum, y, x):
            raise NotCompatibleSample("φ(x) is not an extension of x")
        try:
            psis.append(factorize(datum, y))
        except NotInImage as exc:
            raise NotCompatibleSample(str(exc)) from exc
    xs = [x for x, _ in samples]
    for i in datum.h_indices:
        for a in range(len(xs)):
            for b in range(a + 1, len(xs)):
                if same_function(xs[a][i], xs[b][i]) and not same_function(psis[a][i], psis[b][i]):
                    raise NotProductDecomposable(f"ψ_{i} depends on components other than x_{i}")
    shifts = {}
    for i in datum.h_indices:
        offs = set()
        if i == datum.i0:
            pairs = {(so2_parameter(datum, i, x[i]), so2_parameter(datum, i, psi[i])) for x, psi in zip(xs, psis)}
            d = _o2_offset(sorted(pairs))
            if d is None:
                raise NotATranslation(f"ψ_{i} is not an equivariant affine map of the O2 apartment")
            if d:
                shifts[i] = d
            continue
        for x, psi in zip(xs, psis):
            if i in datum.Jplus:
                d = offset_between(x[i], psi[i])
            else:
                d = Fraction(0) if same_function(x[i], psi[i]) else None
            if d is None:
                raise NotATranslation(f"ψ_{i}(x) is not a translate of x_{i}")
            offs.add(d)
        if len(offs) > 1:
            raise NotATranslation(f"ψ_{i} shifts by varying amounts {sorted(offs)}")
        if offs:
            shifts[i] = offs.pop()
    return Translation.of(shifts)


def _o2_offset(pairs) -> Fraction | None:
    """ψ on the O₂ line ℝ: an affine map with ψ(α+1) = ψ(α)+1 is a translation."""
    if len({a for a, _ in pairs}) >= 2:
        try:
            return equivariant_translation(pairs)
        except NotAffine:
            return None
    offs = {b - a for a, b in pairs}
    return offs.pop() if len(offs) == 1 else None
