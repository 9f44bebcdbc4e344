"""Lattice functions of V: evaluation, duality, translation and o_E-structure.

A lattice function is stored as ``(g, α)`` and means
``s ↦ g · ⊕_k 𝔭^{⌈s - α_k⌉} e_k``.  ``g = None`` is the identity, i.e. a point
of the standard apartment.  Values are constant on half-open intervals
``(b, b']`` between consecutive jumps, so every comparison over ℝ reduces to
comparisons at the jumps inside one period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import NotRepresentable
from .hermitian import HermitianSpace
from .lattice import Lattice, subspace_lattice_intersect
from .laurent import Field
from .matrix import Matrix


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class LatticeFunction:
    field: Field
    alpha: tuple
    transform: Matrix | None = None
    transform_inv: Matrix | None = dc_field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(frac(a) for a in self.alpha))
        if self.transform is not None and self.transform.shape != (self.dim, self.dim):
            raise ValueError("transform has the wrong shape")

    @property
    def dim(self) -> int:
        return len(self.alpha)

    @property
    def is_split(self) -> bool:
        return self.transform is None

    def g_inv(self) -> Matrix | None:
        if self.transform is None:
            return None
        if self.transform_inv is None:
            object.__setattr__(self, "transform_inv", self.transform.inverse())
        return self.transform_inv

    def __call__(self, s) -> Lattice:
        return eval_fn(self, s)

    def to_json(self) -> dict:
        return {
            "transform": "identity" if self.transform is None else self.transform.to_json(),
            "alpha": [f"{a.numerator}/{a.denominator}" for a in self.alpha],
        }


def split(field: Field, alpha: Sequence) -> LatticeFunction:
    return LatticeFunction(field, tuple(alpha))


def point_from_json(field: Field, data: dict) -> LatticeFunction:
    alpha = tuple(Fraction(a) for a in data["alpha"])
    tr = data.get("transform", "identity")
    if tr in (None, "identity"):
        return LatticeFunction(field, alpha)
    return LatticeFunction(field, alpha, Matrix.from_json(field, tr))


@lru_cache(maxsize=500_000)
def eval_fn(fn: LatticeFunction, s) -> Lattice:
    """The lattice ``Λ_s``, with ``[r]+ = ⌈r⌉``."""
    s = frac(s)
    exps = [math.ceil(s - a) for a in fn.alpha]
    if fn.transform is None:
        return Lattice.diagonal(fn.field, exps)
    cols = [[x.shift(e) for x in col] for col, e in zip(fn.transform.columns(), exps)]
    return Lattice.from_generators(fn.field, fn.dim, cols)


def jumps(fn: LatticeFunction) -> tuple:
    """Jump positions in ``[0, 1)``: the values ``α_k mod 1``."""
    return tuple(sorted({a - math.floor(a) for a in fn.alpha}))


def _merged(*fns, extra=()):
    pts = set(extra)
    for f in fns:
        pts.update(jumps(f))
    return sorted(p - math.floor(p) for p in pts)


def same_function(f1: LatticeFunction, f2: LatticeFunction) -> bool:
    if f1.dim != f2.dim:
        return False
    if f1 == f2:
        return True
    return all(eval_fn(f1, s) == eval_fn(f2, s) for s in _merged(f1, f2))


def translate(fn: LatticeFunction, shift) -> LatticeFunction:
    """``Λ + s′``: the function ``s ↦ Λ_{s+s′}``."""
    shift = frac(shift)
    return LatticeFunction(fn.field, tuple(a - shift for a in fn.alpha), fn.transform, fn.transform_inv)


def dual_lattice(space: HermitianSpace, L: Lattice) -> Lattice:
    """``L^# = {v : h(v, L) ⊆ 𝔭_F}``."""
    B_inv_T = L.basis_inverse().T
    return Lattice.from_basis((space.gram_inv.T @ B_inv_T).shift(1))


def _half_step(fn: LatticeFunction, s: Fraction) -> Fraction:
    den = s.denominator
    for a in fn.alpha:
        den = den * a.denominator // math.gcd(den, a.denominator)
    return Fraction(1, 2 * den)


def pointwise_dual(space: HermitianSpace, fn: LatticeFunction, s) -> Lattice:
    """``(Λ_{(-s)+})^#``, the right limit taken by a half grid step."""
    s = frac(s)
    return dual_lattice(space, eval_fn(fn, -s + _half_step(fn, s)))


def dual_fn(space: HermitianSpace, fn: LatticeFunction) -> LatticeFunction:
    """The h-dual lattice function ``s ↦ (Λ_{(-s)+})^#`` in ``(g, α)`` form.

    ``(gΛ_α)^# = σ(g)^{-1} Λ_{α'}`` with ``α'_k = -α_{partner(k)}``.
    """
    if space.n != fn.dim:
        raise ValueError("dimension mismatch")
    alpha = tuple(-fn.alpha[space.partner_position(p)] for p in range(fn.dim))
    if fn.transform is None:
        return LatticeFunction(fn.field, alpha)
    g_inv = fn.g_inv()
    return LatticeFunction(fn.field, alpha, space.sigma(g_inv), space.sigma(fn.transform))


def is_self_dual(space: HermitianSpace, fn: LatticeFunction) -> bool:
    return same_function(dual_fn(space, fn), fn)


def offset_between(f1: LatticeFunction, f2: LatticeFunction):
    """``s′`` with ``f2 = translate(f1, s′)``, or ``None``."""
    if f1.dim != f2.dim:
        return None
    n = f1.dim
    dv2 = eval_fn(f2, 0).det_valuation()
    seen = set()
    for j1 in jumps(f1):
        for j2 in jumps(f2):
            c = j1 - j2
            c -= math.floor(c)
            if c in seen:
                continue
            seen.add(c)
            k, rem = divmod(dv2 - eval_fn(f1, c).det_valuation(), n)
            if rem:
                continue
            cand = c + k
            if same_function(f2, translate(f1, cand)):
                return cand
    return None


def line_exponent(L: Lattice, p: int) -> int:
    """``m`` with ``L ∩ F e_p = 𝔭^m e_p``."""
    f = L.field
    e = Matrix(f, [[f.one if r == p else f.zero] for r in range(L.n)])
    return subspace_lattice_intersect(L, e).diag[0]


def split_coordinate(fn: LatticeFunction, p: int) -> Fraction:
    """The apartment coordinate ``α_p`` along ``e_p`` (meaningful if ``fn`` is split along ``e_p``)."""
    if fn.transform is None:
        return fn.alpha[p]
    return max(c - line_exponent(eval_fn(fn, c), p) for c in jumps(fn))


def as_split(fn: LatticeFunction) -> LatticeFunction | None:
    """Re-express ``fn`` in the standard apartment, or ``None`` if it is not there."""
    if fn.transform is None:
        return fn
    cand = split(fn.field, [split_coordinate(fn, p) for p in range(fn.dim)])
    return cand if same_function(cand, fn) else None


def restrict(fn: LatticeFunction, positions: Sequence[int]) -> LatticeFunction:
    """The function ``s ↦ Λ_s ∩ V_P`` on the coordinate subspace ``V_P``.

    Requires ``g`` block diagonal for ``P`` and its complement, or ``fn`` in the
    standard apartment.
    """
    positions = list(positions)
    alpha = tuple(fn.alpha[p] for p in positions)
    if fn.transform is None:
        return LatticeFunction(fn.field, alpha)
    others = [p for p in range(fn.dim) if p not in positions]
    g = fn.transform
    if all(g[a, b].is_zero() and g[b, a].is_zero() for a in positions for b in others):
        gi = fn.g_inv()
        return LatticeFunction(fn.field, alpha, g.submatrix(positions, positions),
                               gi.submatrix(positions, positions))
    s = as_split(fn)
    if s is None:
        raise NotRepresentable("function is not block-split for this decomposition")
    return LatticeFunction(fn.field, tuple(s.alpha[p] for p in positions))


def direct_sum(field: Field, n: int, parts: Sequence[tuple]) -> LatticeFunction:
    """Assemble ``(positions, fn)`` pieces into one function on F^n."""
    alpha = [None] * n
    split_all = all(f.transform is None for _, f in parts)
    z = field.zero
    g = [[z] * n for _ in range(n)]
    gi = [[z] * n for _ in range(n)]
    for pos, f in parts:
        for a, p in enumerate(pos):
            alpha[p] = f.alpha[a]
        if not split_all:
            blk = f.transform or Matrix.identity(field, f.dim)
            blk_i = f.g_inv() or Matrix.identity(field, f.dim)
            for a, p in enumerate(pos):
                for b, q in enumerate(pos):
                    g[p][q] = blk[a, b]
                    gi[p][q] = blk_i[a, b]
    if any(a is None for a in alpha):
        raise ValueError("parts do not cover every coordinate")
    if split_all:
        return LatticeFunction(field, tuple(alpha))
    return LatticeFunction(field, tuple(alpha), Matrix(field, g), Matrix(field, gi))


def so2_model_point(field: Field, a) -> LatticeFunction:
    """``Λ^α_s = 𝔭^{⌈s-α⌉} ⊕ 𝔭^{⌈s+α⌉}`` on the hyperbolic plane."""
    a = frac(a)
    return split(field, (a, -a))


# --- o_E structure -------------------------------------------------------------------

@dataclass
class OECertificate:
    holds: bool
    failures: list = dc_field(default_factory=list)
    ramification: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.holds


def _maps_into(op: Matrix, L: Lattice, target: Lattice) -> bool:
    return all(target.contains(op.apply(c)) for c in L.columns())


def is_oE_function(datum, fn: LatticeFunction) -> OECertificate:
    """Split under ``V = ⊕V_i`` and every piece an o_{E_i}-lattice function."""
    n = datum.n
    cert = OECertificate(True)
    for s in jumps(fn):
        L = eval_fn(fn, s)
        for i, P in enumerate(datum.idempotents):
            if not _maps_into(P, L, L):
                cert.holds = False
                cert.failures.append({"check": "split", "s": s, "component": i})
    if not cert.holds:
        return cert
    for comp in datum.components:
        pos = comp.positions
        for g in comp.integral_generators():
            gf = g.embed(n, pos)
            for s in jumps(fn):
                L = eval_fn(fn, s)
                if not _maps_into(gf, L, L):
                    cert.holds = False
                    cert.failures.append({"check": "o_E-stable", "s": s, "component": comp.index})
        step = Fraction(1, comp.e)
        pi = comp.uniformizer.embed(n, pos)
        pi_inv = comp.uniformizer_inv.embed(n, pos)
        fwd = bwd = True
        for s in _merged(fn, extra=[j - step for j in jumps(fn)]):
            if not _maps_into(pi, eval_fn(fn, s), eval_fn(fn, s + step)):
                fwd = False
                cert.failures.append({"check": "π Λ_s ⊆ Λ_{s+1/e}", "s": s, "component": comp.index})
            if not _maps_into(pi_inv, eval_fn(fn, s + step), eval_fn(fn, s)):
                bwd = False
                cert.failures.append({"check": "π⁻¹ Λ_{s+1/e} ⊆ Λ_s", "s": s, "component": comp.index})
        if comp.e > 1:
            cert.ramification[comp.index] = {
                "e": comp.e,
                "uniformizer_at_1/e": fwd,
                "inverse_at_-1/e": bwd,
            }
        cert.holds = cert.holds and fwd and bwd
    return cert


def is_oE_component(comp, fn: LatticeFunction) -> bool:
    """o_{E_i}-lattice function test for a function on V_i coordinates."""
    gens = comp.integral_generators()
    for s in jumps(fn):
        L = eval_fn(fn, s)
        if not all(_maps_into(g, L, L) for g in gens):
            return False
    step = Fraction(1, comp.e)
    for s in _merged(fn, extra=[j - step for j in jumps(fn)]):
        if not _maps_into(comp.uniformizer, eval_fn(fn, s), eval_fn(fn, s + step)):
            return False
        if not _maps_into(comp.uniformizer_inv, eval_fn(fn, s + step), eval_fn(fn, s)):
            return False
    return True
