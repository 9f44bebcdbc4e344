"""Rigidity of affine functionals on the smallest thick affine buildings (trees).

Chambers of the (q+1)-regular tree are edges and panels are vertices.  A
functional is a real value per vertex; affinity along every geodesic through
an interior vertex ``v`` gives ``a(u) + a(u') = 2 a(v)`` for each pair of
neighbours ``u, u'``.  With three or more neighbours this forces all of them
to agree with ``a(v)``, which is the whole content of thickness here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import NotAffine


@dataclass
class TreeBallModel:
    q: int
    radius: int
    types: list = field(default_factory=list)      # vertex -> 0 | 1
    depth: list = field(default_factory=list)      # distance from the root
    chambers: list = field(default_factory=list)   # edges (u, v)

    @property
    def vertices(self) -> range:
        return range(len(self.types))

    def neighbours(self, v: int) -> list[int]:
        return sorted({b for a, b in self.chambers if a == v} | {a for a, b in self.chambers if b == v})

    def interior(self) -> list[int]:
        return [v for v in self.vertices if self.depth[v] < self.radius]

    def panel_degree(self, v: int) -> int:
        return len(self.neighbours(v))


def build_tree_ball(q: int, R: int) -> TreeBallModel:
    """Ball of radius ``R`` around a vertex of the (q+1)-regular tree.

    ``q = 1`` gives the thin comparison model (a path).
    """
    if q < 1 or R < 1:
        raise ValueError("need q >= 1 and R >= 1")
    m = TreeBallModel(q, R, [0], [0], [])
    frontier = [0]
    for d in range(1, R + 1):
        nxt = []
        for v in frontier:
            children = q + 1 if d == 1 else q
            for _ in range(children):
                w = len(m.types)
                m.types.append(d % 2)
                m.depth.append(d)
                m.chambers.append((v, w))
                nxt.append(w)
        frontier = nxt
    return m


def constraint_rows(model: TreeBallModel) -> list[list[int]]:
    """One midpoint relation per 2-path ``u - v - u'`` with ``v`` interior."""
    rows = []
    nv = len(model.types)
    for v in model.interior():
        for u, w in itertools.combinations(model.neighbours(v), 2):
            row = [0] * nv
            row[u] += 1
            row[w] += 1
            row[v] -= 2
            rows.append(row)
    return rows


def affine_solution_space(model: TreeBallModel) -> int:
    """Dimension of the space of affine functionals on the model (exact rank over ℚ)."""
    rows = constraint_rows(model)
    if not rows:
        raise ValueError("model has no interior 2-paths")
    nv = len(model.types)
    return nv - DomainMatrix([[QQ(x) for x in r] for r in rows], (len(rows), nv), QQ).rank()


def constants_satisfy(model: TreeBallModel, c=1) -> bool:
    return all(sum(r) * c == 0 for r in constraint_rows(model))


# --- rank ≤ 1 invariance ---------------------------------------------------------------

@dataclass(frozen=True)
class AffineFit:
    slope: Fraction
    intercept: Fraction

    def __call__(self, x) -> Fraction:
        return self.slope * Fraction(x) + self.intercept


def fit_affine(samples: Sequence[tuple]) -> AffineFit:
    """The affine map through ``samples``; NotAffine if they are not collinear."""
    pts = sorted({(Fraction(x), Fraction(y)) for x, y in samples})
    xs = sorted({x for x, _ in pts})
    if len(xs) != len(pts):
        raise NotAffine("two values at the same argument")
    if len(pts) < 2:
        raise NotAffine("need at least two samples")
    (x0, y0), (x1, y1) = pts[0], pts[1]
    k = (y1 - y0) / (x1 - x0)
    fit = AffineFit(k, y0 - k * x0)
    for x, y in pts[2:]:
        if fit(x) != y:
            raise NotAffine(f"sample ({x}, {y}) is off the line")
    return fit


@dataclass(frozen=True)
class PeriodicVerdict:
    hypothesis: bool   # f(x + p) = f(x) on the supplied samples
    constant: bool     # slope is 0
    slope: Fraction

    def __bool__(self):
        return self.hypothesis and self.constant


def periodic_affine_is_constant(samples: Sequence[tuple], period=1) -> PeriodicVerdict:
    """Check invariance ``f(x+p) = f(x)`` on the samples, then whether f is constant.

    A nonconstant affine map is never periodic, so ``hypothesis`` already
    forces ``constant``; both are reported so that violated hypotheses show.
    """
    fit = fit_affine(samples)
    p = Fraction(period)
    hyp = all(fit(Fraction(x) + p) == fit(x) for x, _ in samples)
    return PeriodicVerdict(hyp, fit.slope == 0, fit.slope)


def equivariant_translation(samples: Sequence[tuple], period=1) -> Fraction | None:
    """For ``ψ`` affine with ``ψ(α+p) = ψ(α) + p``, the offset ``ψ - id`` if it is constant.

    ``ψ - id`` is affine and p-periodic, hence constant by the rigidity above;
    returns ``None`` when the samples violate the equivariance.
    """
    fit = fit_affine(samples)
    p = Fraction(period)
    if not all(fit(Fraction(x) + p) == fit(x) + p for x, _ in samples):
        return None
    diff = [(x, Fraction(y) - Fraction(x)) for x, y in samples]
    verdict = periodic_affine_is_constant(diff, p)
    return fit_affine(diff).intercept if verdict else None


def rigidity_report(qs=(2, 3), radii=(2, 3)) -> dict:
    out = {}
    for q in qs:
        for R in radii:
            out[f"q={q},R={R}"] = affine_solution_space(build_tree_ball(q, R))
    out["thin"] = affine_solution_space(build_tree_ball(1, max(radii)))
    return out
