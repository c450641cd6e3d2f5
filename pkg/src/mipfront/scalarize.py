"""Scalarized subproblems: weighted-constraint and Pascoletti-Serafini.

Objective indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import DecisionPoint, dominance_tol
from .expr import BinOp, Expression, Num, linear_combination
from .problems import ProblemDef

WEIGHT_SUM_TOL = 1e-12
TIE_BREAKS = ("lex", "tight")


class ScalarizationError(ValueError):
    pass


@dataclass(frozen=True)
class WeightVector:
    w: tuple[float, ...]

    def __post_init__(self):
        if any(not math.isfinite(x) or x < 0 for x in self.w):
            raise ScalarizationError(f"weights must be finite and nonnegative: {self.w}")
        if abs(math.fsum(self.w) - 1.0) > WEIGHT_SUM_TOL:
            raise ScalarizationError(f"weights must sum to 1, got {math.fsum(self.w)!r}")

    @classmethod
    def normalized(cls, values: Sequence[float]) -> "WeightVector":
        total = math.fsum(values)
        if total <= 0:
            raise ScalarizationError("weights must have a positive sum")
        w = [v / total for v in values]
        # push the rounding residue into the largest entry
        j = max(range(len(w)), key=lambda i: w[i])
        w[j] = 1.0 - math.fsum(w[:j] + w[j + 1 :])
        return cls(tuple(w))

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.w) if x > 0)

    def __len__(self) -> int:
        return len(self.w)

    def __getitem__(self, i: int) -> float:
        return self.w[i]


@dataclass(frozen=True)
class Subproblem:
    """Minimize ``max(objective_terms)`` over X subject to ``extra_constraints <= 0``.

    ``tie_objective``, when present, ranks optimal solutions before the
    lexicographic decision-vector rule.
    """

    base: ProblemDef
    objective_terms: tuple[Expression, ...]
    extra_constraints: tuple[Expression, ...] = ()
    tie_objective: Expression | None = None
    kind: str = "plain"
    k: int | None = None
    weights: WeightVector | None = None
    translation: tuple[float, ...] | None = None
    offset: tuple[float, ...] | None = None


def single_objective(p: ProblemDef, i: int) -> Subproblem:
    """The individual-minimum problem ``min f_i`` over X."""
    if not 0 <= i < p.n_objectives:
        raise ScalarizationError(f"objective index {i} out of range")
    return Subproblem(p, (p.objectives[i],), kind="single", k=i)


def positivity_offset(p: ProblemDef, minima_images: Sequence[float]) -> tuple[float, ...]:
    """Shift making every objective at least 1 on X, given its minimum value."""
    if len(minima_images) != p.n_objectives:
        raise ScalarizationError("one minimum per objective is required")
    if any(not math.isfinite(m) for m in minima_images):
        raise ScalarizationError("minima must be finite")
    return tuple(max(0.0, 1.0 - float(m)) for m in minima_images)


def _check_vector(name: str, v: Sequence[float] | None, n: int) -> None:
    if v is None:
        return
    if len(v) != n or any(not math.isfinite(x) for x in v):
        raise ScalarizationError(f"{name} must hold {n} finite values")


def build_wc_subproblem(
    p: ProblemDef,
    w: WeightVector,
    k: int,
    sigma: Sequence[float],
    u: Sequence[float] | None = None,
    tie_break: str = "lex",
) -> Subproblem:
    """Weighted-constraint subproblem: minimize f_k subject to

        w_i (f_i + sigma_i - u_i) <= w_k (f_k + sigma_k - u_k)

    for every active ``i != k``.  ``u`` is a translation expressed in the
    shifted coordinates; it defaults to the origin.  Zero-weight objectives
    contribute no constraint.
    """
    n = p.n_objectives
    if len(w) != n:
        raise ScalarizationError("weight length must equal the number of objectives")
    if k not in w.active:
        raise ScalarizationError(f"objective {k} is not active in {w.w}")
    _check_vector("sigma", sigma, n)
    if any(s < 0 for s in sigma):
        raise ScalarizationError("sigma must be nonnegative")
    _check_vector("translation", u, n)
    if tie_break not in TIE_BREAKS:
        raise ScalarizationError(f"unknown tie break {tie_break!r}")
    t = tuple(u) if u is not None else (0.0,) * n
    shift = [float(sigma[i]) - t[i] for i in range(n)]

    constraints = []
    for i in w.active:
        if i == k:
            continue
        constraints.append(
            linear_combination(
                [(w[i], p.objectives[i]), (-w[k], p.objectives[k])],
                constant=w[i] * shift[i] - w[k] * shift[k],
            )
        )
    tie = None
    if tie_break == "tight":
        others = [i for i in w.active if i != k]
        tie = linear_combination(
            [(-w[i], p.objectives[i]) for i in others],
            constant=-math.fsum(w[i] * shift[i] for i in others),
        )
    return Subproblem(
        p,
        (p.objectives[k],),
        tuple(constraints),
        tie,
        kind="wc",
        k=k,
        weights=w,
        translation=tuple(u) if u is not None else None,
        offset=tuple(float(s) for s in sigma),
    )


def build_ps_subproblem(
    p: ProblemDef, w: WeightVector, u: Sequence[float], tie_break: str = "lex"
) -> Subproblem:
    """Pascoletti-Serafini subproblem as min over X of max_i w_i (f_i - u_i).

    The max runs over the active objectives; at least two must be active.
    """
    n = p.n_objectives
    if len(w) != n:
        raise ScalarizationError("weight length must equal the number of objectives")
    if len(w.active) < 2:
        raise ScalarizationError("Pascoletti-Serafini needs at least two positive weights")
    _check_vector("reference point", u, n)
    if tie_break not in TIE_BREAKS:
        raise ScalarizationError(f"unknown tie break {tie_break!r}")
    terms = tuple(
        BinOp("*", Num(w[i]), BinOp("-", p.objectives[i], Num(float(u[i])))) for i in w.active
    )
    tie = None
    if tie_break == "tight":
        tie = linear_combination(
            [(-w[i], p.objectives[i]) for i in w.active],
            constant=math.fsum(w[i] * u[i] for i in w.active),
        )
    return Subproblem(p, terms, (), tie, kind="ps", weights=w, translation=tuple(float(x) for x in u))


def ps_reference_violated(sp: Subproblem, image: Sequence[float]) -> bool:
    """True if the PS reference point is not strictly below ``image`` on the active set."""
    assert sp.kind == "ps" and sp.weights is not None and sp.translation is not None
    return any(image[i] <= sp.translation[i] for i in sp.weights.active)


def resolve_wc_solutions(
    solutions: Mapping[int, tuple[DecisionPoint | None, Sequence[float]]],
) -> list[tuple[DecisionPoint | None, tuple[float, ...]]]:
    """Weak-efficiency test across the subproblem solutions of one weight.

    ``solutions`` maps each active objective ``k`` to the solution of its
    subproblem.  If all coincide the common point is returned once; otherwise
    ``x_k`` is kept iff ``f_r(x_r) >= f_r(x_k)`` for every other ``r``.
    Results keep the order of ``solutions`` and hold no duplicates.
    """
    if not solutions:
        raise ScalarizationError("no subproblem solutions to resolve")
    items = [(k, pt, tuple(float(z) for z in img)) for k, (pt, img) in solutions.items()]
    first = items[0]
    if all(pt == first[1] and img == first[2] for _, pt, img in items):
        return [(first[1], first[2])]
    tol = dominance_tol(*[img for _, _, img in items])
    best = {k: img[k] for k, _, img in items}
    kept: list[tuple[DecisionPoint | None, tuple[float, ...]]] = []
    for k, pt, img in items:
        if all(best[r] >= img[r] - tol for r in best if r != k):
            if (pt, img) not in kept:
                kept.append((pt, img))
    return kept
