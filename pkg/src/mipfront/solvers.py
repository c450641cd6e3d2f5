"""Solvers for scalar subproblems.

``solve_integer_enum`` is exact for pure-integer problems.  Mixed problems
go through ``solve_mixed_multistart``: every integer assignment is paired
with a multistart penalty search over the continuous box.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .core import DecisionPoint
from .expr import evaluate
from .problems import FEASIBILITY_TOL, feasible_images, is_feasible
from .scalarize import Subproblem

ENUM_LIMIT = 10**7
COMBO_LIMIT = 10**4
# slack allowed on scalarization constraints, whose float weights rarely cancel exactly
SCALAR_CONSTRAINT_TOL = 1e-9
TIE_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
BUDGET_EXHAUSTED = "budget-exhausted"


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    multistart_count: int = 32
    penalty_rho0: float = 10.0
    penalty_growth: float = 10.0
    penalty_rounds: int = 3
    local_tol: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if self.multistart_count < 1 or self.penalty_rounds < 1:
            raise ValueError("multistart_count and penalty_rounds must be positive")
        if self.penalty_rho0 <= 0 or self.penalty_growth <= 1 or self.local_tol <= 0:
            raise ValueError("penalty_rho0 > 0, penalty_growth > 1 and local_tol > 0 are required")


@dataclass(frozen=True)
class SolveOutcome:
    status: str
    point: DecisionPoint | None = None
    value: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _near(a: float, b: float) -> bool:
    return a <= b + TIE_TOL * max(1.0, abs(b))


def _columns(X: np.ndarray) -> list[np.ndarray]:
    return [X[:, i] for i in range(X.shape[1])]


def _vec(values, n: int) -> np.ndarray:
    return np.asarray(values, dtype=float) + np.zeros(n)


def solve_integer_enum(sp: Subproblem) -> SolveOutcome:
    """Exact minimizer by enumerating the integer box.

    Ties in the objective are broken by ``sp.tie_objective`` (if any) and then
    by the lexicographically smallest decision vector.
    """
    p = sp.base
    if not p.is_pure_integer:
        raise SolverError("solve_integer_enum needs a pure-integer problem")
    if p.n1 == 0:
        raise SolverError("empty integer box")
    if p.integer_box_size() > ENUM_LIMIT:
        raise SolverError(f"integer box has {p.integer_box_size()} points (limit {ENUM_LIMIT})")
    X, _ = feasible_images(p, ENUM_LIMIT)
    n = len(X)
    if n == 0:
        return SolveOutcome(INFEASIBLE)
    cols = _columns(X)
    mask = np.ones(n, dtype=bool)
    for g in sp.extra_constraints:
        mask &= _vec(p.compiled(g)(*cols), n) <= SCALAR_CONSTRAINT_TOL
    if not mask.any():
        return SolveOutcome(INFEASIBLE)
    idx = np.flatnonzero(mask)
    sub = [c[idx] for c in cols]
    obj = np.max([_vec(p.compiled(t)(*sub), len(idx)) for t in sp.objective_terms], axis=0)
    best = obj.min()
    cand = np.flatnonzero(obj <= best + TIE_TOL * max(1.0, abs(best)))
    if sp.tie_objective is not None and len(cand) > 1:
        tie = _vec(p.compiled(sp.tie_objective)(*[c[cand] for c in sub]), len(cand))
        tbest = tie.min()
        cand = cand[tie <= tbest + TIE_TOL * max(1.0, abs(tbest))]
    i = idx[cand[0]]  # rows of X are in lexicographic order
    point = DecisionPoint(tuple(int(v) for v in X[i]), ())
    return SolveOutcome(OPTIMAL, point, float(obj[cand[0]]))


class _Scalar:
    """Compiled pieces of a subproblem for one integer assignment."""

    def __init__(self, sp: Subproblem, ints: tuple[int, ...]):
        p = sp.base
        self.ints = tuple(float(v) for v in ints)
        self.terms = [p.compiled(t) for t in sp.objective_terms]
        self.base_cons = [p.compiled(g) for g in p.constraints]
        self.extra_cons = [p.compiled(g) for g in sp.extra_constraints]
        self.tie = p.compiled(sp.tie_objective) if sp.tie_objective is not None else None

    def objective(self, y) -> float:
        return max(t(*self.ints, *y) for t in self.terms)

    def violations(self, y) -> list[float]:
        args = (*self.ints, *y)
        return [g(*args) for g in self.base_cons] + [g(*args) for g in self.extra_cons]

    def feasible(self, y) -> bool:
        args = (*self.ints, *y)
        return all(g(*args) <= FEASIBILITY_TOL for g in self.base_cons) and all(
            g(*args) <= FEASIBILITY_TOL for g in self.extra_cons
        )

    def tie_value(self, y) -> float:
        return self.tie(*self.ints, *y) if self.tie is not None else 0.0


def _lattice_starts(n: int, dim: int, lo: np.ndarray, hi: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Stratified (Latin hypercube) starting points in the box."""
    if dim == 0:
        return np.zeros((1, 0))
    sample = qmc.LatinHypercube(d=dim, seed=rng).random(n)
    return lo + sample * (hi - lo)


def _local_search(s: _Scalar, y0: np.ndarray, lo: np.ndarray, hi: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """Penalty rounds of Nelder-Mead, then an SLSQP polish on the epigraph form."""
    y = np.clip(y0, lo, hi)
    bounds = list(zip(lo, hi))
    rho = cfg.penalty_rho0
    for _ in range(cfg.penalty_rounds):

        def penalized(z, rho=rho):
            z = np.clip(z, lo, hi)
            pen = sum(max(0.0, g) ** 2 for g in s.violations(z))
            return s.objective(z) + rho * pen

        res = minimize(
            penalized,
            y,
            method="Nelder-Mead",
            bounds=bounds,
            options={"xatol": cfg.local_tol, "fatol": cfg.local_tol * 1e-2, "maxiter": 200 * len(y)},
        )
        y = np.clip(res.x, lo, hi)
        rho *= cfg.penalty_growth

    # epigraph polish: min alpha s.t. term(y) <= alpha, g(y) <= 0
    alpha0 = s.objective(y)
    z0 = np.append(y, alpha0)
    cons = [
        {"type": "ineq", "fun": (lambda z, t=t: z[-1] - t(*s.ints, *z[:-1]))} for t in s.terms
    ] + [
        {"type": "ineq", "fun": (lambda z, g=g: -g(*s.ints, *z[:-1]))} for g in s.base_cons + s.extra_cons
    ]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = minimize(
            lambda z: z[-1],
            z0,
            method="SLSQP",
            bounds=bounds + [(None, None)],
            constraints=cons,
            options={"ftol": 1e-12, "maxiter": 200},
        )
    polished = np.clip(res.x[:-1], lo, hi)
    if s.feasible(polished) and (not s.feasible(y) or s.objective(polished) <= s.objective(y)):
        return polished
    return y


def solve_mixed_multistart(sp: Subproblem, cfg: SolverConfig | None = None) -> SolveOutcome:
    """Best feasible point over integer slices x continuous multistart searches.

    Returns ``budget-exhausted`` with the least-violating point when no start
    reaches feasibility.
    """
    cfg = cfg or SolverConfig()
    p = sp.base
    if p.integer_box_size() > COMBO_LIMIT:
        raise SolverError(f"{p.integer_box_size()} integer combinations exceed the limit {COMBO_LIMIT}")
    lo = np.array([v.lower for v in p.continuous_vars], dtype=float)
    hi = np.array([v.upper for v in p.continuous_vars], dtype=float)
    dim = len(lo)
    rng = np.random.default_rng(cfg.rng_seed)

    best_key = None
    best = None
    least_bad = (math.inf, None)
    for ints in p.integer_assignments():
        s = _Scalar(sp, ints)
        if dim == 0 or np.all(lo == hi):
            finals = [lo.copy()]
        else:
            finals = [_local_search(s, y0, lo, hi, cfg) for y0 in _lattice_starts(cfg.multistart_count, dim, lo, hi, rng)]
        for y in finals:
            if s.feasible(y):
                key = (s.objective(y), s.tie_value(y), tuple(ints), tuple(y))
                if best_key is None or _better(key, best_key):
                    best_key, best = key, (ints, y)
            else:
                viol = max(s.violations(y), default=0.0)
                if viol < least_bad[0]:
                    least_bad = (viol, (ints, y))
    if best is not None:
        ints, y = best
        return SolveOutcome(OPTIMAL, _point(ints, y), float(best_key[0]))
    if least_bad[1] is None:
        return SolveOutcome(INFEASIBLE)
    ints, y = least_bad[1]
    return SolveOutcome(BUDGET_EXHAUSTED, _point(ints, y), None)


def _better(a, b) -> bool:
    """Objective first, then tie objective, then decision vector."""
    if not _near(a[0], b[0]):
        return False
    if not _near(b[0], a[0]):
        return True
    if not _near(a[1], b[1]):
        return False
    if not _near(b[1], a[1]):
        return True
    return (a[2], a[3]) < (b[2], b[3])


def _point(ints, y) -> DecisionPoint:
    return DecisionPoint(tuple(int(v) for v in ints), tuple(float(v) for v in y))


def solve(sp: Subproblem, cfg: SolverConfig | None = None) -> SolveOutcome:
    """Dispatch on the variable layout of the base problem."""
    if sp.base.is_pure_integer:
        return solve_integer_enum(sp)
    return solve_mixed_multistart(sp, cfg)


def check_solution(sp: Subproblem, x: DecisionPoint) -> bool:
    """Feasibility of ``x`` for the base problem and the scalarization constraints."""
    if not is_feasible(sp.base, x):
        return False
    env = sp.base.assignment(x)
    tol = SCALAR_CONSTRAINT_TOL if sp.base.is_pure_integer else FEASIBILITY_TOL
    return all(evaluate(g, env) <= tol for g in sp.extra_constraints)

