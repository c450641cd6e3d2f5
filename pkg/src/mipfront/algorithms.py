"""Front-generation drivers (algorithms 1-7) and the brute-force oracle.

====  ==========  ====  ===================
 id   objectives  grid  scalarization
====  ==========  ====  ===================
 1    2           CHIM  weighted-constraint
 2    2           CHIM  Pascoletti-Serafini
 3    3           CHIM  weighted-constraint
 4    3           CHIM  Pascoletti-Serafini
 5    3           SBG   weighted-constraint
 6    3           SBG   Pascoletti-Serafini
 7    4           SBG   weighted-constraint
====  ==========  ====  ===================
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import ArchiveEntry, DecisionPoint, FrontArchive, archive_merge, filter_weak_front
from .grids import (
    GridError,
    chim_weights_pair,
    chim_weights_triple,
    direction_vector,
    individual_minima,
    sbg_base_points,
)
from .problems import ProblemDef, feasible_images
from .scalarize import (
    Subproblem,
    WeightVector,
    build_ps_subproblem,
    build_wc_subproblem,
    positivity_offset,
    ps_reference_violated,
    resolve_wc_solutions,
)
from .solvers import SolverConfig, solve

log = logging.getLogger(__name__)

WC = "weighted-constraint"
PS = "pascoletti-serafini"
CHIM = "CHIM"
SBG = "SBG"

ALGORITHMS: dict[int, tuple[int, str, str]] = {
    1: (2, CHIM, WC),
    2: (2, CHIM, PS),
    3: (3, CHIM, WC),
    4: (3, CHIM, PS),
    5: (3, SBG, WC),
    6: (3, SBG, PS),
    7: (4, SBG, WC),
}


class AlgorithmError(ValueError):
    pass


@dataclass(frozen=True)
class AlgorithmSpec:
    """Run configuration.

    ``N`` partitions the CHIM grid or the SBG pair sweeps; ``interior_n``
    sets the SBG base-point grid pitch (defaults to ``N``).  ``tie_break``
    selects among equally good subproblem solutions: ``"tight"`` prefers the
    one whose scalarization constraints have the least total slack, ``"lex"``
    takes the lexicographically smallest decision vector.
    """

    id: int
    N: int
    interior_n: int | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    utopia: tuple[float, ...] | None = None
    tie_break: str = "tight"

    def __post_init__(self):
        if self.id not in ALGORITHMS:
            raise AlgorithmError(f"unknown algorithm {self.id}; choose 1-7")
        if self.N < 1 or (self.interior_n is not None and self.interior_n < 1):
            raise AlgorithmError("grid sizes must be positive")

    @property
    def objectives(self) -> int:
        return ALGORITHMS[self.id][0]

    @property
    def grid(self) -> str:
        return ALGORITHMS[self.id][1]

    @property
    def scalarization(self) -> str:
        return ALGORITHMS[self.id][2]

    @property
    def inner_n(self) -> int:
        return self.interior_n if self.interior_n is not None else self.N


@dataclass
class RunStats:
    minima_solves: int = 0
    subproblems: int = 0
    base_points: int = 0
    lp_solves: int = 0
    failed_solves: int = 0
    reference_flags: int = 0
    candidates: int = 0
    stages: dict[str, int] = field(default_factory=dict)
    # SBG only: images found per objective subset (0-based indices)
    fronts: dict[tuple[int, ...], list[tuple[float, ...]]] = field(default_factory=dict)

    @property
    def budget(self) -> int:
        """Minima + subproblems + base points, the staged count used for comparisons."""
        return self.minima_solves + self.subproblems + self.base_points


class _Run:
    def __init__(self, p: ProblemDef, spec: AlgorithmSpec, stats: RunStats | None):
        if p.n_objectives != spec.objectives:
            raise AlgorithmError(
                f"algorithm {spec.id} handles {spec.objectives} objectives, problem has {p.n_objectives}"
            )
        self.p = p
        self.spec = spec
        self.cfg = spec.solver
        self.stats = stats if stats is not None else RunStats()
        self.entries: list[ArchiveEntry] = []
        self.minima: list[tuple[DecisionPoint, tuple[float, ...]]] = []
        self.sigma: tuple[float, ...] = ()

    @property
    def images(self) -> list[tuple[float, ...]]:
        return [img for _, img in self.minima]

    def start(self) -> None:
        self.minima = individual_minima(self.p, self.cfg)
        self.stats.minima_solves += self.p.n_objectives
        self.sigma = positivity_offset(self.p, [img[i] for i, img in enumerate(self.images)])
        for pt, img in self.minima:
            self.add(pt, img)

    def add(self, pt, img) -> None:
        self.entries.append(ArchiveEntry(pt, tuple(float(z) for z in img)))
        self.stats.candidates += 1

    def shifted(self, u: Sequence[float]) -> tuple[float, ...]:
        return tuple(float(ui) + s for ui, s in zip(u, self.sigma))

    def solve_wc(self, w: WeightVector, u: Sequence[float]) -> list[tuple[DecisionPoint, tuple[float, ...]]]:
        """All (P_w^k) for active k, translated by ``u``, then the retention test."""
        sols = {}
        for k in w.active:
            sp = build_wc_subproblem(self.p, w, k, self.sigma, self.shifted(u), tie_break=self.spec.tie_break)
            res = self._solve(sp)
            if res is not None:
                sols[k] = (res, self.p.image(res))
        if not sols:
            return []
        kept = resolve_wc_solutions(sols)
        for pt, img in kept:
            self.add(pt, img)
        return kept

    def solve_ps(self, w: WeightVector, u: Sequence[float]) -> list[tuple[DecisionPoint, tuple[float, ...]]]:
        sp = build_ps_subproblem(self.p, w, u, tie_break=self.spec.tie_break)
        res = self._solve(sp)
        if res is None:
            return []
        img = self.p.image(res)
        if ps_reference_violated(sp, img):
            self.stats.reference_flags += 1
            log.debug("reference point %s not strictly below image %s", sp.translation, img)
        self.add(res, img)
        return [(res, img)]

    def _solve(self, sp: Subproblem) -> DecisionPoint | None:
        self.stats.subproblems += 1
        res = solve(sp, self.cfg)
        if not res.ok:
            self.stats.failed_solves += 1
            return None
        return res.point

    def sweep(self, w: WeightVector, u: Sequence[float]):
        if self.spec.scalarization == WC:
            return self.solve_wc(w, u)
        return self.solve_ps(w, u)

    def utopia(self) -> tuple[float, ...]:
        u = self.spec.utopia or self.p.utopia_default
        if u is None:
            u = tuple(img[i] - 1.0 for i, img in enumerate(self.images))
        u = tuple(float(x) for x in u)
        if len(u) != self.p.n_objectives:
            raise AlgorithmError("utopia length must equal the number of objectives")
        for i, img in enumerate(self.images):
            if not u[i] < img[i]:
                raise AlgorithmError(f"utopia {u} is not strictly below the individual minimum of f{i + 1}")
        return u

    def finish(self) -> FrontArchive:
        return filter_weak_front(self.entries)


def _chim_grid(run: _Run, u):
    imgs = run.images
    if run.p.n_objectives == 2:
        grid = chim_weights_pair(imgs, u, run.spec.N)
        weights = grid.weights
        if run.spec.scalarization == WC:
            # the last node reproduces the second minimum, already in the archive
            weights = weights[:-1]
        return weights
    return chim_weights_triple(imgs, u, run.spec.N).weights


def run_chim_wc(p: ProblemDef, spec: AlgorithmSpec, stats: RunStats | None = None) -> FrontArchive:
    """Algorithms 1 and 3: CHIM weights, weighted-constraint subproblems.

    Objectives are measured from the utopia point, so each weight's
    constraints describe a ray from the utopia through the CHIM.
    """
    if spec.grid != CHIM or spec.scalarization != WC:
        raise AlgorithmError(f"algorithm {spec.id} is not a CHIM weighted-constraint method")
    run = _Run(p, spec, stats)
    run.start()
    u = run.utopia()
    for w in _chim_grid(run, u):
        run.solve_wc(w, u)
    run.stats.stages["grid"] = run.stats.subproblems
    return run.finish()


def run_chim_ps(p: ProblemDef, spec: AlgorithmSpec, stats: RunStats | None = None) -> FrontArchive:
    """Algorithms 2 and 4: CHIM weights, one Pascoletti-Serafini problem per node."""
    if spec.grid != CHIM or spec.scalarization != PS:
        raise AlgorithmError(f"algorithm {spec.id} is not a CHIM Pascoletti-Serafini method")
    run = _Run(p, spec, stats)
    run.start()
    u = run.utopia()
    for w in _chim_grid(run, u):
        run.solve_ps(w, u)
    run.stats.stages["grid"] = run.stats.subproblems
    return run.finish()


# pair order of the four-objective boundary sweep: (a) 12, (b) 23, (c) 34, (d) 13, (e) 14, (f) 24
_PAIR_ORDER = [(0, 1), (1, 2), (2, 3), (0, 2), (0, 3), (1, 3)]


def _pairs(ell: int) -> list[tuple[int, int]]:
    return [pair for pair in _PAIR_ORDER if max(pair) < ell]


def _triplets(ell: int) -> list[tuple[int, ...]]:
    if ell == 3:
        return [(0, 1, 2)]
    return [(0, 1, 2), (1, 2, 3), (0, 2, 3), (0, 1, 3)]


def _sbg(run: _Run) -> FrontArchive:
    p, spec = run.p, run.spec
    ell = p.n_objectives
    N = spec.N
    run.start()
    imgs = run.images
    found: dict[tuple[int, ...], list[tuple[float, ...]]] = {}

    # boundary of every objective pair
    for i, k in _pairs(ell):
        _, wt = direction_vector(imgs, (i, k))
        pts = found.setdefault((i, k), [])
        for j in range(1, N):
            a = (N - j) / N
            u = tuple(a * imgs[i][q] + (1 - a) * imgs[k][q] for q in range(ell))
            pts.extend(img for _, img in run.sweep(wt, u))
    run.stats.stages["pairs"] = run.stats.minima_solves + run.stats.subproblems

    def interior(subset: tuple[int, ...], label: str) -> None:
        _, wt = direction_vector(imgs, subset)
        boundary = [imgs[i] for i in subset]
        for key, pts in found.items():
            if set(key) < set(subset):
                boundary.extend(pts)
        rays = sbg_base_points(boundary, wt, spec.inner_n, anchors=[imgs[i] for i in subset])
        run.stats.lp_solves += rays.lp_solves
        run.stats.base_points += len(rays.base_points)
        run.stats.stages[f"{label} base points"] = run.stats.stages.get(f"{label} base points", 0) + len(rays.base_points)
        before = run.stats.subproblems
        pts = found.setdefault(subset, [])
        for b in rays.base_points:
            pts.extend(img for _, img in run.sweep(wt, b))
        run.stats.stages[f"{label} rays"] = run.stats.stages.get(f"{label} rays", 0) + run.stats.subproblems - before

    for t in _triplets(ell):
        interior(t, "triplet")
    if ell == 4:
        interior((0, 1, 2, 3), "quadruple")
    for key, pts in found.items():
        run.stats.fronts.setdefault(key, []).extend(pts)
    return run.finish()


def run_sbg_3obj(p: ProblemDef, spec: AlgorithmSpec, stats: RunStats | None = None) -> FrontArchive:
    """Algorithms 5 and 6: pair boundaries, LP base points, interior rays.

    Algorithm 5 solves the weighted-constraint problems along each ray;
    algorithm 6 solves one Pascoletti-Serafini problem with the base point as
    reference and the ray weights as weights.
    """
    if spec.id not in (5, 6):
        raise AlgorithmError(f"algorithm {spec.id} is not a three-objective SBG method")
    run = _Run(p, spec, stats)
    return _sbg(run)


def run_sbg_wc_4obj(p: ProblemDef, spec: AlgorithmSpec, stats: RunStats | None = None) -> FrontArchive:
    """Algorithm 7: the SBG weighted-constraint pipeline for four objectives."""
    if spec.id != 7:
        raise AlgorithmError(f"algorithm {spec.id} is not the four-objective method")
    run = _Run(p, spec, stats)
    return _sbg(run)


def run_algorithm(p: ProblemDef, spec: AlgorithmSpec, stats: RunStats | None = None) -> FrontArchive:
    if spec.id in (1, 3):
        return run_chim_wc(p, spec, stats)
    if spec.id in (2, 4):
        return run_chim_ps(p, spec, stats)
    if spec.id in (5, 6):
        return run_sbg_3obj(p, spec, stats)
    return run_sbg_wc_4obj(p, spec, stats)


def run_refinement(
    p: ProblemDef, spec: AlgorithmSpec, grid_sizes: Iterable[int], stats: RunStats | None = None
) -> FrontArchive:
    """Run at each grid size in turn, merging archives cumulatively."""
    archive = FrontArchive()
    for n in grid_sizes:
        sub = AlgorithmSpec(spec.id, n, spec.interior_n, spec.solver, spec.utopia, spec.tie_break)
        archive = archive_merge(archive, run_algorithm(p, sub, stats))
    return archive


def brute_force_weak_front(p: ProblemDef, limit: int = 10**7) -> FrontArchive:
    """Exact weak front of a pure-integer problem by full enumeration."""
    if not p.is_pure_integer:
        raise AlgorithmError("the brute-force oracle needs a pure-integer problem")
    X, F = feasible_images(p, limit)
    if len(X) == 0:
        raise AlgorithmError("problem has no feasible points")
    entries = [
        ArchiveEntry(DecisionPoint(tuple(int(v) for v in x), ()), tuple(float(z) for z in f))
        for x, f in zip(X, F)
    ]
    return filter_weak_front(entries)


__all__ = [
    "ALGORITHMS",
    "AlgorithmError",
    "AlgorithmSpec",
    "GridError",
    "RunStats",
    "brute_force_weak_front",
    "run_algorithm",
    "run_chim_ps",
    "run_chim_wc",
    "run_refinement",
    "run_sbg_3obj",
    "run_sbg_wc_4obj",
]
