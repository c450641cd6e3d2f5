"""CHIM weight grids and SBG direction / base-point construction."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import DecisionPoint
from .lp import lp_feasible_combination
from .problems import ProblemDef
from .scalarize import WeightVector, single_objective
from .solvers import SolverConfig, solve

log = logging.getLogger(__name__)


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class ChimGrid:
    N: int
    weights: tuple[WeightVector, ...]
    # endpoint weights phi(minimizer image), one per individual minimum
    anchors: tuple[tuple[float, ...], ...] = ()

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class SbgRaySet:
    subset: tuple[int, ...]
    direction: tuple[float, ...]
    ray_weights: WeightVector
    base_points: tuple[tuple[float, ...], ...] = ()
    certificates: tuple[np.ndarray, ...] = field(default=(), compare=False)
    lp_solves: int = 0


def individual_minima(
    p: ProblemDef, cfg: SolverConfig | None = None
) -> list[tuple[DecisionPoint, tuple[float, ...]]]:
    """Minimizer of each objective over X (solver tie rule: smallest decision vector)."""
    out = []
    for i in range(p.n_objectives):
        res = solve(single_objective(p, i), cfg)
        if not res.ok:
            raise GridError(f"individual minimum of objective {i + 1} not found ({res.status})")
        out.append((res.point, p.image(res.point)))
    return out


def _gaps(image: Sequence[float], u: Sequence[float]) -> np.ndarray:
    g = np.asarray(image, dtype=float) - np.asarray(u, dtype=float)
    if np.any(g <= 0):
        raise GridError(f"utopia {tuple(u)} is not strictly below image {tuple(image)}")
    return g


def phi_weights(image: Sequence[float], u: Sequence[float]) -> tuple[float, ...]:
    """Weight whose ray from ``u`` passes through ``image``.

    ``phi_k`` is the product of the gaps ``f_j - u_j`` over ``j != k`` divided
    by the sum of all such products.
    """
    g = _gaps(image, u)
    prods = np.array([np.prod(np.delete(g, k)) for k in range(len(g))])
    return tuple(float(x) for x in prods / prods.sum())


def chim_weights_pair(minima_images: Sequence[Sequence[float]], u: Sequence[float], N: int) -> ChimGrid:
    """Uniform interpolation between the endpoint weights, N + 1 nodes."""
    if N < 1:
        raise GridError("N must be at least 1")
    if len(minima_images) != 2 or len(u) != 2:
        raise GridError("two images and a 2-vector utopia are required")
    a = phi_weights(minima_images[0], u)
    b = phi_weights(minima_images[1], u)
    weights = []
    for j in range(N + 1):
        w1 = a[0] + j * (b[0] - a[0]) / N
        weights.append(WeightVector((w1, 1.0 - w1)))
    return ChimGrid(N, tuple(weights), (a, b))


def chim_weights_triple(minima_images: Sequence[Sequence[float]], u: Sequence[float], N: int) -> ChimGrid:
    """Three-objective CHIM grid, following the nested interpolation loop.

    The loop visits ``N (N + 3) / 2`` nodes; the vertex at ``c`` (the third
    minimum) is left to the caller, which already holds its image.
    """
    if N < 1:
        raise GridError("N must be at least 1")
    if len(minima_images) != 3 or len(u) != 3:
        raise GridError("three images and a 3-vector utopia are required")
    a, b, c = (phi_weights(img, u) for img in minima_images)
    weights = []
    for i1 in range(N):
        w_hat = [a[k] + i1 * (c[k] - a[k]) / N for k in range(2)]
        w_tilde = [b[k] + i1 * (c[k] - b[k]) / N for k in range(2)]
        for i2 in range(N - i1 + 1):
            w = [w_hat[k] + i2 * (w_tilde[k] - w_hat[k]) / (N - i1) for k in range(2)]
            weights.append(WeightVector((w[0], w[1], 1.0 - w[0] - w[1])))
    return ChimGrid(N, tuple(weights), (a, b, c))


def direction_vector(
    minima_images: Sequence[Sequence[float]], subset: Sequence[int]
) -> tuple[tuple[float, ...], WeightVector]:
    """Ray direction and weights for an objective subset.

    ``minima_images[j]`` is the image of the minimizer of objective ``j``.
    ``v_j`` is the spread of objective ``j`` across the subset's minima; the
    returned weights are ``v`` normalized and padded with zeros to full length.
    """
    sub = sorted(set(subset))
    if len(sub) < 2:
        raise GridError("a direction needs at least two objectives")
    ell = len(minima_images)
    v = tuple(
        float(max(minima_images[i][j] for i in sub) - minima_images[j][j]) for j in sub
    )
    total = sum(v)
    full = [0.0] * ell
    if total > 0:
        for j, vj in zip(sub, v):
            full[j] = vj
    else:
        for j in sub:
            full[j] = 1.0
    return v, WeightVector.normalized(full)


def _project(Z: np.ndarray, wt: np.ndarray, level: float) -> np.ndarray:
    return Z - np.outer((Z @ wt - level) / (wt @ wt), wt)


def _affine_rank(P: np.ndarray) -> int:
    if len(P) < 2:
        return 0
    return int(np.linalg.matrix_rank(P[1:] - P[0], tol=1e-9 * max(1.0, np.abs(P).max())))


def _pick_anchors(P: np.ndarray) -> np.ndarray:
    """For each coordinate, the not-yet-chosen point minimizing it (lexicographic ties)."""
    chosen: list[int] = []
    for j in range(P.shape[1]):
        rest = [i for i in range(len(P)) if i not in chosen]
        if not rest:
            break
        chosen.append(min(rest, key=lambda i: (P[i, j], tuple(P[i]))))
    return P[chosen]


def sbg_base_points(
    boundary: Sequence[Sequence[float]],
    ray_weights: WeightVector,
    N: int,
    anchors: Sequence[Sequence[float]] | None = None,
) -> SbgRaySet:
    """Base points for the interior rays of an objective subset.

    The subset is the support of ``ray_weights``.  Boundary images (restricted
    to the subset) are projected along the ray direction onto the hyperplane
    ``w.z = min_boundary w.z``.  A barycentric grid is laid over the simplex
    spanned by the projected anchors (the subset's individual-minimum images,
    or the per-coordinate minimizers of the boundary), enlarged to contain
    every projected boundary point, with pitch matching ``N`` on the anchor
    simplex.  Interior nodes certified inside the hull of the projected
    boundary by the LP become base points (full-length, zeros off-subset).
    """
    subset = ray_weights.active
    d = len(subset)
    ell = len(ray_weights)
    wt = np.array([ray_weights[j] for j in subset])
    direction = tuple(float(x) for x in wt)
    Z = np.array([[z[j] for j in subset] for z in boundary], dtype=float)
    empty = SbgRaySet(tuple(subset), direction, ray_weights)
    if len(Z) < d or _affine_rank(Z) < d - 1:
        log.warning("degenerate boundary for objectives %s; no base points", [j + 1 for j in subset])
        return empty
    level = float((Z @ wt).min())
    PB = _project(Z, wt, level)
    if anchors is not None:
        A = np.array([[z[j] for j in subset] for z in anchors], dtype=float)
        PA = _project(A, wt, level)
    else:
        PA = _pick_anchors(PB)
    if len(PA) != d or _affine_rank(PA) < d - 1:
        log.warning("degenerate anchor simplex for objectives %s; no base points", [j + 1 for j in subset])
        return empty
    # barycentric coordinates of the projected boundary w.r.t. the anchors
    M_aff = np.vstack([PA.T, np.ones(d)])
    lam, *_ = np.linalg.lstsq(M_aff, np.vstack([PB.T, np.ones(len(PB))]), rcond=None)
    lo = np.minimum(lam.min(axis=1), 0.0)
    scale = 1.0 - lo.sum()
    M = max(1, int(round(N * scale)))

    base_points, certs, lp_solves = [], [], 0
    for head in itertools.product(range(1, M), repeat=d - 1):
        last = M - sum(head)
        if last < 1:
            continue
        bary = lo + scale * np.array(head + (last,), dtype=float) / M
        node = PA.T @ bary
        lp_solves += 1
        cert = lp_feasible_combination(PB, node)
        if cert is None:
            continue
        full = [0.0] * ell
        for j, val in zip(subset, node):
            full[j] = float(val)
        base_points.append(tuple(full))
        certs.append(cert)
    return SbgRaySet(tuple(subset), direction, ray_weights, tuple(base_points), tuple(certs), lp_solves)


def projected_boundary(boundary: Sequence[Sequence[float]], ray_weights: WeightVector) -> np.ndarray:
    """Projection used by :func:`sbg_base_points`, for certificate checks."""
    subset = ray_weights.active
    wt = np.array([ray_weights[j] for j in subset])
    Z = np.array([[z[j] for j in subset] for z in boundary], dtype=float)
    return _project(Z, wt, float((Z @ wt).min()))
