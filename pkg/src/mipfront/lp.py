"""Phase-1 simplex for convex-combination feasibility."""

from __future__ import annotations

from typing import Sequence

import numpy as np

CERT_TOL = 1e-9
_PIVOT_TOL = 1e-12


class LPError(ValueError):
    pass


def _phase1(A: np.ndarray, b: np.ndarray, max_iter: int = 10_000) -> tuple[float, list[int]]:
    """Minimize the sum of artificials for ``A x = b, x >= 0`` (``b >= 0``).

    Returns the optimal phase-1 value and the final basis (column indices,
    artificials numbered from ``A.shape[1]``).  Bland's rule prevents cycling.
    """
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    # reduced costs of the phase-1 objective sum(artificials)
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))
    for _ in range(max_iter):
        entering = next((j for j in range(n + m) if T[m, j] < -_PIVOT_TOL), None)
        if entering is None:
            break
        col = T[:m, entering]
        rows = [i for i in range(m) if col[i] > _PIVOT_TOL]
        if not rows:  # cannot happen in phase 1 (objective bounded below by 0)
            break
        ratios = [(T[i, -1] / col[i], basis[i], i) for i in rows]
        best = min(r for r, _, _ in ratios)
        leave = min((bv, i) for r, bv, i in ratios if r <= best + _PIVOT_TOL)[1]
        T[leave] /= T[leave, entering]
        for i in range(m + 1):
            if i != leave and T[i, entering] != 0:
                T[i] -= T[i, entering] * T[leave]
        basis[leave] = entering
    else:
        raise LPError("simplex iteration limit reached")
    return -T[m, -1], basis


def lp_feasible_combination(
    points: Sequence[Sequence[float]], target: Sequence[float]
) -> np.ndarray | None:
    """Coefficients ``lam >= 0`` with ``sum(lam) = 1`` and ``lam @ points = target``.

    Returns None when ``target`` lies outside the convex hull of ``points``.
    """
    P = np.asarray(points, dtype=float)
    t = np.asarray(target, dtype=float)
    if P.ndim != 2 or len(P) == 0:
        raise LPError("need at least one point")
    if t.shape != (P.shape[1],):
        raise LPError(f"dimension mismatch: points have {P.shape[1]}, target has {t.size}")
    A = np.vstack([P.T, np.ones(len(P))])
    b = np.append(t, 1.0)
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    scale = max(1.0, float(np.abs(A).max()), float(np.abs(b).max()))
    value, basis = _phase1(A / scale, b / scale)
    if value > CERT_TOL:
        return None
    cols = sorted(j for j in basis if j < len(P))
    lam = np.zeros(len(P))
    if cols:
        sol, *_ = np.linalg.lstsq(A[:, cols], b, rcond=None)
        lam[cols] = np.clip(sol, 0.0, None)
    if not verify_combination(P, t, lam):
        return None
    return lam


def verify_combination(points, target, lam, tol: float = CERT_TOL) -> bool:
    P = np.asarray(points, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > tol:
        return False
    return bool(np.all(np.abs(lam @ P - np.asarray(target, dtype=float)) <= tol))
