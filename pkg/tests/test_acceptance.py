"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""

import time

import numpy as np
import pytest

from mipfront.algorithms import AlgorithmSpec, RunStats, brute_force_weak_front, run_algorithm
from mipfront.core import DecisionPoint, dominance_tol, strictly_dominates
from mipfront.expr import evaluate
from mipfront.grids import chim_weights_triple, individual_minima
from mipfront.lp import lp_feasible_combination, verify_combination
from mipfront.problems import builtin, enumerate_feasible, feasible_images, is_feasible
from mipfront.scalarize import WeightVector, build_ps_subproblem, build_wc_subproblem
from mipfront.solvers import FEASIBILITY_TOL, SolverConfig, solve_integer_enum

from conftest import TP1_FRONT, TP2_FRONT, as_int_set

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    assert ok, RESULTS[n]


def _timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def test_criterion_01_oracle_counts():
    rows, ok = [], True
    expected = {"tp1": (17, 9, TP1_FRONT), "tp2": (70, 19, TP2_FRONT), "tp3": (83, 60, None)}
    for name, (n_feas, n_front, listed) in expected.items():
        p = builtin(name)
        (front, feas), dt = _timed(lambda: (brute_force_weak_front(p), len(enumerate_feasible(p))))
        good = feas == n_feas and len(front) == n_front and dt < 1.0
        if listed is not None:
            good = good and as_int_set(front.images) == listed
        ok = ok and good
        rows.append(f"{name} feasible={feas}/{n_feas} front={len(front)}/{n_front} {dt:.2f}s")
    record(1, ok, "; ".join(rows))


def test_criterion_02_alg1_tp1():
    a, dt = _timed(run_algorithm, builtin("tp1"), AlgorithmSpec(1, 11))
    ok = as_int_set(a.images) == TP1_FRONT and dt < 5
    record(2, ok, f"algorithm 1 on tp1 (N=11): {len(a)}/9 points, {dt:.2f}s")


def test_criterion_03_alg2_tp1_band():
    p = builtin("tp1")
    sizes, full = {}, []
    for n in range(13, 131):
        s = as_int_set(run_algorithm(p, AlgorithmSpec(2, n)).images)
        sizes[n] = s
        if s == TP1_FRONT:
            full.append(n)
    in_band = all(s <= TP1_FRONT and 5 <= len(s) <= 9 for s in sizes.values())
    base, fine = sizes[13], sizes[130]
    strict = base < TP1_FRONT and fine < TP1_FRONT
    refine_ok = len(fine - base) <= 1 and len(base - fine) <= 1
    ok = in_band and strict and refine_ok
    record(3, ok, f"algorithm 2 on tp1: N=13 -> {len(base)}, N=130 -> {len(fine)} "
                  f"(new {len(fine - base)}), sizes over N in [13,130] = {sorted({len(s) for s in sizes.values()})}, "
                  f"full front at N={full}")


def test_criterion_04_alg3_tp2():
    st = RunStats()
    a, dt = _timed(run_algorithm, builtin("tp2"), AlgorithmSpec(3, 8), st)
    nodes = len(chim_weights_triple([(0, 2, 2), (2, 0, 2), (2, 2, 0)], (-10, -10, -10), 8))
    ok = as_int_set(a.images) == TP2_FRONT and dt < 30
    record(4, ok, f"algorithm 3 on tp2 (N=8, {nodes} nodes, {st.subproblems} subproblems): {len(a)}/19, {dt:.2f}s")


def test_criterion_05_alg4_tp2_matched_budget():
    p = builtin("tp2")
    st3, st4 = RunStats(), RunStats()
    run_algorithm(p, AlgorithmSpec(3, 8), st3)
    a = run_algorithm(p, AlgorithmSpec(4, 15), st4)
    matched = abs(st4.subproblems - st3.subproblems) <= 0.05 * st3.subproblems
    ok = matched and as_int_set(a.images) <= TP2_FRONT and len(a) <= 12
    record(5, ok, f"algorithm 4 on tp2 ({st4.subproblems} vs {st3.subproblems} subproblems): {len(a)} points, subset")


# staged grid used for the ~400-subproblem comparison (45 + 91 + 273 = 409 in the reference run)
ALG5_STAGED = (8, 12)
REFERENCE_BUDGET = 409


def test_criterion_06_alg5_tp3():
    p = builtin("tp3")
    st = RunStats()
    a, dt = _timed(run_algorithm, p, AlgorithmSpec(5, *ALG5_STAGED), st)
    near = abs(st.budget - REFERENCE_BUDGET) <= 0.1 * REFERENCE_BUDGET
    ok = near and a.image_set() == brute_force_weak_front(p).image_set() and dt < 60
    record(6, ok, f"algorithm 5 on tp3 (N={ALG5_STAGED}): budget {st.stages['pairs']}+{st.base_points}+"
                  f"{st.stages['triplet rays']}={st.budget}, {len(a)}/60, {dt:.2f}s")


def test_criterion_07_alg3_tp3():
    p = builtin("tp3")
    st = RunStats()
    a = run_algorithm(p, AlgorithmSpec(3, 20), st)
    ok = a.image_set() <= brute_force_weak_front(p).image_set() and len(a) >= 55
    record(7, ok, f"algorithm 3 on tp3 ({st.subproblems} subproblems): {len(a)} points (need >= 55), subset")


def test_criterion_08_alg6_tp3():
    p = builtin("tp3")
    oracle = brute_force_weak_front(p).image_set()
    rows, budgets, ok = [], [], True
    for grid in ((8, 12), (12, 20), (16, 30), (24, 45)):
        st = RunStats()
        a = run_algorithm(p, AlgorithmSpec(6, *grid), st)
        budgets.append(st.budget)
        ok = ok and a.image_set() <= oracle and 25 <= len(a) <= 50
        rows.append(f"{grid}:{len(a)}@{st.budget}")
    ok = ok and max(budgets) >= 10 * min(budgets)
    record(8, ok, "algorithm 6 on tp3 points@budget " + ", ".join(rows))


ROCKET_GRID = (3, 3)
ROCKET_MULTISTART = 4


def _rocket_run(seed):
    return run_algorithm(builtin("rocket"), AlgorithmSpec(7, *ROCKET_GRID, SolverConfig(multistart_count=ROCKET_MULTISTART, rng_seed=seed)))


@pytest.mark.slow
def test_criterion_09_rocket():
    p = builtin("rocket")
    t = time.perf_counter()
    a = _rocket_run(0)
    b = _rocket_run(0)
    dt = time.perf_counter() - t
    x1_ok = feas_ok = True
    for e in a:
        env = p.assignment(e.point)
        x1_ok = x1_ok and env["x1"] in (0.0, 0.2, 0.4, 0.6)
        feas_ok = feas_ok and is_feasible(p, e.point) and all(
            -FEASIBILITY_TOL <= v <= 1 + FEASIBILITY_TOL for v in e.point.continuous_part
        )
    imgs = a.images
    nondom = not any(strictly_dominates(y, z, dominance_tol(y, z)) for y in imgs for z in imgs)
    slices = {e.point.integer_part for e in a}
    f1 = evaluate(p.objectives[0], p.assignment(DecisionPoint((0,), (0.0, 0.0, 0.0))))
    same = [(e.point, e.image) for e in a] == [(e.point, e.image) for e in b]
    checks = {
        "a": x1_ok and feas_ok,
        "b": nondom,
        "c": len(slices) >= 2,
        "d": abs(f1 - 0.692) <= 1e-12,
        "e": same,
    }
    ok = all(checks.values()) and dt < 600
    record(9, ok, f"rocket algorithm 7 (N={ROCKET_GRID}, multistart {ROCKET_MULTISTART}): {len(a)} points, "
                  f"slices {sorted(s[0] for s in slices)}, checks {checks}, two runs {dt:.0f}s")


def test_criterion_10_properties():
    rng = np.random.default_rng(2024)
    # weight rescaling leaves the weighted-constraint feasible set unchanged
    p = builtin("tp3")
    _, F = feasible_images(p)
    sigma = (7.0, 5.0, 7.0)
    rescale_ok = True
    for _ in range(20):
        w = WeightVector.normalized(rng.random(3) + 0.01)
        c = float(rng.uniform(0.1, 50))
        sp = build_wc_subproblem(p, w, 1, sigma)
        env = {n: col for n, col in zip(p.argnames, enumerate_feasible(p).T)}
        g = np.all([evaluate(e, env) <= 1e-9 for e in sp.extra_constraints], axis=0)
        h = np.all([c * w[i] * (F[:, i] + sigma[i]) - c * w[1] * (F[:, 1] + sigma[1]) <= 1e-9 * c for i in (0, 2)], axis=0)
        rescale_ok = rescale_ok and np.array_equal(g, h)
    # PS equals the enumerated min-max value
    ps_ok = True
    for name in ("tp1", "tp2", "tp3"):
        q = builtin(name)
        _, G = feasible_images(q)
        u = np.array(q.utopia_default, dtype=float)
        for _ in range(20):
            w = WeightVector.normalized(rng.random(q.n_objectives) + 0.01)
            out = solve_integer_enum(build_ps_subproblem(q, w, u))
            ref = float(np.min(np.max(np.array(w.w) * (G - u), axis=1)))
            ps_ok = ps_ok and abs(out.value - ref) <= 1e-12
    # LP certificates recombine to the target
    lp_ok = True
    for _ in range(50):
        P = rng.normal(size=(int(rng.integers(3, 9)), 3))
        t = rng.dirichlet(np.ones(len(P))) @ P
        lam = lp_feasible_combination(P, t)
        lp_ok = lp_ok and lam is not None and verify_combination(P, t, lam, 1e-9)
    # phi weights on tp2
    imgs = [img for _, img in individual_minima(builtin("tp2"))]
    a, b, c = chim_weights_triple(imgs, (-10, -10, -10), 8).anchors
    phi_ok = all(
        abs(x - y) <= 1e-12
        for got, want in ((a, (0.375, 0.3125)), (b, (0.3125, 0.375)), (c, (0.3125, 0.3125)))
        for x, y in zip(got[:2], want)
    )
    checks = {"rescaling": rescale_ok, "ps-minmax": ps_ok, "lp-certificates": lp_ok, "phi": phi_ok}
    record(10, all(checks.values()), f"property suites {checks}")


if __name__ == "__main__":
    import sys

    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            pass
    for n in sorted(RESULTS):
        print(RESULTS[n])
    sys.exit(0 if all(line.startswith("[PASS]") for line in RESULTS.values()) else 1)
