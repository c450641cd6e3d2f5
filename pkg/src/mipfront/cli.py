"""Command-line front end: run an algorithm, export the front, draw it."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .algorithms import ALGORITHMS, AlgorithmError, AlgorithmSpec, RunStats, run_algorithm
from .core import FrontArchive
from .expr import ExpressionError
from .grids import GridError
from .problems import ProblemError, load_problem
from .scalarize import ScalarizationError
from .solvers import SolverConfig, SolverError

log = logging.getLogger(__name__)


class ExportError(ValueError):
    pass


@dataclass(frozen=True)
class RunReport:
    problem: str
    algorithm: int
    grid_n: int
    interior_n: int | None
    subproblems: int
    minima_solves: int
    base_points: int
    lp_solves: int
    front_size: int
    wall_time: float


def _num(v: float) -> str:
    # 12 significant digits; "+ 0.0" folds -0.0 into 0
    return f"{float(v) + 0.0:.12g}"


def _values(a: FrontArchive):
    if len(a) == 0:
        raise ExportError("cannot export an empty archive")
    for e in a:
        yield (list(e.point.as_tuple()) if e.point is not None else []), list(e.image)


def export_front(a: FrontArchive, fmt: str, path: str | Path) -> None:
    """Write the archive as CSV (x_1..x_n, f_1..f_l) or as a JSON array of {x, f}."""
    rows = list(_values(a))
    path = Path(path)
    if fmt == "csv":
        n, ell = len(rows[0][0]), len(rows[0][1])
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"x_{i + 1}" for i in range(n)] + [f"f_{i + 1}" for i in range(ell)])
            for x, f in rows:
                w.writerow([_num(v) for v in x + f])
    elif fmt == "json":
        # literal numbers keep the 12-digit rendering while staying valid JSON
        items = [
            "{" + f'"x": [{", ".join(_num(v) for v in x)}], "f": [{", ".join(_num(v) for v in f)}]' + "}"
            for x, f in rows
        ]
        path.write_text("[\n  " + ",\n  ".join(items) + "\n]\n")
    else:
        raise ExportError(f"unknown export format {fmt!r}")


def parse_projection(text: str | Sequence[int], ell: int) -> tuple[int, ...]:
    """1-based objective indices, a pair or a triple, all distinct and at most ``ell``."""
    if isinstance(text, str):
        try:
            idx = tuple(int(s) for s in text.split(","))
        except ValueError:
            raise ExportError(f"invalid projection {text!r}") from None
    else:
        idx = tuple(int(i) for i in text)
    if len(idx) not in (2, 3) or len(set(idx)) != len(idx) or not all(1 <= i <= ell for i in idx):
        raise ExportError(f"projection {idx} invalid for {ell} objectives")
    return idx


_SIZE = 480
_PAD = 50
# fixed viewing angles for the 3-D projection
_AZIMUTH = math.radians(35.0)
_ELEVATION = math.radians(25.0)


def _unit(vals: list[float]) -> list[float]:
    lo, hi = min(vals), max(vals)
    span = hi - lo
    return [0.5 if span == 0 else (v - lo) / span for v in vals]


def _screen(coords: list[list[float]]) -> list[tuple[float, float]]:
    cols = [_unit(c) for c in coords]
    pts = list(zip(*cols))
    if len(coords) == 2:
        return [(x, y) for x, y in pts]
    ca, sa = math.cos(_AZIMUTH), math.sin(_AZIMUTH)
    ce, se = math.cos(_ELEVATION), math.sin(_ELEVATION)
    out = []
    for x, y, z in pts:
        px = ca * x - sa * y
        py = se * (sa * x + ca * y) + ce * z
        out.append((px, py))
    xs, ys = _unit([p[0] for p in out]), _unit([p[1] for p in out])
    return list(zip(xs, ys))


def emit_plot(a: FrontArchive, projection, path: str | Path) -> None:
    """Deterministic SVG scatter: one circle per archive entry."""
    if len(a) == 0:
        raise ExportError("cannot plot an empty archive")
    idx = parse_projection(projection, a.dim)
    coords = [[e.image[i - 1] for e in a] for i in idx]
    span = _SIZE - 2 * _PAD
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_SIZE}" height="{_SIZE}">',
        f'<rect x="{_PAD}" y="{_PAD}" width="{span}" height="{span}" fill="none" stroke="#888"/>',
    ]
    labels = [f"f_{i}" for i in idx]
    if len(idx) == 2:
        lines.append(f'<text x="{_SIZE / 2:.1f}" y="{_SIZE - 15}" text-anchor="middle">{labels[0]}</text>')
        lines.append(
            f'<text x="15" y="{_SIZE / 2:.1f}" text-anchor="middle" transform="rotate(-90 15 {_SIZE / 2:.1f})">{labels[1]}</text>'
        )
    else:
        lines.append(f'<text x="{_SIZE / 2:.1f}" y="{_SIZE - 15}" text-anchor="middle">{", ".join(labels)}</text>')
    for sx, sy in _screen(coords):
        cx = _PAD + sx * span
        cy = _SIZE - _PAD - sy * span
        lines.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="3" fill="#1f5fa8"/>')
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")


def _grid_n(text: str) -> tuple[int, int | None]:
    parts = text.split(",")
    try:
        vals = [int(s) for s in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--grid-n expects an integer or 'N,Ninterior', got {text!r}") from None
    if len(vals) > 2 or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("grid sizes must be one or two positive integers")
    return vals[0], (vals[1] if len(vals) == 2 else None)


def _reals(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mipfront", description="Approximate weak Pareto fronts of mixed-integer problems.")
    ap.add_argument("--problem", required=True, help="builtin:<tp1|tp2|tp3|rocket> or a JSON problem file")
    ap.add_argument("--algorithm", type=int, required=True, choices=sorted(ALGORITHMS))
    ap.add_argument("--grid-n", type=_grid_n, default=(8, None), help="N, or 'N,Ninterior' for SBG (default 8)")
    ap.add_argument("--utopia", type=_reals, help="comma-separated utopia vector")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--multistart", type=int, default=SolverConfig.multistart_count)
    ap.add_argument("--out", help="front file, .csv or .json")
    ap.add_argument("--plot", help="SVG scatter of the front")
    ap.add_argument("--projection", help="objective indices for the plot, e.g. 1,2 or 1,3,2")
    ap.add_argument("--report", help="JSON run report")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        p = load_problem(args.problem)
        n, ni = args.grid_n
        spec = AlgorithmSpec(
            args.algorithm,
            n,
            ni,
            SolverConfig(multistart_count=args.multistart, rng_seed=args.seed),
            args.utopia,
        )
        projection = None
        if args.plot:
            projection = parse_projection(args.projection or ",".join(map(str, range(1, min(3, p.n_objectives) + 1))), p.n_objectives)
        stats = RunStats()
        t0 = time.perf_counter()
        archive = run_algorithm(p, spec, stats)
        elapsed = time.perf_counter() - t0
        if args.out:
            fmt = Path(args.out).suffix.lower().lstrip(".")
            export_front(archive, fmt, args.out)
        if args.plot:
            emit_plot(archive, projection, args.plot)
        report = RunReport(p.name or args.problem, args.algorithm, n, ni, stats.subproblems, stats.minima_solves,
                           stats.base_points, stats.lp_solves, len(archive), round(elapsed, 3))
        if args.report:
            Path(args.report).write_text(json.dumps(asdict(report), indent=2) + "\n")
        print(f"{report.problem}: algorithm {report.algorithm}, {report.subproblems} subproblems, "
              f"{report.front_size} front points in {elapsed:.2f}s")
        return 0
    except (AlgorithmError, GridError, ProblemError, ExpressionError, ScalarizationError, SolverError, ExportError, OSError) as exc:
        print(f"mipfront: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
