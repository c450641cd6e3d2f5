"""Problem model, JSON document format and the built-in test problems."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Sequence

import numpy as np

from .core import DecisionPoint
from .expr import (
    Expression,
    compile_expression,
    evaluate,
    parse_expression,
    substitute,
    variables,
)

INTEGER = "integer"
CONTINUOUS = "continuous"
FEASIBILITY_TOL = 1e-8


class ProblemError(ValueError):
    pass


class SchemaError(ProblemError):
    pass


class CycleError(ProblemError):
    pass


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: str
    lower: float
    upper: float

    def __post_init__(self):
        if self.kind not in (INTEGER, CONTINUOUS):
            raise SchemaError(f"variable {self.name!r}: unknown kind {self.kind!r}")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise SchemaError(f"variable {self.name!r}: bounds must be finite")
        if self.lower > self.upper:
            raise SchemaError(f"variable {self.name!r}: lower > upper")
        if self.kind == INTEGER and not (float(self.lower).is_integer() and float(self.upper).is_integer()):
            raise SchemaError(f"variable {self.name!r}: integer bounds must be integral")


@dataclass(frozen=True)
class UtopiaVector:
    values: tuple[float, ...]
    margin: tuple[float, ...] | None = None


@dataclass(frozen=True, eq=True)
class ProblemDef:
    variables: tuple[VariableSpec, ...]
    objectives: tuple[Expression, ...]
    constraints: tuple[Expression, ...] = ()
    derived: tuple[tuple[str, Expression], ...] = ()
    utopia_default: tuple[float, ...] | None = None
    name: str = field(default="problem", compare=False)

    def __post_init__(self):
        if len(self.objectives) < 2:
            raise SchemaError("at least two objectives are required")
        names = [v.name for v in self.variables]
        derived_names = [d for d, _ in self.derived]
        if len(set(names + derived_names)) != len(names) + len(derived_names):
            raise SchemaError("duplicate variable names")
        known = set(names) | set(derived_names)
        for d, e in self.derived:
            _check_refs(e, known, f"derived {d!r}")
        for i, e in enumerate(self.objectives):
            _check_refs(e, known, f"objective {i + 1}")
        for j, e in enumerate(self.constraints):
            _check_refs(e, known, f"constraint {j + 1}")
        if self.utopia_default is not None and len(self.utopia_default) != len(self.objectives):
            raise SchemaError("utopia length must equal the number of objectives")
        _derived_order(self.derived)

    # layout
    @property
    def n_objectives(self) -> int:
        return len(self.objectives)

    @cached_property
    def integer_vars(self) -> tuple[VariableSpec, ...]:
        return tuple(v for v in self.variables if v.kind == INTEGER)

    @cached_property
    def continuous_vars(self) -> tuple[VariableSpec, ...]:
        return tuple(v for v in self.variables if v.kind == CONTINUOUS)

    @property
    def n1(self) -> int:
        return len(self.integer_vars)

    @property
    def n2(self) -> int:
        return len(self.continuous_vars)

    @property
    def is_pure_integer(self) -> bool:
        return self.n2 == 0

    @cached_property
    def argnames(self) -> tuple[str, ...]:
        """Variable names in decision-point order (integers first)."""
        return tuple(v.name for v in self.integer_vars + self.continuous_vars)

    @cached_property
    def _inline_map(self) -> dict[str, Expression]:
        resolved: dict[str, Expression] = {}
        for name in _derived_order(self.derived):
            resolved[name] = substitute(dict(self.derived)[name], resolved)
        return resolved

    def inline(self, e: Expression) -> Expression:
        """``e`` with derived variables replaced by their definitions."""
        return substitute(e, self._inline_map)

    def compiled(self, e: Expression):
        return compile_expression(self.inline(e), self.argnames)

    @cached_property
    def objective_functions(self):
        return tuple(self.compiled(f) for f in self.objectives)

    @cached_property
    def constraint_functions(self):
        return tuple(self.compiled(g) for g in self.constraints)

    @property
    def feasibility_tol(self) -> float:
        return 0.0 if self.is_pure_integer else FEASIBILITY_TOL

    # evaluation
    def assignment(self, x: DecisionPoint) -> dict[str, float]:
        self.check_layout(x)
        env: dict[str, Any] = {}
        for v, val in zip(self.integer_vars, x.integer_part):
            env[v.name] = float(val)
        for v, val in zip(self.continuous_vars, x.continuous_part):
            env[v.name] = float(val)
        defs = dict(self.derived)
        for name in _derived_order(self.derived):
            env[name] = evaluate(defs[name], env)
        return env

    def check_layout(self, x: DecisionPoint) -> None:
        if len(x.integer_part) != self.n1 or len(x.continuous_part) != self.n2:
            raise ProblemError(
                f"point layout ({len(x.integer_part)}, {len(x.continuous_part)}) "
                f"does not match problem ({self.n1}, {self.n2})"
            )

    def image(self, x: DecisionPoint) -> tuple[float, ...]:
        env = self.assignment(x)
        return tuple(float(evaluate(f, env)) for f in self.objectives)

    def constraint_values(self, x: DecisionPoint) -> tuple[float, ...]:
        env = self.assignment(x)
        return tuple(float(evaluate(g, env)) for g in self.constraints)

    def integer_box_size(self) -> int:
        size = 1
        for v in self.integer_vars:
            size *= int(v.upper) - int(v.lower) + 1
        return size

    def integer_assignments(self):
        ranges = [range(int(v.lower), int(v.upper) + 1) for v in self.integer_vars]
        return itertools.product(*ranges)

    def to_document(self) -> dict:
        from .expr import format_expression

        doc = {
            "variables": [
                {"name": v.name, "kind": v.kind, "lower": v.lower, "upper": v.upper}
                for v in self.variables
            ],
            "derived": [{"name": d, "expr": format_expression(e)} for d, e in self.derived],
            "objectives": [format_expression(f) for f in self.objectives],
            "constraints": [format_expression(g) for g in self.constraints],
        }
        if self.utopia_default is not None:
            doc["utopia"] = list(self.utopia_default)
        return doc


def _check_refs(e: Expression, known: set[str], where: str) -> None:
    unknown = variables(e) - known
    if unknown:
        raise SchemaError(f"{where} references undeclared variable {sorted(unknown)[0]!r}")


def _derived_order(derived: Sequence[tuple[str, Expression]]) -> list[str]:
    """Topological order of derived definitions; raises CycleError."""
    defs = dict(derived)
    order: list[str] = []
    state: dict[str, int] = {}

    def visit(name: str, stack: tuple[str, ...]):
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            raise CycleError("cyclic derived definitions: " + " -> ".join(stack + (name,)))
        state[name] = 1
        for dep in sorted(variables(defs[name])):
            if dep in defs:
                visit(dep, stack + (name,))
        state[name] = 2
        order.append(name)

    for name, _ in derived:
        visit(name, ())
    return order


def is_feasible(p: ProblemDef, x: DecisionPoint) -> bool:
    p.check_layout(x)
    for v, val in zip(p.integer_vars, x.integer_part):
        if not float(val).is_integer() or not v.lower <= val <= v.upper:
            return False
    for v, val in zip(p.continuous_vars, x.continuous_part):
        if not v.lower <= val <= v.upper:
            return False
    return all(g <= p.feasibility_tol for g in p.constraint_values(x))


def enumerate_feasible(p: ProblemDef, limit: int = 10**7) -> np.ndarray:
    """All feasible points of a pure-integer problem, lexicographic order."""
    if not p.is_pure_integer:
        raise ProblemError("enumeration requires a pure-integer problem")
    return _feasible_cache(p, limit)[0]


def feasible_images(p: ProblemDef, limit: int = 10**7) -> tuple[np.ndarray, np.ndarray]:
    """(points, images) of all feasible points of a pure-integer problem."""
    if not p.is_pure_integer:
        raise ProblemError("enumeration requires a pure-integer problem")
    return _feasible_cache(p, limit)


_FEASIBLE_CACHE: dict[ProblemDef, tuple[np.ndarray, np.ndarray]] = {}


def _feasible_cache(p: ProblemDef, limit: int):
    if p in _FEASIBLE_CACHE:
        return _FEASIBLE_CACHE[p]
    size = p.integer_box_size()
    if size > limit:
        raise ProblemError(f"integer box has {size} points, limit is {limit}")
    grids = np.meshgrid(
        *[np.arange(int(v.lower), int(v.upper) + 1, dtype=float) for v in p.integer_vars],
        indexing="ij",
    )
    X = np.stack([g.ravel() for g in grids], axis=1) if grids else np.zeros((1, 0))
    cols = [X[:, i] for i in range(X.shape[1])]
    mask = np.ones(len(X), dtype=bool)
    for g in p.constraint_functions:
        mask &= np.asarray(g(*cols) + np.zeros(len(X))) <= 0.0
    X = X[mask]
    cols = [X[:, i] for i in range(X.shape[1])]
    F = np.stack([np.asarray(f(*cols), dtype=float) + np.zeros(len(X)) for f in p.objective_functions], axis=1)
    _FEASIBLE_CACHE[p] = (X, F)
    return X, F


def parse_problem(document: str | Mapping[str, Any], name: str = "problem") -> ProblemDef:
    """Build a ProblemDef from a JSON document (text or already-decoded mapping)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise SchemaError("problem document must be a JSON object")
    for key in ("variables", "objectives"):
        if key not in document:
            raise SchemaError(f"missing required key {key!r}")
    extra = set(document) - {"variables", "derived", "objectives", "constraints", "utopia", "name"}
    if extra:
        raise SchemaError(f"unknown keys: {sorted(extra)}")
    try:
        variables_ = tuple(
            VariableSpec(str(v["name"]), str(v["kind"]), float(v["lower"]), float(v["upper"]))
            for v in document["variables"]
        )
        derived = tuple((str(d["name"]), parse_expression(d["expr"])) for d in document.get("derived", []))
        objectives = tuple(parse_expression(t) for t in document["objectives"])
        constraints = tuple(parse_expression(t) for t in document.get("constraints", []))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed entry: {exc}") from None
    utopia = document.get("utopia")
    if utopia is not None:
        utopia = tuple(float(u) for u in utopia)
    return ProblemDef(
        variables=variables_,
        objectives=objectives,
        constraints=constraints,
        derived=derived,
        utopia_default=utopia,
        name=str(document.get("name", name)),
    )


def _ivar(name: str, lo: int, hi: int) -> dict:
    return {"name": name, "kind": INTEGER, "lower": lo, "upper": hi}


BUILTIN_DOCUMENTS: dict[str, dict] = {
    "tp1": {
        "variables": [_ivar("x1", 0, 4), _ivar("x2", 0, 4)],
        "objectives": ["x1", "x2"],
        "constraints": ["(x1-4)^2 + (x2-4)^2 - 16"],
        "utopia": [-10, -10],
    },
    "tp2": {
        "variables": [_ivar("x1", 0, 4), _ivar("x2", 0, 4), _ivar("x3", 0, 4)],
        "objectives": ["x1", "x2", "x3"],
        "constraints": ["(x1-2)^2 + (x2-2)^2 + (x3-2)^2 - 4"],
        "utopia": [-10, -10, -10],
    },
    # upper bounds are implied by the constraints (3x1 <= 18, 20x2 <= 96, 3x3 <= 18)
    "tp3": {
        "variables": [_ivar("x1", 0, 6), _ivar("x2", 0, 4), _ivar("x3", 0, 6)],
        "objectives": ["-x1", "-x2", "-x3"],
        "constraints": [
            "3*x1 + 2*x2 + 3*x3 - 18",
            "x1 + 2*x2 + x3 - 10",
            "9*x1 + 20*x2 + 7*x3 - 96",
            "7*x1 + 20*x2 + 9*x3 - 96",
        ],
        "utopia": [-100, -100, -100],
    },
    "rocket": {
        "variables": [
            _ivar("xt1", 0, 3),
            {"name": "x2", "kind": CONTINUOUS, "lower": 0, "upper": 1},
            {"name": "x3", "kind": CONTINUOUS, "lower": 0, "upper": 1},
            {"name": "x4", "kind": CONTINUOUS, "lower": 0, "upper": 1},
        ],
        # xt1/5 rounds to exactly 0, 0.2, 0.4, 0.6 in binary floating point
        "derived": [{"name": "x1", "expr": "xt1 / 5"}],
        "objectives": [
            "0.692 + 0.477*x1 - 0.687*x4 - 0.08*x3 - 0.065*x2 - 0.167*x1^2 - 0.0129*x1*x4"
            " + 0.0796*x4^2 - 0.0634*x1*x3 - 0.0257*x3*x4 + 0.0877*x3^2 - 0.0521*x1*x2"
            " + 0.00156*x2*x4 + 0.00198*x2*x3 + 0.0184*x2^2",
            "0.37 - 0.205*x1 + 0.0307*x4 + 0.108*x3 + 1.019*x2 - 0.135*x1^2 + 0.0141*x1*x4"
            " + 0.0998*x4^2 + 0.208*x1*x3 - 0.0301*x3*x4 - 0.226*x3^2 + 0.353*x1*x2 - 0.0497*x2*x3"
            " - 0.423*x2^2 + 0.202*x1^2*x4 - 0.281*x1^2*x3 - 0.342*x1*x4^2 - 0.245*x3*x4^2"
            " + 0.281*x3^2*x4 - 0.184*x1*x2^2 + 0.281*x1*x3*x4",
            "0.153 - 0.322*x1 + 0.396*x4 + 0.424*x3 + 0.0226*x2 + 0.175*x1^2 + 0.0185*x1*x4"
            " - 0.0701*x4^2 - 0.251*x1*x3 + 0.179*x3*x4 + 0.015*x3^2 + 0.0134*x1*x2"
            " + 0.0296*x2*x4 + 0.0752*x2*x3 + 0.0192*x2^2",
            "0.758 + 0.358*x1 - 0.807*x4 + 0.0925*x3 - 0.0468*x2 - 0.172*x1^2 + 0.0106*x1*x4"
            " + 0.0697*x4^2 - 0.146*x1*x3 - 0.0416*x3*x4 + 0.102*x3^2 - 0.0694*x1*x2"
            " - 0.00503*x2*x4 + 0.0151*x2*x3 + 0.0173*x2^2",
        ],
        "constraints": [],
    },
}

BUILTIN_NAMES = tuple(BUILTIN_DOCUMENTS)


def builtin(name: str) -> ProblemDef:
    if name not in BUILTIN_DOCUMENTS:
        raise ProblemError(f"unknown built-in problem {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return parse_problem(BUILTIN_DOCUMENTS[name], name=name)


def load_problem(spec: str) -> ProblemDef:
    """Resolve ``builtin:<name>`` or a path to a JSON problem document."""
    if spec.startswith("builtin:"):
        return builtin(spec.split(":", 1)[1])
    with open(spec, encoding="utf-8") as fh:
        text = fh.read()
    stem = spec.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return parse_problem(text, name=stem)
