"""Decision points, dominance and the weak Pareto archive."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DOMINANCE_TOL = 1e-7
DUPLICATE_TOL = 1e-9


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DecisionPoint:
    integer_part: tuple[int, ...] = ()
    continuous_part: tuple[float, ...] = ()

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(self.integer_part) + tuple(self.continuous_part)


@dataclass(frozen=True)
class ArchiveEntry:
    point: DecisionPoint | None
    image: tuple[float, ...]


def _is_integral(values: Iterable[float]) -> bool:
    return all(float(v).is_integer() for v in values)


def dominance_tol(*images: Sequence[float]) -> float:
    """0 for all-integer images, :data:`DOMINANCE_TOL` otherwise."""
    return 0.0 if all(_is_integral(z) for z in images) else DOMINANCE_TOL


def strictly_dominates(a: Sequence[float], b: Sequence[float], tol: float | None = None) -> bool:
    """True iff ``a`` is strictly better than ``b`` in every objective."""
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    if tol is None:
        tol = dominance_tol(a, b)
    return all(ai < bi - tol for ai, bi in zip(a, b))


@dataclass(frozen=True)
class FrontArchive:
    entries: tuple[ArchiveEntry, ...] = ()

    @property
    def count(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def images(self) -> list[tuple[float, ...]]:
        return [e.image for e in self.entries]

    def image_set(self) -> set[tuple[float, ...]]:
        return set(self.images)

    @property
    def dim(self) -> int | None:
        return len(self.entries[0].image) if self.entries else None


def _sort_key(entry: ArchiveEntry):
    pt = entry.point.as_tuple() if entry.point is not None else ()
    return (entry.image, pt)


def filter_weak_front(entries: Iterable[ArchiveEntry], tol: float | None = None) -> FrontArchive:
    """Keep the entries that no other entry strictly dominates.

    Entries whose images coincide within :data:`DUPLICATE_TOL` collapse to the
    lexicographically first one.  The result is sorted by image.
    """
    items = list(entries)
    if not items:
        raise ValueError("filter_weak_front needs at least one entry")
    dim = len(items[0].image)
    if any(len(e.image) != dim for e in items):
        raise DimensionError("entries with mixed objective dimensions")
    items.sort(key=_sort_key)
    Z = np.array([e.image for e in items], dtype=float)
    if tol is None:
        tol = 0.0 if np.all(Z == np.round(Z)) else DOMINANCE_TOL
    keep = []
    for i in range(len(items)):
        dominated = np.all(Z < Z[i] - tol, axis=1)
        if dominated.any():
            continue
        if keep and np.all(np.abs(Z[keep] - Z[i]) <= DUPLICATE_TOL, axis=1).any():
            continue
        keep.append(i)
    return FrontArchive(tuple(items[i] for i in keep))


def archive_merge(a: FrontArchive, b: FrontArchive) -> FrontArchive:
    if a.dim is not None and b.dim is not None and a.dim != b.dim:
        raise DimensionError(f"cannot merge archives of dimension {a.dim} and {b.dim}")
    merged = a.entries + b.entries
    if not merged:
        return FrontArchive()
    return filter_weak_front(merged)
