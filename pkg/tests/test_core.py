import pytest

from mipfront.core import (
    ArchiveEntry,
    DecisionPoint,
    DimensionError,
    FrontArchive,
    archive_merge,
    filter_weak_front,
    strictly_dominates,
)
from mipfront.problems import feasible_images

from conftest import TP1_FRONT, as_int_set


def entries(images):
    return [ArchiveEntry(None, tuple(float(z) for z in img)) for img in images]


def test_strict_dominance_examples():
    assert strictly_dominates((1, 2), (2, 3))
    assert not strictly_dominates((1, 2), (1, 3))
    assert not strictly_dominates((0, 4), (1, 2))
    assert not strictly_dominates((1, 2), (0, 4))


def test_strict_dominance_length_mismatch():
    with pytest.raises(DimensionError):
        strictly_dominates((1, 2), (1, 2, 3))


def test_continuous_tolerance():
    # within 1e-7 on a non-integer image does not count as strictly better
    assert not strictly_dominates((0.5, 0.5), (0.5 + 5e-8, 0.6))
    assert strictly_dominates((0.5, 0.5), (0.5 + 5e-7, 0.6))


def test_filter_tp1(tp1):
    _, F = feasible_images(tp1)
    a = filter_weak_front(entries(F))
    assert as_int_set(a.images) == TP1_FRONT


def test_filter_tp3_count(tp3):
    _, F = feasible_images(tp3)
    assert len(filter_weak_front(entries(F))) == 60


def test_filter_single_point():
    a = filter_weak_front(entries([(3.0, 1.0)]))
    assert a.images == [(3.0, 1.0)]


def test_filter_empty_rejected():
    with pytest.raises(ValueError):
        filter_weak_front([])


def test_filter_sorted_and_deduplicated():
    a = filter_weak_front(entries([(2, 1), (1, 2), (2, 1), (1.0 + 1e-12, 2.0)]))
    assert a.images == [(1.0, 2.0), (2.0, 1.0)]


def test_filter_keeps_weakly_dominated():
    # (1,3) is dominated only weakly by (1,2): both stay
    a = filter_weak_front(entries([(1, 2), (1, 3), (2, 3)]))
    assert a.image_set() == {(1.0, 2.0), (1.0, 3.0)}


def test_merge_examples():
    x = filter_weak_front(entries([(1, 2)]))
    assert archive_merge(x, FrontArchive()).images == x.images
    assert archive_merge(x, filter_weak_front(entries([(2, 1)]))).image_set() == {(1.0, 2.0), (2.0, 1.0)}
    m = archive_merge(filter_weak_front(entries([(3, 4)])), filter_weak_front(entries([(2, 3)])))
    assert m.images == [(2.0, 3.0)]
    assert len(archive_merge(FrontArchive(), FrontArchive())) == 0


def test_merge_dimension_mismatch():
    with pytest.raises(DimensionError):
        archive_merge(filter_weak_front(entries([(1, 2)])), filter_weak_front(entries([(1, 2, 3)])))


def test_decision_point_ordering():
    assert DecisionPoint((0,), (0.5,)) < DecisionPoint((1,), (0.0,))
    assert DecisionPoint((1, 2)).as_tuple() == (1, 2)
