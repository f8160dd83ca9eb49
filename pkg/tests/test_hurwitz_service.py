from fractions import Fraction

import pytest

from modcount.services import hurwitz_service, moduli_service
from modcount.services.hurwitz_service import (
    BranchData,
    FrontierExceeded,
    Partition,
    UnsupportedTableRow,
)

HURWITZ_VALUES = [
    (0, (1, 1, 1), 4),
    (0, (2, 1), 4),
    (0, (2, 1, 1), 120),
    (0, (3, 1), 27),
    (1, (1, 1), Fraction(1, 2)),
    (1, (2,), Fraction(1, 2)),
]


def test_partition_normalization():
    mu = Partition.of([1, 2, 2])
    assert mu.parts == (2, 2, 1)
    assert mu.aut_order() == 2
    assert mu.centralizer_order() == 8
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_riemann_hurwitz_genus():
    data = BranchData(4, (Partition((4,)), Partition((2, 2)), Partition((4,))))
    assert data.riemann_hurwitz_genus() == 1
    with pytest.raises(ValueError):
        BranchData(4, (Partition((3,)),))


@pytest.mark.parametrize("g, parts, expected", HURWITZ_VALUES)
def test_simple_hurwitz_search(g, parts, expected):
    assert hurwitz_service.simple_hurwitz(g, Partition(parts)) == expected


@pytest.mark.parametrize("g, parts, expected", HURWITZ_VALUES)
def test_elsv_rows(g, parts, expected):
    assert hurwitz_service.elsv_hurwitz(g, Partition(parts)) == expected


def test_labeled_simple_hurwitz_accepts_unsorted():
    assert hurwitz_service.labeled_simple_hurwitz(0, [1, 2]) == Fraction(2, 3)


def test_simple_hurwitz_frontier():
    with pytest.raises(FrontierExceeded):
        hurwitz_service.simple_hurwitz(0, Partition((7,)))


def test_elsv_missing_row():
    with pytest.raises(UnsupportedTableRow):
        hurwitz_service.elsv_hurwitz(2, Partition((3,)))


@pytest.mark.parametrize(
    "profiles, expected",
    [
        (((4,), (2, 2), (4,)), Fraction(1, 4)),
        (((1, 1, 1),), Fraction(1, 6)),
        (((2,), (2,)), Fraction(1, 2)),
        (((2,), (2,), (2,)), 0),
    ],
)
def test_class_trace(profiles, expected):
    degree = sum(profiles[0])
    data = BranchData(degree, tuple(Partition(p) for p in profiles))
    assert hurwitz_service.class_trace(data) == expected


def test_belyi_trace_total_matches_one_boundary_count():
    assert hurwitz_service.belyi_trace_total(4) == moduli_service.n_recursive(1, 1, (4,))
    assert hurwitz_service.belyi_trace_total(3) == 0


@pytest.mark.parametrize("g, b", [(0, (1, 1, 2)), (0, (2, 2, 2)), (1, (4,)), (1, (6,)), (0, (2, 2, 2, 2))])
def test_belyi_count_matches_recursion(g, b):
    assert hurwitz_service.belyi_count(g, b) == moduli_service.n_recursive(g, len(b), b)


def test_belyi_count_is_conjugation_invariant():
    relabeled = hurwitz_service.belyi_count(0, (2, 2, 2, 2), relabeling=[3, 7, 1, 0, 5, 2, 6, 4])
    assert relabeled == 3


def test_belyi_count_edge_cases():
    assert hurwitz_service.belyi_count(0, (1, 1, 1)) == 0
    with pytest.raises(FrontierExceeded):
        hurwitz_service.belyi_count(0, (4, 4, 6))
    with pytest.raises(ValueError):
        hurwitz_service.belyi_count(0, (2, 0, 2), relabeling=None)
