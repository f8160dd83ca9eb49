from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from modcount.services.exactnum import Polynomial
from modcount.services.polytope_service import (
    ConstraintSystem,
    InvalidSystem,
    RankDeficient,
    count_lattice_points,
    ehrhart_polynomial,
    lattice_index,
    polytope_volume,
    vpf_laplace_form,
)

TWO_ROWS = ConstraintSystem.from_rows([[1, 2, 2], [1, 0, 0]])
PAIRED = ConstraintSystem.from_rows([[1, 1, 2, 0], [1, 1, 0, 2]])
SIMPLEX = ConstraintSystem.from_rows([[1, 1, 1]])


@given(st.integers(1, 30), st.integers(1, 30))
def test_strict_counts_two_rows(b1, b2):
    expected = (b1 - b2) // 2 - 1 if b1 > b2 and (b1 - b2) % 2 == 0 else 0
    assert count_lattice_points(TWO_ROWS, (b1, b2), strict=True) == expected


def test_nonstrict_count():
    assert count_lattice_points(TWO_ROWS, (7, 3)) == 3
    assert count_lattice_points(TWO_ROWS, (7, 3), strict=True) == 1


@given(st.integers(0, 12).map(lambda m: 2 * m + 1), st.integers(0, 12))
def test_strict_counts_paired_columns(b1, extra):
    b2 = b1 + 2 * extra
    expected = Fraction(b1 * b1, 4) - b1 + Fraction(3, 4)
    assert count_lattice_points(PAIRED, (b1, b2), strict=True) == expected


def test_count_rejects_wrong_length():
    with pytest.raises(ValueError):
        count_lattice_points(TWO_ROWS, (1, 2, 3))


def test_invalid_systems():
    with pytest.raises(InvalidSystem):
        ConstraintSystem.from_rows([[1, 0], [1, 0]])
    with pytest.raises(InvalidSystem):
        ConstraintSystem.from_rows([[1, 2], [1]])


def test_lattice_index():
    assert lattice_index(TWO_ROWS) == 2
    assert lattice_index(SIMPLEX) == 1
    with pytest.raises(RankDeficient):
        lattice_index(ConstraintSystem.from_rows([[1, 1], [1, 1]]))


@pytest.mark.parametrize(
    "rows, b, expected",
    [
        ([[1, 2, 2], [1, 0, 0]], (3, 1), Fraction(1, 2)),
        ([[1, 2, 2], [1, 0, 0]], (9, 2), Fraction(7, 4)),
        ([[1, 1]], (2,), 2),
        ([[2]], (2,), Fraction(1, 2)),
    ],
)
def test_polytope_volume(rows, b, expected):
    assert polytope_volume(ConstraintSystem.from_rows(rows), b) == expected


def test_volume_outside_cone_is_zero():
    assert polytope_volume(TWO_ROWS, (1, 3)) == 0


def test_ehrhart_polynomial_of_simplex():
    p = ehrhart_polynomial(SIMPLEX, (1,), terms=4)
    k = Polynomial.variable(1, 0)
    assert p == (k + 1) * (k + 2) * Fraction(1, 2)
    assert p.evaluate((-3,)) == count_lattice_points(SIMPLEX, (3,), strict=True)


def test_ehrhart_needs_enough_terms():
    with pytest.raises(ValueError):
        ehrhart_polynomial(SIMPLEX, (1,), terms=3)


def test_laplace_form_columns():
    assert vpf_laplace_form(TWO_ROWS).columns == ((1, 1), (2, 0), (2, 0))
    assert vpf_laplace_form(TWO_ROWS).nvars == 2
