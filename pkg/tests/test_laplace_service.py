from fractions import Fraction

import pytest

from modcount.services import laplace_service as laplace
from modcount.services.laplace_service import Const, NonExpandableDivisor, UnknownForm, Var
from modcount.services.polytope_service import ConstraintSystem, count_lattice_points, vpf_laplace_form


def test_geometric_series():
    z = Var(0)
    series = laplace.series_expand(z ** 2 / (1 - z ** 2), 7)
    assert dict(series.items()) == {(2,): 1, (4,): 1, (6,): 1}


def test_series_needs_a_constant_term_in_divisors():
    with pytest.raises(NonExpandableDivisor):
        laplace.series_expand(Const(1) / Var(0), 3)


def test_laurent_terms():
    assert laplace.laurent_terms(laplace.closed_form_expr("omega11_airy")) == {(-4,): Fraction(-1, 16)}


@pytest.mark.parametrize("alias", ["omega11", "ω11", "w11", "OMEGA11"])
def test_form_aliases(alias):
    assert laplace.normalize_form_id(alias) == "omega11"
    assert laplace.form_type(alias) == (1, 1)


def test_unknown_form():
    with pytest.raises(UnknownForm):
        laplace.normalize_form_id("omega21")


def test_closed_form_one_one():
    series = laplace.closed_form_omega("omega11", order=9)
    assert dict(series.items()) == {(3,): 1, (5,): 4, (7,): 10, (9,): 20}


@pytest.mark.parametrize("form_id, g, n, order", [("omega11", 1, 1, 11), ("omega03", 0, 3, 6)])
def test_discrete_forms_match_lattice_counts(form_id, g, n, order):
    comparison = laplace.compare_series(
        laplace.discrete_omega_series(g, n, order), laplace.closed_form_omega(form_id, order)
    )
    assert comparison.matched
    assert comparison.first_mismatch is None


def test_discrete_series_coefficients():
    assert laplace.discrete_omega_series(0, 3, 2).coefficient((0, 0, 1)) == 2
    assert laplace.discrete_omega_series(1, 1, 3).coefficient((3,)) == 1


def test_compare_series_reports_first_mismatch():
    z = Var(0)
    lhs = laplace.series_expand(1 / (1 - z), 4)
    rhs = laplace.series_expand(1 + z + 2 * z ** 3, 4)
    comparison = laplace.compare_series(lhs, rhs)
    assert not comparison.matched
    assert comparison.first_mismatch.exp == (2,)
    assert comparison.mismatches == 3


@pytest.mark.parametrize("g, n, expected", [(0, 3, 1), (1, 1, 1), (0, 4, Fraction(2, 3))])
def test_airy_constant_ratio(g, n, expected):
    assert laplace.airy_constant_ratio(g, n) == expected


def test_asymptotic_check_one_one():
    report = laplace.asymptotic_airy_check(1, 1, [Fraction(1, 10), Fraction(1, 100)])
    assert report.passed
    assert [row.s for row in report.rows] == [Fraction(1, 10), Fraction(1, 100)]
    for row in report.rows:
        assert abs(row.ratio) == 16 * (1 + row.s) ** 3 / (2 + row.s) ** 4


def test_asymptotic_check_rejects_large_s():
    with pytest.raises(ValueError):
        laplace.asymptotic_airy_check(1, 1, [Fraction(1, 2)])


def test_product_form_counts_strict_lattice_points():
    system = ConstraintSystem.from_rows([[1, 2, 2], [1, 0, 0]])
    series = laplace.product_form_series(vpf_laplace_form(system), 10)
    for b in [(7, 3), (9, 1), (6, 2), (5, 2)]:
        assert series.coefficient(b) == count_lattice_points(system, b, strict=True)
