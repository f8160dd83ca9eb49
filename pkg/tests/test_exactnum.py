from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from modcount.services.exactnum import (
    DimensionMismatch,
    InconsistentSamples,
    Polynomial,
    QuasiPolynomial,
    UnderdeterminedSystem,
    bernoulli_numbers,
    format_decimal,
    format_rational,
    interpolate_univariate,
    partitions,
    poly_fit,
    qp_fit,
    solve_linear_system,
    symmetric_square_basis,
    zeta_neg,
)

rationals = st.fractions(max_denominator=12).filter(lambda x: abs(x) < 50)
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
polynomials = st.dictionaries(exponents, rationals, max_size=5).map(lambda terms: Polynomial(2, terms))
points = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


@given(polynomials, polynomials, polynomials)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Polynomial.zero(2)


@given(polynomials, polynomials, points)
def test_evaluation_is_a_ring_map(p, q, point):
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)


def test_zero_coefficients_are_dropped():
    poly = Polynomial(1, {(2,): 1}) - Polynomial(1, {(2,): 1})
    assert poly.is_zero()
    assert poly.total_degree() == -1
    assert poly.to_text() == "0"


def test_to_text_orders_by_degree():
    poly = Polynomial(1, {(2,): Fraction(1, 48), (0,): Fraction(-1, 12)})
    assert poly.to_text() == "1/48*b1^2 - 1/12"


def test_permuted_and_scaled():
    poly = Polynomial(2, {(2, 0): 1, (0, 1): 3})
    assert poly.permuted([1, 0]) == Polynomial(2, {(0, 2): 1, (1, 0): 3})
    assert poly.scaled_variables([2, 1]) == Polynomial(2, {(2, 0): 4, (0, 1): 3})
    with pytest.raises(ValueError):
        poly.permuted([0, 0])


def test_mismatched_variable_counts_are_rejected():
    with pytest.raises(DimensionMismatch):
        Polynomial(1, {(1,): 1}) + Polynomial(2, {(1, 0): 1})
    with pytest.raises(DimensionMismatch):
        Polynomial(2, {(1, 0): 1}).evaluate((1,))


def test_format_rational():
    assert format_rational(3) == "3"
    assert format_rational(Fraction(-2, 24)) == "-1/12"


@pytest.mark.parametrize(
    "value, places, expected",
    [
        (Fraction(1, 3), 6, "0.333333"),
        (Fraction(2, 3), 6, "0.666667"),
        (7, 6, "7.000000"),
        (Fraction(-5, 2), 0, "-3"),
        (Fraction(-1, 10 ** 9), 6, "0.000000"),
        (Fraction(18479, 194481), 6, "0.095017"),
    ],
)
def test_format_decimal(value, places, expected):
    assert format_decimal(value, places) == expected


def test_partitions():
    assert list(partitions(4, 2)) == [(4,), (3, 1), (2, 2)]
    assert list(partitions(0, 0)) == [()]


def test_solve_linear_system_unique():
    assert solve_linear_system([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]


def test_solve_linear_system_rank_deficient():
    with pytest.raises(UnderdeterminedSystem):
        solve_linear_system([[1, 1], [2, 2]], [1, 2])


def test_solve_linear_system_inconsistent():
    with pytest.raises(InconsistentSamples):
        solve_linear_system([[1, 1], [2, 2]], [1, 3])


def test_interpolate_univariate():
    poly = interpolate_univariate([(0, 1), (1, 2), (2, 5)])
    assert poly == Polynomial(1, {(2,): 1, (0,): 1})


def test_poly_fit_recovers_binomial():
    samples = [((k,), Fraction((k + 1) * (k + 2), 2)) for k in range(5)]
    fitted = poly_fit(samples, 1, 2)
    assert fitted.evaluate((10,)) == 66


def test_symmetric_square_basis_size():
    # degree <= 1 in squares, two even slots: 1, b1^2 + b2^2
    assert len(symmetric_square_basis((0, 0), 1)) == 2
    # one odd and one even slot are not symmetrized together
    assert len(symmetric_square_basis((1, 0), 1)) == 3


def test_qp_fit_separates_parity_classes():
    def value(b):
        shift = Fraction(1, 2) if b[0] % 2 == 0 else Fraction(1, 4)
        return Fraction(b[0] ** 2 + b[1] ** 2, 8) - shift

    grid = [(x, y) for x in range(1, 8) for y in range(1, 8)]
    samples = [(b, value(b) if sum(b) % 2 == 0 else 0) for b in grid]
    qp = qp_fit(samples, 2, 1, min_holdouts=3)
    assert qp.parity_classes() == [(0, 0), (1, 1)]
    assert qp.evaluate((20, 10)) == value((20, 10))
    assert qp.evaluate((21, 9)) == value((21, 9))
    assert qp.evaluate((2, 3)) == 0


def test_qp_fit_enforces_holdouts():
    samples = [((2,), 1), ((4,), 4)]
    with pytest.raises(UnderdeterminedSystem):
        qp_fit(samples, 1, 1, min_holdouts=1)


def test_qp_fit_rejects_nonzero_odd_weight_class():
    with pytest.raises(InconsistentSamples):
        qp_fit([((1,), 1)], 1, 0)


def test_quasipolynomial_drops_zero_classes():
    qp = QuasiPolynomial(1, {(0,): Polynomial.constant(1, 2), (1,): Polynomial.zero(1)})
    assert qp.parity_classes() == [(0,)]
    assert qp.evaluate((3,)) == 0
    assert qp.evaluate((0,)) == 2
    with pytest.raises(ValueError):
        qp.evaluate((-2,))


def test_bernoulli_numbers():
    assert bernoulli_numbers(4) == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]


def test_zeta_neg():
    assert zeta_neg(1) == Fraction(-1, 12)
    assert zeta_neg(2) == Fraction(1, 120)
    assert zeta_neg(3) == Fraction(-1, 252)
    with pytest.raises(ValueError):
        zeta_neg(0)
