from fractions import Fraction

import pytest

from modcount.services import harer_zagier_service as hz
from modcount.services.exactnum import Polynomial, zeta_neg


def test_c_table():
    table = hz.hz_c(4, 5)
    for k in range(6):
        assert table.c[(0, k)] == k
        assert table.c[(2, k)] == (2 * k ** 3 + k) // 3
    assert table.c[(3, 0)] == 0


def test_gluing_counts():
    assert hz.hz_epsilon(0, 2) == 2
    assert hz.hz_epsilon(0, 3) == 5
    assert hz.hz_epsilon(1, 2) == 1
    assert hz.hz_epsilon(1, 3) == 10
    assert hz.hz_epsilon(2, 3) == 0


def test_gluings_without_adjacent_edges():
    assert hz.hz_mu(1, 2) == 1
    assert hz.hz_mu(1, 3) == 4
    assert hz.hz_mu(0, 1) == 1
    assert hz.hz_mu(0, 3) == 0


def test_table_carries_epsilon_and_mu():
    table = hz.hz_c(3, 3)
    assert table.epsilon[(1, 3)] == 10
    assert table.mu[(1, 3)] == 4


@pytest.mark.parametrize("n", range(9))
def test_epsilon_recursion_agrees(n):
    for g in range(n // 2 + 1):
        assert hz.hz_epsilon_recursive(g, n) == hz.hz_epsilon(g, n)


def test_generating_function():
    assert hz.generating_function_check(6, 4)


def test_one_boundary_counts():
    assert hz.n_g1_hz(1, 6) == Fraction(2, 3)
    assert hz.n_g1_hz(2, 8) == Fraction(21, 8)
    with pytest.raises(ValueError):
        hz.n_g1_hz(1, 5)
    with pytest.raises(ValueError):
        hz.n_g1_hz(0, 4)


def test_one_boundary_polynomials():
    assert hz.n_g1_polynomial(1) == Polynomial(1, {(2,): Fraction(1, 48), (0,): Fraction(-1, 12)})
    for g in range(1, 4):
        assert hz.n_g1_polynomial(g).coefficient((0,)) == zeta_neg(g)
    with pytest.raises(ValueError):
        hz.n_g1_polynomial(0)


def test_ratio_is_plain_data():
    assert hz.n_g1_ratio(1, 4) == -3
