from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from modcount.services import cache_service, moduli_service
from modcount.services.cache_service import CacheCorrupted
from modcount.services.exactnum import Polynomial, QuasiPolynomial
from modcount.services.moduli_service import UnstableType


@pytest.mark.parametrize(
    "g, b, expected",
    [
        (0, (1, 1, 2), 1),
        (0, (1, 1, 1), 0),
        (1, (4,), Fraction(1, 4)),
        (1, (6,), Fraction(2, 3)),
        (0, (2, 2, 2, 2), 3),
        (0, (3, 3, 3, 3), 8),
        (1, (4, 2), Fraction(1, 2)),
        (2, (8,), Fraction(21, 8)),
    ],
)
def test_recursion_values(g, b, expected):
    assert moduli_service.n_recursive(g, len(b), b) == expected


def test_recursion_is_symmetric():
    assert moduli_service.n_recursive(0, 4, (4, 2, 2, 2)) == moduli_service.n_recursive(0, 4, (2, 2, 4, 2))


def test_unstable_types_are_rejected():
    with pytest.raises(UnstableType):
        moduli_service.n_recursive(0, 2, (2, 2))
    with pytest.raises(UnstableType):
        moduli_service.n_recursive(1, 1, (2, 2))
    with pytest.raises(ValueError):
        moduli_service.n_recursive(1, 1, (0,))


@pytest.mark.parametrize("g, b", [(0, (2, 2, 2)), (1, (6,)), (0, (2, 2, 2, 2)), (0, (3, 1, 1, 1)), (1, (3, 1))])
def test_direct_enumeration_agrees_with_recursion(g, b):
    assert moduli_service.n_direct(g, len(b), b) == moduli_service.n_recursive(g, len(b), b)


def test_quasipolynomial_one_one(fresh_memo):
    qp = moduli_service.n_quasipolynomial(1, 1)
    assert qp.parity_classes() == [(0,)]
    assert qp.polynomial((0,)) == Polynomial(1, {(2,): Fraction(1, 48), (0,): Fraction(-1, 12)})
    assert qp.evaluate((5,)) == 0


def test_quasipolynomial_zero_four_matches_recursion(fresh_memo):
    qp = moduli_service.n_quasipolynomial(0, 4)
    for b in [(2, 2, 2, 2), (3, 3, 3, 3), (5, 1, 4, 2), (7, 3, 2, 10)]:
        assert qp.evaluate(b) == moduli_service.n_recursive(0, 4, b)
    assert qp.evaluate((1, 2, 2, 2)) == 0


def test_quasipolynomial_reads_and_writes_cache(fresh_memo, tmp_path):
    fitted = moduli_service.n_quasipolynomial(1, 2, cache_dir=str(tmp_path))
    assert (tmp_path / "N_g1_n2.json").is_file()
    moduli_service.clear_memo()
    assert moduli_service.n_quasipolynomial(1, 2, cache_dir=str(tmp_path)) == fitted


def test_cache_with_wrong_coefficient_is_rejected(fresh_memo, tmp_path):
    tampered = QuasiPolynomial(1, {(0,): Polynomial(1, {(2,): Fraction(1, 48), (0,): Fraction(-1, 24)})})
    cache_service.save_quasipolynomial(str(tmp_path), 1, 1, tampered)
    with pytest.raises(CacheCorrupted):
        moduli_service.n_quasipolynomial(1, 1, cache_dir=str(tmp_path))


def test_fresh_fit_is_spot_checked_against_enumeration(fresh_memo, monkeypatch):
    checked = []
    monkeypatch.setattr(moduli_service, "_spot_check", lambda g, n, qp: checked.append((g, n)))
    moduli_service.n_quasipolynomial(0, 4)
    moduli_service.n_quasipolynomial(0, 4)
    assert checked == [(0, 4)]


def test_memoized_result_is_written_to_a_new_cache(fresh_memo, tmp_path):
    moduli_service.n_quasipolynomial(1, 1)
    moduli_service.n_quasipolynomial(1, 1, cache_dir=str(tmp_path))
    assert (tmp_path / "N_g1_n1.json").is_file()


@pytest.mark.parametrize(
    "g, n, expected",
    [
        (0, 3, 1),
        (1, 1, Fraction(-1, 12)),
        (0, 4, -1),
        (1, 2, Fraction(1, 12)),
        pytest.param(2, 1, Fraction(1, 120), marks=pytest.mark.slow),
    ],
)
def test_euler_characteristic_lattice_and_zeta(g, n, expected):
    assert moduli_service.euler_characteristic(g, n, method="zeta") == expected
    assert moduli_service.euler_characteristic(g, n, method="lattice") == expected


@pytest.mark.parametrize("g, n, expected", [(0, 3, 1), (1, 1, Fraction(-1, 12)), (0, 4, -1)])
def test_euler_characteristic_from_catalog(g, n, expected):
    assert moduli_service.euler_characteristic(g, n, method="catalog") == expected


def test_euler_characteristic_unknown_method():
    with pytest.raises(ValueError):
        moduli_service.euler_characteristic(1, 1, method="guess")


def test_kontsevich_volumes():
    assert moduli_service.kontsevich_volume(0, 3) == Polynomial.constant(3, Fraction(1, 2))
    assert moduli_service.kontsevich_volume(1, 1) == Polynomial(1, {(2,): Fraction(1, 96)})
    squares = sum((Polynomial.variable(4, i) ** 2 for i in range(4)), Polynomial.zero(4))
    assert moduli_service.kontsevich_volume(0, 4) == squares * Fraction(1, 8)
    pair = Polynomial.variable(2, 0) ** 2 + Polynomial.variable(2, 1) ** 2
    assert moduli_service.kontsevich_volume(1, 2) == pair ** 2 * Fraction(1, 768)


@pytest.mark.slow
def test_kontsevich_volume_two_one():
    assert moduli_service.kontsevich_volume(2, 1) == Polynomial(1, {(8,): Fraction(1, 2 ** 17 * 27)})


def test_intersection_numbers():
    assert moduli_service.intersection_numbers(1, 1) == {(1,): Fraction(1, 24)}
    assert moduli_service.intersection_numbers(0, 3) == {(0, 0, 0): 1}
    numbers = moduli_service.intersection_numbers(0, 4)
    assert set(numbers.values()) == {1}
    assert len(numbers) == 4


@pytest.mark.parametrize("g, b", [(0, (2, 2, 2)), (0, (1, 1, 2)), (1, (4,)), (1, (2,))])
def test_dilaton_identity(g, b):
    result = moduli_service.dilaton_check(g, len(b), b)
    assert result.holds
    assert result.rhs == (2 * g - 2 + len(b)) * moduli_service.n_recursive(g, len(b), b)


def test_binomial_basis_genus_one():
    assert moduli_service.binomial_basis_coefficients(1) == {2: Fraction(1, 4), 3: Fraction(1, 6)}
    assert moduli_service.catalog_binomial_coefficients(1) == {2: Fraction(1, 4), 3: Fraction(1, 6)}


@pytest.mark.parametrize("g, n", [(0, 3), (1, 1), (0, 4), (1, 2)])
def test_weil_petersson_top_part(g, n):
    assert moduli_service.weil_petersson_check(g, n).matched


def test_top_degree_parts_are_even():
    for poly in moduli_service.top_degree_parts(1, 2).values():
        assert poly.is_even()
        assert poly.total_degree() == 4


@pytest.mark.slow
@pytest.mark.parametrize("g, n", [(0, 5), (1, 3)])
def test_frontier_quasipolynomials_match_enumeration(fresh_memo, g, n):
    moduli_service.n_quasipolynomial(g, n, verify_direct=True)


def test_concurrent_fits_share_one_memo_entry(fresh_memo):
    with ThreadPoolExecutor(max_workers=4) as executor:
        results = list(executor.map(lambda _: moduli_service.n_quasipolynomial(1, 2), range(8)))
    assert all(result is results[0] for result in results)
