from fractions import Fraction

import pytest

from modcount.services import cache_service
from modcount.services.cache_service import CacheCorrupted
from modcount.services.exactnum import Polynomial, QuasiPolynomial

N_11 = QuasiPolynomial(1, {(0,): Polynomial(1, {(2,): Fraction(1, 48), (0,): Fraction(-1, 12)})})


def test_missing_file_loads_as_none(tmp_path):
    assert cache_service.load_quasipolynomial(str(tmp_path), 1, 1) is None


def test_save_then_load(tmp_path):
    path = cache_service.save_quasipolynomial(str(tmp_path / "nested"), 1, 1, N_11)
    assert path.name == "N_g1_n1.json"
    assert cache_service.load_quasipolynomial(str(tmp_path / "nested"), 1, 1) == N_11
    assert not list(path.parent.glob("*.tmp"))


def test_saving_twice_is_byte_identical(tmp_path):
    path = cache_service.save_quasipolynomial(str(tmp_path), 1, 1, N_11)
    first = path.read_bytes()
    cache_service.save_quasipolynomial(str(tmp_path), 1, 1, N_11)
    assert path.read_bytes() == first


def test_rationals_are_stored_as_text(tmp_path):
    text = cache_service.dump_quasipolynomial(N_11)
    assert '"-1/12"' in text
    assert '"1/48"' in text


@pytest.mark.parametrize("content", ["{not json", '{"vars": 1, "classes": [{"parity": [2], "poly": {}}]}'])
def test_corrupted_file(tmp_path, content):
    cache_service.cache_path(str(tmp_path), 1, 1).write_text(content, encoding="utf-8")
    with pytest.raises(CacheCorrupted):
        cache_service.load_quasipolynomial(str(tmp_path), 1, 1)


def test_wrong_variable_count(tmp_path):
    cache_service.save_quasipolynomial(str(tmp_path), 1, 1, N_11)
    cache_service.cache_path(str(tmp_path), 1, 1).rename(cache_service.cache_path(str(tmp_path), 1, 2))
    with pytest.raises(CacheCorrupted):
        cache_service.load_quasipolynomial(str(tmp_path), 1, 2)
