from fractions import Fraction

import pytest

from modcount.services.fatgraph_service import enumerate_fatgraphs
from modcount.services.parsing_service import (
    MalformedInput,
    parse_fatgraph,
    parse_matrix,
    parse_partition,
    parse_partitions,
    parse_rational,
    parse_rational_list,
    parse_vector,
)


def test_parse_vector():
    assert parse_vector("7, 3") == [7, 3]
    with pytest.raises(MalformedInput):
        parse_vector("7;3")
    with pytest.raises(MalformedInput):
        parse_vector("0,2", minimum=1)


def test_parse_matrix():
    assert parse_matrix("1,2,2;1,0,0") == [[1, 2, 2], [1, 0, 0]]
    with pytest.raises(MalformedInput):
        parse_matrix("1,2;1")


def test_parse_partitions_sort_descending():
    assert parse_partition("1,2,1") == (2, 1, 1)
    assert parse_partitions("4;2,2;4") == [(4,), (2, 2), (4,)]
    with pytest.raises(MalformedInput):
        parse_partition("2,0")


def test_parse_rationals():
    assert parse_rational("-1/12") == Fraction(-1, 12)
    assert parse_rational_list("1/10,1/100") == [Fraction(1, 10), Fraction(1, 100)]
    with pytest.raises(MalformedInput):
        parse_rational("0.1")


def test_parse_fatgraph_reads_labels():
    fatgraph = parse_fatgraph("3;(0 1 2)(3 5 4);(0 3)(1 4)(2 5);1->1,0->2,2->3")
    assert fatgraph.genus == 0
    assert fatgraph.boundaries == ((1, 3), (0, 5), (2, 4))


def test_parse_fatgraph_reads_catalog_text():
    for entry in enumerate_fatgraphs(1, 1).entries:
        assert parse_fatgraph(entry.fatgraph.to_text()) == entry.fatgraph


@pytest.mark.parametrize(
    "line",
    [
        "3;(0 1 2)(3 4 5);(0 3)(1 4);0->1",
        "3;(0 1 2)(3 4 5);(0 3)(1 4)(2 5);0->1,1->2",
        "3;(0 1)(2 3)(4 5);(0 3)(1 4)(2 5);0->1",
        "not a fatgraph",
    ],
)
def test_parse_fatgraph_rejects(line):
    with pytest.raises(MalformedInput):
        parse_fatgraph(line)
