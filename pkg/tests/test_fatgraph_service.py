import pytest
from hypothesis import given, strategies as st

from modcount.services.fatgraph_service import (
    Fatgraph,
    InvalidFatgraph,
    UnsupportedSize,
    automorphism_order,
    boundary_profile,
    enumerate_fatgraphs,
    incidence_matrix,
    is_isomorphic,
    permutation_cycles,
)

# two trivalent vertices, three edges, one boundary of length 6
TRIVALENT_TORUS = Fatgraph.from_permutations((1, 2, 0, 4, 5, 3), (3, 4, 5, 0, 1, 2))
# planar theta graph: three boundaries of two sides each
THETA = Fatgraph.from_permutations((1, 2, 0, 5, 3, 4), (3, 4, 5, 0, 1, 2))
# one four-valent vertex with two crossing loops
FIGURE_EIGHT_TORUS = Fatgraph.from_permutations((1, 2, 3, 0), (2, 3, 0, 1))


def test_permutation_cycles():
    assert permutation_cycles((1, 2, 0, 4, 3)) == [(0, 1, 2), (3, 4)]


def test_genus_and_boundaries():
    assert (TRIVALENT_TORUS.genus, TRIVALENT_TORUS.num_boundaries) == (1, 1)
    assert (THETA.genus, THETA.num_boundaries) == (0, 3)
    profile = boundary_profile(THETA)
    assert profile.genus == 0
    assert profile.boundary_cycles == ((1, 2), (2, 2), (3, 2))


def test_automorphism_orders():
    assert automorphism_order(TRIVALENT_TORUS) == 6
    assert automorphism_order(FIGURE_EIGHT_TORUS) == 4
    # the rotations of the theta graph all move some boundary label
    assert automorphism_order(THETA) == 1


def test_incidence_matrix_columns_sum_to_two():
    assert incidence_matrix(TRIVALENT_TORUS) == [[2, 2, 2]]
    assert incidence_matrix(THETA) == [[1, 0, 1], [1, 1, 0], [0, 1, 1]]


def test_rejects_bivalent_vertex():
    with pytest.raises(InvalidFatgraph):
        Fatgraph.from_permutations((1, 0, 3, 2), (2, 3, 0, 1))


def test_rejects_fixed_point_in_pairing():
    with pytest.raises(InvalidFatgraph):
        Fatgraph.from_permutations((1, 2, 0, 4, 5, 3), (0, 4, 5, 3, 1, 2))


def test_rejects_bad_labels():
    with pytest.raises(InvalidFatgraph):
        Fatgraph.from_permutations((1, 2, 0, 5, 3, 4), (3, 4, 5, 0, 1, 2), {0: 1, 1: 1, 2: 3})


def test_catalog_one_one():
    catalog = enumerate_fatgraphs(1, 1)
    assert catalog.unlabeled_count == 2
    assert sorted(entry.aut_order for entry in catalog.entries) == [4, 6]
    assert list(catalog.edge_range()) == [2, 3]


def test_catalog_zero_three():
    catalog = enumerate_fatgraphs(0, 3)
    assert catalog.unlabeled_count == 3
    assert len(catalog) == 7
    assert sum(1 for entry in catalog.entries if entry.num_edges == 3) == 4
    for entry in catalog.entries:
        assert entry.fatgraph.genus == 0
        assert entry.fatgraph.num_boundaries == 3


def test_catalog_zero_four():
    assert len(enumerate_fatgraphs(0, 4)) == 327


@pytest.mark.parametrize("g, n", [(0, 3), (1, 1), (0, 4), (1, 2)])
def test_edge_counts_fill_the_edge_range(g, n):
    catalog = enumerate_fatgraphs(g, n)
    assert {entry.num_edges for entry in catalog.entries} == set(catalog.edge_range())


def relabeled(fatgraph, order):
    boundaries = [None] * fatgraph.num_boundaries
    for index, cycle in enumerate(fatgraph.boundaries):
        boundaries[order[index]] = cycle
    return Fatgraph(fatgraph.tau0, fatgraph.tau1, tuple(boundaries))


@given(st.data())
def test_catalog_is_closed_under_relabeling(data):
    g, n = data.draw(st.sampled_from([(0, 3), (1, 2)]))
    catalog = enumerate_fatgraphs(g, n)
    entry = data.draw(st.sampled_from(catalog.entries))
    order = data.draw(st.permutations(range(n)))
    moved = relabeled(entry.fatgraph, order)
    assert sum(1 for other in catalog.entries if is_isomorphic(moved, other.fatgraph)) == 1


def test_is_isomorphic():
    assert is_isomorphic(THETA, THETA)
    # swapping the two vertices exchanges boundaries 1 and 2
    assert is_isomorphic(THETA, relabeled(THETA, [1, 0, 2]))
    assert not is_isomorphic(THETA, TRIVALENT_TORUS)
    assert not is_isomorphic(TRIVALENT_TORUS, FIGURE_EIGHT_TORUS)


def test_catalog_is_deterministic():
    first = [entry.fatgraph.to_text() for entry in enumerate_fatgraphs(0, 3).entries]
    second = [entry.fatgraph.to_text() for entry in enumerate_fatgraphs(0, 3).entries]
    assert first == second


def test_enumeration_frontier():
    with pytest.raises(UnsupportedSize):
        enumerate_fatgraphs(2, 2)
    with pytest.raises(ValueError):
        enumerate_fatgraphs(0, 2)
