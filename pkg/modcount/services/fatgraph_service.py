"""
(fatgraph_service.py) Labeled fatgraphs (ribbon graphs) of type (g, n).

A fatgraph lives on half-edges 0..2E-1: tau1 pairs half-edges into edges, tau0 walks
the cyclic order at each vertex, and the cycles of tau2 = tau0 o tau1 are the boundary
components, each carrying a label 1..n.

Enumeration builds every rooted map breadth-first, keeps the root whose encoding is
minimal, and reads the automorphism group off the roots that tie with it. Labeled
classes then come from the orbits of that group on boundary labelings.
"""

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from modcount.config import ENUMERATION_FRONTIER
from modcount.services.worker_pool import run_partitioned

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


# --- Custom Exceptions for the router layer ---
class InvalidFatgraph(ValueError):
    """Raised when permutations do not describe a connected fatgraph with valences >= 3."""
    pass

class UnsupportedSize(Exception):
    """Raised when a requested type lies beyond the enumeration frontier."""
    pass


def permutation_cycles(perm: Sequence[int]) -> List[Tuple[int, ...]]:
    """Cycles of perm, each starting at its smallest element, ordered by that element."""
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x)
            x = perm[x]
        cycles.append(tuple(cycle))
    return cycles


def _is_permutation(perm: Sequence[int]) -> bool:
    return sorted(perm) == list(range(len(perm)))


# ==============================================================================
# Domain Types
# ==============================================================================

@dataclass(frozen=True)
class Fatgraph:
    """
    A labeled fatgraph. boundaries[i] is the tau2 cycle carrying label i + 1,
    written from its smallest half-edge.
    """
    tau0: Permutation
    tau1: Permutation
    boundaries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        size = len(self.tau1)
        if size == 0 or size % 2 or len(self.tau0) != size:
            raise InvalidFatgraph("tau0 and tau1 must be permutations of the same even, positive size.")
        if not _is_permutation(self.tau0) or not _is_permutation(self.tau1):
            raise InvalidFatgraph("tau0 and tau1 must be permutations of 0..2E-1.")
        if any(self.tau1[x] == x or self.tau1[self.tau1[x]] != x for x in range(size)):
            raise InvalidFatgraph("tau1 must be a fixed-point-free involution.")
        if any(len(c) < 3 for c in permutation_cycles(self.tau0)):
            raise InvalidFatgraph("Every vertex must have valence at least 3.")
        if not _connected(self.tau0, self.tau1):
            raise InvalidFatgraph("The fatgraph is not connected.")
        if sorted(self.boundaries) != permutation_cycles(self.tau2):
            raise InvalidFatgraph("Boundary labeling does not match the cycles of tau0 o tau1.")
        twice_genus = 2 - self.num_vertices + self.num_edges - self.num_boundaries
        if twice_genus < 0 or twice_genus % 2:
            raise InvalidFatgraph(f"Euler relation gives a non-integral or negative genus ({twice_genus}/2).")

    @classmethod
    def from_permutations(
        cls,
        tau0: Sequence[int],
        tau1: Sequence[int],
        labels: Optional[Dict[int, int]] = None,
    ) -> "Fatgraph":
        """
        Builds a fatgraph and labels its boundaries. labels maps any half-edge of a
        boundary to its label; by default boundaries are labeled by smallest half-edge.
        """
        tau0, tau1 = tuple(tau0), tuple(tau1)
        if len(tau0) != len(tau1) or not _is_permutation(tau0) or not _is_permutation(tau1):
            raise InvalidFatgraph("tau0 and tau1 must be permutations of the same size.")
        faces = permutation_cycles(tuple(tau0[tau1[x]] for x in range(len(tau1))))
        if labels is None:
            return cls(tau0, tau1, tuple(faces))
        ordered: Dict[int, Tuple[int, ...]] = {}
        for face in faces:
            hits = {labels[x] for x in face if x in labels}
            if len(hits) != 1:
                raise InvalidFatgraph(f"Boundary {face} needs exactly one label, got {sorted(hits)}.")
            ordered[hits.pop()] = face
        if sorted(ordered) != list(range(1, len(faces) + 1)):
            raise InvalidFatgraph(f"Labels must be 1..{len(faces)}, got {sorted(ordered)}.")
        return cls(tau0, tau1, tuple(ordered[k] for k in sorted(ordered)))

    @property
    def tau2(self) -> Permutation:
        return tuple(self.tau0[self.tau1[x]] for x in range(len(self.tau1)))

    @property
    def num_edges(self) -> int:
        return len(self.tau1) // 2

    @property
    def num_vertices(self) -> int:
        return len(permutation_cycles(self.tau0))

    @property
    def num_boundaries(self) -> int:
        return len(self.boundaries)

    @property
    def genus(self) -> int:
        return (2 - self.num_vertices + self.num_edges - self.num_boundaries) // 2

    def edges(self) -> List[Tuple[int, int]]:
        return [(x, self.tau1[x]) for x in range(len(self.tau1)) if x < self.tau1[x]]

    def boundary_labels(self) -> List[int]:
        """Label of the boundary each half-edge lies on."""
        label = [0] * len(self.tau1)
        for index, cycle in enumerate(self.boundaries):
            for x in cycle:
                label[x] = index + 1
        return label

    def to_text(self) -> str:
        """One-line text form: E;tau0 cycles;tau1 pairs;boundary->label list."""
        vertices = "".join("(" + " ".join(map(str, c)) + ")" for c in permutation_cycles(self.tau0))
        pairs = "".join(f"({x} {y})" for x, y in self.edges())
        labels = ",".join(f"{cycle[0]}->{index + 1}" for index, cycle in enumerate(self.boundaries))
        return f"{self.num_edges};{vertices};{pairs};{labels}"


@dataclass(frozen=True)
class BoundaryProfile:
    genus: int
    boundary_cycles: Tuple[Tuple[int, int], ...]   # (label, length in half-edges)


@dataclass(frozen=True)
class CatalogEntry:
    fatgraph: Fatgraph
    aut_order: int

    @property
    def num_edges(self) -> int:
        return self.fatgraph.num_edges


@dataclass(frozen=True)
class FatgraphCatalog:
    """Every labeled fatgraph of type (g, n) up to isomorphism, with automorphism orders."""
    g: int
    n: int
    entries: Tuple[CatalogEntry, ...]
    unlabeled_count: int

    def __len__(self) -> int:
        return len(self.entries)

    def edge_range(self) -> range:
        return range(2 * self.g - 1 + self.n, 6 * self.g - 6 + 3 * self.n + 1)


def _connected(tau0: Sequence[int], tau1: Sequence[int]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in (tau0[x], tau1[x]):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(tau0)


# ==============================================================================
# Analysis
# ==============================================================================

def boundary_profile(fatgraph: Fatgraph) -> BoundaryProfile:
    """Genus from the Euler relation and the labeled boundary cycles with their lengths."""
    cycles = tuple((index + 1, len(cycle)) for index, cycle in enumerate(fatgraph.boundaries))
    return BoundaryProfile(genus=fatgraph.genus, boundary_cycles=cycles)


def _extend_isomorphism(
    tau0: Sequence[int],
    tau1: Sequence[int],
    source: int,
    target: int,
    onto: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
) -> Optional[List[int]]:
    """
    The unique map commuting with tau0 and tau1 (carried to onto, default the same pair)
    that sends source to target, if any. Connectedness makes the image of one half-edge
    decide everything.
    """
    onto0, onto1 = onto if onto is not None else (tau0, tau1)
    phi = [-1] * len(tau0)
    phi[source] = target
    stack = [source]
    while stack:
        x = stack.pop()
        for perm, image_perm in ((tau0, onto0), (tau1, onto1)):
            y = perm[x]
            image = image_perm[phi[x]]
            if phi[y] == -1:
                phi[y] = image
                stack.append(y)
            elif phi[y] != image:
                return None
    return phi


def is_isomorphic(first: Fatgraph, second: Fatgraph) -> bool:
    """True when some bijection of half-edges carries tau0, tau1 and every boundary label across."""
    if len(first.tau1) != len(second.tau1) or first.num_boundaries != second.num_boundaries:
        return False
    first_label, second_label = first.boundary_labels(), second.boundary_labels()
    for target in range(len(second.tau1)):
        phi = _extend_isomorphism(first.tau0, first.tau1, 0, target, onto=(second.tau0, second.tau1))
        if phi is not None and all(second_label[phi[x]] == first_label[x] for x in range(len(phi))):
            return True
    return False


def automorphism_order(fatgraph: Fatgraph) -> int:
    """Number of half-edge bijections commuting with tau0, tau1 that fix every boundary label."""
    label = fatgraph.boundary_labels()
    order = 0
    for target in range(len(fatgraph.tau1)):
        phi = _extend_isomorphism(fatgraph.tau0, fatgraph.tau1, 0, target)
        if phi is not None and all(label[phi[x]] == label[x] for x in range(len(phi))):
            order += 1
    return order


def incidence_matrix(fatgraph: Fatgraph) -> List[List[int]]:
    """n x E matrix: entry (i, e) counts the sides of edge e on boundary i + 1. Columns sum to 2."""
    label = fatgraph.boundary_labels()
    edges = fatgraph.edges()
    matrix = [[0] * len(edges) for _ in range(fatgraph.num_boundaries)]
    for column, (x, y) in enumerate(edges):
        matrix[label[x] - 1][column] += 1
        matrix[label[y] - 1][column] += 1
    return matrix


# ==============================================================================
# Enumeration
# ==============================================================================

def _tau0_from_valences(valences: Sequence[int]) -> Permutation:
    tau0 = []
    start = 0
    for valence in valences:
        tau0.extend(start + (i + 1) % valence for i in range(valence))
        start += valence
    return tuple(tau0)


def _count_cycles(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    count = 0
    for start in range(len(perm)):
        if not seen[start]:
            count += 1
            x = start
            while not seen[x]:
                seen[x] = True
                x = perm[x]
    return count


def _breadth_first_code(tau0: Sequence[int], tau1: Sequence[int], root: int) -> Tuple[Tuple[int, ...], List[int]]:
    """
    Relabels half-edges breadth-first from root (a vertex's half-edges get consecutive
    labels in tau0 order) and returns (valences + relabeled tau1, old -> new map).
    """
    size = len(tau0)
    new = [-1] * size
    order: List[int] = []
    valences: List[int] = []

    def open_vertex(start: int) -> None:
        x = start
        count = 0
        while True:
            new[x] = len(order)
            order.append(x)
            count += 1
            x = tau0[x]
            if x == start:
                break
        valences.append(count)

    open_vertex(root)
    i = 0
    while i < len(order):
        partner = tau1[order[i]]
        if new[partner] == -1:
            open_vertex(partner)
        i += 1
    code = tuple(valences) + tuple(new[tau1[order[i]]] for i in range(size))
    return code, new


def _rooted_maps(num_darts: int, num_vertices: int, root_valence: int) -> Iterator[Tuple[Tuple[int, ...], Permutation]]:
    """
    Every connected rooted map with the given sizes whose vertices all have valence
    >= root_valence, numbered breadth-first from the root.
    """
    tau1 = [-1] * num_darts
    valences = [root_valence]

    def extend(x: int, created: int) -> Iterator[Tuple[Tuple[int, ...], Permutation]]:
        while x < created and tau1[x] != -1:
            x += 1
        if x == created:
            if created == num_darts and len(valences) == num_vertices:
                yield tuple(valences), tuple(tau1)
            return
        for y in range(x + 1, created):
            if tau1[y] == -1:
                tau1[x], tau1[y] = y, x
                yield from extend(x + 1, created)
                tau1[x] = tau1[y] = -1
        missing = num_vertices - len(valences)
        if missing:
            spare = num_darts - created
            if missing == 1:
                choices = [spare] if spare >= root_valence else []
            else:
                choices = range(root_valence, spare - root_valence * (missing - 1) + 1)
            for valence in choices:
                valences.append(valence)
                tau1[x], tau1[created] = created, x
                yield from extend(x + 1, created + valence)
                tau1[x] = tau1[created] = -1
                valences.pop()

    if root_valence <= num_darts:
        yield from extend(0, root_valence)


def _unlabeled_classes(num_darts: int, num_vertices: int, num_faces: int, root_valence: int) -> List[tuple]:
    """
    Canonical representatives of unlabeled fatgraphs for one partition of the search.

    Returns (valences, tau1, automorphisms) triples; each automorphism is an old -> new
    half-edge map.
    """
    found = []
    for valences, tau1 in _rooted_maps(num_darts, num_vertices, root_valence):
        tau0 = _tau0_from_valences(valences)
        tau2 = [tau0[tau1[x]] for x in range(num_darts)]
        if _count_cycles(tau2) != num_faces:
            continue
        own_code = valences + tau1
        automorphisms = [tuple(range(num_darts))]
        minimal = True
        start = 0
        for valence in valences:
            if valence == root_valence:
                for root in range(start, start + valence):
                    if root == 0:
                        continue
                    code, relabel = _breadth_first_code(tau0, tau1, root)
                    if code < own_code:
                        minimal = False
                        break
                    if code == own_code:
                        automorphisms.append(tuple(relabel))
                if not minimal:
                    break
            start += valence
        if minimal:
            found.append((valences, tau1, tuple(automorphisms)))
    return found


def _labeled_entries(valences: Tuple[int, ...], tau1: Permutation, automorphisms: Sequence[Permutation], n: int) -> List[CatalogEntry]:
    tau0 = _tau0_from_valences(valences)
    faces = permutation_cycles(tuple(tau0[tau1[x]] for x in range(len(tau1))))
    face_of = {}
    for index, face in enumerate(faces):
        for x in face:
            face_of[x] = index
    # action of Aut(Gamma) on the boundary cycles
    image_group = {tuple(face_of[phi[face[0]]] for face in faces) for phi in automorphisms}
    kernel_order = len(automorphisms) // len(image_group)

    entries = []
    seen = set()
    for labeling in itertools.permutations(range(n)):
        if labeling in seen:
            continue
        for moved in image_group:
            image = [0] * n
            for face_index, label in enumerate(labeling):
                image[moved[face_index]] = label
            seen.add(tuple(image))
        by_label = [None] * n
        for face_index, label in enumerate(labeling):
            by_label[label] = faces[face_index]
        entries.append(CatalogEntry(Fatgraph(tau0, tau1, tuple(by_label)), kernel_order))
    return entries


_CATALOGS: Dict[Tuple[int, int], FatgraphCatalog] = {}
_CATALOG_LOCK = threading.Lock()


def check_enumerable(g: int, n: int) -> None:
    if g < 0 or n < 1 or 2 - 2 * g - n >= 0:
        raise ValueError(f"(g, n) = ({g}, {n}) is not a stable type with n >= 1.")
    if 6 * g - 6 + 3 * n > ENUMERATION_FRONTIER:
        raise UnsupportedSize(
            f"Fatgraph enumeration supports 6g-6+3n <= {ENUMERATION_FRONTIER}; ({g}, {n}) gives {6 * g - 6 + 3 * n}."
        )


def enumerate_fatgraphs(g: int, n: int, jobs: int = 1) -> FatgraphCatalog:
    """
    Complete catalog of labeled fatgraphs of type (g, n), one entry per isomorphism class.

    Args:
        g: genus.
        n: number of labeled boundary components.
        jobs: worker processes used for the (edge count, root valence) partitions.

    Raises:
        UnsupportedSize: beyond the 6g-6+3n frontier.
    """
    check_enumerable(g, n)
    with _CATALOG_LOCK:
        cached = _CATALOGS.get((g, n))
    if cached is not None:
        return cached

    euler = 2 - 2 * g - n
    tasks = []
    for edges in range(2 * g - 1 + n, 6 * g - 6 + 3 * n + 1):
        num_darts = 2 * edges
        num_vertices = edges + euler
        for root_valence in range(3, num_darts // num_vertices + 1):
            tasks.append((num_darts, num_vertices, n, root_valence))

    partitions = run_partitioned(_unlabeled_classes, tasks, jobs=jobs, description=f"Fat_{{{g},{n}}}")
    entries: List[CatalogEntry] = []
    unlabeled = 0
    for classes in partitions:
        for valences, tau1, automorphisms in classes:
            unlabeled += 1
            entries.extend(_labeled_entries(valences, tau1, automorphisms, n))

    catalog = FatgraphCatalog(g=g, n=n, entries=tuple(entries), unlabeled_count=unlabeled)
    logger.info(f"Fat_{{{g},{n}}} | {len(entries)} labeled classes from {unlabeled} unlabeled")
    with _CATALOG_LOCK:
        _CATALOGS[(g, n)] = catalog
    return catalog
