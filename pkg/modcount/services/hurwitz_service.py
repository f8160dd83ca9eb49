"""
(hurwitz_service.py) Branched covers of the sphere counted as factorizations in S_d.

Belyi counts (profile 2^(d/2) over 1, the boundary lengths over infinity) reproduce N_{g,n};
simple Hurwitz numbers count transitive transposition factorizations; the class-algebra
trace gives disconnected counts; the ELSV rows provide an independent closed form.
"""

import functools
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from modcount.config import (
    BELYI_MAX_DEGREE,
    CLASS_TRACE_MAX_DEGREE,
    SIMPLE_HURWITZ_MAX_BRANCH_POINTS,
    SIMPLE_HURWITZ_MAX_DEGREE,
)
from modcount.services.worker_pool import run_partitioned

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


# --- Custom Exceptions for the router layer ---
class FrontierExceeded(Exception):
    """Raised when a degree or branch-point count is beyond the brute-force frontier."""
    pass

class UnsupportedTableRow(Exception):
    """Raised when no ELSV polynomial row is stored for (g, n)."""
    pass


# ==============================================================================
# Domain Types
# ==============================================================================

@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("A partition needs at least one part.")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"Partition parts must be positive, got {self.parts}.")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"Partition parts must be weakly decreasing, got {self.parts}.")

    @classmethod
    def of(cls, parts: Sequence[int]) -> "Partition":
        return cls(tuple(sorted((int(p) for p in parts), reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def aut_order(self) -> int:
        """prod over part values of (multiplicity)!"""
        return math.prod(math.factorial(m) for m in Counter(self.parts).values())

    def centralizer_order(self) -> int:
        return math.prod(self.parts) * self.aut_order()

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class BranchData:
    degree: int
    profiles: Tuple[Partition, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"Cover degree must be positive, got {self.degree}.")
        for profile in self.profiles:
            if profile.size != self.degree:
                raise ValueError(f"Profile {profile} is not a partition of {self.degree}.")

    def riemann_hurwitz_genus(self) -> Optional[int]:
        """Genus of a connected cover with these profiles, or None if 2 - 2g is not admissible."""
        ramification = sum(p - 1 for profile in self.profiles for p in profile.parts)
        twice = ramification - 2 * self.degree + 2
        if twice < 0 or twice % 2:
            return None
        return twice // 2


# ==============================================================================
# Permutation helpers
# ==============================================================================

def cycle_type(perm: Sequence[int]) -> Tuple[int, ...]:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if not seen[start]:
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                length += 1
            lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def _count_cycles(perm: Sequence[int]) -> int:
    return len(cycle_type(perm))


def _canonical_permutation(lengths: Sequence[int]) -> List[int]:
    """Consecutive cycles: (0 .. l1-1)(l1 .. l1+l2-1) ..."""
    perm = []
    start = 0
    for length in lengths:
        perm.extend(start + (i + 1) % length for i in range(length))
        start += length
    return perm


def _transitive(d: int, generators: Sequence[Sequence[int]]) -> bool:
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = d
    for perm in generators:
        for x in range(d):
            a, b = find(x), find(perm[x])
            if a != b:
                parent[a] = b
                components -= 1
    return components == 1


def _involutions(free: List[int]) -> Iterator[List[Tuple[int, int]]]:
    if not free:
        yield []
        return
    first = free[0]
    for k in range(1, len(free)):
        rest = free[1:k] + free[k + 1 :]
        for pairs in _involutions(rest):
            yield [(first, free[k])] + pairs


# ==============================================================================
# Belyi counts
# ==============================================================================

def _belyi_partition(sigma3: Permutation, partner: int, forbid_units: bool, target_cycles: int) -> int:
    """Accepted sigma2 among the fixed-point-free involutions pairing 0 with partner."""
    d = len(sigma3)
    rest = [x for x in range(1, d) if x != partner]
    accepted = 0
    for pairs in _involutions(rest):
        sigma2 = [0] * d
        sigma2[0], sigma2[partner] = partner, 0
        for x, y in pairs:
            sigma2[x], sigma2[y] = y, x
        # sigma1 = (sigma2 o sigma3)^-1
        sigma1 = [0] * d
        for x in range(d):
            sigma1[sigma2[sigma3[x]]] = x
        if forbid_units and any(sigma1[x] == x for x in range(d)):
            continue
        if _count_cycles(sigma1) != target_cycles:
            continue
        if _transitive(d, (sigma2, sigma3)):
            accepted += 1
    return accepted


def belyi_count(
    g: int,
    b: Sequence[int],
    forbid_units: bool = True,
    relabeling: Optional[Sequence[int]] = None,
    jobs: int = 1,
) -> Fraction:
    """
    Weighted count of connected genus-g covers with profile 2^(d/2) over 1 and labeled
    cycles of lengths b over infinity; with forbid_units, no unramified points over 0.

    Args:
        g: genus of the cover.
        b: cycle lengths over infinity, d = sum(b).
        forbid_units: reject covers with a fixed point of sigma1.
        relabeling: optional permutation of the d points conjugating the canonical sigma3.
        jobs: worker processes (partitioned by the partner of point 0 under sigma2).

    Returns:
        Accepted sigma2 divided by prod b_i.
    """
    if g < 0 or not b or any(x < 1 for x in b):
        raise ValueError(f"Need g >= 0 and positive cycle lengths, got g={g}, b={tuple(b)}.")
    d = sum(b)
    if d % 2:
        return Fraction(0)
    if d > BELYI_MAX_DEGREE:
        raise FrontierExceeded(f"Belyi counting supports degree <= {BELYI_MAX_DEGREE}, got {d}.")

    sigma3 = _canonical_permutation(b)
    if relabeling is not None:
        if sorted(relabeling) != list(range(d)):
            raise ValueError(f"Relabeling must be a permutation of 0..{d - 1}.")
        conjugated = [0] * d
        for x in range(d):
            conjugated[relabeling[x]] = relabeling[sigma3[x]]
        sigma3 = conjugated

    # cycles(sigma1) + d/2 + n - d = 2 - 2g
    target_cycles = 2 - 2 * g + d - d // 2 - len(b)
    if target_cycles < 1:
        return Fraction(0)
    tasks = [(tuple(sigma3), partner, forbid_units, target_cycles) for partner in range(1, d)]
    accepted = sum(run_partitioned(_belyi_partition, tasks, jobs=jobs, description=f"belyi {tuple(b)}"))
    logger.info(f"belyi | g={g} b={tuple(b)} | {accepted} accepted factorizations")
    return Fraction(accepted, math.prod(b))


# ==============================================================================
# Simple Hurwitz numbers
# ==============================================================================

def branch_point_count(g: int, mu: Partition) -> int:
    """r = 2g - 2 + l(mu) + |mu| simple branch points."""
    return 2 * g - 2 + mu.length + mu.size


def simple_hurwitz(g: int, mu: Partition) -> Fraction:
    """
    H_{g,mu}: transitive tuples of r transpositions whose product is sigma^-1 for a fixed
    sigma of cycle type mu, divided by |Z(sigma)|.

    The search advances one transposition at a time over states (running product,
    connected components) and drops states that can no longer reach sigma^-1.
    """
    d = mu.size
    r = branch_point_count(g, mu)
    if g < 0:
        raise ValueError(f"Need g >= 0, got {g}.")
    if d > SIMPLE_HURWITZ_MAX_DEGREE or r > SIMPLE_HURWITZ_MAX_BRANCH_POINTS:
        raise FrontierExceeded(
            f"Simple Hurwitz search supports d <= {SIMPLE_HURWITZ_MAX_DEGREE} and r <= "
            f"{SIMPLE_HURWITZ_MAX_BRANCH_POINTS}, got d={d}, r={r}."
        )
    if r < 0:
        return Fraction(0)

    sigma = _canonical_permutation(mu.parts)
    target = [0] * d
    for x in range(d):
        target[sigma[x]] = x
    target = tuple(target)
    transpositions = list(itertools.combinations(range(d), 2))

    def distance(perm: Permutation) -> int:
        # d - cycles(perm^-1 o target)
        inverse = [0] * d
        for x in range(d):
            inverse[perm[x]] = x
        return d - _count_cycles([inverse[target[x]] for x in range(d)])

    states: Dict[Tuple[Permutation, Permutation], int] = {(tuple(range(d)), tuple(range(d))): 1}
    for step in range(r):
        remaining = r - step - 1
        following: Dict[Tuple[Permutation, Permutation], int] = {}
        for (perm, labels), ways in states.items():
            for i, j in transpositions:
                moved = list(perm)
                moved[i], moved[j] = moved[j], moved[i]
                moved = tuple(moved)
                if distance(moved) > remaining:
                    continue
                if labels[i] != labels[j]:
                    low, high = sorted((labels[i], labels[j]))
                    merged = tuple(low if x == high else x for x in labels)
                else:
                    merged = labels
                key = (moved, merged)
                following[key] = following.get(key, 0) + ways
        states = following

    connected = tuple([0] * d)
    accepted = states.get((target, connected), 0)
    return Fraction(accepted, mu.centralizer_order())


def labeled_simple_hurwitz(g: int, mu: Sequence[int]) -> Fraction:
    """H_{g,n}(mu) = |Aut mu| / r! * H_{g,mu}; mu need not be sorted."""
    partition = Partition.of(mu)
    r = branch_point_count(g, partition)
    return Fraction(partition.aut_order(), math.factorial(r)) * simple_hurwitz(g, partition)


# ==============================================================================
# Class algebra trace
# ==============================================================================

@functools.lru_cache(maxsize=None)
def _classes(d: int) -> Dict[Tuple[int, ...], Tuple[Permutation, ...]]:
    buckets: Dict[Tuple[int, ...], List[Permutation]] = {}
    for perm in itertools.permutations(range(d)):
        buckets.setdefault(cycle_type(perm), []).append(perm)
    return {shape: tuple(members) for shape, members in buckets.items()}


def class_trace(data: BranchData) -> Fraction:
    """
    Disconnected weighted count (1/d!^2) tr(C_1 ... C_k): the coefficient of the identity
    in the product of class sums, divided by d!.
    """
    d = data.degree
    if d > CLASS_TRACE_MAX_DEGREE:
        raise FrontierExceeded(f"Class-algebra traces support degree <= {CLASS_TRACE_MAX_DEGREE}, got {d}.")
    classes = _classes(d)
    identity_type = (1,) * d
    # coefficients[nu]: weight of each single element of cycle type nu
    coefficients: Dict[Tuple[int, ...], int] = {identity_type: 1}
    for profile in data.profiles:
        members = classes[profile.parts]
        updated: Dict[Tuple[int, ...], Fraction] = {}
        for shape, weight in coefficients.items():
            representative = classes[shape][0]
            landing = Counter(cycle_type([representative[y[x]] for x in range(d)]) for y in members)
            for target, hits in landing.items():
                share = Fraction(weight * len(classes[shape]) * hits, len(classes[target]))
                updated[target] = updated.get(target, Fraction(0)) + share
        coefficients = {shape: value for shape, value in updated.items() if value}
    return Fraction(coefficients.get(identity_type, 0)) / math.factorial(d)


def belyi_trace_total(d: int) -> Fraction:
    """
    Sum of class traces over sigma1 profiles without parts equal to 1, with 2^(d/2) over 1
    and a single d-cycle over infinity (every such tuple is transitive).
    """
    if d % 2:
        return Fraction(0)
    total = Fraction(0)
    involution = Partition((2,) * (d // 2))
    for parts in _partitions_without_ones(d):
        total += class_trace(BranchData(d, (Partition(parts), involution, Partition((d,)))))
    return total


def _partitions_without_ones(total: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 1, -1):
        for rest in _partitions_without_ones(total - part, part):
            yield (part,) + rest


# ==============================================================================
# ELSV
# ==============================================================================

def _sym(mu: Sequence[int]) -> Fraction:
    return Fraction(sum(mu))


ELSV_ROWS: Dict[Tuple[int, int], Tuple[str, Callable[[Sequence[int]], Fraction]]] = {
    (0, 3): ("1", lambda mu: Fraction(1)),
    (1, 1): ("(mu1 - 1)/24", lambda mu: Fraction(mu[0] - 1, 24)),
    (0, 4): ("mu1 + mu2 + mu3 + mu4", _sym),
    (1, 2): (
        "(mu1^2 + mu1*mu2 + mu2^2 - mu1 - mu2)/24",
        lambda mu: Fraction(mu[0] ** 2 + mu[0] * mu[1] + mu[1] ** 2 - mu[0] - mu[1], 24),
    ),
    # genus zero, n < 3: P_{0,n} = |mu|^(n - 3)
    (0, 1): ("1/mu1^2", lambda mu: Fraction(1, mu[0] ** 2)),
    (0, 2): ("1/(mu1 + mu2)", lambda mu: Fraction(1, mu[0] + mu[1])),
}


def elsv_hurwitz(g: int, mu: Partition) -> Fraction:
    """H_{g,mu} = r!/|Aut mu| * prod mu_i^mu_i / mu_i! * P_{g,n}(mu)."""
    row = ELSV_ROWS.get((g, mu.length))
    if row is None:
        raise UnsupportedTableRow(f"No ELSV row for (g, n) = ({g}, {mu.length}). Stored rows: {sorted(ELSV_ROWS)}.")
    r = branch_point_count(g, mu)
    weight = math.prod(Fraction(m ** m, math.factorial(m)) for m in mu.parts)
    return Fraction(math.factorial(r), mu.aut_order()) * weight * row[1](mu.parts)
