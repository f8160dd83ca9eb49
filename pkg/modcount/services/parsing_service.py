"""
(parsing_service.py) Parses the text forms used on the command line and in catalog
files: integer vectors, matrices, partitions, rational lists and one-line fatgraphs.
"""

import re
from fractions import Fraction
from typing import Dict, List, Tuple

from modcount.services.fatgraph_service import Fatgraph, InvalidFatgraph


class MalformedInput(ValueError):
    """Raised when a vector, matrix, partition or fatgraph string cannot be parsed."""
    pass


# - `-?\d+`: one optionally signed integer; entries are separated by commas
_VECTOR_PATTERN = re.compile(r"^\s*-?\d+(\s*,\s*-?\d+)*\s*$")
_RATIONAL_PATTERN = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")
# - four `;`-separated fields: edge count, tau0 cycles, tau1 pairs, labels
_FATGRAPH_PATTERN = re.compile(r"^\s*(\d+)\s*;((?:\s*\([\d\s]+\))+)\s*;((?:\s*\(\s*\d+\s+\d+\s*\))+)\s*;(.*)$")
_CYCLE_PATTERN = re.compile(r"\(([\d\s]+)\)")
_LABEL_PATTERN = re.compile(r"^\s*(\d+)\s*->\s*(\d+)\s*$")


def parse_vector(text: str, minimum: int = 0) -> List[int]:
    """'7,3' -> [7, 3]; every entry must be >= minimum."""
    if not _VECTOR_PATTERN.match(text):
        raise MalformedInput(f"'{text}' is not a comma-separated list of integers.")
    values = [int(x) for x in text.split(",")]
    if any(x < minimum for x in values):
        raise MalformedInput(f"Entries of '{text}' must be at least {minimum}.")
    return values


def parse_matrix(text: str) -> List[List[int]]:
    """'1,2,2;1,0,0' -> [[1, 2, 2], [1, 0, 0]]."""
    rows = [parse_vector(row) for row in text.split(";")]
    if len({len(row) for row in rows}) != 1:
        raise MalformedInput(f"Rows of '{text}' have different lengths.")
    return rows


def parse_partition(text: str) -> Tuple[int, ...]:
    """'2,1,1' -> (2, 1, 1), sorted weakly decreasing."""
    return tuple(sorted(parse_vector(text, minimum=1), reverse=True))


def parse_partitions(text: str) -> List[Tuple[int, ...]]:
    """'4;2,2;4' -> [(4,), (2, 2), (4,)]."""
    return [parse_partition(part) for part in text.split(";")]


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL_PATTERN.match(text):
        raise MalformedInput(f"'{text}' is not a rational number p or p/q.")
    value = Fraction(text.replace(" ", ""))
    return value


def parse_rational_list(text: str) -> List[Fraction]:
    """'1/10,1/100' -> [Fraction(1, 10), Fraction(1, 100)]."""
    return [parse_rational(part) for part in text.split(",")]


def parse_fatgraph(line: str) -> Fatgraph:
    """
    Reads 'E;(0 1 2)(3 4 5);(0 3)(1 4)(2 5);0->1,1->2,2->3' back into a Fatgraph.
    Each label entry names one half-edge of a boundary and the boundary's label.
    """
    match = _FATGRAPH_PATTERN.match(line)
    if not match:
        raise MalformedInput(f"'{line}' is not in the E;tau0;tau1;labels fatgraph format.")
    edges = int(match.group(1))
    size = 2 * edges

    tau0 = [-1] * size
    for cycle_text in _CYCLE_PATTERN.findall(match.group(2)):
        cycle = [int(x) for x in cycle_text.split()]
        for i, x in enumerate(cycle):
            if x >= size or tau0[x] != -1:
                raise MalformedInput(f"Half-edge {x} is out of range or repeated in tau0.")
            tau0[x] = cycle[(i + 1) % len(cycle)]

    tau1 = [-1] * size
    for pair_text in _CYCLE_PATTERN.findall(match.group(3)):
        x, y = (int(v) for v in pair_text.split())
        if max(x, y) >= size or tau1[x] != -1 or tau1[y] != -1:
            raise MalformedInput(f"Pair ({x} {y}) is out of range or repeats a half-edge.")
        tau1[x], tau1[y] = y, x

    if -1 in tau0 or -1 in tau1:
        raise MalformedInput(f"tau0 and tau1 must cover all {size} half-edges.")

    labels: Dict[int, int] = {}
    for entry in filter(None, (part.strip() for part in match.group(4).split(","))):
        label_match = _LABEL_PATTERN.match(entry)
        if not label_match:
            raise MalformedInput(f"Label entry '{entry}' is not of the form dart->label.")
        labels[int(label_match.group(1))] = int(label_match.group(2))

    try:
        return Fatgraph.from_permutations(tau0, tau1, labels)
    except InvalidFatgraph as e:
        raise MalformedInput(f"'{line}' does not describe a valid fatgraph: {e}") from e
