"""
(polytope_service.py) Vector partition functions of P_A(b) = {x >= 0 : Ax = b}.

Lattice-point counts by memoized column recursion, the index of the lattice A*Z^N,
quotient volumes by dilation, Ehrhart polynomials with a reciprocity check, and the
product form of the discrete Laplace transform.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from sympy import Matrix

from modcount.config import MAX_DILATION_DOUBLINGS
from modcount.services.exactnum import (
    DimensionMismatch,
    InconsistentSamples,
    Polynomial,
    UnderdeterminedSystem,
    poly_fit,
)

logger = logging.getLogger(__name__)


# --- Custom Exceptions for the router layer ---
class InvalidSystem(ValueError):
    """Raised when a matrix has negative entries, a zero column or ragged rows."""
    pass

class RankDeficient(Exception):
    """Raised when A does not have full row rank over the rationals."""
    pass

class DegenerateDirection(Exception):
    """Raised when dilation counts are nonzero but the top-degree coefficient vanishes."""
    pass

class InterpolationError(Exception):
    """Raised when sampled counts are not polynomial on the sampled dilation class."""
    pass

class ReciprocityError(Exception):
    """Raised when interior counts disagree with (-1)^deg p(-k)."""
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    """Nonnegative integer matrix A (n rows, N columns) with no zero column."""
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise InvalidSystem("A constraint system needs at least one row and one column.")
        width = len(self.rows[0])
        if any(len(row) != width for row in self.rows):
            raise InvalidSystem("All rows of the matrix must have the same length.")
        if any(x < 0 for row in self.rows for x in row):
            raise InvalidSystem("Matrix entries must be nonnegative.")
        if any(not any(col) for col in self.columns()):
            raise InvalidSystem("Matrix columns must be nonzero.")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ConstraintSystem":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_columns(self) -> int:
        return len(self.rows[0])

    @property
    def dimension(self) -> int:
        """N - n, the dimension of P_A(b) for b in the interior of the cone."""
        return self.num_columns - self.num_rows

    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(row[j] for row in self.rows) for j in range(len(self.rows[0]))]


@dataclass(frozen=True)
class LaplaceProductForm:
    """prod_i z^alpha_i / (1 - z^alpha_i) over the columns alpha_i of A."""
    columns: Tuple[Tuple[int, ...], ...]

    @property
    def nvars(self) -> int:
        return len(self.columns[0])


def _check_vector(system: ConstraintSystem, b: Sequence[int]) -> Tuple[int, ...]:
    if len(b) != system.num_rows:
        raise DimensionMismatch(f"b = {tuple(b)} has {len(b)} entries but A has {system.num_rows} rows.")
    if any(x < 0 for x in b):
        raise ValueError(f"Entries of b must be nonnegative, got {tuple(b)}.")
    return tuple(int(x) for x in b)


def count_lattice_points(system: ConstraintSystem, b: Sequence[int], strict: bool = False) -> int:
    """
    Number of integer x with Ax = b, x_i >= 1 when strict and x_i >= 0 otherwise.

    Strict counts shift b by the column sum and count nonnegative solutions. Columns are
    processed heaviest first, and a residual with support outside the remaining columns
    is cut immediately.
    """
    b = _check_vector(system, b)
    columns = system.columns()
    if strict:
        b = tuple(x - sum(col[i] for col in columns) for i, x in enumerate(b))
        if any(x < 0 for x in b):
            return 0
    columns.sort(key=lambda col: (-sum(col), col))
    rows = range(len(b))
    # support[i][r]: some column i.. has a positive entry in row r
    support = [[False] * len(b) for _ in range(len(columns) + 1)]
    for i in range(len(columns) - 1, -1, -1):
        support[i] = [support[i + 1][r] or columns[i][r] > 0 for r in rows]

    memo: Dict[Tuple[int, Tuple[int, ...]], int] = {}

    def ways(i: int, residual: Tuple[int, ...]) -> int:
        if i == len(columns):
            return 0 if any(residual) else 1
        if any(residual[r] and not support[i][r] for r in rows):
            return 0
        key = (i, residual)
        if key in memo:
            return memo[key]
        column = columns[i]
        total = 0
        current = residual
        while all(x >= 0 for x in current):
            total += ways(i + 1, current)
            current = tuple(x - c for x, c in zip(current, column))
        memo[key] = total
        return total

    return ways(0, b)


def lattice_index(system: ConstraintSystem) -> int:
    """
    Index of A*Z^N in Z^n: the gcd of the n x n minors, which is the product of the
    elementary divisors of A.

    Raises:
        RankDeficient: if A has rank below n.
    """
    n = system.num_rows
    if Matrix(system.rows).rank() < n:
        raise RankDeficient(f"Matrix {system.rows} has rank below {n}.")
    columns = system.columns()
    index = 0
    for chosen in itertools.combinations(range(len(columns)), n):
        minor = Matrix([[columns[j][i] for j in chosen] for i in range(n)]).det(method="bareiss")
        index = math.gcd(index, int(minor))
        if index == 1:
            break
    return index


def _dilation_counts(system: ConstraintSystem, b: Sequence[int], step: int, terms: int, strict: bool) -> List[Tuple[Tuple[int], int]]:
    return [((t,), count_lattice_points(system, [t * step * x for x in b], strict=strict)) for t in range(1, terms + 1)]


def polytope_volume(system: ConstraintSystem, b: Sequence[int]) -> Fraction:
    """
    Quotient volume V_{P_A}(b), read off the top coefficient of the strict counts at
    dilates t*step*b. The step doubles until the counts are polynomial in t.

    Returns Fraction(0) when b lies outside the cone (every dilate is empty).

    Raises:
        RankDeficient, DegenerateDirection, InterpolationError
    """
    b = _check_vector(system, b)
    index = lattice_index(system)
    degree = system.dimension
    terms = degree + 4
    empty_steps = 0
    for doubling in range(MAX_DILATION_DOUBLINGS + 1):
        step = 2 ** doubling
        samples = _dilation_counts(system, b, step, terms, strict=True)
        if not any(count for _, count in samples):
            empty_steps += 1
            if empty_steps >= 2:
                return Fraction(0)
            continue
        try:
            fitted = poly_fit(samples, 1, degree)
        except InconsistentSamples:
            logger.info(f"polytope_volume | b={b} | counts not polynomial at step {step}, doubling")
            continue
        lead = fitted.coefficient((degree,))
        if lead == 0:
            raise DegenerateDirection(f"Counts along {b} grow slower than degree {degree}.")
        return lead / (index * Fraction(step) ** degree)
    raise InterpolationError(
        f"Counts along {b} are not polynomial on dilates of step up to {2 ** MAX_DILATION_DOUBLINGS}."
    )


def ehrhart_polynomial(system: ConstraintSystem, b0: Sequence[int], terms: int, check_reciprocity: bool = True) -> Polynomial:
    """
    Fits p(k) = #{x >= 0 : Ax = k*b0} for k = 1..terms and confirms it at k = terms + 1.

    Choose b0 on the image lattice so the counts are polynomial in k (multiply by the
    period first when they are only quasi-polynomial).

    Args:
        system: the constraint matrix.
        b0: direction of dilation.
        terms: number of fitted samples, at least dim + 2.
        check_reciprocity: compare the strict counts with (-1)^dim p(-k) on the same k.

    Raises:
        InterpolationError, ReciprocityError
    """
    b0 = _check_vector(system, b0)
    degree = system.dimension
    if terms < degree + 2:
        raise ValueError(f"Ehrhart fitting needs at least {degree + 2} terms, got {terms}.")
    samples = _dilation_counts(system, b0, 1, terms, strict=False)
    try:
        p = poly_fit(samples, 1, degree)
    except (InconsistentSamples, UnderdeterminedSystem) as e:
        raise InterpolationError(f"Counts along {b0} are not a degree-{degree} polynomial: {e}") from e
    check = count_lattice_points(system, [(terms + 1) * x for x in b0])
    if p.evaluate((terms + 1,)) != check:
        raise InterpolationError(f"Fitted Ehrhart polynomial misses the count {check} at k = {terms + 1}.")

    if check_reciprocity:
        sign = (-1) ** degree
        for k in range(1, terms + 1):
            interior = count_lattice_points(system, [k * x for x in b0], strict=True)
            if interior != sign * p.evaluate((-k,)):
                raise ReciprocityError(f"Interior count {interior} at k = {k} breaks reciprocity.")
    return p


def vpf_laplace_form(system: ConstraintSystem) -> LaplaceProductForm:
    return LaplaceProductForm(tuple(system.columns()))
