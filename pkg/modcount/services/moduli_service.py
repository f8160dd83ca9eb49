"""
(moduli_service.py) Lattice-point counts N_{g,n} of the moduli space of curves.

N_{g,n}(b) is computed two independent ways: as a 1/|Aut|-weighted sum of strict lattice
counts over the fatgraph catalog, and by the cut-and-join recursion seeded with N_{0,3}
and N_{1,1}. Samples of the recursion are interpolated into a quasi-polynomial, from which
Euler characteristics, Kontsevich volumes, intersection numbers and the dilaton identity
are read off.
"""

import itertools
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from modcount.config import DEBUG_INVARIANTS, ENUMERATION_FRONTIER, FIT_HOLDOUTS
from modcount.services import cache_service
from modcount.services.exactnum import (
    FitError,
    Parity,
    Polynomial,
    QuasiPolynomial,
    qp_fit,
    symmetric_square_basis,
    zeta_neg,
)
from modcount.services.fatgraph_service import (
    Fatgraph,
    enumerate_fatgraphs,
    incidence_matrix,
)
from modcount.services.polytope_service import ConstraintSystem, count_lattice_points

logger = logging.getLogger(__name__)


# --- Custom Exceptions for the router layer ---
class UnstableType(ValueError):
    """Raised when 2g - 2 + n <= 0 or the boundary lengths do not fit the type."""
    pass

class InvariantViolation(AssertionError):
    """Raised when a debug-mode structural check on the recursion fails."""
    pass


def check_stable(g: int, n: int) -> None:
    if g < 0 or n < 1:
        raise UnstableType(f"Need g >= 0 and n >= 1, got ({g}, {n}).")
    if 2 * g - 2 + n <= 0:
        raise UnstableType(f"({g}, {n}) is unstable: 2g - 2 + n = {2 * g - 2 + n}.")


def _check_lengths(g: int, n: int, b: Sequence[int]) -> Tuple[int, ...]:
    check_stable(g, n)
    if len(b) != n:
        raise UnstableType(f"N_{{{g},{n}}} takes {n} boundary lengths, got {len(b)}.")
    if any(x < 1 for x in b):
        raise ValueError(f"Boundary lengths must be positive, got {tuple(b)}.")
    return tuple(int(x) for x in b)


# ==============================================================================
# Direct enumeration
# ==============================================================================

_INCIDENCE_CLASSES: Dict[Tuple[int, int], List[Tuple[ConstraintSystem, Fraction]]] = {}
_INCIDENCE_LOCK = threading.Lock()


def _incidence_classes(g: int, n: int, jobs: int) -> List[Tuple[ConstraintSystem, Fraction]]:
    """Catalog incidence systems with equal column multisets merged, weights 1/|Aut| summed."""
    with _INCIDENCE_LOCK:
        cached = _INCIDENCE_CLASSES.get((g, n))
    if cached is not None:
        return cached
    weights: Dict[Tuple[Tuple[int, ...], ...], Fraction] = {}
    for entry in enumerate_fatgraphs(g, n, jobs=jobs).entries:
        matrix = incidence_matrix(entry.fatgraph)
        columns = tuple(sorted(zip(*matrix)))
        weights[columns] = weights.get(columns, Fraction(0)) + Fraction(1, entry.aut_order)
    classes = [
        (ConstraintSystem.from_rows(list(zip(*columns))), weight)
        for columns, weight in sorted(weights.items())
    ]
    logger.info(f"N_{{{g},{n}}} | {len(classes)} distinct incidence systems")
    with _INCIDENCE_LOCK:
        _INCIDENCE_CLASSES[(g, n)] = classes
    return classes


def n_direct(g: int, n: int, b: Sequence[int], jobs: int = 1) -> Fraction:
    """
    N_{g,n}(b) = sum over labeled fatgraphs of N_Gamma(b) / |Aut Gamma|.

    Raises:
        UnsupportedSize: when 6g - 6 + 3n exceeds the enumeration frontier.
    """
    b = _check_lengths(g, n, b)
    if sum(b) % 2:
        return Fraction(0)
    total = Fraction(0)
    for system, weight in _incidence_classes(g, n, jobs):
        count = count_lattice_points(system, b, strict=True)
        if count:
            total += weight * count
    return total


def fatgraph_count(fatgraph: Fatgraph, b: Sequence[int]) -> int:
    """N_Gamma(b): positive integer edge lengths giving boundary lengths b."""
    return count_lattice_points(ConstraintSystem.from_rows(incidence_matrix(fatgraph)), b, strict=True)


# ==============================================================================
# Recursion
# ==============================================================================

_MEMO: Dict[Tuple[int, Tuple[int, ...]], Fraction] = {}
_MEMO_LOCK = threading.Lock()


def _assert_even(value: int, role: str, g: int, b: Tuple[int, ...]) -> None:
    if value % 2:
        raise InvariantViolation(f"N_{{{g},{len(b)}}}{b} | nonzero summand with odd {role} = {value}")


def _recursive(g: int, b: Tuple[int, ...]) -> Fraction:
    n = len(b)
    if 2 * g - 2 + n <= 0 or sum(b) % 2:
        return Fraction(0)
    b = tuple(sorted(b))
    key = (g, b)
    value = _MEMO.get(key)
    if value is not None:
        return value

    if (g, n) == (0, 3):
        value = Fraction(1)
    elif (g, n) == (1, 1):
        value = Fraction(b[0] ** 2 - 4, 48)
    else:
        value = _recursion_step(g, b)

    with _MEMO_LOCK:
        value = _MEMO.setdefault(key, value)
    return value


def _recursion_step(g: int, b: Tuple[int, ...]) -> Fraction:
    n = len(b)
    # Case 1: two boundaries merge into one
    merged = Fraction(0)
    for i, j in itertools.combinations(range(n), 2):
        rest = b[:i] + b[i + 1 : j] + b[j + 1 :]
        for p in range(1, b[i] + b[j]):
            q = b[i] + b[j] - p
            term = _recursive(g, (p,) + rest)
            if term:
                if DEBUG_INVARIANTS:
                    _assert_even(q, "q", g, b)
                merged += p * q * term

    # Case 2: one boundary splits into two
    split = Fraction(0)
    for i in range(n):
        rest = b[:i] + b[i + 1 :]
        for p in range(1, b[i] - 1):
            for q in range(1, b[i] - p):
                r = b[i] - p - q
                inner = _recursive(g - 1, (p, q) + rest) if g > 0 else Fraction(0)
                for g1 in range(g + 1):
                    for mask in range(1 << len(rest)):
                        left = tuple(x for k, x in enumerate(rest) if mask >> k & 1)
                        right = tuple(x for k, x in enumerate(rest) if not mask >> k & 1)
                        factor = _recursive(g1, (p,) + left)
                        if factor:
                            inner += factor * _recursive(g - g1, (q,) + right)
                if inner:
                    if DEBUG_INVARIANTS:
                        _assert_even(r, "r", g, b)
                    split += p * q * r * inner
    return (merged + split / 2) / sum(b)


def n_recursive(g: int, n: int, b: Sequence[int]) -> Fraction:
    """
    N_{g,n}(b) from the cut-and-join recursion, memoized on (g, sorted b).

    Unstable types count as zero; N_{0,3} and N_{1,1} are the base cases.
    """
    b = _check_lengths(g, n, b)
    return _recursive(g, b)


def clear_memo() -> None:
    """Drops memoized recursion values and fitted quasi-polynomials."""
    with _MEMO_LOCK:
        _MEMO.clear()
    with _QUASIPOLYNOMIAL_LOCK:
        _QUASIPOLYNOMIALS.clear()


# ==============================================================================
# Quasi-polynomials
# ==============================================================================

_QUASIPOLYNOMIALS: Dict[Tuple[int, int], QuasiPolynomial] = {}
_QUASIPOLYNOMIAL_LOCK = threading.Lock()


def top_degree(g: int, n: int) -> int:
    """Degree 3g - 3 + n of N_{g,n} in the squares b_i^2."""
    return 3 * g - 3 + n


def _class_grid(g: int, n: int, odd_slots: int) -> List[Tuple[int, ...]]:
    """
    Sample points for the class whose first odd_slots entries are odd. Each block is
    sorted, since the ansatz is symmetric within it.
    """
    degree = top_degree(g, n)
    parity = (1,) * odd_slots + (0,) * (n - odd_slots)
    needed = len(symmetric_square_basis(parity, degree)) + FIT_HOLDOUTS
    size = degree + 1
    while math.comb(size + odd_slots - 1, odd_slots) * math.comb(size + n - odd_slots - 1, n - odd_slots) < needed:
        size += 1
    odd_values = [2 * i + 1 for i in range(size)]
    even_values = [2 * i + 2 for i in range(size)]
    return [
        odd + even
        for odd in itertools.combinations_with_replacement(odd_values, odd_slots)
        for even in itertools.combinations_with_replacement(even_values, n - odd_slots)
    ]


def _spread_to_classes(n: int, odd_slots: int, poly: Polynomial) -> Dict[Parity, Polynomial]:
    classes = {}
    for odd_positions in itertools.combinations(range(n), odd_slots):
        even_positions = [i for i in range(n) if i not in odd_positions]
        parity = tuple(1 if i in odd_positions else 0 for i in range(n))
        classes[parity] = poly.permuted(list(odd_positions) + even_positions)
    return classes


def n_quasipolynomial(g: int, n: int, cache_dir: Optional[str] = None, verify_direct: bool = True) -> QuasiPolynomial:
    """
    The quasi-polynomial N_{g,n}, fitted from recursion samples on every even-weight class.

    A result entering the in-process memo, fitted or read from the cache, is compared with
    direct enumeration at a few points whenever 6g - 6 + 3n is within the enumeration frontier.

    Args:
        g, n: a stable type.
        cache_dir: directory for N_g{g}_n{n}.json; read first, written after a fresh fit.
        verify_direct: set False to skip the enumeration spot-check.

    Raises:
        FitError: the samples are not quasi-polynomial of degree 3g - 3 + n in the b_i^2,
            or the fit disagrees with enumeration.
        CacheCorrupted: the cached quasi-polynomial disagrees with enumeration.
    """
    check_stable(g, n)
    with _QUASIPOLYNOMIAL_LOCK:
        memoized = _QUASIPOLYNOMIALS.get((g, n))
    if memoized is not None:
        if cache_dir and not cache_service.cache_path(cache_dir, g, n).is_file():
            cache_service.save_quasipolynomial(cache_dir, g, n, memoized)
        return memoized

    cached = cache_service.load_quasipolynomial(cache_dir, g, n) if cache_dir else None
    if cached is not None:
        if verify_direct:
            try:
                _spot_check(g, n, cached)
            except FitError as e:
                raise cache_service.CacheCorrupted(f"{cache_service.cache_path(cache_dir, g, n)}: {e}") from e
        with _QUASIPOLYNOMIAL_LOCK:
            return _QUASIPOLYNOMIALS.setdefault((g, n), cached)

    qp = _fit_quasipolynomial(g, n)
    if verify_direct:
        _spot_check(g, n, qp)
    with _QUASIPOLYNOMIAL_LOCK:
        qp = _QUASIPOLYNOMIALS.setdefault((g, n), qp)
    if cache_dir:
        cache_service.save_quasipolynomial(cache_dir, g, n, qp)
    return qp


def _fit_quasipolynomial(g: int, n: int) -> QuasiPolynomial:
    degree = top_degree(g, n)
    classes: Dict[Parity, Polynomial] = {}
    for odd_slots in range(0, n + 1, 2):
        grid = _class_grid(g, n, odd_slots)
        samples = [(b, _recursive(g, b)) for b in grid]
        try:
            fitted = qp_fit(samples, n, degree, min_holdouts=FIT_HOLDOUTS)
        except FitError as e:
            logger.error(f"N_{{{g},{n}}} | {odd_slots} odd slots | recursion samples are not quasi-polynomial: {e}")
            raise
        representative = (1,) * odd_slots + (0,) * (n - odd_slots)
        classes.update(_spread_to_classes(n, odd_slots, fitted.polynomial(representative)))
        logger.info(f"N_{{{g},{n}}} | {odd_slots} odd slots | fitted from {len(grid)} samples")
    return QuasiPolynomial(n, classes)


def _spot_check(g: int, n: int, qp: QuasiPolynomial) -> None:
    if 6 * g - 6 + 3 * n > ENUMERATION_FRONTIER:
        logger.info(f"N_{{{g},{n}}} | beyond the enumeration frontier, direct spot-check skipped")
        return
    for b in itertools.islice(itertools.product(range(1, 4), repeat=n), 12):
        expected = n_direct(g, n, b)
        if qp.evaluate(b) != expected:
            raise FitError(f"N_{{{g},{n}}}{b}: quasi-polynomial gives {qp.evaluate(b)} but enumeration gives {expected}.")


def top_degree_parts(g: int, n: int) -> Dict[Parity, Polynomial]:
    """Degree 6g - 6 + 2n homogeneous part of every stored parity class."""
    qp = n_quasipolynomial(g, n)
    return {parity: qp.polynomial(parity).homogeneous_part(2 * top_degree(g, n)) for parity in qp.parity_classes()}


# ==============================================================================
# Derived invariants
# ==============================================================================

def euler_characteristic(g: int, n: int, method: str = "lattice") -> Fraction:
    """
    chi(M_{g,n}) three ways:
        lattice: N_{g,n}(0, ..., 0);
        zeta: closed form in zeta(1 - 2g), with chi(M_{0,3}) = 1;
        catalog: sum over the fatgraph catalog of (-1)^(E - 1) / |Aut|.
    """
    check_stable(g, n)
    if method == "lattice":
        return n_quasipolynomial(g, n).evaluate((0,) * n)
    if method == "zeta":
        sign = (-1) ** (n - 1)
        if g == 0:
            return Fraction(sign * math.factorial(n - 3))
        return sign * Fraction(math.factorial(2 * g - 3 + n), math.factorial(2 * g - 2)) * zeta_neg(g)
    if method == "catalog":
        return catalog_euler_characteristic(g, n)
    raise ValueError(f"Unknown Euler characteristic method '{method}'. Use lattice, zeta or catalog.")


def catalog_euler_characteristic(g: int, n: int) -> Fraction:
    catalog = enumerate_fatgraphs(g, n)
    return sum(
        (Fraction((-1) ** (entry.num_edges - 1), entry.aut_order) for entry in catalog.entries),
        Fraction(0),
    )


def kontsevich_volume(g: int, n: int) -> Polynomial:
    """V_{g,n}: half the top-degree part of the all-even class of N_{g,n}."""
    check_stable(g, n)
    even = n_quasipolynomial(g, n).polynomial((0,) * n)
    return even.homogeneous_part(2 * top_degree(g, n)) * Fraction(1, 2)


def intersection_numbers(g: int, n: int) -> Dict[Tuple[int, ...], Fraction]:
    """
    Psi-class intersection numbers <tau_d1 ... tau_dn> for |d| = 3g - 3 + n, from the top
    coefficients c_d of the even class: <tau_d> = c_d * 2^(6g - 6 + 2n - g) * prod d_i!.
    """
    check_stable(g, n)
    even = n_quasipolynomial(g, n).polynomial((0,) * n)
    scale = 2 ** (6 * g - 6 + 2 * n - g)
    numbers = {}
    for exp, coef in even.homogeneous_part(2 * top_degree(g, n)).items():
        d = tuple(e // 2 for e in exp)
        numbers[d] = coef * scale * math.prod(math.factorial(x) for x in d)
    return dict(sorted(numbers.items(), reverse=True))


@dataclass(frozen=True)
class DilatonResult:
    lhs: Fraction
    rhs: Fraction
    vanishing: Fraction   # N_{g,n+1}(2, 0, ..., 0)

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs and self.vanishing == 0


def dilaton_check(g: int, n: int, b: Sequence[int], cache_dir: Optional[str] = None) -> DilatonResult:
    """N_{g,n+1}(2, b) - N_{g,n+1}(0, b) against (2g - 2 + n) N_{g,n}(b)."""
    b = _check_lengths(g, n, b)
    bigger = n_quasipolynomial(g, n + 1, cache_dir=cache_dir)
    lhs = bigger.evaluate((2,) + b) - bigger.evaluate((0,) + b)
    rhs = (2 * g - 2 + n) * n_recursive(g, n, b)
    vanishing = bigger.evaluate((2,) + (0,) * n)
    if lhs != rhs:
        logger.warning(f"dilaton | ({g}, {n}) at {b} | lhs {lhs} != rhs {rhs}")
    return DilatonResult(lhs=lhs, rhs=rhs, vanishing=vanishing)


# ==============================================================================
# One boundary: binomial basis
# ==============================================================================

def binomial_basis_coefficients(g: int) -> Dict[int, Fraction]:
    """
    Coefficients c_k with N_{g,1}(2m) = sum_k c_k * C(m - 1, k - 1), recovered as forward
    differences c_k = Delta^(k-1) f(1) of f(m) = N_{g,1}(2m). Zero coefficients are dropped.
    """
    check_stable(g, 1)
    top = 6 * g - 3
    values = [_recursive(g, (2 * m,)) for m in range(1, top + 1)]
    coefficients = {}
    for k in range(1, top + 1):
        if values[0]:
            coefficients[k] = values[0]
        values = [values[i + 1] - values[i] for i in range(len(values) - 1)]
    return coefficients


def catalog_binomial_coefficients(g: int) -> Dict[int, Fraction]:
    """sum over Fat_{g,1} with k edges of 1 / |Aut Gamma|."""
    totals: Dict[int, Fraction] = {}
    for entry in enumerate_fatgraphs(g, 1).entries:
        totals[entry.num_edges] = totals.get(entry.num_edges, Fraction(0)) + Fraction(1, entry.aut_order)
    return dict(sorted(totals.items()))


# ==============================================================================
# Weil-Petersson regression data
# ==============================================================================

def _weil_petersson_row(g: int, n: int) -> Polynomial:
    """Printed V^WP_{g,n}(L) with an extra last variable standing for pi."""
    size = n + 1
    lengths = [Polynomial.variable(size, i) ** 2 for i in range(n)]
    pi2 = Polynomial.variable(size, n) ** 2
    total = sum(lengths, Polynomial.zero(size))
    if (g, n) == (0, 3):
        return Polynomial.constant(size, 1)
    if (g, n) == (1, 1):
        return (total + pi2 * 4) * Fraction(1, 48)
    if (g, n) == (0, 4):
        return (total + pi2 * 4) * Fraction(1, 2)
    if (g, n) == (1, 2):
        return (total + pi2 * 4) * (total + pi2 * 12) * Fraction(1, 192)
    if (g, n) == (2, 1):
        quartic = lengths[0] ** 2 * 5 + lengths[0] * pi2 * 384 + pi2 ** 2 * 6960
        return (total + pi2 * 4) * (total + pi2 * 12) * quartic * Fraction(1, 2 ** 14 * 3 ** 3 * 5)
    raise KeyError((g, n))


WEIL_PETERSSON_TYPES = ((0, 3), (1, 1), (0, 4), (1, 2), (2, 1))


@dataclass(frozen=True)
class WeilPeterssonCheck:
    top_part: Polynomial
    scaled_volume: Polynomial

    @property
    def matched(self) -> bool:
        return self.top_part == self.scaled_volume


def weil_petersson_check(g: int, n: int) -> WeilPeterssonCheck:
    """The pi-free part of the printed V^WP_{g,n} against 2^(2g - 2 + n) V_{g,n}."""
    if (g, n) not in WEIL_PETERSSON_TYPES:
        raise KeyError(f"No Weil-Petersson row for ({g}, {n}).")
    row = _weil_petersson_row(g, n)
    top = Polynomial(n, {exp[:n]: coef for exp, coef in row.items() if exp[n] == 0})
    return WeilPeterssonCheck(top_part=top, scaled_volume=kontsevich_volume(g, n) * 2 ** (2 * g - 2 + n))
