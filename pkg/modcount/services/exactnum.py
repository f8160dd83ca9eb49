"""
(exactnum.py) Exact rational arithmetic for the whole toolkit: sparse multivariate
polynomials, quasi-polynomials indexed by parity classes, exact linear solving and
interpolation, and Bernoulli numbers for zeta values at negative odd integers.

Floating point never appears here. Rationals are fractions.Fraction throughout.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]
Exponent = Tuple[int, ...]
Parity = Tuple[int, ...]
Sample = Tuple[Sequence[int], Scalar]


# --- Custom Exceptions for the router layer ---
class FitError(Exception):
    """Raised when an exact fit cannot produce a unique answer."""
    pass

class UnderdeterminedSystem(FitError):
    """Raised when the samples do not pin down every unknown of the ansatz."""
    pass

class InconsistentSamples(FitError):
    """Raised when no polynomial of the requested shape reproduces the samples."""
    pass

class DimensionMismatch(ValueError):
    """Raised when a point or exponent vector has the wrong number of coordinates."""
    pass


def format_rational(value: Scalar) -> str:
    """Canonical 'p/q' text for a rational ('3' for integers, '-1/12' otherwise)."""
    return str(Fraction(value))


def format_decimal(value: Scalar, places: int = 6) -> str:
    """Fixed-point text rounded half up to the given places, computed with integers only."""
    value = Fraction(value)
    scale = 10 ** places
    digits, remainder = divmod(abs(value.numerator) * scale, value.denominator)
    if 2 * remainder >= value.denominator:
        digits += 1
    whole, fraction = divmod(digits, scale)
    sign = "-" if value < 0 and digits else ""
    return f"{sign}{whole}.{fraction:0{places}d}" if places else f"{sign}{whole}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# ==============================================================================
# Polynomials
# ==============================================================================

class Polynomial:
    """
    Sparse polynomial in a fixed number of variables with rational coefficients.
    Zero coefficients are never stored.
    """

    __slots__ = ("_nvars", "_terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponent, Scalar]] = None):
        if nvars < 0:
            raise ValueError(f"Variable count must be nonnegative, got {nvars}.")
        cleaned: Dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise DimensionMismatch(f"Exponent {exp} does not have {nvars} entries.")
            if any(e < 0 for e in exp):
                raise ValueError(f"Exponent {exp} has a negative entry.")
            value = Fraction(coef)
            if value:
                cleaned[exp] = cleaned.get(exp, Fraction(0)) + value
                if not cleaned[exp]:
                    del cleaned[exp]
        self._nvars = nvars
        self._terms = cleaned

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], coef: Scalar = 1) -> "Polynomial":
        return cls(len(exp), {tuple(exp): coef})

    @property
    def nvars(self) -> int:
        return self._nvars

    def items(self) -> List[Tuple[Exponent, Fraction]]:
        """Terms in a deterministic order: higher total degree first, then exponent."""
        return sorted(self._terms.items(), key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])))

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Largest total degree of a stored monomial; -1 for the zero polynomial."""
        return max((sum(exp) for exp in self._terms), default=-1)

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial(self._nvars, {exp: c for exp, c in self._terms.items() if sum(exp) == degree})

    def is_even(self) -> bool:
        """True when every variable appears only to even powers."""
        return all(e % 2 == 0 for exp in self._terms for e in exp)

    def permuted(self, positions: Sequence[int]) -> "Polynomial":
        """Move variable i to position positions[i]."""
        if sorted(positions) != list(range(self._nvars)):
            raise ValueError(f"{positions} is not a permutation of {self._nvars} variables.")
        moved = {}
        for exp, coef in self._terms.items():
            target = [0] * self._nvars
            for i, e in enumerate(exp):
                target[positions[i]] = e
            moved[tuple(target)] = coef
        return Polynomial(self._nvars, moved)

    def scaled_variables(self, factors: Sequence[Scalar]) -> "Polynomial":
        """Substitute x_i -> factors[i] * x_i."""
        out = {}
        for exp, coef in self._terms.items():
            for f, e in zip(factors, exp):
                coef *= Fraction(f) ** e
            out[exp] = coef
        return Polynomial(self._nvars, out)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self._nvars:
            raise DimensionMismatch(f"Point {tuple(point)} does not have {self._nvars} coordinates.")
        values = [Fraction(x) for x in point]
        total = Fraction(0)
        for exp, coef in self._terms.items():
            term = coef
            for x, e in zip(values, exp):
                if e:
                    term *= x ** e
            total += term
        return total

    # --- arithmetic ---

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._nvars != self._nvars:
                raise DimensionMismatch(f"Cannot combine polynomials in {self._nvars} and {other._nvars} variables.")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self._nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        merged = dict(self._terms)
        for exp, coef in other._terms.items():
            merged[exp] = merged.get(exp, Fraction(0)) + coef
        return Polynomial(self._nvars, merged)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._nvars, {exp: -c for exp, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self._nvars, {exp: c * other for exp, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        product: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                product[exp] = product.get(exp, Fraction(0)) + c1 * c2
        return Polynomial(self._nvars, product)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            raise ValueError("Polynomials only support nonnegative integer powers.")
        result = Polynomial.constant(self._nvars, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._nvars, frozenset(self._terms.items())))

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        """Human-readable form such as '1/48*b1^2 - 1/12'."""
        if not self._terms:
            return "0"
        names = list(names) if names else [f"b{i + 1}" for i in range(self._nvars)]
        pieces = []
        for exp, coef in self.items():
            factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, exp) if e]
            magnitude = abs(coef)
            if factors and magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(magnitude)] + factors)
            sign = "-" if coef < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self._nvars}, {self.to_text()!r})"


def exponents_up_to(nvars: int, degree: int) -> List[Exponent]:
    """All exponent vectors in nvars variables with total degree <= degree."""
    if nvars == 0:
        return [()]
    out = []
    for first in range(degree + 1):
        for rest in exponents_up_to(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def partitions(total: int, max_parts: int, max_part: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Weakly decreasing tuples of positive integers summing to total with at most max_parts parts."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, max_parts - 1, first):
            yield (first,) + rest


# ==============================================================================
# Quasi-polynomials
# ==============================================================================

class QuasiPolynomial:
    """
    A family of polynomials indexed by parity classes in {0,1}^n.
    Classes that would hold the zero polynomial are not stored.
    """

    __slots__ = ("_nvars", "_classes")

    def __init__(self, nvars: int, classes: Mapping[Parity, Polynomial]):
        stored: Dict[Parity, Polynomial] = {}
        for parity, poly in classes.items():
            parity = tuple(int(p) for p in parity)
            if len(parity) != nvars or any(p not in (0, 1) for p in parity):
                raise DimensionMismatch(f"Parity class {parity} is not a 0/1 vector of length {nvars}.")
            if poly.nvars != nvars:
                raise DimensionMismatch(f"Polynomial for class {parity} has {poly.nvars} variables, expected {nvars}.")
            if not poly.is_zero():
                stored[parity] = poly
        self._nvars = nvars
        self._classes = stored

    @property
    def nvars(self) -> int:
        return self._nvars

    def parity_classes(self) -> List[Parity]:
        return sorted(self._classes)

    def polynomial(self, parity: Sequence[int]) -> Polynomial:
        return self._classes.get(tuple(parity), Polynomial.zero(self._nvars))

    def evaluate(self, b: Sequence[int]) -> Fraction:
        return qp_evaluate(self, b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuasiPolynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._classes == other._classes

    def __hash__(self) -> int:
        return hash((self._nvars, frozenset(self._classes.items())))

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}: {self._classes[p].to_text()}" for p in self.parity_classes())
        return f"QuasiPolynomial({self._nvars}, {{{inner}}})"


def parity_of(b: Sequence[int]) -> Parity:
    return tuple(x % 2 for x in b)


def qp_evaluate(qp: QuasiPolynomial, b: Sequence[int]) -> Fraction:
    """
    Evaluates a quasi-polynomial exactly: picks the polynomial of b's parity class.

    Zero entries are allowed (they select the even branch), which is how N_{g,n}(0,...,0)
    and the zero slot of the dilaton identity are read off.
    """
    if len(b) != qp.nvars:
        raise DimensionMismatch(f"Point {tuple(b)} does not have {qp.nvars} coordinates.")
    if any(x < 0 for x in b):
        raise ValueError(f"Quasi-polynomial arguments must be nonnegative, got {tuple(b)}.")
    return qp.polynomial(parity_of(b)).evaluate(b)


# ==============================================================================
# Exact linear algebra and fitting
# ==============================================================================

def _primitive(row: List[int]) -> List[int]:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def solve_linear_system(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> List[Fraction]:
    """
    Solves matrix * x = rhs exactly for a unique x.

    Rows are scaled to integers and reduced by fraction-free Gauss-Jordan elimination,
    dividing each row by its content to keep entries small.

    Raises:
        InconsistentSamples: if some combination of rows contradicts the right-hand side.
        UnderdeterminedSystem: if the solution is not unique.
    """
    if len(matrix) != len(rhs):
        raise DimensionMismatch(f"{len(matrix)} rows but {len(rhs)} right-hand-side values.")
    if not matrix:
        raise UnderdeterminedSystem("No equations were supplied.")
    width = len(matrix[0])
    rows: List[List[int]] = []
    for row, value in zip(matrix, rhs):
        if len(row) != width:
            raise DimensionMismatch("Rows of the system have different lengths.")
        entries = [Fraction(x) for x in row] + [Fraction(value)]
        scale = math.lcm(*(x.denominator for x in entries))
        rows.append(_primitive([x.numerator * (scale // x.denominator) for x in entries]))

    pivots: List[int] = []
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pivot_row = rows[rank]
        lead = pivot_row[col]
        for i, row in enumerate(rows):
            if i != rank and row[col]:
                factor = row[col]
                rows[i] = _primitive([lead * x - factor * y for x, y in zip(row, pivot_row)])
        pivots.append(col)
        rank += 1

    for row in rows[rank:]:
        if row[width]:
            raise InconsistentSamples(f"Samples are inconsistent with the ansatz (rank {rank}, {len(rows)} equations).")
    if rank < width:
        raise UnderdeterminedSystem(f"Ansatz has {width} unknowns but the samples only determine {rank}.")

    solution = [Fraction(0)] * width
    for i, col in enumerate(pivots):
        solution[col] = Fraction(rows[i][width], rows[i][col])
    return solution


def poly_fit(samples: Sequence[Sample], nvars: int, max_degree: int) -> Polynomial:
    """
    Fits a polynomial over every monomial of total degree <= max_degree.

    Args:
        samples: (point, value) pairs with exact values.
        nvars: number of coordinates per point.
        max_degree: total-degree bound of the dense ansatz.

    Returns:
        The unique interpolating Polynomial.
    """
    basis = exponents_up_to(nvars, max_degree)
    matrix = []
    values = []
    for point, value in samples:
        if len(point) != nvars:
            raise DimensionMismatch(f"Sample point {tuple(point)} does not have {nvars} coordinates.")
        matrix.append([math.prod(x ** e for x, e in zip(point, exp)) for exp in basis])
        values.append(value)
    coefficients = solve_linear_system(matrix, values)
    return Polynomial(nvars, dict(zip(basis, coefficients)))


def interpolate_univariate(points: Sequence[Tuple[Scalar, Scalar]]) -> Polynomial:
    """Newton interpolation through distinct points; degree <= len(points) - 1."""
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("Interpolation nodes must be distinct.")
    coeffs = [Fraction(y) for _, y in points]
    m = len(xs)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - j])
    dense = [Fraction(0)] * max(m, 1)
    dense[0] = coeffs[m - 1] if m else Fraction(0)
    degree = 0
    for i in range(m - 2, -1, -1):
        # dense <- dense * (x - xs[i]) + coeffs[i]
        shifted = [Fraction(0)] + dense[: degree + 1]
        for k in range(degree + 1):
            shifted[k] -= xs[i] * dense[k]
        degree += 1
        shifted[0] += coeffs[i]
        dense = shifted + [Fraction(0)] * (m - len(shifted))
    return Polynomial(1, {(k,): c for k, c in enumerate(dense)})


def _symmetric_monomial(nvars: int, positions: Sequence[int], shape: Tuple[int, ...]) -> Polynomial:
    padded = shape + (0,) * (len(positions) - len(shape))
    terms = {}
    for arrangement in set(itertools.permutations(padded)):
        exp = [0] * nvars
        for pos, part in zip(positions, arrangement):
            exp[pos] = 2 * part
        terms[tuple(exp)] = 1
    return Polynomial(nvars, terms)


def symmetric_square_basis(parity: Sequence[int], max_degree: int) -> List[Polynomial]:
    """
    Basis of polynomials in b_i^2 of degree <= max_degree that are symmetric within the
    odd slots and within the even slots of the given parity class.
    """
    nvars = len(parity)
    odd = [i for i, p in enumerate(parity) if p]
    even = [i for i, p in enumerate(parity) if not p]
    basis = []
    for odd_degree in range(max_degree + 1):
        for odd_shape in partitions(odd_degree, len(odd)):
            odd_part = _symmetric_monomial(nvars, odd, odd_shape)
            for even_degree in range(max_degree - odd_degree + 1):
                for even_shape in partitions(even_degree, len(even)):
                    basis.append(odd_part * _symmetric_monomial(nvars, even, even_shape))
    return basis


def qp_fit(
    samples: Iterable[Sample],
    nvars: int,
    max_degree_in_squares: int,
    min_holdouts: int = 0,
) -> QuasiPolynomial:
    """
    Fits a quasi-polynomial in the squares b_i^2, one parity class at a time.

    Every class seen in the samples gets the symmetric-block ansatz of symmetric_square_basis.
    Odd-weight classes must carry zero samples and are stored as zero.

    Args:
        samples: (b, value) pairs.
        nvars: length of each b.
        max_degree_in_squares: degree bound in the variables b_i^2.
        min_holdouts: samples beyond the ansatz size each class must have.

    Raises:
        UnderdeterminedSystem, InconsistentSamples
    """
    by_class: Dict[Parity, List[Sample]] = {}
    for b, value in samples:
        if len(b) != nvars:
            raise DimensionMismatch(f"Sample point {tuple(b)} does not have {nvars} coordinates.")
        by_class.setdefault(parity_of(b), []).append((tuple(b), Fraction(value)))

    classes: Dict[Parity, Polynomial] = {}
    for parity in sorted(by_class):
        class_samples = by_class[parity]
        if sum(parity) % 2:
            if any(value for _, value in class_samples):
                raise InconsistentSamples(f"Odd-weight class {parity} has nonzero samples.")
            continue
        basis = symmetric_square_basis(parity, max_degree_in_squares)
        matrix = [[poly.evaluate(b) for poly in basis] for b, _ in class_samples]
        coefficients = solve_linear_system(matrix, [value for _, value in class_samples])
        fitted = Polynomial.zero(nvars)
        for coef, poly in zip(coefficients, basis):
            fitted = fitted + poly * coef
        holdouts = len(class_samples) - len(basis)
        for b, value in class_samples:
            if fitted.evaluate(b) != value:
                raise InconsistentSamples(f"Fit for class {parity} does not reproduce the sample at {b}.")
        if holdouts < min_holdouts:
            raise UnderdeterminedSystem(
                f"Class {parity} has {holdouts} held-out samples, {min_holdouts} are required."
            )
        if holdouts < 3:
            logger.warning(f"qp_fit | class {parity} | only {holdouts} held-out samples verify the fit")
        logger.info(f"qp_fit | class {parity} | {len(basis)} monomials, {holdouts} holdouts")
        classes[parity] = fitted
    return QuasiPolynomial(nvars, classes)


# ==============================================================================
# Bernoulli numbers and zeta values
# ==============================================================================

def bernoulli_numbers(m: int) -> List[Fraction]:
    """B_0..B_m from sum_{j=0}^{k} C(k+1, j) B_j = 0 (so B_1 = -1/2)."""
    numbers = [Fraction(1)]
    for k in range(1, m + 1):
        acc = sum((math.comb(k + 1, j) * numbers[j] for j in range(k)), Fraction(0))
        numbers.append(-acc / (k + 1))
    return numbers


def zeta_neg(g: int) -> Fraction:
    """zeta(1 - 2g) = -B_{2g} / (2g)."""
    if g < 1:
        raise ValueError(f"zeta_neg needs g >= 1, got {g}.")
    return -bernoulli_numbers(2 * g)[2 * g] / (2 * g)
