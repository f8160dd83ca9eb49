"""
(laplace_service.py) Truncated power series and rational expressions for checking the
discrete and continuous Laplace-transform forms of N_{g,n} and V_{g,n}.
"""

import functools
import itertools
import logging
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from modcount.services.exactnum import Exponent, Scalar
from modcount.services.moduli_service import check_stable, kontsevich_volume, n_recursive
from modcount.services.polytope_service import LaplaceProductForm

logger = logging.getLogger(__name__)


# --- Custom Exceptions for the router layer ---
class NonExpandableDivisor(Exception):
    """Raised when a divisor has no constant term, so no power series exists."""
    pass

class UnknownForm(ValueError):
    """Raised when a closed-form identifier is not recognised."""
    pass


# ==============================================================================
# Truncated series
# ==============================================================================

class TruncatedSeries:
    """Power series in nvars variables, exact up to total degree order."""

    __slots__ = ("_nvars", "_order", "_terms")

    def __init__(self, nvars: int, order: int, terms: Optional[Mapping[Exponent, Scalar]] = None):
        if order < 0:
            raise ValueError(f"Series order must be nonnegative, got {order}.")
        self._nvars = nvars
        self._order = order
        self._terms: Dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars:
                raise ValueError(f"Exponent {exp} does not have {nvars} entries.")
            if sum(exp) <= order and coef:
                self._terms[exp] = self._terms.get(exp, Fraction(0)) + Fraction(coef)
        self._terms = {exp: c for exp, c in self._terms.items() if c}

    @classmethod
    def constant(cls, nvars: int, order: int, value: Scalar) -> "TruncatedSeries":
        return cls(nvars, order, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, order: int, index: int) -> "TruncatedSeries":
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, order, {tuple(exp): 1})

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def order(self) -> int:
        return self._order

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def items(self) -> List[Tuple[Exponent, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), item[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def _by_degree(self) -> Dict[int, List[Tuple[Exponent, Fraction]]]:
        groups: Dict[int, List[Tuple[Exponent, Fraction]]] = {}
        for exp, coef in self._terms.items():
            groups.setdefault(sum(exp), []).append((exp, coef))
        return groups

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other._nvars != self._nvars:
                raise ValueError(f"Series in {self._nvars} and {other._nvars} variables cannot be combined.")
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(self._nvars, self._order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exp, coef in other._terms.items():
            terms[exp] = terms.get(exp, Fraction(0)) + coef
        return TruncatedSeries(self._nvars, min(self._order, other._order), terms)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self._nvars, self._order, {exp: -c for exp, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self._nvars, self._order, {exp: c * other for exp, c in self._terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        order = min(self._order, other._order)
        left, right = self._by_degree(), other._by_degree()
        terms: Dict[Exponent, Fraction] = {}
        for da, group_a in left.items():
            for db, group_b in right.items():
                if da + db > order:
                    continue
                for exp_a, coef_a in group_a:
                    for exp_b, coef_b in group_b:
                        exp = tuple(x + y for x, y in zip(exp_a, exp_b))
                        terms[exp] = terms.get(exp, Fraction(0)) + coef_a * coef_b
        return TruncatedSeries(self._nvars, order, terms)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """1/f by solving degree by degree: g_d = -(1/f_0) sum_{k >= 1} f_k g_{d-k}."""
        constant = self.coefficient((0,) * self._nvars)
        if constant == 0:
            raise NonExpandableDivisor("Cannot invert a series with zero constant term.")
        parts = self._by_degree()
        inverse: Dict[int, Dict[Exponent, Fraction]] = {0: {(0,) * self._nvars: 1 / constant}}
        for d in range(1, self._order + 1):
            acc: Dict[Exponent, Fraction] = {}
            for k in range(1, d + 1):
                for exp_f, coef_f in parts.get(k, ()):
                    for exp_g, coef_g in inverse[d - k].items():
                        exp = tuple(x + y for x, y in zip(exp_f, exp_g))
                        acc[exp] = acc.get(exp, Fraction(0)) + coef_f * coef_g
            inverse[d] = {exp: -c / constant for exp, c in acc.items() if c}
        terms = {exp: c for part in inverse.values() for exp, c in part.items()}
        return TruncatedSeries(self._nvars, self._order, terms)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __pow__(self, power: int):
        if not isinstance(power, int):
            return NotImplemented
        base = self if power >= 0 else self.reciprocal()
        power = abs(power)
        result = TruncatedSeries.constant(self._nvars, self._order, 1)
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def truncated(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self._nvars, min(order, self._order), self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._nvars == other._nvars and self._order == other._order and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._nvars, self._order, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self._nvars}, order={self._order}, terms={len(self._terms)})"


# ==============================================================================
# Rational expressions
# ==============================================================================

ExprLike = Union["RationalExpr", int, Fraction]


def _expr(value: ExprLike) -> "RationalExpr":
    if isinstance(value, RationalExpr):
        return value
    if isinstance(value, (int, Fraction)):
        return Const(Fraction(value))
    raise TypeError(f"Cannot use {type(value).__name__} in a rational expression.")


class RationalExpr:
    """Expression tree over z_0, z_1, ... with +, -, *, /, integer powers and rational constants."""

    def __add__(self, other: ExprLike) -> "RationalExpr":
        return Add(self, _expr(other))

    def __radd__(self, other: ExprLike) -> "RationalExpr":
        return Add(_expr(other), self)

    def __sub__(self, other: ExprLike) -> "RationalExpr":
        return Sub(self, _expr(other))

    def __rsub__(self, other: ExprLike) -> "RationalExpr":
        return Sub(_expr(other), self)

    def __mul__(self, other: ExprLike) -> "RationalExpr":
        return Mul(self, _expr(other))

    def __rmul__(self, other: ExprLike) -> "RationalExpr":
        return Mul(_expr(other), self)

    def __truediv__(self, other: ExprLike) -> "RationalExpr":
        return Div(self, _expr(other))

    def __rtruediv__(self, other: ExprLike) -> "RationalExpr":
        return Div(_expr(other), self)

    def __neg__(self) -> "RationalExpr":
        return Mul(Const(Fraction(-1)), self)

    def __pow__(self, exponent: int) -> "RationalExpr":
        return Pow(self, exponent)

    def max_index(self) -> int:
        raise NotImplementedError

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        raise NotImplementedError

    def to_series(self, nvars: int, order: int) -> TruncatedSeries:
        raise NotImplementedError

    def laurent(self, nvars: int) -> Dict[Exponent, Fraction]:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Const(RationalExpr):
    value: Fraction

    def max_index(self) -> int:
        return -1

    def evaluate(self, point):
        return Fraction(self.value)

    def to_series(self, nvars, order):
        return TruncatedSeries.constant(nvars, order, self.value)

    def laurent(self, nvars):
        return {(0,) * nvars: Fraction(self.value)} if self.value else {}


@dataclass(frozen=True, eq=False)
class Var(RationalExpr):
    index: int

    def max_index(self) -> int:
        return self.index

    def evaluate(self, point):
        return Fraction(point[self.index])

    def to_series(self, nvars, order):
        return TruncatedSeries.variable(nvars, order, self.index)

    def laurent(self, nvars):
        exp = [0] * nvars
        exp[self.index] = 1
        return {tuple(exp): Fraction(1)}


def _laurent_product(a: Dict[Exponent, Fraction], b: Dict[Exponent, Fraction]) -> Dict[Exponent, Fraction]:
    out: Dict[Exponent, Fraction] = {}
    for exp_a, coef_a in a.items():
        for exp_b, coef_b in b.items():
            exp = tuple(x + y for x, y in zip(exp_a, exp_b))
            out[exp] = out.get(exp, Fraction(0)) + coef_a * coef_b
    return {exp: c for exp, c in out.items() if c}


def _laurent_inverse(terms: Dict[Exponent, Fraction]) -> Dict[Exponent, Fraction]:
    if len(terms) != 1:
        raise NonExpandableDivisor(f"Laurent division needs a single-monomial divisor, got {len(terms)} terms.")
    (exp, coef), = terms.items()
    return {tuple(-e for e in exp): 1 / coef}


@dataclass(frozen=True, eq=False)
class Add(RationalExpr):
    left: RationalExpr
    right: RationalExpr

    def max_index(self) -> int:
        return max(self.left.max_index(), self.right.max_index())

    def evaluate(self, point):
        return self.left.evaluate(point) + self.right.evaluate(point)

    def to_series(self, nvars, order):
        return self.left.to_series(nvars, order) + self.right.to_series(nvars, order)

    def laurent(self, nvars):
        out = dict(self.left.laurent(nvars))
        for exp, coef in self.right.laurent(nvars).items():
            out[exp] = out.get(exp, Fraction(0)) + coef
        return {exp: c for exp, c in out.items() if c}


@dataclass(frozen=True, eq=False)
class Sub(RationalExpr):
    left: RationalExpr
    right: RationalExpr

    def max_index(self) -> int:
        return max(self.left.max_index(), self.right.max_index())

    def evaluate(self, point):
        return self.left.evaluate(point) - self.right.evaluate(point)

    def to_series(self, nvars, order):
        return self.left.to_series(nvars, order) - self.right.to_series(nvars, order)

    def laurent(self, nvars):
        out = dict(self.left.laurent(nvars))
        for exp, coef in self.right.laurent(nvars).items():
            out[exp] = out.get(exp, Fraction(0)) - coef
        return {exp: c for exp, c in out.items() if c}


@dataclass(frozen=True, eq=False)
class Mul(RationalExpr):
    left: RationalExpr
    right: RationalExpr

    def max_index(self) -> int:
        return max(self.left.max_index(), self.right.max_index())

    def evaluate(self, point):
        return self.left.evaluate(point) * self.right.evaluate(point)

    def to_series(self, nvars, order):
        return self.left.to_series(nvars, order) * self.right.to_series(nvars, order)

    def laurent(self, nvars):
        return _laurent_product(self.left.laurent(nvars), self.right.laurent(nvars))


@dataclass(frozen=True, eq=False)
class Div(RationalExpr):
    numerator: RationalExpr
    denominator: RationalExpr

    def max_index(self) -> int:
        return max(self.numerator.max_index(), self.denominator.max_index())

    def evaluate(self, point):
        divisor = self.denominator.evaluate(point)
        if divisor == 0:
            raise ZeroDivisionError(f"Expression has a pole at {tuple(point)}.")
        return self.numerator.evaluate(point) / divisor

    def to_series(self, nvars, order):
        divisor = self.denominator.to_series(nvars, order)
        if divisor.coefficient((0,) * nvars) == 0:
            raise NonExpandableDivisor("Divisor has zero constant term; the quotient is not a power series.")
        return self.numerator.to_series(nvars, order) * divisor.reciprocal()

    def laurent(self, nvars):
        return _laurent_product(self.numerator.laurent(nvars), _laurent_inverse(self.denominator.laurent(nvars)))


@dataclass(frozen=True, eq=False)
class Pow(RationalExpr):
    base: RationalExpr
    exponent: int

    def max_index(self) -> int:
        return self.base.max_index()

    def evaluate(self, point):
        value = self.base.evaluate(point)
        if value == 0 and self.exponent < 0:
            raise ZeroDivisionError(f"Expression has a pole at {tuple(point)}.")
        return value ** self.exponent

    def to_series(self, nvars, order):
        base = self.base.to_series(nvars, order)
        if self.exponent < 0 and base.coefficient((0,) * nvars) == 0:
            raise NonExpandableDivisor("Negative power of a series with zero constant term.")
        return base ** self.exponent

    def laurent(self, nvars):
        terms = self.base.laurent(nvars)
        if self.exponent < 0:
            terms = _laurent_inverse(terms)
        result = {(0,) * nvars: Fraction(1)}
        for _ in range(abs(self.exponent)):
            result = _laurent_product(result, terms)
        return result


def series_expand(expr: RationalExpr, order: int, nvars: Optional[int] = None) -> TruncatedSeries:
    """
    Exact expansion of expr to total order `order`.

    Raises:
        NonExpandableDivisor: a divisor has zero constant term.
    """
    if nvars is None:
        nvars = max(expr.max_index() + 1, 1)
    return expr.to_series(nvars, order)


def laurent_terms(expr: RationalExpr, nvars: Optional[int] = None) -> Dict[Exponent, Fraction]:
    """Coefficients of a Laurent polynomial (every divisor must be a single monomial)."""
    if nvars is None:
        nvars = max(expr.max_index() + 1, 1)
    return dict(sorted(expr.laurent(nvars).items()))


def variables(n: int) -> List[Var]:
    return [Var(i) for i in range(n)]


def _product(factors: Iterable[ExprLike]) -> RationalExpr:
    return functools.reduce(operator.mul, factors, Const(Fraction(1)))


# ==============================================================================
# Discrete forms
# ==============================================================================

def discrete_omega_series(g: int, n: int, order: int) -> TruncatedSeries:
    """Coefficient at prod z_i^(b_i - 1) is prod b_i * N_{g,n}(b), for total degree <= order."""
    check_stable(g, n)
    terms = {}
    for total in range(order + 1):
        for exp in _compositions(total, n):
            b = tuple(e + 1 for e in exp)
            value = n_recursive(g, n, b)
            if value:
                terms[exp] = math.prod(b) * value
    return TruncatedSeries(n, order, terms)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _omega03() -> RationalExpr:
    z = variables(3)
    minus = _product((1 - x) ** 2 for x in z)
    plus = _product((1 + x) ** 2 for x in z)
    return Fraction(1, 2) / minus - Fraction(1, 2) / plus


def _omega11() -> RationalExpr:
    z, = variables(1)
    return z ** 3 / (1 - z ** 2) ** 4


def _omega04() -> RationalExpr:
    z = variables(4)
    minus = _product((1 - x) ** 2 for x in z)
    plus = _product((1 + x) ** 2 for x in z)
    minus_sum = sum((x / (1 - x) ** 2 for x in z), start=Const(Fraction(0)))
    plus_sum = sum((x / (1 + x) ** 2 for x in z), start=Const(Fraction(0)))
    pairs = Const(Fraction(0))
    for i, j in itertools.combinations(range(4), 2):
        k, l = (m for m in range(4) if m not in (i, j))
        pairs = pairs + z[i] * z[j] * (1 + z[k] ** 2) * (1 + z[l] ** 2)
    squares = _product((1 - x ** 2) ** 2 for x in z)
    return (
        Fraction(3, 4) / minus * minus_sum
        - Fraction(3, 4) / plus * plus_sum
        + pairs / (2 * squares)
    )


# ==============================================================================
# Airy forms
# ==============================================================================

def _omega03_airy() -> RationalExpr:
    z = variables(3)
    return Fraction(-1, 2) / _product(x ** 2 for x in z)


def _omega11_airy() -> RationalExpr:
    z, = variables(1)
    return Fraction(-1, 16) / z ** 4


def _omega04_airy() -> RationalExpr:
    z = variables(4)
    inverse_squares = sum((1 / x ** 2 for x in z), start=Const(Fraction(0)))
    return Fraction(1, 2) / _product(x ** 2 for x in z) * inverse_squares


_DISCRETE_FORMS = {"omega03": ((0, 3), _omega03), "omega11": ((1, 1), _omega11), "omega04": ((0, 4), _omega04)}
_AIRY_FORMS = {"omega03_airy": ((0, 3), _omega03_airy), "omega11_airy": ((1, 1), _omega11_airy), "omega04_airy": ((0, 4), _omega04_airy)}


def normalize_form_id(form_id: str) -> str:
    """Accepts omega03, ω03, w03 and the like, with an optional _airy suffix."""
    key = form_id.strip().lower().replace("ω", "omega").replace("⁰", "0").replace("¹", "1")
    if key.startswith("w"):
        key = "omega" + key[1:]
    key = key.replace("[airy]", "_airy")
    if key not in _DISCRETE_FORMS and key not in _AIRY_FORMS:
        raise UnknownForm(f"Unknown form '{form_id}'. Known forms: {sorted(_DISCRETE_FORMS) + sorted(_AIRY_FORMS)}.")
    return key


def form_type(form_id: str) -> Tuple[int, int]:
    key = normalize_form_id(form_id)
    return (_DISCRETE_FORMS.get(key) or _AIRY_FORMS[key])[0]


def closed_form_expr(form_id: str) -> RationalExpr:
    key = normalize_form_id(form_id)
    return (_DISCRETE_FORMS.get(key) or _AIRY_FORMS[key])[1]()


def closed_form_omega(form_id: str, order: int = 12) -> Union[TruncatedSeries, RationalExpr]:
    """
    Printed closed forms. Discrete forms come back expanded to `order`; Airy forms come
    back as expressions in the pole-local variables. The differentials are dropped.
    """
    key = normalize_form_id(form_id)
    if key in _AIRY_FORMS:
        return _AIRY_FORMS[key][1]()
    (_, n), build = _DISCRETE_FORMS[key]
    return series_expand(build(), order, nvars=n)


def airy_form_from_volume(g: int, n: int) -> RationalExpr:
    """
    Laplace transform of V_{g,n} followed by d/ds_i in each variable:
    b^(2d) -> (2d)! / s^(2d + 1) -> -(2d + 1)! / s^(2d + 2).
    """
    s = variables(n)
    total: RationalExpr = Const(Fraction(0))
    for exp, coef in kontsevich_volume(g, n).items():
        term: RationalExpr = Const(coef)
        for i, e in enumerate(exp):
            term = term * Const(Fraction(-math.factorial(e + 1))) / s[i] ** (e + 2)
        total = total + term
    return total


def product_form_series(form: LaplaceProductForm, order: int) -> TruncatedSeries:
    """prod_i z^alpha_i / (1 - z^alpha_i) expanded to `order`."""
    z = variables(form.nvars)
    expr: RationalExpr = Const(Fraction(1))
    for column in form.columns:
        monomial = _product(z[i] ** a for i, a in enumerate(column) if a)
        expr = expr * monomial / (1 - monomial)
    return series_expand(expr, order, nvars=form.nvars)


# ==============================================================================
# Comparisons
# ==============================================================================

@dataclass(frozen=True)
class Mismatch:
    exp: Exponent
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class SeriesComparison:
    matched: bool
    first_mismatch: Optional[Mismatch]
    mismatches: int


def compare_series(lhs: TruncatedSeries, rhs: TruncatedSeries) -> SeriesComparison:
    """Coefficientwise comparison up to the smaller of the two orders."""
    order = min(lhs.order, rhs.order)
    left, right = lhs.truncated(order), rhs.truncated(order)
    exponents = sorted({exp for exp, _ in left.items()} | {exp for exp, _ in right.items()}, key=lambda e: (sum(e), e))
    first = None
    count = 0
    for exp in exponents:
        a, b = left.coefficient(exp), right.coefficient(exp)
        if a != b:
            count += 1
            if first is None:
                first = Mismatch(exp=exp, lhs=a, rhs=b)
    return SeriesComparison(matched=count == 0, first_mismatch=first, mismatches=count)


def airy_constant_ratio(g: int, n: int) -> Fraction:
    """
    Printed Airy form divided by the one derived from V_{g,n}, compared on their shared
    support. Raises ValueError when the two are not proportional.
    """
    printed = laurent_terms(_AIRY_FORMS[normalize_form_id(f"omega{g}{n}_airy")][1](), n)
    derived = laurent_terms(airy_form_from_volume(g, n), n)
    if set(printed) != set(derived):
        raise ValueError(f"Printed and derived Airy forms for ({g}, {n}) have different monomials.")
    ratios = {printed[exp] / derived[exp] for exp in printed}
    if len(ratios) != 1:
        raise ValueError(f"Printed and derived Airy forms for ({g}, {n}) are not proportional: {sorted(ratios)}.")
    return ratios.pop()


@dataclass(frozen=True)
class AsymptoticRow:
    s: Fraction
    ratio: Fraction

    @property
    def deviation(self) -> Fraction:
        return abs(abs(self.ratio) - 1)


@dataclass(frozen=True)
class AsymptoticReport:
    g: int
    n: int
    rows: Tuple[AsymptoticRow, ...]
    passed: bool


def asymptotic_airy_check(g: int, n: int, s_values: Sequence[Scalar]) -> AsymptoticReport:
    """
    Evaluates the discrete form at z_i = 1 + s (dz_i = s dx_i) and divides by
    s^(6 - 6g - 3n) times the Airy form at x_i = 1. Passes when | |ratio| - 1 | never
    grows as s decreases; magnitudes are compared because the sign convention is open.
    """
    key = normalize_form_id(f"omega{g}{n}")
    if key not in _DISCRETE_FORMS:
        raise UnknownForm(f"No closed discrete form for ({g}, {n}).")
    s_values = [Fraction(s) for s in s_values]
    if not s_values or any(not 0 < s <= Fraction(1, 4) for s in s_values):
        raise ValueError(f"s values must lie in (0, 1/4], got {[str(s) for s in s_values]}.")
    discrete = _DISCRETE_FORMS[key][1]()
    airy_at_one = _AIRY_FORMS[key + "_airy"][1]().evaluate((1,) * n)
    rows = []
    for s in sorted(set(s_values), reverse=True):
        value = discrete.evaluate((1 + s,) * n) * s ** n
        rows.append(AsymptoticRow(s=s, ratio=value / (s ** (6 - 6 * g - 3 * n) * airy_at_one)))
    passed = all(later.deviation <= earlier.deviation for earlier, later in zip(rows, rows[1:]))
    logger.info(f"asymptotic | ({g}, {n}) | {len(rows)} samples | {'PASS' if passed else 'FAIL'}")
    return AsymptoticReport(g=g, n=n, rows=tuple(rows), passed=passed)
