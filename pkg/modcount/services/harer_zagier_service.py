"""
(harer_zagier_service.py) One-boundary counts N_{g,1} through polygon gluings.

c(n, k) comes from its three-term recursion. The gluing counts epsilon_g(n) are read off
(2n - 1)!! c(n, k) as coefficients in k, mu_g(n) (no adjacent edges identified) follows by
triangular inversion, and N_{g,1}(b) = mu_g(b/2) / b.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from modcount.config import FIT_HOLDOUTS, HZ_MAX_GENUS
from modcount.services.exactnum import Polynomial, interpolate_univariate, qp_fit, zeta_neg
from modcount.services.laplace_service import Const, Var, series_expand

logger = logging.getLogger(__name__)


@dataclass
class HZTable:
    c: Dict[Tuple[int, int], int] = field(default_factory=dict)
    epsilon: Dict[Tuple[int, int], int] = field(default_factory=dict)
    mu: Dict[Tuple[int, int], int] = field(default_factory=dict)


def _double_factorial(odd: int) -> int:
    return math.prod(range(odd, 0, -2)) if odd > 0 else 1


def _c_grid(nmax: int, kmax: int) -> List[List[int]]:
    grid = [[0] * (kmax + 1) for _ in range(nmax + 1)]
    for k in range(kmax + 1):
        grid[0][k] = k
    for n in range(1, nmax + 1):
        for k in range(1, kmax + 1):
            grid[n][k] = grid[n][k - 1] + grid[n - 1][k] + grid[n - 1][k - 1]
    return grid


def hz_c(nmax: int, kmax: int) -> HZTable:
    """
    c(n, k) for n <= nmax, k <= kmax, with c(0, k) = k and c(n, 0) = 0, plus the epsilon
    and mu values for every n <= nmax.
    """
    if nmax < 0 or kmax < 0:
        raise ValueError(f"nmax and kmax must be nonnegative, got ({nmax}, {kmax}).")
    grid = _c_grid(nmax, kmax)
    table = HZTable(c={(n, k): grid[n][k] for n in range(nmax + 1) for k in range(kmax + 1)})
    for n in range(nmax + 1):
        for g in range(n // 2 + 1):
            table.epsilon[(g, n)] = hz_epsilon(g, n)
            table.mu[(g, n)] = hz_mu(g, n)
    return table


@functools.lru_cache(maxsize=None)
def _epsilon_column(n: int) -> Tuple[int, ...]:
    """epsilon_g(n) for g = 0..n//2 as coefficients of (2n - 1)!! c(n, k) in k."""
    row = _c_grid(n, n + 1)[n]
    c_poly = interpolate_univariate([(k, row[k]) for k in range(n + 2)])
    scale = _double_factorial(2 * n - 1)
    values = []
    for g in range(n // 2 + 1):
        coefficient = c_poly.coefficient((n + 1 - 2 * g,)) * scale
        if coefficient.denominator != 1:
            raise ArithmeticError(f"epsilon_{g}({n}) came out non-integral: {coefficient}")
        values.append(int(coefficient))
    return tuple(values)


def hz_epsilon(g: int, n: int) -> int:
    """Genus-g gluings of a 2n-gon with a distinguished edge."""
    if g < 0 or n < 0:
        raise ValueError(f"Need g, n >= 0, got ({g}, {n}).")
    if 2 * g > n:
        return 0
    return _epsilon_column(n)[g]


@functools.lru_cache(maxsize=None)
def hz_mu(g: int, n: int) -> int:
    """Gluings as in hz_epsilon but with no two neighbouring edges identified."""
    if g < 0:
        raise ValueError(f"Need g >= 0, got {g}.")
    if n <= 0 or 2 * g > n:
        return 0
    # the inversion does not hold in genus 0: only the single edge glued to itself counts
    if g == 0:
        return 1 if n == 1 else 0
    return hz_epsilon(g, n) - sum(math.comb(2 * n, i) * hz_mu(g, n - i) for i in range(1, n))


@functools.lru_cache(maxsize=None)
def hz_epsilon_recursive(g: int, n: int) -> int:
    """
    epsilon_g(n) from (n + 1) e_g(n) = 2(2n - 1) e_g(n - 1) + (n - 1)(2n - 1)(2n - 3) e_{g-1}(n - 2).
    """
    if g < 0 or n < 0 or 2 * g > n:
        return 0
    if n == 0:
        return 1
    total = 2 * (2 * n - 1) * hz_epsilon_recursive(g, n - 1)
    if n >= 2:
        total += (n - 1) * (2 * n - 1) * (2 * n - 3) * hz_epsilon_recursive(g - 1, n - 2)
    quotient, remainder = divmod(total, n + 1)
    if remainder:
        raise ArithmeticError(f"epsilon_{g}({n}) recursion left remainder {remainder}.")
    return quotient


def generating_function_check(nmax: int, kmax: int) -> bool:
    """Compares c(n, k) with the coefficients of ((1 + x) / (1 - x))^k expanded as a series."""
    grid = _c_grid(nmax, kmax)
    x = Var(0)
    for k in range(kmax + 1):
        series = series_expand(((Const(1) + x) / (Const(1) - x)) ** k, nmax + 1, nvars=1)
        if series.coefficient((0,)) != 1:
            return False
        for n in range(nmax + 1):
            if series.coefficient((n + 1,)) != 2 * grid[n][k]:
                logger.warning(f"hz | c({n}, {k}) = {grid[n][k]} disagrees with the generating function")
                return False
    return True


def n_g1_hz(g: int, b: int) -> Fraction:
    """N_{g,1}(b) = mu_g(b / 2) / b for even b >= 2."""
    if g < 1:
        raise ValueError(f"n_g1_hz needs g >= 1, got {g}.")
    if b < 2 or b % 2:
        raise ValueError(f"n_g1_hz needs an even b >= 2, got {b}.")
    return Fraction(hz_mu(g, b // 2), b)


@functools.lru_cache(maxsize=None)
def n_g1_polynomial(g: int) -> Polynomial:
    """
    Even-class polynomial of N_{g,1}, degree 3g - 2 in b^2, fitted from Harer-Zagier values.
    """
    if not 1 <= g <= HZ_MAX_GENUS:
        raise ValueError(f"n_g1_polynomial supports 1 <= g <= {HZ_MAX_GENUS}, got {g}.")
    degree = 3 * g - 2
    samples = [((2 * m,), n_g1_hz(g, 2 * m)) for m in range(1, degree + 2 + FIT_HOLDOUTS)]
    poly = qp_fit(samples, 1, degree, min_holdouts=FIT_HOLDOUTS).polynomial((0,))
    constant = poly.coefficient((0,))
    if constant != zeta_neg(g):
        logger.warning(f"hz | N_{{{g},1}}(0) = {constant} but zeta(1 - 2g) = {zeta_neg(g)}")
    return poly


def n_g1_ratio(g: int, b: int) -> Fraction:
    """N_{g,1}(b) / N_{g,1}(0); exposed as data, nothing is assumed about its growth in g."""
    poly = n_g1_polynomial(g)
    return poly.evaluate((b,)) / poly.evaluate((0,))
