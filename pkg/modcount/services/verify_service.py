"""
(verify_service.py) The cross-check suite behind `modcount verify`.

Each check recomputes a quantity two independent ways, or against a printed table row,
and reports PASS/FAIL with a short detail string. `quick` keeps every check below the
enumeration frontier so the suite finishes in seconds; the full run includes the
(0,5), (1,3) and (2,1) catalogs and the larger sums.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Tuple

from tqdm import tqdm

from modcount.schemas import CheckRow, VerifyReport
from modcount.services import (
    harer_zagier_service,
    hurwitz_service,
    laplace_service,
    moduli_service,
    polytope_service,
)
from modcount.services.exactnum import Polynomial, format_rational, poly_fit
from modcount.services.fatgraph_service import enumerate_fatgraphs, incidence_matrix
from modcount.services.hurwitz_service import BranchData, Partition
from modcount.services.polytope_service import ConstraintSystem

logger = logging.getLogger(__name__)

CheckOutcome = Tuple[bool, str]


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[bool, int], CheckOutcome]


# ==============================================================================
# Printed rows
# ==============================================================================

def _sum_of_squares(n: int) -> Polynomial:
    return sum((Polynomial.variable(n, i) ** 2 for i in range(n)), Polynomial.zero(n))


def lattice_count_rows() -> List[Tuple[Tuple[int, int], Tuple[int, ...], Polynomial]]:
    """(type, parity class, polynomial) for every printed lattice-count row."""
    b1 = Polynomial.variable(1, 0) ** 2
    s2, s4 = _sum_of_squares(2), _sum_of_squares(4)
    return [
        ((0, 3), (0, 0, 0), Polynomial.constant(3, 1)),
        ((1, 1), (0,), (b1 - 4) * Fraction(1, 48)),
        ((0, 4), (0, 0, 0, 0), (s4 - 4) * Fraction(1, 4)),
        ((0, 4), (1, 1, 0, 0), (s4 - 2) * Fraction(1, 4)),
        ((1, 2), (0, 0), (s2 - 4) * (s2 - 8) * Fraction(1, 384)),
        ((2, 1), (0,), (b1 - 4) * (b1 - 16) * (b1 - 36) * (b1 * 5 - 32) * Fraction(1, 2 ** 16 * 3 ** 3 * 5)),
    ]


def volume_rows() -> List[Tuple[Tuple[int, int], Polynomial]]:
    s2 = _sum_of_squares(2)
    return [
        ((0, 3), Polynomial.constant(3, Fraction(1, 2))),
        ((1, 1), Polynomial.variable(1, 0) ** 2 * Fraction(1, 96)),
        ((0, 4), _sum_of_squares(4) * Fraction(1, 8)),
        ((1, 2), s2 * s2 * Fraction(1, 2 ** 8 * 3)),
        ((2, 1), Polynomial.variable(1, 0) ** 8 * Fraction(1, 2 ** 17 * 3 ** 3)),
    ]


SMALL_TYPES = ((0, 3), (1, 1), (0, 4), (1, 2))
FRONTIER_TYPES = ((0, 5), (1, 3), (2, 1))


def _types(quick: bool) -> Tuple[Tuple[int, int], ...]:
    return SMALL_TYPES if quick else SMALL_TYPES + FRONTIER_TYPES


def _lengths(n: int, max_total: int, even_only: bool = True) -> Iterator[Tuple[int, ...]]:
    """Weakly decreasing positive n-tuples with sum <= max_total."""
    for b in itertools.combinations_with_replacement(range(max_total, 0, -1), n):
        if sum(b) <= max_total and (not even_only or sum(b) % 2 == 0):
            yield b


# ==============================================================================
# Checks
# ==============================================================================

def check_lattice_count_table(quick: bool, jobs: int) -> CheckOutcome:
    rows = [row for row in lattice_count_rows() if not (quick and row[0] == (2, 1))]
    for (g, n), parity, expected in rows:
        fitted = moduli_service.n_quasipolynomial(g, n).polynomial(parity)
        if fitted != expected:
            return False, f"N_{{{g},{n}}} class {parity}: got {fitted.to_text()}"
    return True, f"{len(rows)} rows"


def check_volume_table(quick: bool, jobs: int) -> CheckOutcome:
    rows = [row for row in volume_rows() if not (quick and row[0] == (2, 1))]
    for (g, n), expected in rows:
        volume = moduli_service.kontsevich_volume(g, n)
        if volume != expected:
            return False, f"V_{{{g},{n}}}: got {volume.to_text()}"
    return True, f"{len(rows)} rows"


def check_three_way_oracle(quick: bool, jobs: int) -> CheckOutcome:
    max_total = 8 if quick else 12
    instances = 0
    for g, n in _types(quick):
        for b in _lengths(n, max_total):
            direct = moduli_service.n_direct(g, n, b, jobs=jobs)
            recursive = moduli_service.n_recursive(g, n, b)
            belyi = hurwitz_service.belyi_count(g, b, jobs=jobs)
            if not direct == recursive == belyi:
                return False, f"({g},{n}) b={b}: direct {direct}, recursive {recursive}, belyi {belyi}"
            instances += 1
    return True, f"{instances} instances"


def check_euler_characteristics(quick: bool, jobs: int) -> CheckOutcome:
    types = SMALL_TYPES if quick else SMALL_TYPES + ((0, 5), (2, 1))
    for g, n in types:
        lattice = moduli_service.euler_characteristic(g, n, method="lattice")
        zeta = moduli_service.euler_characteristic(g, n, method="zeta")
        if lattice != zeta:
            return False, f"chi({g},{n}): lattice {lattice}, zeta {zeta}"
    pinned = {(0, 4): Fraction(-1), (1, 1): Fraction(-1, 12), (2, 1): Fraction(1, 120)}
    for (g, n), value in pinned.items():
        if moduli_service.euler_characteristic(g, n, method="zeta") != value:
            return False, f"chi({g},{n}) is not {value}"
    return True, f"{len(types)} types"


def check_catalog_euler_characteristics(quick: bool, jobs: int) -> CheckOutcome:
    for g, n in _types(quick):
        enumerate_fatgraphs(g, n, jobs=jobs)
        catalog = moduli_service.catalog_euler_characteristic(g, n)
        zeta = moduli_service.euler_characteristic(g, n, method="zeta")
        if catalog != zeta:
            return False, f"chi({g},{n}): catalog {catalog}, zeta {zeta}"
    return True, ""


def check_harer_zagier(quick: bool, jobs: int) -> CheckOutcome:
    genera = (1, 2) if quick else (1, 2, 3)
    for g in genera:
        for b in range(2, 13, 2):
            hz = harer_zagier_service.n_g1_hz(g, b)
            if hz != moduli_service.n_recursive(g, 1, (b,)):
                return False, f"N_{{{g},1}}({b}): hz {hz}, recursion {moduli_service.n_recursive(g, 1, (b,))}"
            if g <= (1 if quick else 2) and hz != moduli_service.n_direct(g, 1, (b,), jobs=jobs):
                return False, f"N_{{{g},1}}({b}): hz {hz} differs from enumeration"
    return True, f"genera {genera}"


def check_epsilon_recursion(quick: bool, jobs: int) -> CheckOutcome:
    for n in range(13):
        for g in range(n // 2 + 1):
            if harer_zagier_service.hz_epsilon(g, n) != harer_zagier_service.hz_epsilon_recursive(g, n):
                return False, f"epsilon_{g}({n}) differs between extraction and recursion"
    if not harer_zagier_service.generating_function_check(8, 8):
        return False, "c(n, k) disagrees with ((1 + x) / (1 - x))^k"
    return True, "n <= 12"


def check_n_g1_polynomials(quick: bool, jobs: int) -> CheckOutcome:
    top = 4 if quick else 12
    for g in range(1, top + 1):
        constant = harer_zagier_service.n_g1_polynomial(g).coefficient((0,))
        if constant != moduli_service.euler_characteristic(g, 1, method="zeta"):
            return False, f"N_{{{g},1}}(0) = {constant}"
    return True, f"g <= {top}"


def check_dilaton(quick: bool, jobs: int) -> CheckOutcome:
    max_total = 8 if quick else 12
    instances = 0
    for g, n in SMALL_TYPES:
        for b in _lengths(n, max_total, even_only=False):
            result = moduli_service.dilaton_check(g, n, b)
            if not result.holds:
                return False, f"({g},{n}) b={b}: lhs {result.lhs}, rhs {result.rhs}, vanishing {result.vanishing}"
            instances += 1
    return True, f"{instances} instances"


ELSV_PINNED = {
    (0, (1, 1, 1)): Fraction(4),
    (0, (2, 1)): Fraction(4),
    (0, (2, 1, 1)): Fraction(120),
    (1, (1, 1)): Fraction(1, 2),
    (1, (2,)): Fraction(1, 2),
    (0, (3, 1)): Fraction(27),
}


def check_elsv(quick: bool, jobs: int) -> CheckOutcome:
    for (g, parts), value in ELSV_PINNED.items():
        mu = Partition(parts)
        searched = hurwitz_service.simple_hurwitz(g, mu)
        formula = hurwitz_service.elsv_hurwitz(g, mu)
        if not searched == formula == value:
            return False, f"H_{{{g},{mu}}}: search {searched}, ELSV {formula}, expected {value}"
    trace = hurwitz_service.class_trace(BranchData(4, (Partition((4,)), Partition((2, 2)), Partition((4,)))))
    if trace != Fraction(1, 4):
        return False, f"trace of (4),(2,2),(4) is {trace}"
    return True, f"{len(ELSV_PINNED)} pairs and one trace"


def check_trace_totals(quick: bool, jobs: int) -> CheckOutcome:
    top = 6 if quick else 8
    for d in range(2, top + 1, 2):
        total = hurwitz_service.belyi_trace_total(d)
        connected = sum((hurwitz_service.belyi_count(g, (d,), jobs=jobs) for g in range(d // 2 + 1)), Fraction(0))
        if total != connected:
            return False, f"d={d}: trace total {total}, Belyi counts {connected}"
    return True, f"d <= {top}"


def check_conjugation_invariance(quick: bool, jobs: int) -> CheckOutcome:
    b = (2, 2, 2, 2)
    scrambled = [3, 7, 1, 0, 5, 2, 6, 4]
    plain = hurwitz_service.belyi_count(0, b, jobs=jobs)
    relabeled = hurwitz_service.belyi_count(0, b, relabeling=scrambled, jobs=jobs)
    if plain != relabeled:
        return False, f"{plain} vs {relabeled} after relabeling"
    return True, f"N_{{0,4}}{b} = {plain}"


def check_vector_partitions(quick: bool, jobs: int) -> CheckOutcome:
    system = ConstraintSystem.from_rows([[1, 2, 2], [1, 0, 0]])
    for b1 in range(1, 13):
        for b2 in range(1, 13):
            count = polytope_service.count_lattice_points(system, (b1, b2), strict=True)
            expected = (b1 - b2) // 2 - 1 if b1 > b2 and (b1 - b2) % 2 == 0 else 0
            if count != expected:
                return False, f"count at ({b1},{b2}) is {count}, expected {expected}"
    for b in [(3, 1), (7, 3), (9, 2)]:
        volume = polytope_service.polytope_volume(system, b)
        if volume != Fraction(b[0] - b[1], 4):
            return False, f"volume at {b} is {volume}"

    order = 12
    series = laplace_service.product_form_series(polytope_service.vpf_laplace_form(system), order)
    z1, z2 = laplace_service.variables(2)
    printed = laplace_service.series_expand(z1 ** 5 * z2 / ((1 - z1 * z2) * (1 - z1 ** 2) ** 2), order, nvars=2)
    if not laplace_service.compare_series(series, printed).matched:
        return False, "product form differs from the printed transform"
    for exp, coef in series.items():
        if coef != polytope_service.count_lattice_points(system, exp, strict=True):
            return False, f"series coefficient at {exp} differs from the lattice count"

    other = ConstraintSystem.from_rows([[1, 1, 2, 0], [1, 1, 0, 2]])
    for b1 in range(1, 10, 2):
        for b2 in range(b1, 10, 2):
            expected = Fraction(b1 * b1, 4) - b1 + Fraction(3, 4)
            if polytope_service.count_lattice_points(other, (b1, b2), strict=True) != expected:
                return False, f"odd-odd count at ({b1},{b2}) is not {expected}"

    triangle = ConstraintSystem.from_rows([[1, 1, 1]])
    p = polytope_service.ehrhart_polynomial(triangle, (1,), terms=6)
    k = Polynomial.variable(1, 0)
    if p != (k + 1) * (k + 2) * Fraction(1, 2):
        return False, f"triangle Ehrhart polynomial is {p.to_text(['k'])}"
    return True, "counts, volumes, transform, Ehrhart"


def check_laplace_forms(quick: bool, jobs: int) -> CheckOutcome:
    order = 8 if quick else 12
    details = []
    for g, n in ((0, 3), (1, 1)):
        comparison = laplace_service.compare_series(
            laplace_service.discrete_omega_series(g, n, order),
            laplace_service.closed_form_omega(f"omega{g}{n}", order),
        )
        if not comparison.matched:
            first = comparison.first_mismatch
            return False, f"omega{g}{n} differs at {first.exp}: {first.lhs} vs {first.rhs}"

    # omega04 is recorded either way
    comparison = laplace_service.compare_series(
        laplace_service.discrete_omega_series(0, 4, order),
        laplace_service.closed_form_omega("omega04", order),
    )
    if comparison.matched:
        details.append(f"omega04 matched to order {order}")
    else:
        first = comparison.first_mismatch
        details.append(f"omega04 {comparison.mismatches} mismatches, first at {first.exp}")

    for g, n in ((0, 3), (1, 1)):
        ratio = laplace_service.airy_constant_ratio(g, n)
        if ratio != 1:
            return False, f"omega{g}{n} Airy form is {ratio} times the derived one"
    details.append(f"omega04 Airy printed/derived = {format_rational(laplace_service.airy_constant_ratio(0, 4))}")

    report = laplace_service.asymptotic_airy_check(1, 1, [Fraction(1, 10), Fraction(1, 100)])
    if not report.passed or report.rows[-1].deviation >= Fraction(1, 20):
        return False, f"omega11 asymptotic ratios {[format_rational(r.ratio) for r in report.rows]}"
    return True, "; ".join(details)


def check_structure(quick: bool, jobs: int) -> CheckOutcome:
    for g, n in _types(quick):
        for entry in enumerate_fatgraphs(g, n, jobs=jobs).entries:
            index = polytope_service.lattice_index(ConstraintSystem.from_rows(incidence_matrix(entry.fatgraph)))
            if index != 2:
                return False, f"index {index} for {entry.fatgraph.to_text()}"
        qp = moduli_service.n_quasipolynomial(g, n)
        if any(sum(parity) % 2 for parity in qp.parity_classes()):
            return False, f"N_{{{g},{n}}} has a nonzero odd-weight class"
        twice_volume = moduli_service.kontsevich_volume(g, n) * 2
        for parity, top in moduli_service.top_degree_parts(g, n).items():
            if top != twice_volume:
                return False, f"N_{{{g},{n}}} class {parity} has top part {top.to_text()}"
    if moduli_service.intersection_numbers(1, 1) != {(1,): Fraction(1, 24)}:
        return False, "<tau_1> on M_{1,1} is not 1/24"
    if moduli_service.intersection_numbers(0, 3) != {(0, 0, 0): Fraction(1)}:
        return False, "<tau_0^3> is not 1"
    return True, ""


def check_weil_petersson(quick: bool, jobs: int) -> CheckOutcome:
    types = [t for t in moduli_service.WEIL_PETERSSON_TYPES if not (quick and t == (2, 1))]
    for g, n in types:
        if not moduli_service.weil_petersson_check(g, n).matched:
            return False, f"({g},{n}) top part differs from 2^(2g-2+n) V"
    return True, f"{len(types)} rows"


def check_binomial_basis(quick: bool, jobs: int) -> CheckOutcome:
    genera = (1,) if quick else (1, 2)
    for g in genera:
        enumerate_fatgraphs(g, 1, jobs=jobs)
        fitted = moduli_service.binomial_basis_coefficients(g)
        catalog = moduli_service.catalog_binomial_coefficients(g)
        if fitted != catalog:
            return False, f"g={g}: differences {fitted} vs catalog {catalog}"
    return True, f"genera {genera}"


def _star_fatgraph():
    """The (0,4) fatgraph with three loops on spokes: three columns 2*e_r share one row r."""
    for entry in enumerate_fatgraphs(0, 4).entries:
        columns = list(zip(*incidence_matrix(entry.fatgraph)))
        doubled = [col.index(2) for col in columns if 2 in col]
        if len(doubled) == 3 and len(set(doubled)) == 1:
            return entry.fatgraph, doubled[0]
    raise LookupError("No three-spoke fatgraph in the (0,4) catalog.")


def check_chamber(quick: bool, jobs: int) -> CheckOutcome:
    fatgraph, outer = _star_fatgraph()
    inner = [i for i in range(4) if i != outer]

    def point(others: Tuple[int, ...], m: int) -> Tuple[int, ...]:
        b = [0] * 4
        for i, x in zip(inner, others):
            b[i] = x
        b[outer] = sum(others) + 2 * m
        return tuple(b)

    samples = [
        (point(others, m), moduli_service.fatgraph_count(fatgraph, point(others, m)))
        for others in itertools.product(range(1, 4), repeat=3)
        for m in range(1, 6)
    ]
    fitted = poly_fit(samples, 4, 2)
    for others in itertools.product(range(1, 5), repeat=3):
        b = point(others, 7)
        if fitted.evaluate(b) != moduli_service.fatgraph_count(fatgraph, b):
            return False, f"chamber polynomial misses the count at {b}"
    return True, f"N_Gamma = {fitted.to_text()}"


CHECKS = (
    Check("lattice-count table", check_lattice_count_table),
    Check("volume table", check_volume_table),
    Check("three-way oracle", check_three_way_oracle),
    Check("euler characteristics", check_euler_characteristics),
    Check("catalog euler characteristics", check_catalog_euler_characteristics),
    Check("harer-zagier", check_harer_zagier),
    Check("epsilon recursion", check_epsilon_recursion),
    Check("N_g1 polynomials", check_n_g1_polynomials),
    Check("dilaton", check_dilaton),
    Check("elsv", check_elsv),
    Check("trace totals", check_trace_totals),
    Check("conjugation invariance", check_conjugation_invariance),
    Check("vector partitions", check_vector_partitions),
    Check("laplace forms", check_laplace_forms),
    Check("structure", check_structure),
    Check("weil-petersson", check_weil_petersson),
    Check("binomial basis", check_binomial_basis),
    Check("chamber", check_chamber),
)


def run_checks(quick: bool = False, jobs: int = 1) -> VerifyReport:
    """Runs every check; an exception inside a check is a FAIL row, never an abort."""
    rows = []
    for check in tqdm(CHECKS, desc="verify", disable=None):
        try:
            passed, detail = check.run(quick, jobs)
        except Exception as e:
            logger.error(f"verify | {check.name} | {type(e).__name__}: {e}")
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.info(f"verify | {check.name} | {'PASS' if passed else 'FAIL'}")
        rows.append(CheckRow(name=check.name, passed=passed, detail=detail))
    return VerifyReport(quick=quick, rows=rows)
