"""
(moduli.py) Defines the sub-commands for lattice counts N_{g,n} and the invariants read
off them: count, poly, euler, volume, intersections and dilaton.
"""

import argparse

from modcount.routers.common import (
    HandlerTable,
    add_common_options,
    add_type_options,
    render,
)
from modcount.schemas import (
    Command,
    CommandResult,
    DilatonResponse,
    IntersectionModel,
    IntersectionsResponse,
    PolynomialModel,
    QuasiPolynomialModel,
    ValueResponse,
    VolumeResponse,
    WeilPeterssonModel,
)
from modcount.services import harer_zagier_service, hurwitz_service, moduli_service
from modcount.services.exactnum import format_rational

COUNT_METHODS = ("recursive", "direct", "belyi", "poly", "hz")


# ==============================================================================
# Router Setup
# ==============================================================================

def register(subparsers: argparse._SubParsersAction) -> HandlerTable:
    count = subparsers.add_parser("count", help="N_{g,n}(b) by one of several methods.")
    add_type_options(count, lengths=True)
    count.add_argument("--method", choices=COUNT_METHODS, default="recursive")
    add_common_options(count)

    poly = subparsers.add_parser("poly", help="Quasi-polynomial N_{g,n}.")
    add_type_options(poly)
    add_common_options(poly)

    euler = subparsers.add_parser("euler", help="Orbifold Euler characteristic of M_{g,n}.")
    add_type_options(euler)
    euler.add_argument("--method", choices=("lattice", "zeta", "catalog"), default="lattice")
    add_common_options(euler)

    volume = subparsers.add_parser("volume", help="Kontsevich volume V_{g,n}.")
    add_type_options(volume)
    add_common_options(volume)

    intersections = subparsers.add_parser("intersections", help="Psi-class intersection numbers.")
    add_type_options(intersections)
    add_common_options(intersections)

    dilaton = subparsers.add_parser("dilaton", help="Dilaton identity at one point.")
    add_type_options(dilaton, lengths=True)
    add_common_options(dilaton)

    return {
        ("count", None): run_count,
        ("poly", None): run_poly,
        ("euler", None): run_euler,
        ("volume", None): run_volume,
        ("intersections", None): run_intersections,
        ("dilaton", None): run_dilaton,
    }


# ==============================================================================
# Handlers
# ==============================================================================

def count_value(g: int, b, method: str, jobs: int = 1, cache_dir=None):
    n = len(b)
    if method == "recursive":
        return moduli_service.n_recursive(g, n, b)
    if method == "direct":
        return moduli_service.n_direct(g, n, b, jobs=jobs)
    if method == "belyi":
        moduli_service.check_stable(g, n)
        return hurwitz_service.belyi_count(g, b, jobs=jobs)
    if method == "poly":
        return moduli_service.n_quasipolynomial(g, n, cache_dir=cache_dir).evaluate(b)
    if n != 1:
        raise ValueError(f"--method hz needs a single boundary length, got {len(b)}.")
    return harer_zagier_service.n_g1_hz(g, b[0])


def run_count(command: Command) -> CommandResult:
    opts = command.options
    g, b, method = opts["genus"], opts["lengths"], opts["method"]
    value = count_value(g, b, method, jobs=command.jobs, cache_dir=command.cache_dir)
    response = ValueResponse(quantity="N", g=g, n=len(b), arguments=b, method=method, value=format_rational(value))
    return render(command, response, response.value)


def run_poly(command: Command) -> CommandResult:
    g, n = command.options["genus"], command.options["boundaries"]
    qp = moduli_service.n_quasipolynomial(g, n, cache_dir=command.cache_dir)
    model = QuasiPolynomialModel.from_quasipolynomial(qp)
    lines = [f"{''.join(map(str, parity))}: {qp.polynomial(parity).to_text()}" for parity in qp.parity_classes()]
    return render(command, model, "\n".join(lines))


def run_euler(command: Command) -> CommandResult:
    g, n, method = command.options["genus"], command.options["boundaries"], command.options["method"]
    if method == "lattice" and command.cache_dir:
        moduli_service.n_quasipolynomial(g, n, cache_dir=command.cache_dir)
    value = moduli_service.euler_characteristic(g, n, method=method)
    response = ValueResponse(quantity="chi", g=g, n=n, method=method, value=format_rational(value))
    return render(command, response, response.value)


def run_volume(command: Command) -> CommandResult:
    g, n = command.options["genus"], command.options["boundaries"]
    moduli_service.n_quasipolynomial(g, n, cache_dir=command.cache_dir)
    volume = moduli_service.kontsevich_volume(g, n)
    response = VolumeResponse(g=g, n=n, volume=PolynomialModel.from_polynomial(volume))
    table = volume.to_text()
    if (g, n) in moduli_service.WEIL_PETERSSON_TYPES:
        check = moduli_service.weil_petersson_check(g, n)
        response.weil_petersson = WeilPeterssonModel(
            top_part=PolynomialModel.from_polynomial(check.top_part),
            scaled_volume=PolynomialModel.from_polynomial(check.scaled_volume),
            matched=check.matched,
        )
        table += f"\nweil-petersson top part {'matches' if check.matched else 'DIFFERS from'} 2^{2 * g - 2 + n} V"
    return render(command, response, table)


def run_intersections(command: Command) -> CommandResult:
    g, n = command.options["genus"], command.options["boundaries"]
    moduli_service.n_quasipolynomial(g, n, cache_dir=command.cache_dir)
    numbers = moduli_service.intersection_numbers(g, n)
    response = IntersectionsResponse(
        g=g, n=n, numbers=[IntersectionModel(d=list(d), value=format_rational(v)) for d, v in numbers.items()]
    )
    table = "\n".join(f"<{' '.join(f'tau_{x}' for x in d)}> = {format_rational(v)}" for d, v in numbers.items())
    return render(command, response, table)


def run_dilaton(command: Command) -> CommandResult:
    g, b = command.options["genus"], command.options["lengths"]
    result = moduli_service.dilaton_check(g, len(b), b, cache_dir=command.cache_dir)
    response = DilatonResponse(
        g=g,
        n=len(b),
        lengths=b,
        lhs=format_rational(result.lhs),
        rhs=format_rational(result.rhs),
        vanishing=format_rational(result.vanishing),
        holds=result.holds,
    )
    table = f"lhs {response.lhs}\nrhs {response.rhs}\nvanishing {response.vanishing}\n{'PASS' if result.holds else 'FAIL'}"
    return render(command, response, table, exit_code=0 if result.holds else 3)
