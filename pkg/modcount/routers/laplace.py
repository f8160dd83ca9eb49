"""
(laplace.py) Defines the `laplace` sub-commands: discrete transform series and their
comparison with the closed forms, Airy forms from volumes, and the asymptotic report.
"""

import argparse
from fractions import Fraction

from modcount.routers.common import (
    HandlerTable,
    add_common_options,
    add_type_options,
    monomial_lines,
    monomial_models,
    nonnegative_int,
    rationals_type,
    render,
)
from modcount.schemas import (
    AiryResponse,
    AsymptoticResponse,
    AsymptoticRowModel,
    Command,
    CommandResult,
    MismatchModel,
    SeriesDiffResponse,
    SeriesResponse,
)
from modcount.services import laplace_service
from modcount.services.exactnum import format_decimal, format_rational
from modcount.services.laplace_service import UnknownForm


# ==============================================================================
# Router Setup
# ==============================================================================

def register(subparsers: argparse._SubParsersAction) -> HandlerTable:
    laplace = subparsers.add_parser("laplace", help="Discrete and Airy Laplace transform forms.")
    actions = laplace.add_subparsers(dest="action", required=True)

    series = actions.add_parser("series", help="Series of prod b_i N_{g,n}(b) z^(b - 1).")
    add_type_options(series)
    series.add_argument("--order", type=nonnegative_int, default=12)
    series.add_argument("--compare-form", action="store_true", help="Diff against the printed closed form.")
    add_common_options(series)

    airy = actions.add_parser("airy", help="Airy form derived from the Kontsevich volume.")
    add_type_options(airy)
    add_common_options(airy)

    asymptotic = actions.add_parser("asymptotic", help="Approach of the discrete form to its Airy form.")
    add_type_options(asymptotic)
    asymptotic.add_argument("--s", type=rationals_type, default=[Fraction(1, 10), Fraction(1, 100)])
    add_common_options(asymptotic)

    return {
        ("laplace", "series"): run_series,
        ("laplace", "airy"): run_airy,
        ("laplace", "asymptotic"): run_asymptotic,
    }


# ==============================================================================
# Handlers
# ==============================================================================

def run_series(command: Command) -> CommandResult:
    g, n, order = command.options["genus"], command.options["boundaries"], command.options["order"]
    discrete = laplace_service.discrete_omega_series(g, n, order)
    if not command.options["compare_form"]:
        response = SeriesResponse(g=g, n=n, order=order, terms=monomial_models(discrete.items()))
        return render(command, response, monomial_lines(discrete.items()))

    form_id = laplace_service.normalize_form_id(f"omega{g}{n}")
    printed = laplace_service.closed_form_omega(form_id, order)
    comparison = laplace_service.compare_series(discrete, printed)
    first = comparison.first_mismatch
    response = SeriesDiffResponse(
        form=form_id,
        order=order,
        matched=comparison.matched,
        first_mismatch=None if first is None else MismatchModel(
            exp=list(first.exp), lhs=format_rational(first.lhs), rhs=format_rational(first.rhs)
        ),
        mismatches=comparison.mismatches,
    )
    if comparison.matched:
        table = f"{form_id}: matched to order {order}"
    else:
        table = (f"{form_id}: {comparison.mismatches} mismatches to order {order}; first at {first.exp}: "
                 f"series {format_rational(first.lhs)}, printed form {format_rational(first.rhs)}")
    # a documented discrepancy is still a successful run
    return render(command, response, table)


def run_airy(command: Command) -> CommandResult:
    g, n = command.options["genus"], command.options["boundaries"]
    derived = laplace_service.laurent_terms(laplace_service.airy_form_from_volume(g, n), n)
    response = AiryResponse(g=g, n=n, derived=monomial_models(derived.items()))
    table = monomial_lines(derived.items(), prefix="s")
    try:
        form_id = laplace_service.normalize_form_id(f"omega{g}{n}_airy")
    except UnknownForm:
        return render(command, response, table)
    printed = laplace_service.laurent_terms(laplace_service.closed_form_expr(form_id), n)
    response.printed = monomial_models(printed.items())
    response.ratio = format_rational(laplace_service.airy_constant_ratio(g, n))
    table += f"\nprinted / derived = {response.ratio}"
    return render(command, response, table)


def run_asymptotic(command: Command) -> CommandResult:
    g, n = command.options["genus"], command.options["boundaries"]
    report = laplace_service.asymptotic_airy_check(g, n, command.options["s"])
    rows = [
        AsymptoticRowModel(s=format_rational(row.s), ratio=format_rational(row.ratio), deviation=format_rational(row.deviation))
        for row in report.rows
    ]
    response = AsymptoticResponse(g=g, n=n, rows=rows, passed=report.passed)
    lines = [f"s={row.s} |ratio|-1 ~ {format_decimal(row.deviation)} ratio={row.ratio}" for row in report.rows]
    lines.append("PASS" if report.passed else "FAIL")
    return render(command, response, "\n".join(lines), exit_code=0 if report.passed else 3)
