"""
(vpf.py) Defines the `vpf` sub-commands for a constraint matrix A: lattice counts,
lattice index, quotient volume, product-form Laplace transform and Ehrhart polynomial.
"""

import argparse

from modcount.routers.common import (
    HandlerTable,
    add_common_options,
    matrix_type,
    monomial_lines,
    monomial_models,
    nonnegative_int,
    positive_int,
    render,
    vector_type,
)
from modcount.schemas import (
    Command,
    CommandResult,
    EhrhartResponse,
    LaplaceFormResponse,
    PolynomialModel,
    ValueResponse,
)
from modcount.services import polytope_service
from modcount.services.exactnum import format_rational
from modcount.services.laplace_service import product_form_series
from modcount.services.polytope_service import ConstraintSystem


# ==============================================================================
# Router Setup
# ==============================================================================

def register(subparsers: argparse._SubParsersAction) -> HandlerTable:
    vpf = subparsers.add_parser("vpf", help="Vector partition functions of a matrix.")
    actions = vpf.add_subparsers(dest="action", required=True)

    specs = {
        "count": dict(b=True, strict=True),
        "index": dict(),
        "volume": dict(b=True),
        "laplace": dict(order=True),
        "ehrhart": dict(b=True, terms=True),
    }
    for name, flags in specs.items():
        parser = actions.add_parser(name)
        parser.add_argument("--matrix", type=matrix_type, required=True, help="Rows separated by ';', e.g. 1,2,2;1,0,0.")
        if flags.get("b"):
            parser.add_argument("--b", type=vector_type, required=True)
        if flags.get("strict"):
            parser.add_argument("--strict", action="store_true", help="Count positive solutions only.")
        if flags.get("order"):
            parser.add_argument("--order", type=nonnegative_int, default=12)
        if flags.get("terms"):
            parser.add_argument("--terms", type=positive_int, default=None, help="Fitted samples, default dim + 2.")
        add_common_options(parser)

    return {("vpf", name): handler for name, handler in (
        ("count", run_count),
        ("index", run_index),
        ("volume", run_volume),
        ("laplace", run_laplace),
        ("ehrhart", run_ehrhart),
    )}


# ==============================================================================
# Handlers
# ==============================================================================

def _system(command: Command) -> ConstraintSystem:
    return ConstraintSystem.from_rows(command.options["matrix"])


def run_count(command: Command) -> CommandResult:
    system, b, strict = _system(command), command.options["b"], command.options["strict"]
    value = polytope_service.count_lattice_points(system, b, strict=strict)
    response = ValueResponse(quantity="count", arguments=b, method="strict" if strict else "nonnegative", value=str(value))
    return render(command, response, response.value)


def run_index(command: Command) -> CommandResult:
    value = polytope_service.lattice_index(_system(command))
    response = ValueResponse(quantity="index", value=str(value))
    return render(command, response, response.value)


def run_volume(command: Command) -> CommandResult:
    b = command.options["b"]
    value = polytope_service.polytope_volume(_system(command), b)
    response = ValueResponse(quantity="volume", arguments=b, value=format_rational(value))
    return render(command, response, response.value)


def run_laplace(command: Command) -> CommandResult:
    order = command.options["order"]
    form = polytope_service.vpf_laplace_form(_system(command))
    series = product_form_series(form, order)
    response = LaplaceFormResponse(columns=[list(c) for c in form.columns], order=order, terms=monomial_models(series.items()))
    factors = " * ".join(
        f"z^{list(c)}/(1 - z^{list(c)})" for c in form.columns
    )
    return render(command, response, f"{factors}\n{monomial_lines(series.items())}")


def run_ehrhart(command: Command) -> CommandResult:
    system, b0 = _system(command), command.options["b"]
    terms = command.options["terms"] or system.dimension + 2
    p = polytope_service.ehrhart_polynomial(system, b0, terms)
    constant = p.coefficient((0,))
    response = EhrhartResponse(
        b0=b0,
        polynomial=PolynomialModel.from_polynomial(p),
        constant_term=format_rational(constant),
        reciprocity_checked=True,
    )
    return render(command, response, f"{p.to_text(['k'])}\np(0) = {response.constant_term}")
