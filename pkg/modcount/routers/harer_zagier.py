"""
(harer_zagier.py) Defines the `hz` sub-commands: c(n, k) tables, polygon gluing
counts, and the one-boundary counts N_{g,1} built from them.
"""

import argparse

from modcount.routers.common import (
    HandlerTable,
    add_common_options,
    lengths_type,
    nonnegative_int,
    positive_int,
    render,
)
from modcount.schemas import Command, CommandResult, HZTableResponse, PolynomialModel, ValueResponse
from modcount.services import harer_zagier_service
from modcount.services.exactnum import format_rational


def register(subparsers: argparse._SubParsersAction) -> HandlerTable:
    hz = subparsers.add_parser("hz", help="Harer-Zagier numbers and N_{g,1}.")
    actions = hz.add_subparsers(dest="action", required=True)

    table = actions.add_parser("table", help="c(n, k) with epsilon and mu.")
    table.add_argument("--nmax", type=nonnegative_int, required=True)
    table.add_argument("--kmax", type=nonnegative_int, required=True)
    add_common_options(table)

    mu = actions.add_parser("mu", help="epsilon_g(n) and mu_g(n).")
    mu.add_argument("--genus", type=nonnegative_int, required=True)
    mu.add_argument("--size", type=nonnegative_int, required=True)
    add_common_options(mu)

    count = actions.add_parser("count", help="N_{g,1}(b) = mu_g(b/2) / b.")
    count.add_argument("--genus", type=positive_int, required=True)
    count.add_argument("--lengths", type=lengths_type, required=True)
    add_common_options(count)

    poly = actions.add_parser("poly", help="Polynomial N_{g,1} fitted from gluing counts.")
    poly.add_argument("--genus", type=positive_int, required=True)
    add_common_options(poly)

    return {
        ("hz", "table"): run_table,
        ("hz", "mu"): run_mu,
        ("hz", "count"): run_count,
        ("hz", "poly"): run_poly,
    }


def run_table(command: Command) -> CommandResult:
    nmax, kmax = command.options["nmax"], command.options["kmax"]
    table = harer_zagier_service.hz_c(nmax, kmax)
    response = HZTableResponse(
        c=[[table.c[(n, k)] for k in range(kmax + 1)] for n in range(nmax + 1)],
        epsilon={f"{g},{n}": v for (g, n), v in sorted(table.epsilon.items())},
        mu={f"{g},{n}": v for (g, n), v in sorted(table.mu.items())},
    )
    lines = ["n\\k " + " ".join(str(k) for k in range(kmax + 1))]
    lines += [f"{n} " + " ".join(str(v) for v in row) for n, row in enumerate(response.c)]
    return render(command, response, "\n".join(lines))


def run_mu(command: Command) -> CommandResult:
    g, n = command.options["genus"], command.options["size"]
    epsilon, mu = harer_zagier_service.hz_epsilon(g, n), harer_zagier_service.hz_mu(g, n)
    response = HZTableResponse(c=[], epsilon={f"{g},{n}": epsilon}, mu={f"{g},{n}": mu})
    return render(command, response, f"epsilon {epsilon}\nmu {mu}")


def run_count(command: Command) -> CommandResult:
    g, b = command.options["genus"], command.options["lengths"]
    if len(b) != 1:
        raise ValueError(f"hz count takes a single boundary length, got {len(b)}.")
    value = harer_zagier_service.n_g1_hz(g, b[0])
    response = ValueResponse(quantity="N", g=g, n=1, arguments=b, method="hz", value=format_rational(value))
    return render(command, response, response.value)


def run_poly(command: Command) -> CommandResult:
    poly = harer_zagier_service.n_g1_polynomial(command.options["genus"])
    return render(command, PolynomialModel.from_polynomial(poly), poly.to_text())
