"""
(hurwitz.py) Defines the `hurwitz` sub-commands: simple Hurwitz numbers by search and by
ELSV, labeled simple Hurwitz numbers, Belyi counts and class-algebra traces.
"""

import argparse

from modcount.routers.common import (
    HandlerTable,
    add_common_options,
    lengths_type,
    nonnegative_int,
    partition_type,
    partitions_type,
    positive_int,
    render,
)
from modcount.schemas import Command, CommandResult, ValueResponse
from modcount.services import hurwitz_service
from modcount.services.exactnum import format_rational
from modcount.services.hurwitz_service import BranchData, Partition


# ==============================================================================
# Router Setup
# ==============================================================================

def register(subparsers: argparse._SubParsersAction) -> HandlerTable:
    hurwitz = subparsers.add_parser("hurwitz", help="Hurwitz numbers and Belyi counts.")
    actions = hurwitz.add_subparsers(dest="action", required=True)

    for name, help_text in (
        ("simple", "H_{g,mu} by transposition search."),
        ("elsv", "H_{g,mu} from the stored ELSV rows."),
        ("labeled", "|Aut mu| / r! * H_{g,mu}."),
    ):
        parser = actions.add_parser(name, help=help_text)
        parser.add_argument("--genus", type=nonnegative_int, required=True)
        parser.add_argument("--mu", type=partition_type, required=True, help="Profile over infinity, e.g. 2,1,1.")
        add_common_options(parser)

    belyi = actions.add_parser("belyi", help="Weighted Belyi count with labeled cycles over infinity.")
    belyi.add_argument("--genus", type=nonnegative_int, required=True)
    belyi.add_argument("--lengths", type=lengths_type, required=True)
    belyi.add_argument("--allow-units", action="store_true", help="Allow unramified points over 0.")
    add_common_options(belyi)

    trace = actions.add_parser("trace", help="Disconnected count from the class algebra.")
    trace.add_argument("--degree", type=positive_int, required=True)
    trace.add_argument("--classes", type=partitions_type, required=True, help="Profiles, e.g. '4;2,2;4'.")
    add_common_options(trace)

    return {
        ("hurwitz", "simple"): run_simple,
        ("hurwitz", "elsv"): run_elsv,
        ("hurwitz", "labeled"): run_labeled,
        ("hurwitz", "belyi"): run_belyi,
        ("hurwitz", "trace"): run_trace,
    }


# ==============================================================================
# Handlers
# ==============================================================================

def _respond(command: Command, quantity: str, value, **fields) -> CommandResult:
    response = ValueResponse(quantity=quantity, value=format_rational(value), **fields)
    return render(command, response, response.value)


def run_simple(command: Command) -> CommandResult:
    g, mu = command.options["genus"], Partition(command.options["mu"])
    value = hurwitz_service.simple_hurwitz(g, mu)
    return _respond(command, "H", value, g=g, n=mu.length, arguments=list(mu.parts), method="search")


def run_elsv(command: Command) -> CommandResult:
    g, mu = command.options["genus"], Partition(command.options["mu"])
    value = hurwitz_service.elsv_hurwitz(g, mu)
    return _respond(command, "H", value, g=g, n=mu.length, arguments=list(mu.parts), method="elsv")


def run_labeled(command: Command) -> CommandResult:
    g, mu = command.options["genus"], command.options["mu"]
    value = hurwitz_service.labeled_simple_hurwitz(g, mu)
    return _respond(command, "H_labeled", value, g=g, n=len(mu), arguments=list(mu))


def run_belyi(command: Command) -> CommandResult:
    g, b = command.options["genus"], command.options["lengths"]
    forbid_units = not command.options["allow_units"]
    value = hurwitz_service.belyi_count(g, b, forbid_units=forbid_units, jobs=command.jobs)
    method = "belyi" if forbid_units else "belyi-with-units"
    return _respond(command, "N" if forbid_units else "M", value, g=g, n=len(b), arguments=b, method=method)


def run_trace(command: Command) -> CommandResult:
    d = command.options["degree"]
    profiles = tuple(Partition(parts) for parts in command.options["classes"])
    value = hurwitz_service.class_trace(BranchData(d, profiles))
    return _respond(command, "trace", value, arguments=[str(p) for p in profiles], method="class-algebra")
