"""
(verify.py) Defines the `verify` sub-command: the full cross-check suite as a PASS/FAIL matrix.
"""

import argparse

from modcount.middleware.errors import EXIT_CHECK_FAILED, EXIT_OK
from modcount.routers.common import HandlerTable, add_common_options, render
from modcount.schemas import Command, CommandResult
from modcount.services import verify_service


def register(subparsers: argparse._SubParsersAction) -> HandlerTable:
    parser = subparsers.add_parser("verify", help="Run every cross-check and print a PASS/FAIL matrix.")
    parser.add_argument("--quick", action="store_true", help="Stay below the enumeration frontier.")
    add_common_options(parser)
    return {("verify", None): run_verify}


def run_verify(command: Command) -> CommandResult:
    report = verify_service.run_checks(quick=command.options["quick"], jobs=command.jobs)
    width = max(len(row.name) for row in report.rows)
    lines = [f"{row.name.ljust(width)}  {'PASS' if row.passed else 'FAIL'}  {row.detail}".rstrip() for row in report.rows]
    exit_code = EXIT_OK if report.passed else EXIT_CHECK_FAILED
    return render(command, report, "\n".join(lines), exit_code=exit_code)
