"""
(fatgraphs.py) Defines the `fatgraphs` sub-command: the labeled catalog Fat_{g,n}.
"""

import argparse

from modcount.routers.common import HandlerTable, add_common_options, add_type_options, render
from modcount.schemas import Command, CommandResult, FatgraphCatalogModel
from modcount.services.fatgraph_service import enumerate_fatgraphs


def register(subparsers: argparse._SubParsersAction) -> HandlerTable:
    parser = subparsers.add_parser("fatgraphs", help="Enumerate trivalent-or-higher fatgraphs of type (g, n).")
    add_type_options(parser)
    add_common_options(parser)
    return {("fatgraphs", None): run_fatgraphs}


def run_fatgraphs(command: Command) -> CommandResult:
    catalog = enumerate_fatgraphs(command.options["genus"], command.options["boundaries"], jobs=command.jobs)
    lines = [f"{entry.fatgraph.to_text()} aut={entry.aut_order}" for entry in catalog.entries]
    lines.append(f"# {len(catalog)} labeled from {catalog.unlabeled_count} unlabeled")
    return render(command, FatgraphCatalogModel.from_catalog(catalog), "\n".join(lines))
