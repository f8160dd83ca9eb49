"""
(common.py) Shared plumbing for the routers: argument types that turn text into
exact values, the flags every sub-command accepts, and output rendering.
"""

import argparse
import json
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from modcount.config import DEFAULT_JOBS
from modcount.schemas import Command, CommandResult, MonomialModel
from modcount.services import parsing_service
from modcount.services.exactnum import format_rational

Handler = Callable[[Command], CommandResult]
HandlerTable = Dict[Tuple[str, Optional[str]], Handler]


# ==============================================================================
# Argument Types
# ==============================================================================

def _argument_type(parse: Callable, name: str) -> Callable[[str], object]:
    def convert(text: str):
        try:
            return parse(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from e
    convert.__name__ = name
    return convert


def _bounded_int(minimum: int) -> Callable[[str], int]:
    def convert(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"'{text}' is not an integer.")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{value} is below the minimum {minimum}.")
        return value
    return convert


nonnegative_int = _bounded_int(0)
positive_int = _bounded_int(1)
lengths_type = _argument_type(lambda text: parsing_service.parse_vector(text, minimum=1), "lengths")
vector_type = _argument_type(parsing_service.parse_vector, "vector")
matrix_type = _argument_type(parsing_service.parse_matrix, "matrix")
partition_type = _argument_type(parsing_service.parse_partition, "partition")
partitions_type = _argument_type(parsing_service.parse_partitions, "partitions")
rationals_type = _argument_type(parsing_service.parse_rational_list, "rationals")


def add_common_options(parser: argparse.ArgumentParser) -> None:
    """--format, --cache-dir and --jobs, accepted by every sub-command."""
    parser.add_argument("--format", choices=["table", "json"], default="table", help="Output rendering.")
    parser.add_argument("--cache-dir", default=None, help="Directory for fitted quasi-polynomials.")
    parser.add_argument("--jobs", type=positive_int, default=DEFAULT_JOBS, help="Worker processes.")


def add_type_options(parser: argparse.ArgumentParser, lengths: bool = False) -> None:
    parser.add_argument("--genus", type=nonnegative_int, required=True)
    if lengths:
        parser.add_argument("--lengths", type=lengths_type, required=True, help="Boundary lengths, e.g. 2,2,2,2.")
    else:
        parser.add_argument("--boundaries", type=positive_int, required=True)


# ==============================================================================
# Rendering
# ==============================================================================

def to_json(model: BaseModel) -> str:
    """Keys sorted and rationals already normalized, so equal results render byte-identically."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2)


def render(command: Command, model: BaseModel, table: str, exit_code: int = 0) -> CommandResult:
    output = to_json(model) if command.output_format == "json" else table
    return CommandResult(output=output, exit_code=exit_code)


def monomial_models(items) -> List[MonomialModel]:
    """(exponent, coefficient) pairs, e.g. from a series or Laurent expansion, sorted by exponent."""
    return [MonomialModel(exp=list(exp), coef=format_rational(coef)) for exp, coef in sorted(items)]


def monomial_lines(items, prefix: str = "z") -> str:
    lines = []
    for exp, coef in sorted(items, key=lambda item: (sum(item[0]), item[0])):
        factors = "*".join(f"{prefix}{i + 1}^{e}" for i, e in enumerate(exp) if e)
        lines.append(f"{format_rational(coef)}{'*' + factors if factors else ''}")
    return "\n".join(lines)
