"""
(main.py) The command-line entry point for modcount.
Builds the parser from the routers, turns argv into a Command, and runs it
through the error middleware.
"""
# IMPORTANT: Load environment variables at the very beginning
from dotenv import load_dotenv
load_dotenv()

import argparse
import logging
import sys
from collections import Counter
from typing import List, Optional, Sequence, Tuple

from modcount import __version__
from modcount.config import CACHE_DIR, LOG_LEVEL
from modcount.middleware.errors import EXIT_USAGE, UsageError, guarded
from modcount.routers import fatgraphs, harer_zagier, hurwitz, laplace, moduli, verify, vpf
from modcount.routers.common import HandlerTable
from modcount.schemas import Command, CommandResult

logger = logging.getLogger(__name__)

ROUTERS = (fatgraphs, moduli, harer_zagier, hurwitz, vpf, laplace, verify)

# Namespace entries that live on Command itself rather than in its options.
_RESERVED = {"verb", "action", "format", "cache_dir", "jobs"}


# ==============================================================================
# Parser Setup
# ==============================================================================

class CommandParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with status 2."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> Tuple[CommandParser, HandlerTable]:
    parser = CommandParser(
        prog="modcount",
        description="Exact lattice counts on moduli spaces of curves and their cross-checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="verb", required=True)
    handlers: HandlerTable = {}
    for router in ROUTERS:
        handlers.update(router.register(subparsers))
    return parser, handlers


def _reject_duplicate_flags(argv: Sequence[str]) -> None:
    flags = Counter(token.split("=", 1)[0] for token in argv if token.startswith("--"))
    repeated = sorted(flag for flag, count in flags.items() if count > 1)
    if repeated:
        raise UsageError(f"Flags given more than once: {', '.join(repeated)}")


def parse_command(argv: Sequence[str]) -> Command:
    """
    Turns argv into a validated Command.

    Raises:
        UsageError: unknown verb, missing or repeated flags, malformed numbers or vectors.
    """
    argv = list(argv)
    _reject_duplicate_flags(argv)
    parser, _ = build_parser()
    namespace = parser.parse_args(argv)
    values = vars(namespace)
    return Command(
        verb=namespace.verb,
        action=values.get("action"),
        options={key: value for key, value in values.items() if key not in _RESERVED},
        output_format=namespace.format,
        # MODCOUNT_CACHE wins over --cache-dir
        cache_dir=CACHE_DIR or namespace.cache_dir,
        jobs=namespace.jobs,
    )


def run(command: Command) -> CommandResult:
    """Dispatches a Command to its router handler; errors come back as exit codes."""
    _, handlers = build_parser()
    handler = handlers.get((command.verb, command.action))
    if handler is None:
        logger.error(f"No handler for {command.verb} {command.action or ''}".rstrip())
        return CommandResult(output="", exit_code=EXIT_USAGE)
    return guarded(handler, command)


# ==============================================================================
# Entry Point
# ==============================================================================

def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=LOG_LEVEL, format="%(levelname)s: %(message)s")
    argv = sys.argv[1:] if argv is None else argv
    try:
        command = parse_command(argv)
    except UsageError as e:
        logger.error(str(e))
        return EXIT_USAGE
    result = run(command)
    if result.output:
        print(result.output)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
