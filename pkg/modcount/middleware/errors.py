"""
(errors.py) Maps service exceptions to process exit codes.
Every command handler runs through `guarded`, so routers only raise.
"""

import logging
from typing import Callable

from modcount.schemas import Command, CommandResult
from modcount.services.cache_service import CacheCorrupted
from modcount.services.exactnum import FitError
from modcount.services.fatgraph_service import UnsupportedSize
from modcount.services.hurwitz_service import FrontierExceeded, UnsupportedTableRow
from modcount.services.laplace_service import NonExpandableDivisor
from modcount.services.moduli_service import InvariantViolation
from modcount.services.polytope_service import (
    DegenerateDirection,
    InterpolationError,
    RankDeficient,
    ReciprocityError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNSUPPORTED = 2
EXIT_CHECK_FAILED = 3


class UsageError(Exception):
    """Raised when the command line itself is malformed."""
    pass


# Order matters: InvariantViolation is an AssertionError, UnstableType a ValueError.
_UNSUPPORTED = (UnsupportedSize, FrontierExceeded, UnsupportedTableRow)
_CHECK_FAILED = (
    FitError,
    InterpolationError,
    ReciprocityError,
    InvariantViolation,
    DegenerateDirection,
    RankDeficient,
    CacheCorrupted,
    NonExpandableDivisor,
)
_USAGE = (UsageError, ValueError)


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, _UNSUPPORTED):
        return EXIT_UNSUPPORTED
    if isinstance(error, _CHECK_FAILED):
        return EXIT_CHECK_FAILED
    if isinstance(error, _USAGE):
        return EXIT_USAGE
    return EXIT_CHECK_FAILED


def guarded(handler: Callable[[Command], CommandResult], command: Command) -> CommandResult:
    """Runs one handler; any exception becomes an ERROR log line and an exit code."""
    label = command.verb if command.action is None else f"{command.verb} {command.action}"
    try:
        return handler(command)
    except (*_UNSUPPORTED, *_CHECK_FAILED, *_USAGE) as e:
        code = exit_code_for(e)
        logger.error(f"{label} | {type(e).__name__}: {e}")
        return CommandResult(output="", exit_code=code)
    except Exception as e:
        logger.exception(f"{label} | unexpected {type(e).__name__}: {e}")
        return CommandResult(output="", exit_code=EXIT_CHECK_FAILED)
