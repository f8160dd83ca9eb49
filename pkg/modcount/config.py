"""
(config.py) Configuration settings for the modcount toolkit.
"""

import logging
import os

logger = logging.getLogger(__name__)

# Frontier values are part of the contract and stay hardcoded.
# Deployment knobs (cache location, worker count, verbosity) come from the environment,
# usually through a .env file loaded in main.py.


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"{name}={raw!r} is not an integer. Falling back to {default}.")
        return default


def _env_flag(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in {"1", "true", "yes", "on"}


# --- Persistence ---
# Directory for fitted quasi-polynomials (N_g{g}_n{n}.json). Overrides --cache-dir when set.
CACHE_DIR = os.getenv("MODCOUNT_CACHE") or None

# --- Parallelism ---
# Default for the CLI's --jobs flag. Library calls run serially unless given a worker count.
DEFAULT_JOBS = _env_int("MODCOUNT_JOBS", os.cpu_count() or 1)

# --- Development & Debugging Flags ---
# Enables the parity assertion on every nonzero summand of the lattice-count recursion.
DEBUG_INVARIANTS = _env_flag("MODCOUNT_DEBUG")

LOG_LEVEL = os.getenv("MODCOUNT_LOG_LEVEL", "WARNING").upper()

# --- Frontiers ---
# Fatgraph enumeration is supported while 6g-6+3n stays within this bound.
ENUMERATION_FRONTIER = 9

BELYI_MAX_DEGREE = 12
CLASS_TRACE_MAX_DEGREE = 8
SIMPLE_HURWITZ_MAX_DEGREE = 6
SIMPLE_HURWITZ_MAX_BRANCH_POINTS = 10

# Harer-Zagier tables are exposed up to this genus.
HZ_MAX_GENUS = 12

# --- Interpolation ---
# Extra samples beyond the ansatz size that every quasi-polynomial fit must reproduce.
FIT_HOLDOUTS = 3

# How many times the dilation step may be doubled before a volume/Ehrhart fit gives up.
MAX_DILATION_DOUBLINGS = 3


# --- Validation and Warnings ---
# This part runs when the module is imported, providing immediate feedback.
if DEFAULT_JOBS < 1:
    logger.warning(f"MODCOUNT_JOBS must be positive, got {DEFAULT_JOBS}. Using 1 worker.")
    DEFAULT_JOBS = 1

if LOG_LEVEL not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
    logger.warning(f"MODCOUNT_LOG_LEVEL={LOG_LEVEL!r} is not a logging level. Using WARNING.")
    LOG_LEVEL = "WARNING"

if CACHE_DIR and not os.path.isdir(CACHE_DIR):
    logger.info(f"Cache directory '{CACHE_DIR}' does not exist yet. It will be created on first write.")
