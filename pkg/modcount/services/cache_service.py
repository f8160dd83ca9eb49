"""
(cache_service.py) Persists fitted quasi-polynomials N_{g,n} as JSON files
(N_g{g}_n{n}.json) so repeated CLI runs skip the recursion and the fit.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from modcount.schemas import QuasiPolynomialModel
from modcount.services.exactnum import QuasiPolynomial

logger = logging.getLogger(__name__)


# --- Custom Exceptions for the router layer ---
class CacheCorrupted(Exception):
    """Raised when a cache file exists but does not hold a valid quasi-polynomial."""
    pass


def cache_path(cache_dir: str, g: int, n: int) -> Path:
    return Path(cache_dir) / f"N_g{g}_n{n}.json"


def dump_quasipolynomial(qp: QuasiPolynomial) -> str:
    """Deterministic JSON text: sorted keys, classes and monomials in sorted order."""
    model = QuasiPolynomialModel.from_quasipolynomial(qp)
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def load_quasipolynomial(cache_dir: str, g: int, n: int) -> Optional[QuasiPolynomial]:
    """
    Reads N_{g,n} from the cache directory.

    Returns:
        The stored quasi-polynomial, or None when no file exists yet.

    Raises:
        CacheCorrupted: the file is not valid JSON or does not match the schema.
    """
    path = cache_path(cache_dir, g, n)
    if not path.is_file():
        return None
    try:
        model = QuasiPolynomialModel.model_validate_json(path.read_text(encoding="utf-8"))
        qp = model.to_quasipolynomial()
    except (ValidationError, ValueError) as e:
        logger.error(f"cache | {path} | {e}")
        raise CacheCorrupted(f"Cache file {path} is corrupted: {e}") from e
    if qp.nvars != n:
        raise CacheCorrupted(f"Cache file {path} holds {qp.nvars} variables, expected {n}.")
    logger.info(f"cache | loaded N_{{{g},{n}}} from {path}")
    return qp


def save_quasipolynomial(cache_dir: str, g: int, n: int, qp: QuasiPolynomial) -> Path:
    """Writes N_{g,n} atomically: a temporary file in the same directory, then os.replace."""
    directory = Path(cache_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_path(cache_dir, g, n)
    fd, tmp_name = tempfile.mkstemp(prefix=path.name, suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(dump_quasipolynomial(qp))
        os.replace(tmp_name, path)
    except OSError:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    logger.info(f"cache | wrote N_{{{g},{n}}} to {path}")
    return path
