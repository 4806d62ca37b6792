"""Shared configuration: capacity bounds, tolerances and the worker-count knob used by the CLI and verify runner."""

import os

from dotenv import load_dotenv

from exchci.errors import InvalidArgumentError

# One machine word per subset; networks up to 8 nodes.
MAX_ELEMENTS = 32
# Joint tables hold 2**k floats.
MAX_TABLE_ELEMENTS = 15

CI_TOL = 1e-9
NORMALIZATION_TOL = 1e-12
SYMMETRY_TOL = 1e-12
GAUSSIAN_TOL = 1e-9

# Property checkers quantify over all disjoint subsets up to this ground size.
GENERAL_QUANTIFIER_LIMIT = 6

DEFAULT_SEED = 20240601
DEFAULT_NMAX = 5
# A timed-out check is reported at once, but its worker thread cannot be
# cancelled: it runs to completion and the process waits for it on exit.
CHECK_TIMEOUT = 600.0

THREADS_ENV_VAR = "EXCHCI_THREADS"


def worker_limit() -> int:
    """Return the verify runner's worker cap from EXCHCI_THREADS, defaulting to the CPU count."""
    load_dotenv()
    raw = os.getenv(THREADS_ENV_VAR)
    if not raw:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as e:
        raise InvalidArgumentError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from e
    if value < 1:
        raise InvalidArgumentError(f"{THREADS_ENV_VAR} must be positive, got {value}")
    return value
