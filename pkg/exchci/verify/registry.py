"""Check registration: suites are populated by decorating functions in `exchci.verify.suites`."""

import importlib
from collections.abc import Callable
from dataclasses import dataclass
from functools import partial

from exchci.errors import InvalidArgumentError

SUITES = ("core", "vector", "network", "appendix")

# run(seed) returns None on success or a counterexample description
CheckFn = Callable[[int], str | None]


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    size: int
    run: CheckFn


_REGISTRY: list[Check] = []


def register(check_id: str, suite: str, nmin: int = 0, sizes: tuple[int, ...] = ()) -> Callable:
    """Register a check.

    Without `sizes` the function takes the seed and runs whenever nmax >= nmin.
    With `sizes` it takes (seed, n) and one check "<id>-n<n>" is registered per size.
    """
    if suite not in SUITES:
        raise InvalidArgumentError(f"Unknown suite {suite!r}; expected one of {list(SUITES)}")

    def decorator(fn: Callable) -> Callable:
        if sizes:
            for n in sizes:
                _REGISTRY.append(Check(f"{check_id}-n{n}", suite, n, partial(fn, n=n)))
        else:
            _REGISTRY.append(Check(check_id, suite, nmin, fn))
        return fn

    return decorator


def registered(suite: str = "all", nmax: int = 5) -> list[Check]:
    """Checks of a suite ("all" for every suite) whose size fits nmax, in registration order."""
    if suite != "all" and suite not in SUITES:
        raise InvalidArgumentError(f"Unknown suite {suite!r}; expected 'all' or one of {list(SUITES)}")
    importlib.import_module("exchci.verify.suites")
    return [c for c in _REGISTRY if (suite == "all" or c.suite == suite) and c.size <= nmax]
