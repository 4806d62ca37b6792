"""Concurrent verify runner: every check runs in a worker thread under a timeout."""

import asyncio
import logging
import time
from collections.abc import Sequence

from exchci.config import CHECK_TIMEOUT, worker_limit
from exchci.errors import InvalidArgumentError
from exchci.verify.models import VerifyResult, VerifySummary
from exchci.verify.registry import Check, registered

logger = logging.getLogger(__name__)


def reproduce_command(check: Check, nmax: int, seed: int) -> str:
    return f"exchci verify --suite {check.suite} --nmax {nmax} --seed {seed} --only {check.check_id}"


async def run_checks(
    checks: Sequence[Check],
    seed: int,
    nmax: int,
    timeout: float = CHECK_TIMEOUT,
    workers: int | None = None,
) -> list[VerifyResult]:
    """Run checks concurrently, returning results in the order given.

    A check that raises or exceeds `timeout` is reported as a failure with
    the error text as its counterexample.
    """
    limit = asyncio.Semaphore(workers or worker_limit())

    async def _run_one(check: Check) -> VerifyResult:
        async with limit:
            start = time.perf_counter()
            try:
                counterexample = await asyncio.wait_for(asyncio.to_thread(check.run, seed), timeout=timeout)
            except asyncio.TimeoutError:
                counterexample = f"timed out after {timeout}s"
            except Exception as e:
                counterexample = f"{type(e).__name__}: {e}"
            elapsed = time.perf_counter() - start
        if counterexample is None:
            logger.info("%s passed in %.2fs", check.check_id, elapsed)
            return VerifyResult(check_id=check.check_id, suite=check.suite, status="pass", elapsed_seconds=elapsed)
        logger.warning("%s failed: %s", check.check_id, counterexample)
        return VerifyResult(
            check_id=check.check_id,
            suite=check.suite,
            status="fail",
            elapsed_seconds=elapsed,
            counterexample=counterexample,
            reproduce=reproduce_command(check, nmax, seed),
        )

    return list(await asyncio.gather(*[_run_one(c) for c in checks]))


def run_verify(suite: str, nmax: int, seed: int, only: Sequence[str] = ()) -> VerifySummary:
    """Select the registered checks and run them to completion."""
    checks = registered(suite, nmax)
    if only:
        unknown = sorted(set(only) - {c.check_id for c in checks})
        if unknown:
            raise InvalidArgumentError(f"Unknown check ids for suite {suite!r} at nmax {nmax}: {unknown}")
        wanted = set(only)
        checks = [c for c in checks if c.check_id in wanted]
    logger.info("running %d checks (suite=%s, nmax=%d, seed=%d)", len(checks), suite, nmax, seed)
    results = asyncio.run(run_checks(checks, seed, nmax))
    return VerifySummary(suite=suite, nmax=nmax, seed=seed, results=results)
