"""Rich-based console output for the CLI."""

from collections.abc import Iterable

from rich.console import Console
from rich.table import Table

from exchci.verify.models import VerifyResult

console = Console()
err_console = Console(stderr=True)


def emit(text: str) -> None:
    """Write one line of command output verbatim; rich rendering would expand the TSV tabs."""
    console.file.write(text + "\n")


def error(text: str) -> None:
    err_console.print(text, markup=False, highlight=False, soft_wrap=True)


def verify_table(results: Iterable[VerifyResult]) -> None:
    """Render verify results as a table, one row per check in registration order."""
    table = Table(title="verify")
    table.add_column("check")
    table.add_column("status")
    table.add_column("seconds", justify="right")
    table.add_column("counterexample")
    for result in results:
        style = "green" if result.status == "pass" else "red"
        table.add_row(
            result.check_id,
            f"[{style}]{result.status}[/{style}]",
            f"{result.elapsed_seconds:.2f}",
            result.counterexample or "",
        )
    console.print(table)
