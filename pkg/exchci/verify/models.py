"""Pydantic models for verify results."""

from typing import Literal

from pydantic import BaseModel


class VerifyResult(BaseModel):
    check_id: str
    suite: str
    status: Literal["pass", "fail"]
    elapsed_seconds: float
    counterexample: str | None = None
    reproduce: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def tsv_row(self) -> str:
        fields = [self.check_id, self.suite, self.status, f"{self.elapsed_seconds:.3f}", self.counterexample or "", self.reproduce or ""]
        return "\t".join(f.replace("\t", " ").replace("\n", " ") for f in fields)


class VerifySummary(BaseModel):
    suite: str
    nmax: int
    seed: int
    results: list[VerifyResult]

    @property
    def failed(self) -> list[VerifyResult]:
        return [r for r in self.results if not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failed


TSV_HEADER = "check\tsuite\tstatus\tseconds\tcounterexample\treproduce"
