from typing import Literal

from pydantic import BaseModel

from hblm.schemas.enumeration import Counts
from hblm.schemas.ring import RingSummary


CheckStatus = Literal["pass", "fail", "skipped"]


class ReportMeta(BaseModel):
    wall_ms: int
    version: str


class VerificationReport(BaseModel):
    check: str
    ring: RingSummary
    status: CheckStatus
    counts: Counts
    witnesses: list[str] = []
    meta: ReportMeta

    def payload(self) -> dict:
        """Report without wall time, for determinism comparisons."""
        data = self.model_dump()
        data["meta"].pop("wall_ms")
        return data


class AtlasRow(BaseModel):
    p: int
    n: int
    f: int
    eps: int
    e: int
    u: int
    N: int
    DP: int
    K: int
    R: int
    dp_eq_k: int
