from typing import Literal

from pydantic import BaseModel, Field

from hblm.schemas.ring import RingSpec, RingSummary


ConditionName = Literal["DP", "K", "R"]


class EnumConfig(BaseModel):
    ring: RingSpec
    workers: int | None = Field(None, ge=1)
    max_candidates: int | None = Field(None, ge=1)
    filters: tuple[ConditionName, ...] = ()

    model_config = {"frozen": True}


class Counts(BaseModel):
    N: int = 0
    DP: int = 0
    K: int = 0
    R: int = 0


class ClassificationCounts(Counts):
    K_pi: int = 0


class TypeCount(BaseModel):
    i: int
    j: int
    count: int


class Classification(BaseModel):
    """Per-condition counts of N(R) with the witnesses that tell them apart."""
    ring: RingSummary
    counts: ClassificationCounts
    types: list[TypeCount] = []
    dp_k_witnesses: list[str] = []  # symmetric difference of N^DP and N^K
    k_pi_mismatch: list[str] = []  # pi-only test disagrees with the generic one

    @property
    def dp_equals_k(self) -> bool:
        return not self.dp_k_witnesses
