from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field

from hblm.schemas.ring import RingSpec


OutputFormat = Literal["json", "csv", "text"]
SpanMode = Literal["R", "O"]


class CliConfig(BaseModel):
    subcommand: str
    ring: RingSpec | None = None
    lattice: str | None = None
    output: Path | None = None
    format: OutputFormat = "text"
    workers: int | None = Field(None, ge=1)
    budget: int = Field(..., ge=1)
    checks: list[str] = []
    span: SpanMode = "R"
    generic: bool = False
    filters: list[str] = []
    grid_file: Path | None = None
    out_dir: Path | None = None
