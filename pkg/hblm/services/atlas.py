import csv
import json
import logging
from pathlib import Path
from typing import Iterable, Sequence

from slugify import slugify

from hblm.config import Settings, get_settings
from hblm.core.exceptions import BudgetExceededError
from hblm.schemas.enumeration import Counts
from hblm.schemas.report import AtlasRow, ReportMeta, VerificationReport
from hblm.schemas.ring import RingSpec
from hblm.services.enumeration import EnumerationService
from hblm.services.verification import VerificationService

logger = logging.getLogger(__name__)


DEFAULT_GRID: tuple[RingSpec, ...] = (
    *(RingSpec(p=p, e=e) for p in (2, 3, 5) for e in (1, 2, 3)),
    RingSpec(p=2, f=2, e=1),
    RingSpec(p=2, eps=True, e=2),
    RingSpec(p=3, eps=True, e=2),
    RingSpec(p=2, eps=True, e=3),
    RingSpec(p=2, n=2, e=2),
    RingSpec(p=3, n=2, e=2),
)

SUMMARY_COLUMNS = list(AtlasRow.model_fields)


def load_grid(path: Path) -> list[RingSpec]:
    """One ring per line in the ``p=3 e=2`` form; ``#`` starts a comment."""
    specs = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            specs.append(RingSpec.from_text(line))
    return specs


class AtlasService:
    def __init__(self, settings: Settings | None = None, verification: VerificationService | None = None):
        self.settings = settings or get_settings()
        self.verification = verification or VerificationService(self.settings)

    def ring_reports(self, spec: RingSpec, names: Sequence[str]) -> tuple[list[VerificationReport], AtlasRow | None]:
        """Reports and summary row for one ring; an over-budget ring is skipped whole."""
        try:
            reports = self.verification.run_suite([spec], names)
            summary = EnumerationService.summarize(spec, self.verification.records(spec))
        except BudgetExceededError as exc:
            logger.warning("atlas skips %s: %s", spec.to_text(), exc.detail)
            meta = ReportMeta(wall_ms=0, version=self.settings.VERSION)
            skipped = [
                VerificationReport(
                    check=name, ring=spec.summary(), status="skipped", counts=Counts(), witnesses=[exc.detail], meta=meta
                )
                for name in names
            ]
            return skipped, None
        row = AtlasRow(
            **spec.summary().model_dump(),
            **summary.counts.model_dump(include={"N", "DP", "K", "R"}),
            dp_eq_k=int(summary.dp_equals_k),
        )
        return reports, row

    def run(self, specs: Iterable[RingSpec], names: Sequence[str] | None, out_dir: Path) -> list[VerificationReport]:
        names = [self.verification.resolve(n) for n in names or self.verification.check_names]
        out_dir.mkdir(parents=True, exist_ok=True)
        everything: list[VerificationReport] = []
        rows: list[AtlasRow] = []
        for spec in specs:
            reports, row = self.ring_reports(spec, names)
            path = out_dir / f"{slugify(spec.to_text())}.json"
            path.write_text(json.dumps([r.model_dump() for r in reports], indent=2) + "\n")
            logger.info("wrote %s", path)
            everything.extend(reports)
            if row is not None:
                rows.append(row)
        with (out_dir / "summary.csv").open("w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=SUMMARY_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow(row.model_dump())
        return everything
