"""One handler per subcommand; each renders text, json or csv and returns the exit code."""
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from hblm.cli.deps import get_atlas_service, get_enumeration_service, get_verification_service
from hblm.cli.literals import parse_lattice
from hblm.config import get_settings
from hblm.core.conditions import (
    is_dp,
    is_isotropic,
    is_k,
    is_k_pi,
    is_r_point,
    lattice_generic_charpol,
    order_pi_charpol,
)
from hblm.core.exceptions import ConfigError, WildRamificationError
from hblm.core.forms import trace_form_gram
from hblm.core.lattices import Lattice, is_point, pi_action, residue_type
from hblm.core.linalg import charpol, determinant
from hblm.core.rings import RingCtx, build_ring
from hblm.schemas.cli import CliConfig
from hblm.schemas.enumeration import EnumConfig
from hblm.schemas.report import VerificationReport
from hblm.schemas.ring import RingSpec
from hblm.services.atlas import DEFAULT_GRID, load_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1


# === Rendering ===

def _csv(rows: Sequence[dict[str, Any]]) -> str:
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def _emit(config: CliConfig, data: Any, rows: Sequence[dict[str, Any]], text: str) -> None:
    if config.format == "json":
        out = json.dumps(data, indent=2) + "\n"
    elif config.format == "csv":
        out = _csv(rows)
    else:
        out = text if text.endswith("\n") else text + "\n"
    if config.output is None:
        sys.stdout.write(out)
        return
    config.output.parent.mkdir(parents=True, exist_ok=True)
    config.output.write_text(out)
    logger.info("wrote %s", config.output)


def _require_ring(config: CliConfig) -> RingSpec:
    if config.ring is None:
        raise ConfigError(f"{config.subcommand} needs a ring (--p ..., --ring or --config)")
    return config.ring


def _require_lattice(config: CliConfig, ctx: RingCtx) -> Lattice:
    if not config.lattice:
        raise ConfigError(f"{config.subcommand} needs --lattice")
    return parse_lattice(ctx, config.lattice, config.span)


def _enum_config(config: CliConfig, spec: RingSpec) -> EnumConfig:
    return EnumConfig(
        ring=spec,
        workers=config.workers,
        max_candidates=config.budget,
        filters=tuple(config.filters),
    )


def _text_block(pairs: Sequence[tuple[str, Any]]) -> str:
    width = max(len(key) for key, _ in pairs)
    return "\n".join(f"{key.ljust(width)}  {value}" for key, value in pairs)


# === Subcommands ===

def ring_info(ctx: RingCtx) -> dict[str, Any]:
    try:
        unit, exponent = ctx.different_generator()
        different = f"{unit} * pi^{exponent}"
        trace_det = ctx.base.label(determinant(trace_form_gram(ctx).gram))
    except WildRamificationError:
        different = None
        trace_det = None
    base = ctx.base
    return {
        "ring": ctx.spec.to_text(),
        "base": base.name,
        "R_size": base.size,
        "O_size": ctx.order_size(),
        "m_O_size": ctx.maximal_ideal_size(),
        "g": ctx.g,
        "chain_length": base.length,
        "residue_field": f"F_{ctx.p ** ctx.f}",
        "uniformizer": "-" if base.is_field else base.label(base.uniformizer),
        "min_poly": list(ctx.m) if ctx.m else None,
        "tame": ctx.is_tame,
        "inverse_different": different,
        "pi_charpol": str(order_pi_charpol(ctx)),
        "trace_det": trace_det,
    }


def cmd_ring_info(config: CliConfig) -> int:
    info = ring_info(build_ring(_require_ring(config)))
    text = _text_block([(k, "-" if v is None else v) for k, v in info.items()])
    rows = [{"key": k, "value": v} for k, v in info.items()]
    _emit(config, info, rows, text)
    return EXIT_OK


def cmd_enumerate(config: CliConfig) -> int:
    spec = _require_ring(config)
    points = get_enumeration_service().enum_n_points(_enum_config(config, spec))
    keys = [lat.key for lat in points]
    data = {
        "ring": spec.summary().model_dump(),
        "filters": config.filters,
        "count": len(keys),
        "points": keys,
    }
    text = "\n".join([f"# {spec.to_text()}: {len(keys)} points", *keys])
    _emit(config, data, [{"point": key} for key in keys], text)
    return EXIT_OK


def cmd_classify(config: CliConfig) -> int:
    spec = _require_ring(config)
    result = get_enumeration_service().classify(_enum_config(config, spec))
    counts = result.counts
    pairs = [
        ("ring", spec.to_text()),
        ("N", counts.N),
        ("DP", counts.DP),
        ("K", counts.K),
        ("R", counts.R),
        ("K_pi", counts.K_pi),
        ("types", ", ".join(f"({t.i},{t.j}): {t.count}" for t in result.types) or "-"),
        ("DP = K", "yes" if result.dp_equals_k else "no"),
    ]
    lines = [_text_block(pairs)]
    lines.extend(f"  DP/K witness {key}" for key in result.dp_k_witnesses)
    lines.extend(f"  K_pi/K mismatch {key}" for key in result.k_pi_mismatch)
    row = {**spec.summary().model_dump(), **counts.model_dump(), "dp_eq_k": int(result.dp_equals_k)}
    _emit(config, result.model_dump(), [row], "\n".join(lines))
    return EXIT_OK


def cmd_charpol(config: CliConfig) -> int:
    ctx = build_ring(_require_ring(config))
    lat = _require_lattice(config, ctx)
    if config.generic:
        poly = str(lattice_generic_charpol(lat))
    else:
        poly = str(charpol(pi_action(lat)))
    data = {"lattice": lat.key, "generic": config.generic, "charpol": poly}
    _emit(config, data, [data], poly)
    return EXIT_OK


def lattice_report(lat: Lattice) -> dict[str, Any]:
    point = is_point(lat)
    data: dict[str, Any] = {
        "lattice": lat.key,
        "rank": lat.rank,
        "point": point,
        "isotropic": is_isotropic(lat),
        "DP": None,
        "K": None,
        "K_pi": None,
        "R": None,
        "type": None,
        "charpol": None,
    }
    if point:
        data.update(
            DP=is_dp(lat),
            K=is_k(lat),
            K_pi=is_k_pi(lat),
            R=is_r_point(lat),
            type=str(residue_type(lat)),
            charpol=str(charpol(pi_action(lat))),
        )
    return data


def cmd_check_lattice(config: CliConfig) -> int:
    ctx = build_ring(_require_ring(config))
    data = lattice_report(_require_lattice(config, ctx))
    text = _text_block([(k, "-" if v is None else v) for k, v in data.items()])
    _emit(config, data, [data], text)
    return EXIT_OK


def _report_row(report: VerificationReport) -> dict[str, Any]:
    return {
        "check": report.check,
        **report.ring.model_dump(),
        "status": report.status,
        **report.counts.model_dump(),
        "witnesses": len(report.witnesses),
    }


def _report_text(reports: Sequence[VerificationReport]) -> str:
    lines = []
    for report in reports:
        ring = " ".join(f"{k}={v}" for k, v in report.ring.model_dump().items())
        c = report.counts
        lines.append(f"{report.status:<7} {report.check:<20} {ring}  N={c.N} DP={c.DP} K={c.K} R={c.R}")
        lines.extend(f"    {w}" for w in report.witnesses)
    failed = sum(r.status == "fail" for r in reports)
    lines.append(f"{len(reports)} checks, {failed} failed")
    return "\n".join(lines)


def _exit_for(reports: Sequence[VerificationReport]) -> int:
    return EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK


def cmd_verify(config: CliConfig) -> int:
    specs = [config.ring] if config.ring is not None else list(DEFAULT_GRID)
    service = get_verification_service(config)
    reports = service.run_suite(specs, config.checks or None)
    _emit(
        config,
        [r.model_dump() for r in reports],
        [_report_row(r) for r in reports],
        _report_text(reports),
    )
    return _exit_for(reports)


def cmd_atlas(config: CliConfig) -> int:
    if config.grid_file is not None:
        try:
            specs = load_grid(config.grid_file)
        except OSError as exc:
            raise ConfigError(f"cannot read grid file {config.grid_file}: {exc.strerror}")
        except ValueError as exc:
            raise ConfigError(f"{config.grid_file}: {exc}")
    elif config.ring is not None:
        specs = [config.ring]
    else:
        specs = list(DEFAULT_GRID)
    out_dir = config.out_dir or Path(get_settings().ATLAS_DIR)
    reports = get_atlas_service(config).run(specs, config.checks or None, out_dir)
    _emit(
        config,
        [r.model_dump() for r in reports],
        [_report_row(r) for r in reports],
        _report_text(reports) + f"\natlas written to {out_dir}",
    )
    return _exit_for(reports)
