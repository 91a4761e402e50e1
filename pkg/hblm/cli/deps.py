from argparse import Namespace
from pathlib import Path

from pydantic import ValidationError

from hblm.config import Settings, get_settings
from hblm.core.exceptions import ConfigError
from hblm.schemas.cli import CliConfig
from hblm.schemas.ring import RingSpec, parse_key_values
from hblm.services.atlas import AtlasService
from hblm.services.enumeration import EnumerationService
from hblm.services.verification import VerificationService


RING_KEYS = ("p", "n", "f", "eps", "e", "u", "m", "base")
RUN_KEYS = ("workers", "budget", "format", "output", "check", "suite", "span")


def load_config_file(path: Path) -> dict[str, str]:
    """Read ``key=value`` tokens from a config file; ``#`` starts a comment."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}")
    values: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        try:
            pairs = parse_key_values(line)
        except ValueError as exc:
            raise ConfigError(f"{path}:{number}: {exc}")
        unknown = set(pairs) - set(RING_KEYS) - set(RUN_KEYS)
        if unknown:
            raise ConfigError(f"{path}:{number}: unknown key {sorted(unknown)[0]!r}")
        values.update(pairs)
    return values


def resolve_ring(args: Namespace, file_values: dict[str, str]) -> RingSpec | None:
    """Flags override ``--ring`` which overrides the config file."""
    merged = {k: v for k, v in file_values.items() if k in RING_KEYS}
    if args.ring:
        try:
            merged.update(parse_key_values(args.ring))
        except ValueError as exc:
            raise ConfigError(f"--ring: {exc}")
    for key in RING_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = str(int(value)) if isinstance(value, bool) else str(value)
    if not merged:
        return None
    if "p" not in merged:
        raise ConfigError("the ring needs p (use --p, --ring or a config file)")
    text = " ".join(f"{k}={v}" for k, v in merged.items())
    try:
        return RingSpec.from_text(text)
    except ValidationError as exc:
        raise ConfigError(f"invalid ring {text!r}: {exc.errors()[0]['msg']}")
    except ValueError as exc:
        raise ConfigError(f"invalid ring {text!r}: {exc}")


def _int_value(file_values: dict[str, str], key: str) -> int | None:
    if key not in file_values:
        return None
    try:
        return int(file_values[key])
    except ValueError:
        raise ConfigError(f"config value {key}={file_values[key]!r} is not an integer")


def _pick(*values):
    return next((v for v in values if v is not None), None)


def resolve_cli_config(args: Namespace, settings: Settings | None = None) -> CliConfig:
    settings = settings or get_settings()
    file_values = load_config_file(Path(args.config)) if args.config else {}

    checks = list(args.check or [])
    if not checks and "check" in file_values:
        checks = [c for c in file_values["check"].split(",") if c]
    suite = _pick(args.suite, file_values.get("suite"))
    if suite is not None and suite != "all":
        raise ConfigError(f"unknown suite {suite!r}; the only suite is 'all'")
    if suite == "all":
        checks = []

    output = _pick(args.output, file_values.get("output"))
    try:
        return CliConfig(
            subcommand=args.cmd,
            ring=resolve_ring(args, file_values),
            lattice=args.lattice,
            output=Path(output) if output else None,
            format=_pick(args.format, file_values.get("format"), settings.DEFAULT_FORMAT),
            workers=_pick(args.workers, _int_value(file_values, "workers"), settings.WORKERS),
            budget=_pick(args.budget, _int_value(file_values, "budget"), settings.MAX_CANDIDATES),
            checks=checks,
            span=_pick(args.span, file_values.get("span"), "R"),
            generic=bool(args.generic),
            filters=list(args.filter or []),
            grid_file=Path(args.grid_file) if args.grid_file else None,
            out_dir=Path(args.out_dir) if args.out_dir else None,
        )
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        raise ConfigError(f"invalid {field}: {error['msg']}")


def get_enumeration_service(settings: Settings | None = None) -> EnumerationService:
    return EnumerationService(settings or get_settings())


def get_verification_service(config: CliConfig, settings: Settings | None = None) -> VerificationService:
    return VerificationService(settings or get_settings(), workers=config.workers, budget=config.budget)


def get_atlas_service(config: CliConfig, settings: Settings | None = None) -> AtlasService:
    settings = settings or get_settings()
    return AtlasService(settings, get_verification_service(config, settings))
