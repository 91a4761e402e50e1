from hblm.cli.commands import (
    cmd_atlas,
    cmd_charpol,
    cmd_check_lattice,
    cmd_classify,
    cmd_enumerate,
    cmd_ring_info,
    cmd_verify,
)
from hblm.cli.deps import resolve_cli_config
from hblm.cli.literals import parse_lattice

__all__ = [
    "cmd_atlas",
    "cmd_charpol",
    "cmd_check_lattice",
    "cmd_classify",
    "cmd_enumerate",
    "cmd_ring_info",
    "cmd_verify",
    "resolve_cli_config",
    "parse_lattice",
]
