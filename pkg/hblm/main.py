import argparse
import logging
import sys
from typing import Sequence

from pydantic import ValidationError

from hblm import __version__
from hblm.cli import (
    cmd_atlas,
    cmd_charpol,
    cmd_check_lattice,
    cmd_classify,
    cmd_enumerate,
    cmd_ring_info,
    cmd_verify,
    resolve_cli_config,
)
from hblm.config import get_settings
from hblm.core.exceptions import HblmError


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)

    general = common.add_argument_group("general")
    general.add_argument("--config", help="file of key=value settings, overridden by flags")
    general.add_argument("--format", choices=["text", "json", "csv"])
    general.add_argument("-o", "--output", help="write the result here instead of stdout")
    general.add_argument("--workers", type=int, help="enumeration processes (default: all cores)")
    general.add_argument("--budget", type=int, help="maximum naive chart-candidate count")
    general.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    ring = common.add_argument_group("ring")
    ring.add_argument("--ring", help='whole ring as text, e.g. "p=3 e=2 base=feps"')
    ring.add_argument("--p", type=int)
    ring.add_argument("--n", type=int)
    ring.add_argument("--f", type=int)
    ring.add_argument("--e", type=int)
    ring.add_argument("--u", type=int)
    ring.add_argument("--m", help="minimal polynomial of w, constant term first: 1,1,1")
    ring.add_argument("--base", choices=["field", "feps", "zmod"])

    lattice = common.add_argument_group("lattice")
    lattice.add_argument("--lattice", help='generators separated by ";", e.g. "pi*f1+eps*f1 ; pi*f2"')
    lattice.add_argument("--span", choices=["R", "O"], help="R: generators as given; O: close them under pi and w")
    lattice.add_argument("--generic", action="store_true", default=None)

    runs = common.add_argument_group("verification")
    runs.add_argument("--check", action="append", help="check id; repeatable")
    runs.add_argument("--suite", choices=["all"])
    runs.add_argument("--filter", action="append", choices=["DP", "K", "R"])
    runs.add_argument("--grid-file", help="one ring per line, same syntax as --ring")
    runs.add_argument("--out-dir", help="atlas output directory")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog=get_settings().APP_NAME,
        description="Exact computations on the local models N^DP and N^K over finite rings.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    commands = [
        ("ring-info", cmd_ring_info, "structure of R and O_R"),
        ("enumerate", cmd_enumerate, "list the points of N(R)"),
        ("classify", cmd_classify, "count N, N^DP, N^K and N^R"),
        ("charpol", cmd_charpol, "characteristic polynomial of pi on a lattice"),
        ("check-lattice", cmd_check_lattice, "evaluate the point conditions on a lattice"),
        ("verify", cmd_verify, "run verification checks"),
        ("atlas", cmd_atlas, "run the checks over a ring grid and write reports"),
    ]
    for name, handler, help_text in commands:
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.set_defaults(func=handler)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    settings = get_settings()
    logging.basicConfig(
        level=args.log_level or settings.LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = resolve_cli_config(args, settings)
        return args.func(config)
    except HblmError as exc:
        print(f"{parser.prog}: error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
