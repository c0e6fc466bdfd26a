import argparse
import errno
import os
from pathlib import Path
from typing import Any

from app import settings

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO_ERROR = 2
EXIT_NUMERICAL_ERROR = 3

# signed components are shifted into the displayable range when saved
SIGNED_COMPONENT_OFFSET = 128.0

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def level_list(value: str) -> list[int]:
    try:
        levels = settings.read_int_list(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid level list: {value!r}")
    if not levels:
        raise argparse.ArgumentTypeError("level list must not be empty")
    return levels


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
    return number


def seed(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: {value!r}")
    if not 0 <= number < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return number


def common_options() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--threads",
        type=positive_int,
        default=settings.DECOMP_THREADS,
        help="kernel worker threads (default: $DECOMP_THREADS or 1)",
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None)
    return parser


def add_subcommand(
    subparsers: "argparse._SubParsersAction[Any]",
    name: str,
    help: str,
) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(
        name,
        help=help,
        parents=[common_options()],
    )
    return parser


def check_writable(path: str | Path) -> None:
    """Fail before any work is done when `path` cannot be written."""
    target = Path(path)
    if target.is_dir():
        raise IsADirectoryError(errno.EISDIR, "destination is a directory", str(target))

    parent = target.parent
    if not parent.is_dir():
        raise FileNotFoundError(errno.ENOENT, "destination directory does not exist", str(parent))
    if not os.access(parent, os.W_OK) or (target.exists() and not os.access(target, os.W_OK)):
        raise PermissionError(errno.EACCES, "destination is not writable", str(target))
