import argparse
import logging
import sys
from collections.abc import Iterator
from collections.abc import Sequence
from contextlib import contextmanager
from typing import NoReturn

from app import logger
from app.cli import add_noise
from app.cli import check_transform
from app.cli import decompose
from app.cli import dump_coefficients
from app.cli import phantom
from app.cli import psnr
from app.cli.common import EXIT_IO_ERROR
from app.cli.common import EXIT_NUMERICAL_ERROR
from app.cli.common import EXIT_USAGE
from app.errors import DimensionError
from app.errors import ImageFormatError
from app.errors import NumericalError
from app.job_scheduling import worker_pool

SUBCOMMANDS = (
    decompose,
    add_noise,
    check_transform,
    psnr,
    phantom,
    dump_coefficients,
)


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; usage errors map to 1 here
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="decompose-image",
        description="Structures + textures + noise image decomposition.",
    )
    subparsers = parser.add_subparsers(
        dest="command",
        required=True,
        parser_class=ArgumentParser,
    )
    for module in SUBCOMMANDS:
        module.add_parser(subparsers)
    return parser


@contextmanager
def lifespan(log_level: str | None, threads: int) -> Iterator[None]:
    logger.configure_logging(log_level)
    with worker_pool(threads):
        yield


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return exc.code if isinstance(exc.code, int) else 0

    with lifespan(args.log_level, args.threads):
        try:
            exit_code: int = args.handler(args)
            return exit_code
        except ImageFormatError as exc:
            logging.exception("Unreadable input", extra={"command": args.command})
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
        except NumericalError as exc:
            logging.exception("Numerical failure", extra={"command": args.command})
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL_ERROR
        except (DimensionError, ValueError) as exc:
            # pydantic's ValidationError is a ValueError
            logging.exception("Invalid arguments", extra={"command": args.command})
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except OSError as exc:
            logging.exception("I/O failure", extra={"command": args.command})
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO_ERROR
