import argparse
import logging
from typing import Any

from app import settings
from app.adapters.coefficient_dumps import write_coefficients
from app.adapters.image_files import load_image
from app.cli.common import EXIT_OK
from app.cli.common import add_subcommand
from app.cli.common import level_list
from app.kernels.contourlet import check_level_spec
from app.kernels.contourlet import ct_analyze


def add_parser(subparsers: "argparse._SubParsersAction[Any]") -> None:
    parser = add_subcommand(
        subparsers,
        "dump-coeffs",
        help="write the contourlet coefficients of an image as a CTC1 dump",
    )
    parser.add_argument("--input", required=True)
    parser.add_argument("--levels", type=level_list, default=list(settings.DEFAULT_LEVELS))
    parser.add_argument("--output", required=True)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    check_level_spec(args.levels)
    coeffs = ct_analyze(load_image(args.input), args.levels)
    write_coefficients(coeffs, args.output)
    logging.info(
        "Wrote contourlet coefficients",
        extra={"output": args.output, "scales": len(coeffs.scales)},
    )
    return EXIT_OK
