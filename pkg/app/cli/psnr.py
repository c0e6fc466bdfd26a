import argparse
import math
from typing import Any

from app.adapters.image_files import load_image
from app.cli.common import EXIT_OK
from app.cli.common import add_subcommand
from app.usecases.metrics import psnr


def add_parser(subparsers: "argparse._SubParsersAction[Any]") -> None:
    parser = add_subcommand(subparsers, "psnr", help="print the PSNR of two images in dB")
    parser.add_argument("a")
    parser.add_argument("b")
    parser.set_defaults(handler=handle)


def format_db(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def handle(args: argparse.Namespace) -> int:
    value = psnr(load_image(args.a), load_image(args.b))
    print(format_db(value))
    return EXIT_OK
