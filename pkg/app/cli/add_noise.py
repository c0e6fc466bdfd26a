import argparse
from typing import Any

from app.adapters.image_files import load_image
from app.adapters.image_files import save_image
from app.cli.common import EXIT_OK
from app.cli.common import add_subcommand
from app.cli.common import seed
from app.usecases.noise import NoiseSpec
from app.usecases.noise import add_gaussian_noise


def add_parser(subparsers: "argparse._SubParsersAction[Any]") -> None:
    parser = add_subcommand(
        subparsers,
        "add-noise",
        help="add seeded gaussian noise to an image",
    )
    parser.add_argument("--input", required=True)
    parser.add_argument("--sigma", type=float, required=True)
    parser.add_argument("--seed", type=seed, required=True)
    parser.add_argument("--output", required=True)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    spec = NoiseSpec(sigma=args.sigma, seed=args.seed)
    img = load_image(args.input)
    save_image(add_gaussian_noise(img, spec), args.output)
    return EXIT_OK
