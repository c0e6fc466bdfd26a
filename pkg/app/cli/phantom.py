import argparse
from typing import Any

from app.adapters.image_files import save_image
from app.cli.common import EXIT_OK
from app.cli.common import add_subcommand
from app.cli.common import positive_int
from app.cli.common import seed
from app.usecases.noise import NoiseSpec
from app.usecases.phantoms import make_phantom


def add_parser(subparsers: "argparse._SubParsersAction[Any]") -> None:
    parser = add_subcommand(
        subparsers,
        "phantom",
        help="write the synthetic disk + texture test scene and a noisy copy",
    )
    parser.add_argument("--size", type=positive_int, default=128)
    parser.add_argument("--sigma", type=float, default=20.0)
    parser.add_argument("--seed", type=seed, default=7)
    parser.add_argument("--out-prefix", required=True)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    spec = NoiseSpec(sigma=args.sigma, seed=args.seed)
    clean, noisy = make_phantom(args.size, spec.sigma, spec.seed)
    save_image(clean, f"{args.out_prefix}_clean.pgm")
    save_image(noisy, f"{args.out_prefix}_noisy.pgm")
    return EXIT_OK
