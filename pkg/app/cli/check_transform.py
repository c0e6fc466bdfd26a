import argparse
from typing import Any

from app import settings
from app.cli.common import EXIT_NUMERICAL_ERROR
from app.cli.common import EXIT_OK
from app.cli.common import add_subcommand
from app.cli.common import level_list
from app.cli.common import positive_int
from app.cli.common import seed
from app.kernels.filters import LADDER_PROTOTYPES
from app.kernels.filters import PYRAMID_FILTERS
from app.usecases.transform_checks import check_transform

MAX_PR_ERROR = 1e-9


def add_parser(subparsers: "argparse._SubParsersAction[Any]") -> None:
    parser = add_subcommand(
        subparsers,
        "check-transform",
        help="measure contourlet reconstruction error and energy ratios",
    )
    parser.add_argument("--size", type=positive_int, default=128)
    parser.add_argument("--levels", type=level_list, default=list(settings.DEFAULT_LEVELS))
    parser.add_argument("--seed", type=seed, default=0)
    parser.add_argument(
        "--filter",
        dest="lp_filter",
        choices=sorted(PYRAMID_FILTERS),
        default=settings.DEFAULT_LP_FILTER,
    )
    parser.add_argument(
        "--dfb-filter",
        choices=sorted(LADDER_PROTOTYPES),
        default=settings.DEFAULT_DFB_FILTER,
    )
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    result = check_transform(
        args.size,
        args.levels,
        args.seed,
        lp_filter=args.lp_filter,
        dfb_filter=args.dfb_filter,
    )
    print(f"pr_error {result.pr_error:.3e}")
    print(f"lp_energy_ratio {result.lp_energy_ratio:.6f}")
    print(f"dfb_energy_ratio {result.dfb_energy_ratio:.6f}")
    print(f"parseval_ratio {result.contourlet_energy_ratio:.6f}")

    if result.pr_error > MAX_PR_ERROR:
        return EXIT_NUMERICAL_ERROR
    return EXIT_OK
