import argparse
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel
from pydantic import Field

from app import settings
from app.adapters import trace_csv
from app.adapters.image_files import load_image
from app.adapters.image_files import save_image
from app.cli.common import EXIT_OK
from app.cli.common import SIGNED_COMPONENT_OFFSET
from app.cli.common import add_subcommand
from app.cli.common import check_writable
from app.cli.common import level_list
from app.cli.common import positive_int
from app.common_models import ImageFormat
from app.common_models import NoiseModel
from app.common_models import StopMetric
from app.grids import ImageGrid
from app.kernels.contourlet import required_block
from app.kernels.tv_projection import ChambolleOpts
from app.usecases.decomposition import DecompParams
from app.usecases.decomposition import decompose_uv
from app.usecases.decomposition import decompose_uvw


class DecomposeConfig(BaseModel):
    input: Path
    out_prefix: str = Field(min_length=1)
    params: DecompParams
    trace: Path | None = None
    offset: float = SIGNED_COMPONENT_OFFSET
    image_format: ImageFormat = ImageFormat.PGM
    two_component: bool = False


def add_parser(subparsers: "argparse._SubParsersAction[Any]") -> None:
    parser = add_subcommand(
        subparsers,
        "decompose",
        help="split an image into u (structures), v (textures) and w (noise)",
    )
    parser.add_argument("--input", required=True)
    parser.add_argument("--out-prefix", required=True)
    parser.add_argument("--lambda", dest="lam", type=float, default=settings.DEFAULT_LAMBDA)
    parser.add_argument("--mu", type=float, default=settings.DEFAULT_MU)
    parser.add_argument("--delta", type=float, default=settings.DEFAULT_DELTA)
    parser.add_argument("--eps", type=float, default=settings.DEFAULT_EPS)
    parser.add_argument("--max-iter", type=positive_int, default=settings.DEFAULT_N_STEP)
    parser.add_argument(
        "--levels",
        type=level_list,
        default=list(settings.DEFAULT_LEVELS),
        help="directional levels per scale, coarsest first (e.g. 3,3,4)",
    )
    parser.add_argument(
        "--noise-model",
        choices=[model.value for model in NoiseModel],
        default=NoiseModel.CONTOURLET.value,
    )
    parser.add_argument("--trace", default=None, help="write the iteration trace as CSV")
    parser.add_argument("--tau", type=float, default=settings.CHAMBOLLE_TAU)
    parser.add_argument(
        "--inner-max-iter",
        type=positive_int,
        default=settings.CHAMBOLLE_MAX_ITER,
    )
    parser.add_argument("--inner-tol", type=float, default=settings.CHAMBOLLE_TOL)
    parser.add_argument(
        "--stop-metric",
        choices=[metric.value for metric in StopMetric],
        default=StopMetric.MAX_ABS.value,
    )
    parser.add_argument("--offset", type=float, default=SIGNED_COMPONENT_OFFSET)
    parser.add_argument(
        "--format",
        dest="image_format",
        choices=[image_format.value for image_format in ImageFormat],
        default=ImageFormat.PGM.value,
    )
    parser.add_argument("--two-component", action="store_true")
    parser.set_defaults(handler=handle)


def config_from_args(args: argparse.Namespace) -> DecomposeConfig:
    params = DecompParams(
        lam=args.lam,
        mu=args.mu,
        delta=args.delta,
        eps=args.eps,
        n_step=args.max_iter,
        level_spec=args.levels,
        inner=ChambolleOpts(
            tau=args.tau,
            max_iter=args.inner_max_iter,
            tol=args.inner_tol,
        ),
        noise_model=NoiseModel(args.noise_model),
        stop_metric=StopMetric(args.stop_metric),
    )
    return DecomposeConfig(
        input=Path(args.input),
        out_prefix=args.out_prefix,
        params=params,
        trace=Path(args.trace) if args.trace else None,
        offset=args.offset,
        image_format=ImageFormat(args.image_format),
        two_component=args.two_component,
    )


def compatible_side(shape: tuple[int, ...], params: DecompParams) -> int:
    """Smallest square side, at least as large as the image, every kernel accepts."""
    if params.noise_model is NoiseModel.CONTOURLET:
        block = required_block(params.level_spec)
    else:
        block = 2 ** len(params.level_spec)
    longest = max(shape)
    return -(-longest // block) * block


def pad_to_side(img: ImageGrid, side: int) -> tuple[ImageGrid, tuple[slice, slice]]:
    """Mirror-pad `img` to a centered `side` x `side` square."""
    height, width = img.shape
    top = (side - height) // 2
    left = (side - width) // 2
    padded = np.pad(
        img,
        ((top, side - height - top), (left, side - width - left)),
        mode="symmetric",
    )
    return padded, (slice(top, top + height), slice(left, left + width))


def output_paths(config: DecomposeConfig) -> dict[str, str]:
    names = ["u", "v", "residual"] if config.two_component else ["u", "v", "w", "residual"]
    extension = config.image_format.value
    return {name: f"{config.out_prefix}_{name}.{extension}" for name in names}


def handle(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    f = load_image(config.input)

    destinations = output_paths(config)
    checked: list[str | Path] = list(destinations.values())
    if config.trace is not None:
        checked.append(config.trace)
    for path in checked:
        check_writable(path)

    side = compatible_side(f.shape, config.params)
    padded, crop = pad_to_side(f, side)
    if padded.shape != f.shape:
        logging.info(
            "Padded input to a compatible size",
            extra={"shape": list(f.shape), "padded_side": side},
        )

    params = config.params
    if config.two_component:
        uv = decompose_uv(
            padded,
            lam=params.lam,
            mu=params.mu,
            eps=params.eps,
            n_step=params.n_step,
            inner=params.inner,
            stop_metric=params.stop_metric,
        )
        components = {"u": uv.u, "v": uv.v, "residual": uv.residual}
        trace = uv.trace
    else:
        result = decompose_uvw(padded, params)
        components = {"u": result.u, "v": result.v, "w": result.w, "residual": result.residual}
        trace = result.trace

    for name, component in components.items():
        offset = 0.0 if name == "u" else config.offset
        save_image(component[crop], destinations[name], offset=offset)

    if config.trace is not None:
        trace_csv.write_trace(trace, config.trace)

    logging.info(
        "Wrote decomposition",
        extra={
            "out_prefix": config.out_prefix,
            "components": list(components),
            "iterations": len(trace),
        },
    )
    return EXIT_OK
