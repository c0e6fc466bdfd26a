import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from app import settings
from app.grids import ImageGrid
from app.grids import energy
from app.grids import max_abs_diff
from app.kernels.contourlet import check_contourlet_shape
from app.kernels.contourlet import ct_analyze
from app.kernels.contourlet import ct_synthesize
from app.kernels.directional_filter_bank import dfb_analyze
from app.kernels.laplacian_pyramid import lp_analyze


@dataclass
class TransformCheck:
    pr_error: float
    lp_energy_ratio: float
    dfb_energy_ratio: float
    contourlet_energy_ratio: float


def random_test_image(size: int, seed: int) -> ImageGrid:
    generator = np.random.Generator(np.random.Philox(seed))
    return generator.uniform(0.0, 255.0, size=(size, size))


def check_transform(
    size: int,
    level_spec: Sequence[int],
    seed: int,
    lp_filter: str = settings.DEFAULT_LP_FILTER,
    dfb_filter: str = settings.DEFAULT_DFB_FILTER,
) -> TransformCheck:
    """\
    Round-trip a seeded random image through the contourlet transform and
    measure how close each stage is to energy preserving.
    """
    check_contourlet_shape((size, size), level_spec)
    img = random_test_image(size, seed)
    img_energy = energy(img)

    pyramid = lp_analyze(img, len(level_spec), lp_filter)
    lp_energy = energy(pyramid.lowpass) + sum(energy(b) for b in pyramid.bandpass)

    finest = pyramid.bandpass[0]
    subbands = dfb_analyze(finest, level_spec[-1], dfb_filter)
    dfb_energy = sum(energy(band) for band in subbands.bands)

    coeffs = ct_analyze(img, level_spec, lp_filter, dfb_filter)
    reconstructed = ct_synthesize(coeffs, lp_filter, dfb_filter)

    result = TransformCheck(
        pr_error=max_abs_diff(img, reconstructed),
        lp_energy_ratio=lp_energy / img_energy,
        dfb_energy_ratio=dfb_energy / energy(finest),
        contourlet_energy_ratio=coeffs.energy() / img_energy,
    )
    logging.info(
        "Measured contourlet transform properties",
        extra={
            "size": size,
            "level_spec": list(level_spec),
            "seed": seed,
            "lp_filter": lp_filter,
            "dfb_filter": dfb_filter,
            "pr_error": result.pr_error,
            "lp_energy_ratio": result.lp_energy_ratio,
            "dfb_energy_ratio": result.dfb_energy_ratio,
            "contourlet_energy_ratio": result.contourlet_energy_ratio,
        },
    )
    return result
