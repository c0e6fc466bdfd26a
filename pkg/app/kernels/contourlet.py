import math
from collections.abc import Callable
from collections.abc import Iterator
from collections.abc import Sequence
from dataclasses import dataclass
from functools import partial

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel
from pydantic import Field

from app import settings
from app.errors import DimensionError
from app.grids import ImageGrid
from app.job_scheduling import map_jobs
from app.kernels.directional_filter_bank import DirectionalSubbands
from app.kernels.directional_filter_bank import MAX_DFB_LEVELS
from app.kernels.directional_filter_bank import dfb_analyze
from app.kernels.directional_filter_bank import dfb_synthesize
from app.kernels.laplacian_pyramid import PyramidLevels
from app.kernels.laplacian_pyramid import lp_analyze
from app.kernels.laplacian_pyramid import lp_synthesize

DIMENSION = 2

BandFn = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


@dataclass
class ContourletCoeffs:
    lowpass: ImageGrid
    # finest scale first; scales[i] has level_spec[-1 - i] directional levels
    scales: list[DirectionalSubbands]
    # directional levels per scale, coarsest first
    level_spec: list[int]
    # (height, width) of the analyzed image
    source_shape: tuple[int, int]

    def directional_bands(self) -> Iterator[npt.NDArray[np.float64]]:
        for scale in self.scales:
            yield from scale.bands

    def map_directional(self, fn: BandFn) -> "ContourletCoeffs":
        """New coefficients with `fn` applied to every directional band."""
        scales = [
            DirectionalSubbands(levels=scale.levels, bands=map_jobs(fn, scale.bands))
            for scale in self.scales
        ]
        return ContourletCoeffs(
            lowpass=self.lowpass.copy(),
            scales=scales,
            level_spec=list(self.level_spec),
            source_shape=self.source_shape,
        )

    def max_directional_magnitude(self) -> float:
        return max(
            (float(np.max(np.abs(band))) for band in self.directional_bands() if band.size),
            default=0.0,
        )

    def energy(self) -> float:
        total = float(np.sum(np.square(self.lowpass)))
        return total + sum(float(np.sum(np.square(b))) for b in self.directional_bands())


class CoNormSpec(BaseModel):
    s: float
    # exponents may be math.inf, evaluated as suprema
    p: float = Field(gt=0.0)
    q: float = Field(gt=0.0)
    homogeneous: bool = True


def check_level_spec(level_spec: Sequence[int]) -> None:
    if not level_spec:
        raise DimensionError("level spec must name at least one scale")
    for levels in level_spec:
        if not 0 <= levels <= MAX_DFB_LEVELS:
            raise DimensionError(
                f"unsupported directional level {levels}, expected 0..{MAX_DFB_LEVELS}",
            )


def required_block(level_spec: Sequence[int]) -> int:
    """Smallest side length unit accepted by `ct_analyze` for this level spec."""
    check_level_spec(level_spec)
    block = 2 ** len(level_spec)
    for i, levels in enumerate(reversed(level_spec)):
        block = max(block, 2**i * 2 ** max(levels, 2))
    return block


def check_contourlet_shape(shape: tuple[int, ...], level_spec: Sequence[int]) -> None:
    block = required_block(level_spec)
    if len(shape) != 2 or shape[0] != shape[1] or shape[0] % block:
        raise DimensionError(
            f"contourlet levels {list(level_spec)} need a square image with a side "
            f"divisible by {block}, got {shape}",
        )


def _analyze_scale(
    job: tuple[ImageGrid, int],
    dfb_filter: str,
) -> DirectionalSubbands:
    band, levels = job
    return dfb_analyze(band, levels, dfb_filter)


def _synthesize_scale(scale: DirectionalSubbands, dfb_filter: str) -> ImageGrid:
    # critically sampled, so the bands hold exactly side * side samples
    side = math.isqrt(scale.total_samples)
    return dfb_synthesize(scale, (side, side), dfb_filter)


def ct_analyze(
    img: ImageGrid,
    level_spec: Sequence[int],
    lp_filter: str = settings.DEFAULT_LP_FILTER,
    dfb_filter: str = settings.DEFAULT_DFB_FILTER,
) -> ContourletCoeffs:
    check_contourlet_shape(img.shape, level_spec)
    pyramid = lp_analyze(img, len(level_spec), lp_filter)

    scales = map_jobs(
        partial(_analyze_scale, dfb_filter=dfb_filter),
        list(zip(pyramid.bandpass, reversed(level_spec))),
    )
    return ContourletCoeffs(
        lowpass=pyramid.lowpass,
        scales=scales,
        level_spec=list(level_spec),
        source_shape=(img.shape[0], img.shape[1]),
    )


def ct_synthesize(
    coeffs: ContourletCoeffs,
    lp_filter: str = settings.DEFAULT_LP_FILTER,
    dfb_filter: str = settings.DEFAULT_DFB_FILTER,
) -> ImageGrid:
    if len(coeffs.scales) != len(coeffs.level_spec):
        raise DimensionError(
            f"{len(coeffs.scales)} scales for level spec {coeffs.level_spec}",
        )
    for scale, levels in zip(coeffs.scales, reversed(coeffs.level_spec)):
        if scale.levels != levels or len(scale.bands) != 2**levels:
            raise DimensionError(
                f"scale with {len(scale.bands)} bands does not match {levels} levels",
            )

    bandpass = map_jobs(partial(_synthesize_scale, dfb_filter=dfb_filter), coeffs.scales)
    img = lp_synthesize(
        PyramidLevels(lowpass=coeffs.lowpass, bandpass=bandpass, filter_id=lp_filter),
    )
    if img.shape != coeffs.source_shape:
        raise DimensionError(
            f"synthesized shape {img.shape} differs from source {coeffs.source_shape}",
        )
    return img


def soft_threshold_scalar(c: float, t: float) -> float:
    if t < 0:
        raise ValueError(f"threshold must be non-negative, got {t}")
    return math.copysign(max(abs(c) - t, 0.0), c)


def soft_threshold(
    coefficients: npt.NDArray[np.float64],
    t: float,
) -> npt.NDArray[np.float64]:
    if t < 0:
        raise ValueError(f"threshold must be non-negative, got {t}")
    return np.sign(coefficients) * np.maximum(np.abs(coefficients) - t, 0.0)


def clamp_coefficients(coeffs: ContourletCoeffs, t: float) -> ContourletCoeffs:
    """\
    The part of the directional coefficients removed by soft thresholding,
    c - soft(c, t) = clamp(c, -t, t), with a zero lowpass band.
    """
    if t < 0:
        raise ValueError(f"threshold must be non-negative, got {t}")
    clamped = coeffs.map_directional(lambda band: np.clip(band, -t, t))
    clamped.lowpass = np.zeros_like(coeffs.lowpass)
    return clamped


def cst(
    img: ImageGrid,
    threshold: float,
    level_spec: Sequence[int],
    lp_filter: str = settings.DEFAULT_LP_FILTER,
    dfb_filter: str = settings.DEFAULT_DFB_FILTER,
) -> tuple[ImageGrid, ContourletCoeffs]:
    """\
    Contourlet soft thresholding: every directional coefficient is shrunk
    by `threshold`, the lowpass band is kept as is.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")

    coeffs = ct_analyze(img, level_spec, lp_filter, dfb_filter)
    kept = coeffs.map_directional(partial(soft_threshold, t=threshold))
    return ct_synthesize(kept, lp_filter, dfb_filter), kept


def _lp_norm(values: npt.NDArray[np.float64], p: float) -> float:
    magnitudes = np.abs(values).ravel()
    if magnitudes.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(magnitudes))
    return float(np.sum(magnitudes**p) ** (1.0 / p))


def co_norm(
    coeffs: ContourletCoeffs,
    spec: CoNormSpec,
    finest_scale: int = -1,
) -> float:
    """\
    Contourlet smoothness norm of the coefficients.

    scales[i] sits at scale j = finest_scale - i and contributes
    2^{j(d/2 - 1/p + s)} * 2^{j/2} * ||beta_j||_p, the contributions being
    combined with an l^q norm over j. The inhomogeneous norm also adds
    ||lowpass||_p.
    """
    if not coeffs.scales:
        raise DimensionError("cannot evaluate a norm without any scale")

    inverse_p = 0.0 if math.isinf(spec.p) else 1.0 / spec.p
    terms = []
    for i, scale in enumerate(coeffs.scales):
        j = finest_scale - i
        flat = np.concatenate([band.ravel() for band in scale.bands])
        weight = 2.0 ** (j * (DIMENSION / 2 - inverse_p + spec.s)) * 2.0 ** (j / 2)
        terms.append(weight * _lp_norm(flat, spec.p))

    norm = _lp_norm(np.asarray(terms, dtype=np.float64), spec.q)
    if not spec.homogeneous:
        norm += _lp_norm(coeffs.lowpass, spec.p)
    return norm
