from dataclasses import dataclass
from functools import partial

import numpy as np

from app import settings
from app.errors import DimensionError
from app.grids import ImageGrid
from app.job_scheduling import map_jobs
from app.kernels.filters import ladder_filter
from app.kernels.polyphase import Array
from app.kernels.polyphase import Extension
from app.kernels.polyphase import QuincunxType
from app.kernels.polyphase import backsample
from app.kernels.polyphase import parallelogram_merge
from app.kernels.polyphase import parallelogram_split
from app.kernels.polyphase import quincunx_merge
from app.kernels.polyphase import quincunx_split
from app.kernels.polyphase import separable_filter
from app.kernels.polyphase import separable_power
from app.kernels.polyphase import spectral_filter
from app.kernels.polyphase import undo_backsample

MAX_DFB_LEVELS = 5


@dataclass
class DirectionalSubbands:
    levels: int
    bands: list[ImageGrid]

    @property
    def total_samples(self) -> int:
        return sum(band.size for band in self.bands)


@dataclass(frozen=True)
class TwoChannelStage:
    """\
    One node of the tree: a polyphase split followed by a two-step ladder
    network. With Q the power response of the ladder filter, the predict
    channel d = p0 - F p1 is scaled by (1 + Q)^(-1/2) and the update channel
    s = p1 + F' d / 2 by (Q / 4 + (1 - Q / 2)^2)^(-1/2), which normalizes
    every row of the polyphase matrix. Where Q = 1 these are the usual
    1/sqrt(2) and sqrt(2) ladder scalings.
    """

    polyphase: QuincunxType | int
    extension: Extension = Extension.PERIODIC

    def _split(self, x: Array) -> tuple[Array, Array]:
        if isinstance(self.polyphase, QuincunxType):
            return quincunx_split(x, self.polyphase)
        return parallelogram_split(x, self.polyphase)

    def _merge(self, p0: Array, p1: Array) -> Array:
        if isinstance(self.polyphase, QuincunxType):
            return quincunx_merge(p0, p1, self.polyphase)
        return parallelogram_merge(p0, p1, self.polyphase)

    def _channel_norms(self, shape: tuple[int, ...], taps: Array) -> tuple[Array, Array]:
        power = separable_power(shape, taps, self.extension)
        return np.sqrt(1.0 + power), np.sqrt(power / 4 + (1.0 - power / 2) ** 2)

    def analyze(self, x: Array, taps: Array) -> tuple[Array, Array]:
        p0, p1 = self._split(x)
        predict_norm, update_norm = self._channel_norms(p0.shape, taps)

        d = p0 - separable_filter(p1, taps, 1, self.extension)
        s = p1 + 0.5 * separable_filter(d, taps, 0, self.extension)
        y0 = spectral_filter(d, 1.0 / predict_norm, self.extension)
        y1 = -spectral_filter(s, 1.0 / update_norm, self.extension)
        return y0, y1

    def synthesize(self, y0: Array, y1: Array, taps: Array) -> Array:
        predict_norm, update_norm = self._channel_norms(y0.shape, taps)

        d = spectral_filter(y0, predict_norm, self.extension)
        s = -spectral_filter(y1, update_norm, self.extension)
        p1 = s - 0.5 * separable_filter(d, taps, 0, self.extension)
        p0 = d + separable_filter(p1, taps, 1, self.extension)
        return self._merge(p0, p1)


FIRST_STAGE = TwoChannelStage(
    QuincunxType.ROWS_Q1,
    Extension.QUINCUNX_PERIODIC_COLUMNS,
)
SECOND_STAGE = TwoChannelStage(QuincunxType.COLUMNS_Q2)


def _stage_for(k: int, level: int) -> TwoChannelStage:
    # the first half of the channels shears along rows, the second along columns
    if k < 2 ** (level - 2):
        return TwoChannelStage(k % 2)
    return TwoChannelStage(k % 2 + 2)


def _modulated_taps(filter_id: str) -> Array:
    taps = ladder_filter(filter_id).copy()
    taps[::2] = -taps[::2]
    return taps


def check_dfb_shape(shape: tuple[int, ...], levels: int) -> None:
    if not 0 <= levels <= MAX_DFB_LEVELS:
        raise DimensionError(
            f"unsupported directional level {levels}, expected 0..{MAX_DFB_LEVELS}",
        )

    block = 2 ** max(levels, 2)
    if len(shape) != 2 or shape[0] != shape[1] or shape[0] % block:
        raise DimensionError(
            f"directional filter bank with {levels} levels needs a square image "
            f"with a side divisible by {block}, got {shape}",
        )


def expected_band_shapes(side: int, levels: int) -> list[tuple[int, int]]:
    if levels == 0:
        return [(side, side)]
    if levels == 1:
        return [(side // 2, side)] * 2
    if levels == 2:
        return [(side // 2, side // 2)] * 4

    narrow = side // 2 ** (levels - 1)
    half = 2 ** (levels - 1)
    return [(narrow, side // 2)] * half + [(side // 2, narrow)] * half


def _analyze_job(job: tuple[Array, TwoChannelStage], taps: Array) -> tuple[Array, Array]:
    band, stage = job
    return stage.analyze(band, taps)


def _synthesize_job(job: tuple[Array, Array, TwoChannelStage], taps: Array) -> Array:
    y0, y1, stage = job
    return stage.synthesize(y0, y1, taps)


def _flip_second_half(bands: list[Array]) -> list[Array]:
    half = len(bands) // 2
    return bands[: len(bands) - half] + bands[len(bands) - half :][::-1]


def dfb_analyze(
    img: ImageGrid,
    levels: int,
    filter_id: str = settings.DEFAULT_DFB_FILTER,
) -> DirectionalSubbands:
    """\
    Split a square image into 2**levels critically sampled directional
    subbands with the tree-structured ladder filter bank.

    The first level uses the row-suppressing quincunx bank with
    quincunx-periodic extension, the second the column-suppressing quincunx
    bank, and deeper levels the four parallelogram banks. The leaves are
    backsampled to diagonal sampling and the second half is stored in
    reverse order.
    """
    check_dfb_shape(img.shape, levels)
    if levels == 0:
        return DirectionalSubbands(levels=0, bands=[img.copy()])

    taps = _modulated_taps(filter_id)
    analyze = partial(_analyze_job, taps=taps)

    x0, x1 = FIRST_STAGE.analyze(img, taps)
    if levels == 1:
        bands = [x0, x1]
    else:
        bands = []
        for y0, y1 in map_jobs(analyze, [(x0, SECOND_STAGE), (x1, SECOND_STAGE)]):
            bands.extend([y1, y0])

        for level in range(3, levels + 1):
            jobs = [(band, _stage_for(k, level)) for k, band in enumerate(bands)]
            bands = []
            for y0, y1 in map_jobs(analyze, jobs):
                bands.extend([y1, y0])

    return DirectionalSubbands(
        levels=levels,
        bands=_flip_second_half(backsample(bands)),
    )


def dfb_synthesize(
    subbands: DirectionalSubbands,
    out_shape: tuple[int, int],
    filter_id: str = settings.DEFAULT_DFB_FILTER,
) -> ImageGrid:
    levels = subbands.levels
    check_dfb_shape(out_shape, levels)

    shapes = [band.shape for band in subbands.bands]
    if shapes != expected_band_shapes(out_shape[0], levels):
        raise DimensionError(
            f"subband shapes {shapes} do not match {levels} levels of {out_shape}",
        )

    if levels == 0:
        return np.array(subbands.bands[0], dtype=np.float64)

    taps = _modulated_taps(filter_id)
    synthesize = partial(_synthesize_job, taps=taps)
    bands = undo_backsample(_flip_second_half(list(subbands.bands)))

    if levels == 1:
        return FIRST_STAGE.synthesize(bands[0], bands[1], taps)

    for level in range(levels, 2, -1):
        jobs = [
            (bands[2 * k + 1], bands[2 * k], _stage_for(k, level))
            for k in range(2 ** (level - 1))
        ]
        bands = map_jobs(synthesize, jobs)

    x0, x1 = map_jobs(
        synthesize,
        [
            (bands[1], bands[0], SECOND_STAGE),
            (bands[3], bands[2], SECOND_STAGE),
        ],
    )
    return FIRST_STAGE.synthesize(x0, x1, taps)
