from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.ndimage import correlate1d

from app import settings
from app.errors import DimensionError
from app.grids import ImageGrid
from app.kernels.filters import pyramid_filters


@dataclass
class PyramidLevels:
    lowpass: ImageGrid
    # finest scale first
    bandpass: list[ImageGrid]
    filter_id: str

    @property
    def depth(self) -> int:
        return len(self.bandpass)


def _filter2(x: ImageGrid, taps: npt.NDArray[np.float64]) -> ImageGrid:
    # taps are odd and symmetric, so correlation is centered convolution
    filtered = correlate1d(x, taps, axis=0, mode="wrap")
    return correlate1d(filtered, taps, axis=1, mode="wrap")


def _upsample(c: ImageGrid) -> ImageGrid:
    up = np.zeros((2 * c.shape[0], 2 * c.shape[1]), dtype=np.float64)
    up[::2, ::2] = c
    return up


def check_pyramid_shape(shape: tuple[int, ...], depth: int) -> None:
    if depth < 1:
        raise DimensionError(f"pyramid depth must be at least 1, got {depth}")

    block = 2**depth
    if len(shape) != 2 or shape[0] % block or shape[1] % block:
        raise DimensionError(
            f"image of shape {shape} is not divisible by 2^{depth} on both axes",
        )


def lp_analyze(
    img: ImageGrid,
    depth: int,
    filter_id: str = settings.DEFAULT_LP_FILTER,
) -> PyramidLevels:
    """\
    Laplacian pyramid with periodic extension.

    Each level keeps c = (h * x) downsampled by 2 and the prediction error
    d = x - g * (c upsampled), where h and g are the analysis and synthesis
    lowpass filters.
    """
    check_pyramid_shape(img.shape, depth)
    filters = pyramid_filters(filter_id)

    bandpass: list[ImageGrid] = []
    current = img
    for _ in range(depth):
        coarse = _filter2(current, filters.analysis)[::2, ::2]
        bandpass.append(current - _filter2(_upsample(coarse), filters.synthesis))
        current = coarse

    return PyramidLevels(lowpass=current, bandpass=bandpass, filter_id=filter_id)


def lp_synthesize(levels: PyramidLevels) -> ImageGrid:
    """\
    Dual-frame reconstruction: each level is rebuilt as
    g * ((c - (h * d) downsampled) upsampled) + d.
    """
    if not levels.bandpass:
        raise DimensionError("pyramid has no bandpass levels")

    expected = levels.lowpass.shape
    for band in reversed(levels.bandpass):
        expected = (2 * expected[0], 2 * expected[1])
        if band.shape != expected:
            raise DimensionError(
                f"bandpass level of shape {band.shape} does not match {expected}",
            )

    filters = pyramid_filters(levels.filter_id)
    current = levels.lowpass
    for band in reversed(levels.bandpass):
        projected = _filter2(band, filters.analysis)[::2, ::2]
        current = _filter2(_upsample(current - projected), filters.synthesis) + band

    return current
