from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import pywt

from app import settings
from app.errors import DimensionError
from app.grids import ImageGrid
from app.job_scheduling import map_jobs
from app.kernels.contourlet import BandFn
from app.kernels.contourlet import soft_threshold

# horizontal, vertical, diagonal
DetailBands = tuple[ImageGrid, ImageGrid, ImageGrid]


@dataclass
class WaveletCoeffs:
    approximation: ImageGrid
    # finest level first
    details: list[DetailBands]
    wavelet: str

    @property
    def depth(self) -> int:
        return len(self.details)

    def detail_bands(self) -> Iterator[npt.NDArray[np.float64]]:
        for level in self.details:
            yield from level

    def max_directional_magnitude(self) -> float:
        return max(
            (float(np.max(np.abs(band))) for band in self.detail_bands() if band.size),
            default=0.0,
        )

    def energy(self) -> float:
        total = float(np.sum(np.square(self.approximation)))
        return total + sum(float(np.sum(np.square(b))) for b in self.detail_bands())


def orthogonal_wavelet(filter_id: str) -> pywt.Wavelet:
    try:
        wavelet = pywt.Wavelet(filter_id)
    except ValueError as exc:
        raise ValueError(f"unknown wavelet: {filter_id!r}") from exc

    if not wavelet.orthogonal:
        raise ValueError(f"wavelet {filter_id!r} is not orthogonal")
    return wavelet


def check_wavelet_shape(shape: tuple[int, ...], depth: int) -> None:
    if depth < 1:
        raise DimensionError(f"wavelet depth must be at least 1, got {depth}")

    block = 2**depth
    if len(shape) != 2 or shape[0] % block or shape[1] % block:
        raise DimensionError(
            f"image of shape {shape} is not divisible by 2^{depth} on both axes",
        )


def dwt_analyze(
    img: ImageGrid,
    depth: int,
    filter_id: str = settings.DEFAULT_WAVELET,
) -> WaveletCoeffs:
    check_wavelet_shape(img.shape, depth)
    wavelet = orthogonal_wavelet(filter_id)

    approximation, *details = pywt.wavedec2(
        img,
        wavelet,
        mode="periodization",
        level=depth,
    )
    return WaveletCoeffs(
        approximation=np.asarray(approximation, dtype=np.float64),
        details=[_as_detail_bands(level) for level in reversed(details)],
        wavelet=filter_id,
    )


def _as_detail_bands(level: tuple[npt.ArrayLike, ...]) -> DetailBands:
    horizontal, vertical, diagonal = level
    return (
        np.asarray(horizontal, dtype=np.float64),
        np.asarray(vertical, dtype=np.float64),
        np.asarray(diagonal, dtype=np.float64),
    )


def dwt_synthesize(coeffs: WaveletCoeffs) -> ImageGrid:
    expected = coeffs.approximation.shape
    for level in reversed(coeffs.details):
        if any(band.shape != expected for band in level):
            raise DimensionError(
                f"detail bands {[band.shape for band in level]} do not match {expected}",
            )
        expected = (2 * expected[0], 2 * expected[1])

    wavelet = orthogonal_wavelet(coeffs.wavelet)
    img = pywt.waverec2(
        [coeffs.approximation, *reversed(coeffs.details)],
        wavelet,
        mode="periodization",
    )
    return np.asarray(img, dtype=np.float64)


def _map_details(coeffs: WaveletCoeffs, fn: BandFn) -> WaveletCoeffs:
    def apply(level: DetailBands) -> DetailBands:
        horizontal, vertical, diagonal = level
        return fn(horizontal), fn(vertical), fn(diagonal)

    return WaveletCoeffs(
        approximation=coeffs.approximation.copy(),
        details=map_jobs(apply, coeffs.details),
        wavelet=coeffs.wavelet,
    )


def clamp_details(coeffs: WaveletCoeffs, t: float) -> WaveletCoeffs:
    """Detail coefficients removed by soft thresholding, with a zero approximation."""
    if t < 0:
        raise ValueError(f"threshold must be non-negative, got {t}")
    clamped = _map_details(coeffs, lambda band: np.clip(band, -t, t))
    clamped.approximation = np.zeros_like(coeffs.approximation)
    return clamped


def wst(
    img: ImageGrid,
    threshold: float,
    depth: int,
    filter_id: str = settings.DEFAULT_WAVELET,
) -> tuple[ImageGrid, WaveletCoeffs]:
    """Wavelet soft thresholding of the detail bands; the approximation is kept."""
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")

    coeffs = dwt_analyze(img, depth, filter_id)
    kept = _map_details(coeffs, lambda band: soft_threshold(band, threshold))
    return dwt_synthesize(kept), kept
