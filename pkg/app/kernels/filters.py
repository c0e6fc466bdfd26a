from dataclasses import dataclass
from functools import cache
from math import comb
from math import sqrt

import numpy as np
import numpy.typing as npt
from numpy.polynomial import Polynomial

from app.errors import DimensionError

# centered taps of cos^2(w/2) and sin^2(w/2)
COS2_TAPS = np.array([0.25, 0.5, 0.25])
SIN2_TAPS = np.array([-0.25, 0.5, -0.25])

# pyramid filter id -> (vanishing moments of the pair, whether the real root
# of the product polynomial goes to the synthesis filter)
PYRAMID_FILTERS = {
    "9-7": (4, True),
    "5-3": (2, False),
}

# half impulse responses of the ladder (lifting) prototypes; the full
# filter is the symmetric extension [v reversed, v]
LADDER_PROTOTYPES = {
    "pkva12": (0.6300, -0.1930, 0.0972, -0.0526, 0.0272, -0.0144),
    "pkva8": (0.6302, -0.1924, 0.0930, -0.0403),
    "pkva6": (0.6261, -0.1794, 0.0688),
}


@dataclass(frozen=True)
class PyramidFilters:
    filter_id: str
    analysis: npt.NDArray[np.float64]
    synthesis: npt.NDArray[np.float64]

    @property
    def dc_gain(self) -> float:
        """Gain a constant image picks up in the lowpass band of one level."""
        return float(np.sum(self.analysis)) ** 2


def _centered_taps(taps: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    trimmed = np.trim_zeros(np.asarray(taps, dtype=np.float64))
    if trimmed.size % 2 == 0 or not np.allclose(trimmed, trimmed[::-1]):
        raise DimensionError("pyramid filters must be odd-length and symmetric")
    trimmed = (trimmed + trimmed[::-1]) / 2
    trimmed.flags.writeable = False
    return trimmed


def _spline_taps(moments: int, factor: Polynomial) -> npt.NDArray[np.float64]:
    """Taps of sqrt(2) * cos^moments(w/2) * factor(sin^2(w/2))."""
    taps = np.array([factor.coef[-1]])
    for coefficient in factor.coef[-2::-1]:
        taps = np.convolve(taps, SIN2_TAPS)
        taps[taps.size // 2] += coefficient
    for _ in range(moments // 2):
        taps = np.convolve(taps, COS2_TAPS)
    return sqrt(2.0) * taps


def spline_pair(
    moments: int,
    split_real_root: bool,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """\
    Biorthogonal spline pair built from the Daubechies product polynomial
    P(y) = sum_k C(moments - 1 + k, k) y^k, so that

        H(w) G(w) = 2 cos^(2 * moments)(w/2) P(sin^2(w/2))

    holds to rounding. With `split_real_root` the real root of P moves to the
    synthesis filter, which gives the CDF 9/7 pair for four moments.
    """
    if moments < 2 or moments % 2:
        raise ValueError(f"spline pairs need an even number of moments, got {moments}")

    analysis = Polynomial([float(comb(moments - 1 + k, k)) for k in range(moments)])
    synthesis = Polynomial([1.0])
    if split_real_root:
        roots = analysis.roots()
        real = roots[np.argmin(np.abs(roots.imag))].real
        synthesis = Polynomial([1.0, -1.0 / real])
        analysis = analysis // synthesis

    return _spline_taps(moments, analysis), _spline_taps(moments, synthesis)


@cache
def pyramid_filters(filter_id: str) -> PyramidFilters:
    spec = PYRAMID_FILTERS.get(filter_id)
    if spec is None:
        raise ValueError(f"unknown pyramid filter: {filter_id!r}")

    analysis, synthesis = spline_pair(*spec)
    return PyramidFilters(
        filter_id=filter_id,
        analysis=_centered_taps(analysis),
        synthesis=_centered_taps(synthesis),
    )


@cache
def ladder_filter(filter_id: str) -> npt.NDArray[np.float64]:
    prototype = LADDER_PROTOTYPES.get(filter_id)
    if prototype is None:
        raise ValueError(f"unknown directional filter: {filter_id!r}")

    half = np.asarray(prototype, dtype=np.float64)
    taps = np.concatenate([half[::-1], half])
    taps.flags.writeable = False
    return taps
