import math

import numpy as np

from app.grids import ImageGrid
from app.grids import require_same_shape

DEFAULT_PEAK = 255.0


def mean_squared_error(a: ImageGrid, b: ImageGrid) -> float:
    require_same_shape(a, b)
    return float(np.mean(np.square(a - b)))


def psnr(a: ImageGrid, b: ImageGrid, peak: float = DEFAULT_PEAK) -> float:
    """Peak signal-to-noise ratio in dB; `math.inf` for identical images."""
    mse = mean_squared_error(a, b)
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(peak**2 / mse)
