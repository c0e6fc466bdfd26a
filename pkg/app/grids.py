from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from app.errors import DimensionError
from app.errors import NumericalError

# Real samples, row-major, shape (height, width). Nominal range is 0-255,
# but nothing is clamped until an image is written to disk.
ImageGrid: TypeAlias = npt.NDArray[np.float64]


def as_image_grid(data: npt.ArrayLike) -> ImageGrid:
    grid = np.array(data, dtype=np.float64)
    if grid.ndim != 2 or grid.size == 0:
        raise DimensionError(f"expected a non-empty 2-D grid, got shape {grid.shape}")
    return ensure_finite(grid, "image")


def ensure_finite(grid: ImageGrid, name: str) -> ImageGrid:
    if not np.isfinite(grid).all():
        raise NumericalError(f"non-finite samples detected in {name}")
    return grid


def require_same_shape(a: ImageGrid, b: ImageGrid) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def max_abs_diff(a: ImageGrid, b: ImageGrid) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def energy(grid: npt.NDArray[np.float64]) -> float:
    return float(np.sum(np.square(grid)))
