import math

import numpy as np

from app.grids import ImageGrid
from app.usecases.noise import NoiseSpec
from app.usecases.noise import add_gaussian_noise

BACKGROUND_LEVEL = 64.0
DISK_LEVEL = 192.0
TEXTURE_AMPLITUDE = 25.0


def texture_frequency(size: int) -> tuple[int, int]:
    """Cycles per image of the phantom texture along (columns, rows)."""
    return max(size // 8, 1), max(size // 32, 1)


def make_clean_phantom(size: int) -> ImageGrid:
    """\
    Synthetic scene: a centered disk (structure) on a flat background plus an
    oriented sinusoid (texture) covering the whole image.
    """
    if size < 1:
        raise ValueError(f"phantom size must be positive, got {size}")

    rows, cols = np.mgrid[0:size, 0:size].astype(np.float64)
    center = (size - 1) / 2.0
    inside = np.hypot(rows - center, cols - center) <= size / 4.0
    scene = np.where(inside, DISK_LEVEL, BACKGROUND_LEVEL)

    kx, ky = texture_frequency(size)
    phase = 2.0 * math.pi * (kx * cols + ky * rows) / size
    return scene + TEXTURE_AMPLITUDE * np.sin(phase)


def make_phantom(size: int, sigma: float, seed: int) -> tuple[ImageGrid, ImageGrid]:
    clean = make_clean_phantom(size)
    noisy = add_gaussian_noise(clean, NoiseSpec(sigma=sigma, seed=seed))
    return clean, noisy
