import logging
import math

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel
from pydantic import Field

from app.grids import ImageGrid
from app.grids import ensure_finite

MAX_SEED = 2**64 - 1


class NoiseSpec(BaseModel):
    # standard deviation in intensity units
    sigma: float = Field(ge=0.0, allow_inf_nan=False)
    seed: int = Field(ge=0, le=MAX_SEED)


def gaussian_samples(count: int, seed: int) -> npt.NDArray[np.float64]:
    """\
    Standard normal samples from a Philox-4x64 counter-based stream.

    Uniform pairs (u1, u2) are turned into normals with Box-Muller, the
    cosine and sine outputs interleaved. The stream depends only on the seed.
    """
    generator = np.random.Generator(np.random.Philox(seed))
    num_pairs = (count + 1) // 2
    # 1 - U(0, 1] keeps the logarithm finite
    u1 = 1.0 - generator.random(num_pairs)
    u2 = generator.random(num_pairs)

    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * math.pi * u2
    samples = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
    return samples.ravel()[:count]


def add_gaussian_noise(img: ImageGrid, spec: NoiseSpec) -> ImageGrid:
    if spec.sigma == 0:
        return img.copy()

    noise = spec.sigma * gaussian_samples(img.size, spec.seed).reshape(img.shape)
    logging.debug(
        "Added gaussian noise",
        extra={"sigma": spec.sigma, "seed": spec.seed, "shape": list(img.shape)},
    )
    return ensure_finite(img + noise, "noisy image")
