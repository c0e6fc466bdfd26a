from abc import ABC
from abc import abstractmethod
from typing import ClassVar

import numpy as np
import numpy.typing as npt

from app.common_models import ImageFormat


class AbstractImageCodec(ABC):
    """An 8-bit grayscale on-disk format."""

    format: ClassVar[ImageFormat]

    @abstractmethod
    def sniff(self, data: bytes) -> bool:
        """Whether `data` looks like a file in this format."""

    @abstractmethod
    def decode(self, data: bytes) -> npt.NDArray[np.float64]:
        """Decode file contents into samples in [0, 255], shape (height, width)."""

    @abstractmethod
    def encode(self, pixels: npt.NDArray[np.uint8]) -> bytes:
        """Encode quantized samples, shape (height, width)."""
