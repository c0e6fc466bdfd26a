import io

import numpy as np
import numpy.typing as npt
from PIL import Image
from PIL import UnidentifiedImageError
from typing_extensions import override

from app.adapters.image_files.backends import AbstractImageCodec
from app.common_models import ImageFormat
from app.errors import ImageFormatError

PNG_FILE_HEADER = b"\x89PNG\r\n\x1a\n"


class PngCodec(AbstractImageCodec):
    format = ImageFormat.PNG

    @override
    def sniff(self, data: bytes) -> bool:
        return data.startswith(PNG_FILE_HEADER)

    @override
    def decode(self, data: bytes) -> npt.NDArray[np.float64]:
        try:
            with Image.open(io.BytesIO(data)) as image:
                if image.mode != "L":
                    raise ImageFormatError(
                        f"unsupported PNG mode {image.mode!r}, expected 8-bit grayscale",
                    )
                image.load()
                pixels = np.asarray(image, dtype=np.uint8)
        except (UnidentifiedImageError, OSError, SyntaxError) as exc:
            # Pillow reports truncated streams as OSError
            raise ImageFormatError(f"unreadable PNG data: {exc}") from exc

        return pixels.astype(np.float64)

    @override
    def encode(self, pixels: npt.NDArray[np.uint8]) -> bytes:
        buffer = io.BytesIO()
        Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8)).save(
            buffer,
            format="PNG",
        )
        return buffer.getvalue()
