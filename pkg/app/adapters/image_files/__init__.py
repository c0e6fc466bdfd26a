import logging
from pathlib import Path

import numpy as np
import numpy.typing as npt

from app.adapters.image_files.backends import AbstractImageCodec
from app.adapters.image_files.backends.pgm import PgmCodec
from app.adapters.image_files.backends.png import PngCodec
from app.common_models import ImageFormat
from app.errors import ImageFormatError
from app.grids import ImageGrid
from app.grids import as_image_grid

IMAGE_CODECS: dict[ImageFormat, AbstractImageCodec] = {
    ImageFormat.PGM: PgmCodec(),
    ImageFormat.PNG: PngCodec(),
}


def quantize(img: ImageGrid, offset: float = 0.0) -> npt.NDArray[np.uint8]:
    """Map samples to stored bytes: round(clamp(sample + offset, 0, 255))."""
    return np.rint(np.clip(img + offset, 0.0, 255.0)).astype(np.uint8)


def load_image(path: str | Path) -> ImageGrid:
    """\
    Read an 8-bit grayscale PGM (P2/P5) or PNG file.

    The format is detected from the file contents rather than its suffix.
    """
    data = Path(path).read_bytes()
    for codec in IMAGE_CODECS.values():
        if codec.sniff(data):
            grid = as_image_grid(codec.decode(data))
            logging.debug(
                "Loaded image",
                extra={
                    "path": str(path),
                    "format": codec.format.value,
                    "height": grid.shape[0],
                    "width": grid.shape[1],
                },
            )
            return grid

    raise ImageFormatError(f"unsupported image format: {path}")


def save_image(img: ImageGrid, path: str | Path, offset: float = 0.0) -> None:
    """\
    Write `img` as 8-bit grayscale, PNG for a `.png` suffix and binary PGM
    otherwise. Each sample is stored as round(clamp(sample + offset, 0, 255)).
    """
    path = Path(path)
    image_format = ImageFormat.from_suffix(path.suffix)
    data = IMAGE_CODECS[image_format].encode(quantize(img, offset))
    path.write_bytes(data)
    logging.debug(
        "Saved image",
        extra={"path": str(path), "format": image_format.value, "offset": offset},
    )
