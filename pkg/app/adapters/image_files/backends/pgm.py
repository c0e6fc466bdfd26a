import re

import numpy as np
import numpy.typing as npt
from typing_extensions import override

from app.adapters.image_files.backends import AbstractImageCodec
from app.common_models import ImageFormat
from app.errors import ImageFormatError

WHITESPACE = b" \t\r\n\v\f"
COMMENT_PATTERN = re.compile(rb"#[^\r\n]*")
MAX_SUPPORTED_MAXVAL = 255


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Read the next header token, skipping whitespace and `#` comments."""
    while True:
        while pos < len(data) and data[pos] in WHITESPACE:
            pos += 1
        if pos < len(data) and data[pos] == ord("#"):
            while pos < len(data) and data[pos] not in b"\r\n":
                pos += 1
            continue
        break

    start = pos
    while pos < len(data) and data[pos] not in WHITESPACE and data[pos] != ord("#"):
        pos += 1

    if start == pos:
        raise ImageFormatError("unexpected end of data")
    return data[start:pos], pos


def _parse_header_int(token: bytes, field: str) -> int:
    if not token.isdigit():
        raise ImageFormatError(f"invalid PGM header {field}: {token!r}")
    return int(token)


class PgmCodec(AbstractImageCodec):
    format = ImageFormat.PGM

    @override
    def sniff(self, data: bytes) -> bool:
        return data[:2] in (b"P2", b"P5")

    @override
    def decode(self, data: bytes) -> npt.NDArray[np.float64]:
        if len(data) < 2:
            raise ImageFormatError("unexpected end of data")

        magic = data[:2]
        if magic not in (b"P2", b"P5"):
            raise ImageFormatError(f"unsupported PGM variant {magic!r}")

        pos = 2
        header: list[int] = []
        for field in ("width", "height", "maxval"):
            token, pos = _next_token(data, pos)
            header.append(_parse_header_int(token, field))
        width, height, maxval = header

        if width <= 0 or height <= 0:
            raise ImageFormatError(f"invalid PGM dimensions {width}x{height}")
        if not 0 < maxval <= MAX_SUPPORTED_MAXVAL:
            raise ImageFormatError(f"unsupported PGM bit depth (maxval {maxval})")

        num_samples = width * height
        if magic == b"P5":
            samples = self._decode_binary(data, pos, num_samples)
        else:
            samples = self._decode_ascii(data[pos:], num_samples)

        if samples.max() > maxval:
            raise ImageFormatError("PGM sample exceeds maxval")

        grid = samples.astype(np.float64).reshape(height, width)
        if maxval != MAX_SUPPORTED_MAXVAL:
            grid = grid * (MAX_SUPPORTED_MAXVAL / maxval)
        return grid

    @staticmethod
    def _decode_binary(data: bytes, pos: int, num_samples: int) -> npt.NDArray[np.int64]:
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data):
            raise ImageFormatError("unexpected end of data")
        body = data[pos + 1 :]
        if len(body) < num_samples:
            raise ImageFormatError("unexpected end of data")
        # trailing whitespace after the raster is tolerated
        if body[num_samples:].strip(WHITESPACE):
            raise ImageFormatError("PGM raster is larger than its header dimensions")
        return np.frombuffer(body[:num_samples], dtype=np.uint8).astype(np.int64)

    @staticmethod
    def _decode_ascii(body: bytes, num_samples: int) -> npt.NDArray[np.int64]:
        tokens = COMMENT_PATTERN.sub(b"", body).split()
        if len(tokens) < num_samples:
            raise ImageFormatError("unexpected end of data")
        if len(tokens) > num_samples:
            raise ImageFormatError("PGM raster is larger than its header dimensions")
        if not all(token.isdigit() for token in tokens):
            raise ImageFormatError("invalid sample in ASCII PGM raster")
        return np.array([int(token) for token in tokens], dtype=np.int64)

    @override
    def encode(self, pixels: npt.NDArray[np.uint8]) -> bytes:
        height, width = pixels.shape
        header = f"P5\n{width} {height}\n{MAX_SUPPORTED_MAXVAL}\n".encode("ascii")
        return header + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()
