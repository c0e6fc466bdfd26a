import logging
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from app.errors import ImageFormatError
from app.kernels.contourlet import ContourletCoeffs
from app.kernels.directional_filter_bank import DirectionalSubbands

MAGIC = b"CTC1"
U32 = np.dtype("<u4")
F64 = np.dtype("<f8")


def _u32(*values: int) -> bytes:
    return np.array(values, dtype=U32).tobytes()


def _encode_band(band: npt.NDArray[np.float64]) -> bytes:
    height, width = band.shape
    return _u32(width, height) + np.ascontiguousarray(band, dtype=F64).tobytes()


def encode_coefficients(coeffs: ContourletCoeffs) -> bytes:
    """\
    Serialize to the CTC1 dump: magic, u32 width, height and scale count,
    one u32 level count per scale (finest first), then every band as u32
    width, u32 height and row-major float64 samples, lowpass last. All
    integers and floats are little-endian.
    """
    height, width = coeffs.source_shape
    chunks = [
        MAGIC,
        _u32(width, height, len(coeffs.scales)),
        _u32(*(scale.levels for scale in coeffs.scales)),
    ]
    chunks.extend(_encode_band(band) for band in coeffs.directional_bands())
    chunks.append(_encode_band(coeffs.lowpass))
    return b"".join(chunks)


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, dtype: np.dtype[Any], count: int) -> npt.NDArray[Any]:
        size = dtype.itemsize * count
        if self.pos + size > len(self.data):
            raise ImageFormatError("unexpected end of data")
        if count == 0:
            return np.empty(0, dtype=dtype)
        values = np.frombuffer(self.data, dtype=dtype, count=count, offset=self.pos)
        self.pos += size
        return values

    def band(self) -> npt.NDArray[np.float64]:
        width, height = (int(v) for v in self.take(U32, 2))
        samples = self.take(F64, width * height)
        return samples.astype(np.float64).reshape(height, width)


def decode_coefficients(data: bytes) -> ContourletCoeffs:
    if not data.startswith(MAGIC):
        raise ImageFormatError("not a CTC1 coefficient dump")

    reader = _Reader(data)
    reader.pos = len(MAGIC)
    width, height, num_scales = (int(v) for v in reader.take(U32, 3))
    levels = [int(v) for v in reader.take(U32, num_scales)]

    scales = []
    for scale_levels in levels:
        if scale_levels > 31:
            raise ImageFormatError(f"invalid directional level count {scale_levels}")
        bands = [reader.band() for _ in range(2**scale_levels)]
        scales.append(DirectionalSubbands(levels=scale_levels, bands=bands))
    lowpass = reader.band()

    if reader.pos != len(data):
        raise ImageFormatError("trailing bytes after CTC1 coefficient dump")

    return ContourletCoeffs(
        lowpass=lowpass,
        scales=scales,
        level_spec=levels[::-1],
        source_shape=(height, width),
    )


def write_coefficients(coeffs: ContourletCoeffs, path: str | Path) -> None:
    data = encode_coefficients(coeffs)
    Path(path).write_bytes(data)
    logging.debug("Wrote coefficient dump", extra={"path": str(path), "bytes": len(data)})


def read_coefficients(path: str | Path) -> ContourletCoeffs:
    return decode_coefficients(Path(path).read_bytes())
