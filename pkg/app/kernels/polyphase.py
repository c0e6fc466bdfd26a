"""\
Resampling, polyphase splitting and periodic filtering used by the ladder
directional filter bank.

Resampling matrices (all unimodular, applied with periodic wrap):

    kind 0: y[i, j] = x[i + s*j, j]     kind 1: y[i, j] = x[i - s*j, j]
    kind 2: y[i, j] = x[i, j + s*i]     kind 3: y[i, j] = x[i, j - s*i]

Kinds 0/1 and 2/3 undo each other for the same shift.
"""

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str(self.value).__format__(format_spec)

import numpy as np
import numpy.typing as npt
from scipy.ndimage import correlate1d

from app.errors import DimensionError

Array = npt.NDArray[np.float64]

INVERSE_RESAMPLING = {0: 1, 1: 0, 2: 3, 3: 2}

# parallelogram type -> (downsampled axis, resampling kind, odd phase rolled)
PARALLELOGRAM_LAYOUTS = {
    0: (0, 2, True),
    1: (0, 3, False),
    2: (1, 0, True),
    3: (1, 1, False),
}


class QuincunxType(StrEnum):
    ROWS_Q1 = "1r"
    COLUMNS_Q2 = "2c"


class Extension(StrEnum):
    PERIODIC = "per"
    # periodic, with a half-width column rotation across the top/bottom edge
    QUINCUNX_PERIODIC_COLUMNS = "qper_col"


def resample(x: Array, kind: int, shift: int = 1) -> Array:
    m, n = x.shape
    if kind in (0, 1):
        sign = 1 if kind == 0 else -1
        rows = (np.arange(m)[:, None] + sign * shift * np.arange(n)[None, :]) % m
        return np.take_along_axis(x, rows, axis=0)
    if kind in (2, 3):
        sign = 1 if kind == 2 else -1
        cols = (np.arange(n)[None, :] + sign * shift * np.arange(m)[:, None]) % n
        return np.take_along_axis(x, cols, axis=1)

    raise ValueError(f"unknown resampling kind: {kind}")


def _phase(x: Array, axis: int, phase: int) -> Array:
    return x[phase::2] if axis == 0 else x[:, phase::2]


def parallelogram_split(x: Array, ptype: int) -> tuple[Array, Array]:
    axis, kind, rolled = PARALLELOGRAM_LAYOUTS[ptype]
    if x.shape[axis] % 2:
        raise DimensionError(f"cannot split an odd axis of shape {x.shape}")

    odd_source = np.roll(x, -1, axis=1 - axis) if rolled else x
    p0 = resample(_phase(x, axis, 0), kind)
    p1 = resample(_phase(odd_source, axis, 1), kind)
    return p0, p1


def parallelogram_merge(p0: Array, p1: Array, ptype: int) -> Array:
    axis, kind, rolled = PARALLELOGRAM_LAYOUTS[ptype]
    inverse = INVERSE_RESAMPLING[kind]

    even = resample(p0, inverse)
    odd = resample(p1, inverse)
    if rolled:
        odd = np.roll(odd, 1, axis=1 - axis)

    shape = list(p0.shape)
    shape[axis] *= 2
    x = np.empty(shape, dtype=np.float64)
    if axis == 0:
        x[0::2], x[1::2] = even, odd
    else:
        x[:, 0::2], x[:, 1::2] = even, odd
    return x


# a quincunx split is a shear followed by a parallelogram split
QUINCUNX_LAYOUTS = {
    QuincunxType.ROWS_Q1: (1, 0),
    QuincunxType.COLUMNS_Q2: (3, 2),
}


def quincunx_split(x: Array, qtype: QuincunxType) -> tuple[Array, Array]:
    kind, ptype = QUINCUNX_LAYOUTS[qtype]
    return parallelogram_split(resample(x, kind), ptype)


def quincunx_merge(p0: Array, p1: Array, qtype: QuincunxType) -> Array:
    kind, ptype = QUINCUNX_LAYOUTS[qtype]
    return resample(parallelogram_merge(p0, p1, ptype), INVERSE_RESAMPLING[kind])


def _backsample_shift(k: int, levels: int) -> int:
    return 2 * (k + 1) - (2 ** (levels - 2) + 1)


def backsample(bands: list[Array]) -> list[Array]:
    """\
    Resample the leaves of the tree so that every band ends up with a
    diagonal overall sampling matrix.
    """
    levels = len(bands).bit_length() - 1
    out = list(bands)

    if levels == 1:
        for k, band in enumerate(out):
            band = resample(band, 3)
            band[:, 0::2] = resample(band[:, 0::2], 0)
            band[:, 1::2] = resample(band[:, 1::2], 0)
            out[k] = band
    elif levels >= 3:
        half = 2 ** (levels - 1)
        for k in range(2 ** (levels - 2)):
            shift = _backsample_shift(k, levels)
            for index in (2 * k, 2 * k + 1):
                out[index] = resample(out[index], 2, shift)
                out[index + half] = resample(out[index + half], 0, shift)

    return out


def undo_backsample(bands: list[Array]) -> list[Array]:
    levels = len(bands).bit_length() - 1
    out = list(bands)

    if levels == 1:
        for k, band in enumerate(out):
            band = band.copy()
            band[:, 0::2] = resample(band[:, 0::2], 1)
            band[:, 1::2] = resample(band[:, 1::2], 1)
            out[k] = resample(band, 2)
    elif levels >= 3:
        half = 2 ** (levels - 1)
        for k in range(2 ** (levels - 2)):
            shift = _backsample_shift(k, levels)
            for index in (2 * k, 2 * k + 1):
                out[index] = resample(out[index], 2, -shift)
                out[index + half] = resample(out[index + half], 0, -shift)

    return out


def _filter_rows_quincunx(x: Array, taps: Array, offset: int) -> Array:
    m, n = x.shape
    rows = np.arange(m)
    out = np.zeros_like(x)
    for a, tap in enumerate(taps):
        source = rows + offset - a
        block = x[source % m]
        wrapped_odd = (source // m) % 2 == 1
        block[wrapped_odd] = np.roll(block[wrapped_odd], -(n // 2), axis=1)
        out += tap * block
    return out


def separable_filter(
    x: Array,
    taps: Array,
    shift: int = 0,
    extension: Extension = Extension.PERIODIC,
) -> Array:
    """\
    Filter both axes with the same 1-D taps under periodic extension.

    Along each axis y[i] = sum_a taps[a] * x[i + c - a] with
    c = L - 1 - (floor((L - 1) / 2) + shift), L = len(taps).
    """
    size = taps.size
    offset = size - 1 - ((size - 1) // 2 + shift)
    origin = size - 1 - size // 2 - offset
    weights = taps[::-1]

    if extension is Extension.QUINCUNX_PERIODIC_COLUMNS:
        filtered = _filter_rows_quincunx(x, taps, offset)
    else:
        filtered = correlate1d(x, weights, axis=0, mode="wrap", origin=origin)
    return correlate1d(filtered, weights, axis=1, mode="wrap", origin=origin)


def _axis_power(size: int, taps: Array) -> Array:
    # |sum_a taps[a] e^{-2 pi i k a / size}|^2, aliased for taps longer than the axis
    phases = np.exp(-2j * np.pi * np.outer(np.arange(size), np.arange(taps.size)) / size)
    power: Array = np.abs(phases @ taps) ** 2
    return power


def _periodic_tile(x: Array, extension: Extension) -> Array:
    # the quincunx-periodic extension is plain periodic over twice the rows
    if extension is Extension.QUINCUNX_PERIODIC_COLUMNS:
        return np.vstack([x, np.roll(x, -(x.shape[1] // 2), axis=1)])
    return x


def separable_power(shape: tuple[int, ...], taps: Array, extension: Extension) -> Array:
    """\
    Squared magnitude response of `separable_filter` with these taps, on the
    frequency grid `spectral_filter` uses for an array of `shape`. The shift
    only changes the phase, so the response holds for every shift.
    """
    rows = shape[0]
    if extension is Extension.QUINCUNX_PERIODIC_COLUMNS:
        rows *= 2
    return np.outer(_axis_power(rows, taps), _axis_power(shape[1], taps))


def spectral_filter(x: Array, response: Array, extension: Extension) -> Array:
    """Apply a real, even frequency response under the given extension."""
    tiled = _periodic_tile(x, extension)
    filtered: Array = np.fft.ifft2(np.fft.fft2(tiled) * response).real
    return np.ascontiguousarray(filtered[: x.shape[0]])
