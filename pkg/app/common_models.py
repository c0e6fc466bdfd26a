try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str(self.value).__format__(format_spec)


class NoiseModel(StrEnum):
    CONTOURLET = "contourlet"
    WAVELET = "wavelet"


class StopMetric(StrEnum):
    MAX_ABS = "max_abs"  # per-pixel maximum, as in the stop rule of the box
    RMS = "rms"


class ImageFormat(StrEnum):
    PGM = "pgm"
    PNG = "png"

    @classmethod
    def from_suffix(cls, suffix: str) -> "ImageFormat":
        return {
            ".png": cls.PNG,
        }.get(suffix.lower(), cls.PGM)
