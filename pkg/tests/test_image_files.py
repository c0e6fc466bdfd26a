import numpy as np
import pytest
from PIL import Image

from app.adapters.image_files import load_image
from app.adapters.image_files import quantize
from app.adapters.image_files import save_image
from app.adapters.image_files.backends.png import PNG_FILE_HEADER
from app.errors import ImageFormatError

P2_2X2 = b"P2\n2 2\n255\n0 64\n128 255\n"
P5_2X2 = b"P5\n2 2\n255\n" + bytes([0, 64, 128, 255])


def test_load_ascii_pgm(tmp_path):
    path = tmp_path / "tiny.pgm"
    path.write_bytes(P2_2X2)

    img = load_image(path)

    assert img.dtype == np.float64
    np.testing.assert_array_equal(img, [[0, 64], [128, 255]])


def test_binary_and_ascii_pgm_agree(tmp_path):
    (tmp_path / "a.pgm").write_bytes(P2_2X2)
    (tmp_path / "b.pgm").write_bytes(P5_2X2)

    np.testing.assert_array_equal(
        load_image(tmp_path / "a.pgm"),
        load_image(tmp_path / "b.pgm"),
    )


def test_header_comments_are_skipped(tmp_path):
    path = tmp_path / "commented.pgm"
    path.write_bytes(b"P2\n# made by hand\n3 1 # width height\n255\n1 2 3\n")

    np.testing.assert_array_equal(load_image(path), [[1, 2, 3]])


def test_smaller_maxval_is_rescaled(tmp_path):
    path = tmp_path / "fifteen.pgm"
    path.write_bytes(b"P2\n2 1\n15\n0 15\n")

    np.testing.assert_array_equal(load_image(path), [[0, 255]])


@pytest.mark.parametrize(
    "data",
    [
        b"P5\n2 2\n255\n" + bytes([0, 64, 128]),
        b"P2\n2 2\n255\n0 64 128\n",
        b"P5\n2 2\n",
    ],
)
def test_truncated_pgm(tmp_path, data):
    path = tmp_path / "short.pgm"
    path.write_bytes(data)

    with pytest.raises(ImageFormatError, match="unexpected end of data"):
        load_image(path)


def test_oversized_raster_is_rejected(tmp_path):
    path = tmp_path / "long.pgm"
    path.write_bytes(P5_2X2 + b"\x00")

    with pytest.raises(ImageFormatError, match="larger than its header"):
        load_image(path)


@pytest.mark.parametrize("trailer", [b"\n", b"\r\n", b" \n\n"])
def test_trailing_whitespace_after_binary_raster(tmp_path, trailer):
    path = tmp_path / "trailer.pgm"
    path.write_bytes(P5_2X2 + trailer)

    np.testing.assert_array_equal(load_image(path), [[0, 64], [128, 255]])


def test_sixteen_bit_pgm_is_unsupported(tmp_path):
    path = tmp_path / "deep.pgm"
    path.write_bytes(b"P5\n1 1\n65535\n\x00\x01")

    with pytest.raises(ImageFormatError, match="bit depth"):
        load_image(path)


def test_unknown_format(tmp_path):
    path = tmp_path / "notes.txt"
    path.write_bytes(b"hello there")

    with pytest.raises(ImageFormatError, match="unsupported image format"):
        load_image(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_image(tmp_path / "missing.pgm")


@pytest.mark.parametrize("suffix", [".pgm", ".png"])
def test_round_trip_integral_image(tmp_path, rng, suffix):
    img = rng.integers(0, 256, size=(17, 23)).astype(np.float64)
    path = tmp_path / f"round{suffix}"

    save_image(img, path)

    np.testing.assert_array_equal(load_image(path), img)


def test_writer_format_follows_suffix(tmp_path):
    img = np.full((4, 4), 10.0)
    save_image(img, tmp_path / "a.png")
    save_image(img, tmp_path / "a.pgm")

    assert (tmp_path / "a.png").read_bytes().startswith(PNG_FILE_HEADER)
    assert (tmp_path / "a.pgm").read_bytes() == b"P5\n4 4\n255\n" + bytes([10] * 16)


def test_offset_and_clamping(tmp_path):
    img = np.array([[-12.0, 300.0, 0.4, 0.6]])

    assert quantize(img, 128.0).tolist() == [[116, 255, 128, 129]]

    save_image(img, tmp_path / "clamped.pgm")
    np.testing.assert_array_equal(load_image(tmp_path / "clamped.pgm"), [[0, 255, 0, 1]])


def test_colour_png_is_rejected(tmp_path):
    path = tmp_path / "colour.png"
    Image.new("RGB", (3, 2), color=(10, 20, 30)).save(path)

    with pytest.raises(ImageFormatError, match="grayscale"):
        load_image(path)


def test_truncated_png(tmp_path):
    path = tmp_path / "cut.png"
    save_image(np.zeros((32, 32)), path)
    path.write_bytes(path.read_bytes()[:40])

    with pytest.raises(ImageFormatError):
        load_image(path)
