import numpy as np
import pytest

from app.errors import DimensionError
from app.grids import energy
from app.kernels.filters import pyramid_filters
from app.kernels.laplacian_pyramid import PyramidLevels
from app.kernels.laplacian_pyramid import lp_analyze
from app.kernels.laplacian_pyramid import lp_synthesize


@pytest.mark.parametrize(
    ("filter_id", "analysis_length", "synthesis_length"),
    [("9-7", 9, 7), ("5-3", 5, 3)],
)
def test_pyramid_filter_taps(filter_id, analysis_length, synthesis_length):
    filters = pyramid_filters(filter_id)

    assert filters.analysis.size == analysis_length
    assert filters.synthesis.size == synthesis_length
    assert filters.dc_gain == pytest.approx(2.0)
    assert np.sum(filters.synthesis) == pytest.approx(np.sqrt(2))


@pytest.mark.parametrize("filter_id", ["9-7", "5-3"])
def test_pyramid_filters_are_biorthogonal(filter_id):
    filters = pyramid_filters(filter_id)

    product = np.convolve(filters.analysis, filters.synthesis)
    center = product.size // 2
    even_taps = product[center % 2 :: 2]
    expected = np.zeros_like(even_taps)
    expected[center // 2] = 1.0

    np.testing.assert_allclose(even_taps, expected, rtol=0, atol=1e-14)


@pytest.mark.parametrize("filter_id", ["9-7", "5-3"])
def test_pyramid_filters_vanish_at_nyquist(filter_id):
    filters = pyramid_filters(filter_id)
    signs = (-1.0) ** np.arange(filters.analysis.size)

    assert abs(np.sum(signs * filters.analysis)) <= 1e-14
    assert abs(np.sum(signs[: filters.synthesis.size] * filters.synthesis)) <= 1e-14


def test_nine_seven_pair_matches_the_tabulated_taps():
    filters = pyramid_filters("9-7")

    np.testing.assert_allclose(
        filters.analysis[4:],
        [0.8526986790094, 0.3774028556127, -0.1106244044184, -0.0238494650196, 0.0378284555073],
        atol=1e-9,
    )
    np.testing.assert_allclose(
        filters.synthesis[3:],
        [0.7884856164056, 0.4180922732222, -0.0406894176095, -0.0645388826289],
        atol=1e-9,
    )


def test_unknown_pyramid_filter():
    with pytest.raises(ValueError):
        pyramid_filters("7-5")


def test_level_shapes(uniform_image):
    levels = lp_analyze(uniform_image(64), 3)

    assert levels.depth == 3
    assert [band.shape for band in levels.bandpass] == [(64, 64), (32, 32), (16, 16)]
    assert levels.lowpass.shape == (8, 8)


def test_rectangular_images_are_supported(rng):
    img = rng.uniform(0, 255, size=(32, 64))

    levels = lp_analyze(img, 2)

    assert levels.lowpass.shape == (8, 16)
    np.testing.assert_allclose(lp_synthesize(levels), img, atol=1e-10)


@pytest.mark.parametrize("filter_id", ["9-7", "5-3"])
@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_perfect_reconstruction(uniform_image, filter_id, depth):
    img = uniform_image(64)

    rebuilt = lp_synthesize(lp_analyze(img, depth, filter_id))

    assert np.max(np.abs(rebuilt - img)) <= 1e-10


def test_zero_image():
    levels = lp_analyze(np.zeros((32, 32)), 2)

    assert not levels.lowpass.any()
    assert not any(band.any() for band in levels.bandpass)


def test_constant_image_has_empty_bandpass():
    levels = lp_analyze(np.full((32, 32), 100.0), 2)

    for band in levels.bandpass:
        assert np.max(np.abs(band)) <= 1e-10
    dc_gain = pyramid_filters("9-7").dc_gain
    np.testing.assert_allclose(levels.lowpass, 100.0 * dc_gain**2, rtol=1e-12)


def test_bandpass_ignores_added_constant(uniform_image):
    img = uniform_image(32)

    plain = lp_analyze(img, 2)
    shifted = lp_analyze(img + 37.0, 2)

    for a, b in zip(plain.bandpass, shifted.bandpass):
        np.testing.assert_allclose(a, b, atol=1e-10)


def test_synthesis_is_linear(rng):
    a = lp_analyze(rng.normal(size=(32, 32)), 2)
    b = lp_analyze(rng.normal(size=(32, 32)), 2)
    combined = PyramidLevels(
        lowpass=2 * a.lowpass - b.lowpass,
        bandpass=[2 * x - y for x, y in zip(a.bandpass, b.bandpass)],
        filter_id="9-7",
    )

    np.testing.assert_allclose(
        lp_synthesize(combined),
        2 * lp_synthesize(a) - lp_synthesize(b),
        atol=1e-10,
    )


def test_near_parseval(uniform_image):
    img = uniform_image(128)
    levels = lp_analyze(img, 3)

    total = energy(levels.lowpass) + sum(energy(band) for band in levels.bandpass)

    assert 0.98 <= total / energy(img) <= 1.02


@pytest.mark.parametrize(
    ("shape", "depth"),
    [((30, 30), 2), ((32, 32), 0), ((32, 48), 5)],
)
def test_indivisible_shapes_are_rejected(shape, depth):
    with pytest.raises(DimensionError):
        lp_analyze(np.zeros(shape), depth)


def test_inconsistent_levels_are_rejected():
    levels = PyramidLevels(
        lowpass=np.zeros((8, 8)),
        bandpass=[np.zeros((32, 32)), np.zeros((8, 8))],
        filter_id="9-7",
    )

    with pytest.raises(DimensionError):
        lp_synthesize(levels)
