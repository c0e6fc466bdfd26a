import numpy as np
import pytest

from app.adapters.coefficient_dumps import read_coefficients
from app.adapters.image_files import load_image
from app.adapters.image_files import save_image
from app.cli import run
from app.cli.common import EXIT_IO_ERROR
from app.cli.common import EXIT_OK
from app.cli.common import EXIT_USAGE
from app.cli.decompose import compatible_side
from app.cli.decompose import pad_to_side
from app.usecases.decomposition import DecompParams

FAST_DECOMPOSE = ["--levels", "2,2", "--max-iter", "3", "--inner-max-iter", "20"]


@pytest.fixture
def scene(tmp_path):
    prefix = tmp_path / "scene"
    assert run(["phantom", "--size", "32", "--out-prefix", str(prefix)]) == EXIT_OK
    return tmp_path / "scene_noisy.pgm"


def test_phantom_writes_clean_and_noisy(tmp_path, scene):
    clean = load_image(tmp_path / "scene_clean.pgm")
    noisy = load_image(scene)

    assert clean.shape == noisy.shape == (32, 32)
    assert not np.array_equal(clean, noisy)


def test_psnr_of_identical_files(capsys, scene):
    assert run(["psnr", str(scene), str(scene)]) == EXIT_OK

    assert capsys.readouterr().out.strip() == "inf"


def test_psnr_of_different_files(capsys, tmp_path, scene):
    assert run(["psnr", str(tmp_path / "scene_clean.pgm"), str(scene)]) == EXIT_OK

    value = float(capsys.readouterr().out)
    assert 15 < value < 30


def test_add_noise_with_zero_sigma_is_bit_identical(tmp_path, scene):
    output = tmp_path / "copy.pgm"

    code = run(
        ["add-noise", "--input", str(scene), "--sigma", "0", "--seed", "1", "--output", str(output)],
    )

    assert code == EXIT_OK
    assert output.read_bytes() == scene.read_bytes()


def test_add_noise_is_deterministic(tmp_path, scene):
    outputs = [tmp_path / "a.pgm", tmp_path / "b.pgm"]
    for output in outputs:
        args = ["add-noise", "--input", str(scene), "--sigma", "5", "--seed", "11"]
        assert run([*args, "--output", str(output)]) == EXIT_OK

    assert outputs[0].read_bytes() == outputs[1].read_bytes()


def test_check_transform_reports_measurements(capsys):
    code = run(["check-transform", "--size", "128", "--levels", "3,3,4", "--seed", "1"])

    assert code == EXIT_OK
    lines = dict(line.split() for line in capsys.readouterr().out.splitlines())
    assert set(lines) == {"pr_error", "lp_energy_ratio", "dfb_energy_ratio", "parseval_ratio"}
    assert float(lines["pr_error"]) <= 1e-9
    assert 0.95 <= float(lines["parseval_ratio"]) <= 1.05
    assert 0.95 <= float(lines["dfb_energy_ratio"]) <= 1.05
    assert 0.98 <= float(lines["lp_energy_ratio"]) <= 1.02


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["no-such-command"],
        ["psnr", "only-one.pgm"],
        ["check-transform", "--levels", "a,b"],
        ["check-transform", "--size", "0"],
        ["add-noise", "--input", "x.pgm", "--sigma", "1", "--seed", "-4", "--output", "y.pgm"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(argv) == EXIT_USAGE

    assert "usage:" in capsys.readouterr().err


def test_help_exits_cleanly(capsys):
    assert run(["decompose", "--help"]) == EXIT_OK

    assert "--lambda" in capsys.readouterr().out


def test_missing_input_file(capsys, tmp_path):
    missing = tmp_path / "missing.pgm"

    assert run(["psnr", str(missing), str(missing)]) == EXIT_IO_ERROR
    assert "error:" in capsys.readouterr().err


def test_malformed_input_file(tmp_path):
    path = tmp_path / "broken.pgm"
    path.write_bytes(b"P5\n4 4\n255\n\x00")

    assert run(["psnr", str(path), str(path)]) == EXIT_IO_ERROR


def test_mismatched_psnr_shapes(tmp_path):
    save_image(np.zeros((4, 4)), tmp_path / "a.pgm")
    save_image(np.zeros((4, 6)), tmp_path / "b.pgm")

    assert run(["psnr", str(tmp_path / "a.pgm"), str(tmp_path / "b.pgm")]) == EXIT_USAGE


def test_decompose_writes_components_and_trace(tmp_path, scene):
    prefix = tmp_path / "out"
    trace = tmp_path / "trace.csv"

    code = run(
        [
            "decompose",
            "--input",
            str(scene),
            "--out-prefix",
            str(prefix),
            "--trace",
            str(trace),
            *FAST_DECOMPOSE,
        ],
    )

    assert code == EXIT_OK
    for name in ("u", "v", "w", "residual"):
        assert load_image(tmp_path / f"out_{name}.pgm").shape == (32, 32)
    lines = trace.read_text().splitlines()
    assert lines[0] == "iteration,dU,dV,dW,inner_flags"
    assert 2 <= len(lines) <= 4


def test_unwritable_trace_fails_before_computing(tmp_path, scene):
    prefix = tmp_path / "out"
    trace = tmp_path / "missing" / "trace.csv"

    code = run(
        [
            "decompose",
            "--input",
            str(scene),
            "--out-prefix",
            str(prefix),
            "--trace",
            str(trace),
            *FAST_DECOMPOSE,
        ],
    )

    assert code == EXIT_IO_ERROR
    assert not list(tmp_path.glob("out_*"))


def test_decompose_two_component_png(tmp_path, scene):
    prefix = tmp_path / "pair"

    code = run(
        [
            "decompose",
            "--input",
            str(scene),
            "--out-prefix",
            str(prefix),
            "--two-component",
            "--format",
            "png",
            *FAST_DECOMPOSE,
        ],
    )

    assert code == EXIT_OK
    assert sorted(p.name for p in tmp_path.glob("pair_*")) == [
        "pair_residual.png",
        "pair_u.png",
        "pair_v.png",
    ]


def test_decompose_is_deterministic(tmp_path, scene):
    for prefix in ("first", "second"):
        argv = ["decompose", "--input", str(scene), "--out-prefix", str(tmp_path / prefix)]
        assert run([*argv, *FAST_DECOMPOSE]) == EXIT_OK

    for name in ("u", "v", "w", "residual"):
        first = (tmp_path / f"first_{name}.pgm").read_bytes()
        assert first == (tmp_path / f"second_{name}.pgm").read_bytes()


def test_decompose_pads_odd_sized_input(tmp_path, rng):
    source = tmp_path / "odd.pgm"
    save_image(rng.integers(0, 256, size=(30, 21)).astype(np.float64), source)

    code = run(
        ["decompose", "--input", str(source), "--out-prefix", str(tmp_path / "odd"), *FAST_DECOMPOSE],
    )

    assert code == EXIT_OK
    assert load_image(tmp_path / "odd_u.pgm").shape == (30, 21)


@pytest.mark.parametrize(
    "bad_flags",
    [["--lambda", "-1"], ["--delta", "-2"], ["--tau", "0.3"], ["--levels", "9"]],
)
def test_decompose_validation_writes_nothing(tmp_path, scene, bad_flags):
    argv = ["decompose", "--input", str(scene), "--out-prefix", str(tmp_path / "bad")]

    assert run([*argv, *bad_flags]) == EXIT_USAGE
    assert not list(tmp_path.glob("bad_*"))


def test_dump_coefficients(tmp_path, scene):
    output = tmp_path / "coeffs.ctc"

    code = run(
        ["dump-coeffs", "--input", str(scene), "--levels", "2,3", "--output", str(output)],
    )

    assert code == EXIT_OK
    coeffs = read_coefficients(output)
    assert coeffs.level_spec == [2, 3]
    assert coeffs.source_shape == (32, 32)


@pytest.mark.parametrize(
    ("shape", "level_spec", "side"),
    [((30, 21), [2, 2], 32), ((64, 64), [3, 3, 4], 64), ((65, 10), [3, 3, 4], 96)],
)
def test_compatible_side(shape, level_spec, side):
    assert compatible_side(shape, DecompParams(level_spec=level_spec)) == side


def test_pad_to_side_centers_the_image(rng):
    img = rng.normal(size=(5, 3))

    padded, crop = pad_to_side(img, 8)

    assert padded.shape == (8, 8)
    np.testing.assert_array_equal(padded[crop], img)
