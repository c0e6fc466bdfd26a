import logging

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.optimize import minimize

from app.kernels.tv_projection import MONOTONE_AFTER
from app.kernels.tv_projection import ChambolleOpts
from app.kernels.tv_projection import DualField
from app.kernels.tv_projection import _log_diagnostics
from app.kernels.tv_projection import divergence
from app.kernels.tv_projection import gradient
from app.kernels.tv_projection import project_G

ACCURATE = ChambolleOpts(tau=0.248, max_iter=20000, tol=1e-9)


def test_gradient_of_constant_is_zero():
    assert not gradient(np.full((5, 7), 3.5)).any()


def test_gradient_example():
    u = np.array([[0.0, 1.0], [0.0, 1.0]])

    grad = gradient(u)

    np.testing.assert_array_equal(grad[0], np.zeros((2, 2)))
    np.testing.assert_array_equal(grad[1], [[1.0, 0.0], [1.0, 0.0]])


def test_gradient_vanishes_on_last_row_and_column(rng):
    grad = gradient(rng.normal(size=(6, 9)))

    assert not grad[0, -1, :].any()
    assert not grad[1, :, -1].any()


def test_gradient_is_linear(rng):
    u, w = rng.normal(size=(2, 7, 7))

    np.testing.assert_allclose(
        gradient(2.5 * u - 0.5 * w),
        2.5 * gradient(u) - 0.5 * gradient(w),
        atol=1e-12,
    )


def test_divergence_of_zero_field():
    assert not divergence(np.zeros((2, 4, 4))).any()


def test_divergence_of_gradient_of_constant():
    assert not divergence(gradient(np.full((6, 6), 7.0))).any()


def test_divergence_is_negative_adjoint_of_gradient(rng):
    for _ in range(100):
        u = rng.normal(size=(8, 8))
        p = rng.normal(size=(2, 8, 8))

        lhs = np.sum(gradient(u) * p)
        rhs = -np.sum(u * divergence(p))

        assert abs(lhs - rhs) <= 1e-10


def test_zero_radius_projects_to_zero(rng):
    f = rng.uniform(0, 255, size=(8, 8))

    projected, witness = project_G(f, 0.0)

    assert not projected.any()
    assert witness.converged
    assert witness.iterations == 0


def test_negative_radius_is_rejected():
    with pytest.raises(ValueError):
        project_G(np.zeros((4, 4)), -1.0)


def test_constant_image_projects_to_zero():
    projected, witness = project_G(np.full((8, 8), 42.0), 10.0)

    assert not projected.any()
    assert witness.converged


def test_witness_stays_in_unit_ball(rng):
    f = rng.uniform(0, 255, size=(16, 16))

    _, witness = project_G(f, 5.0, ChambolleOpts(max_iter=300))

    assert witness.max_magnitude <= 1 + 1e-12
    assert witness.iterations == len(witness.residuals)


def test_projection_has_zero_mean(rng):
    projected, _ = project_G(rng.uniform(0, 255, size=(16, 16)), 8.0)

    assert abs(projected.mean()) <= 1e-8


def test_projection_scales_with_radius(rng):
    # integral samples keep 3f/12 and f/4 bitwise equal
    f = rng.integers(0, 256, size=(12, 12)).astype(np.float64)

    base, _ = project_G(f, 4.0)
    scaled, _ = project_G(3.0 * f, 12.0)

    np.testing.assert_allclose(scaled, 3.0 * base, atol=1e-8)


def test_unconverged_projection_is_flagged(rng):
    _, witness = project_G(rng.uniform(0, 255, size=(16, 16)), 10.0, ChambolleOpts(max_iter=2))

    assert witness.iterations == 2
    assert not witness.converged


@pytest.mark.parametrize(
    "kwargs",
    [{"tau": 0.3}, {"tau": 0.0}, {"max_iter": 0}, {"tol": 0.0}],
)
def test_invalid_chambolle_options(kwargs):
    with pytest.raises(ValidationError):
        ChambolleOpts(**kwargs)


def _difference_operator(height: int, width: int) -> np.ndarray:
    """Forward-difference matrix, rows ordered (vertical, horizontal)."""
    n = height * width
    matrix = np.zeros((2 * n, n))
    for i in range(height):
        for j in range(width):
            k = i * width + j
            if i < height - 1:
                matrix[k, k + width] = 1.0
                matrix[k, k] = -1.0
            if j < width - 1:
                matrix[n + k, k + 1] = 1.0
                matrix[n + k, k] = -1.0
    return matrix


def _projection_oracle(f: np.ndarray, lam: float) -> np.ndarray:
    """\
    Solve min ||lam * div q - f||^2 subject to |q_k| <= 1 with SLSQP, using
    a difference matrix assembled independently of the module under test.
    """
    n = f.size
    diff = _difference_operator(*f.shape)
    div = -diff.T
    target = f.ravel()

    def objective(q: np.ndarray) -> float:
        r = lam * div @ q - target
        return 0.5 * float(r @ r)

    def objective_grad(q: np.ndarray) -> np.ndarray:
        return lam * div.T @ (lam * div @ q - target)

    def constraint(q: np.ndarray) -> np.ndarray:
        return 1.0 - q[:n] ** 2 - q[n:] ** 2

    def constraint_jac(q: np.ndarray) -> np.ndarray:
        jac = np.zeros((n, 2 * n))
        jac[np.arange(n), np.arange(n)] = -2.0 * q[:n]
        jac[np.arange(n), n + np.arange(n)] = -2.0 * q[n:]
        return jac

    result = minimize(
        objective,
        np.zeros(2 * n),
        jac=objective_grad,
        constraints=[{"type": "ineq", "fun": constraint, "jac": constraint_jac}],
        method="SLSQP",
        options={"maxiter": 2000, "ftol": 1e-12},
    )
    return (lam * div @ result.x).reshape(f.shape)


@pytest.mark.parametrize("lam", [2.0, 5.0, 10.0])
def test_projection_matches_constrained_oracle(rng, lam):
    for _ in range(5):
        f = rng.uniform(0, 50, size=(8, 8))

        projected, witness = project_G(f, lam, ACCURATE)

        assert witness.max_magnitude <= 1 + 1e-12
        np.testing.assert_allclose(projected, _projection_oracle(f, lam), atol=1e-2)


def test_unconverged_projection_returns_the_best_iterate(rng):
    f = rng.uniform(0, 255, size=(16, 16))

    projected, witness = project_G(f, 10.0, ChambolleOpts(max_iter=40))

    assert not witness.converged
    assert witness.best_iteration == int(np.argmin(witness.residuals)) + 1
    np.testing.assert_array_equal(projected, 10.0 * divergence(witness.p))


def test_converged_projection_returns_the_last_iterate(rng):
    f = rng.uniform(0, 50, size=(8, 8))

    _, witness = project_G(f, 2.0, ACCURATE)

    assert witness.converged
    assert witness.best_iteration == witness.iterations


def _non_monotone_records(caplog) -> list[logging.LogRecord]:
    return [
        record
        for record in caplog.records
        if record.getMessage() == "Chambolle dual residual was not monotone"
    ]


@pytest.mark.parametrize("lam", [2.0, 10.0, 40.0])
def test_non_monotone_residuals_are_logged(caplog, rng, lam):
    caplog.set_level(logging.DEBUG)
    f = rng.uniform(0, 255, size=(24, 24))

    _, witness = project_G(f, lam, ChambolleOpts(tau=0.248, max_iter=300))

    tail = np.asarray(witness.residuals[MONOTONE_AFTER:])
    increases = int(np.count_nonzero(np.diff(tail) > 0))
    records = _non_monotone_records(caplog)
    if increases:
        assert [record.increases for record in records] == [increases]
    else:
        assert not records


def test_increasing_tail_is_reported(caplog):
    caplog.set_level(logging.DEBUG)
    residuals = [1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.45, 0.3]
    witness = DualField(
        p=np.zeros((2, 2, 2)),
        lam=1.0,
        iterations=len(residuals),
        converged=True,
        residuals=residuals,
    )

    _log_diagnostics(witness, ChambolleOpts())

    records = _non_monotone_records(caplog)
    assert len(records) == 1
    assert records[0].increases == 1
