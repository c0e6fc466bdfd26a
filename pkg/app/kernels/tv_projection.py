import logging
import math
from dataclasses import dataclass
from dataclasses import field

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel
from pydantic import Field

from app import settings
from app.grids import ImageGrid

# after this many iterations the dual residual is expected to decrease
MONOTONE_AFTER = 5

PairField = npt.NDArray[np.float64]


class ChambolleOpts(BaseModel):
    tau: float = Field(default=settings.CHAMBOLLE_TAU, gt=0.0, le=0.25)
    max_iter: int = Field(default=settings.CHAMBOLLE_MAX_ITER, ge=1)
    tol: float = Field(default=settings.CHAMBOLLE_TOL, gt=0.0)


@dataclass
class DualField:
    # shape (2, height, width)
    p: PairField
    lam: float
    iterations: int
    converged: bool
    # max |p^{n+1} - p^n| for every iteration performed
    residuals: list[float] = field(default_factory=list)
    # iteration that produced `p`, 0 for the starting field
    best_iteration: int = 0

    @property
    def max_magnitude(self) -> float:
        if self.p.size == 0:
            return 0.0
        return float(np.max(np.hypot(self.p[0], self.p[1])))


def gradient(u: ImageGrid) -> PairField:
    """Forward differences, zero across the last row and the last column."""
    grad = np.zeros((2, *u.shape), dtype=np.float64)
    grad[0, :-1, :] = u[1:, :] - u[:-1, :]
    grad[1, :, :-1] = u[:, 1:] - u[:, :-1]
    return grad


def divergence(p: PairField) -> ImageGrid:
    """Backward differences, the negative adjoint of `gradient`."""
    px = p[0].copy()
    px[-1, :] = 0.0
    py = p[1].copy()
    py[:, -1] = 0.0

    div = px.copy()
    div[1:, :] -= px[:-1, :]
    div += py
    div[:, 1:] -= py[:, :-1]
    return div


def project_G(
    f: ImageGrid,
    lam: float,
    opts: ChambolleOpts | None = None,
) -> tuple[ImageGrid, DualField]:
    """\
    Chambolle's projection of `f` onto the G-norm ball of radius `lam`.

    Iterates p <- (p + tau * grad(div p - f/lam)) / (1 + tau * |grad(div p - f/lam)|)
    from p = 0 and returns lam * div p. Running out of iterations is not an
    error: the iterate reached by the smallest step is returned and the field
    is flagged unconverged.
    """
    if lam < 0:
        raise ValueError(f"projection radius must be non-negative, got {lam}")
    if opts is None:
        opts = ChambolleOpts()

    p = np.zeros((2, *f.shape), dtype=np.float64)
    if lam == 0:
        return np.zeros_like(f), DualField(p=p, lam=0.0, iterations=0, converged=True)

    target = f / lam
    residuals: list[float] = []
    best_p, best_step, best_iteration = p, math.inf, 0
    converged = False
    for iteration in range(1, opts.max_iter + 1):
        grad = gradient(divergence(p) - target)
        magnitude = np.hypot(grad[0], grad[1])
        p_next = (p + opts.tau * grad) / (1.0 + opts.tau * magnitude)

        step = float(np.max(np.abs(p_next - p)))
        residuals.append(step)
        p = p_next
        if step < best_step:
            best_p, best_step, best_iteration = p, step, iteration
        if step <= opts.tol:
            converged = True
            break

    witness = DualField(
        p=best_p,
        lam=lam,
        iterations=len(residuals),
        converged=converged,
        residuals=residuals,
        best_iteration=best_iteration,
    )
    _log_diagnostics(witness, opts)
    return lam * divergence(best_p), witness


def _log_diagnostics(witness: DualField, opts: ChambolleOpts) -> None:
    tail = np.asarray(witness.residuals[MONOTONE_AFTER:])
    increases = int(np.count_nonzero(np.diff(tail) > 0)) if tail.size > 1 else 0
    if increases:
        logging.debug(
            "Chambolle dual residual was not monotone",
            extra={"increases": increases, "iterations": witness.iterations},
        )

    if not witness.converged:
        logging.debug(
            "Chambolle projection stopped before reaching tolerance",
            extra={
                "lam": witness.lam,
                "max_iter": opts.max_iter,
                "best_iteration": witness.best_iteration,
                "best_step": min(witness.residuals),
            },
        )
