import logging
import math
from collections.abc import Callable
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from pydantic import BaseModel
from pydantic import Field
from pydantic import field_validator

from app import settings
from app.common_models import NoiseModel
from app.common_models import StopMetric
from app.grids import ImageGrid
from app.grids import ensure_finite
from app.grids import max_abs_diff
from app.grids import require_same_shape
from app.kernels.contourlet import ContourletCoeffs
from app.kernels.contourlet import check_contourlet_shape
from app.kernels.contourlet import check_level_spec
from app.kernels.contourlet import clamp_coefficients
from app.kernels.contourlet import ct_analyze
from app.kernels.contourlet import ct_synthesize
from app.kernels.tv_projection import ChambolleOpts
from app.kernels.tv_projection import DualField
from app.kernels.tv_projection import project_G
from app.kernels.wavelet import WaveletCoeffs
from app.kernels.wavelet import check_wavelet_shape
from app.kernels.wavelet import clamp_details
from app.kernels.wavelet import dwt_analyze
from app.kernels.wavelet import dwt_synthesize

NoiseCoefficients = ContourletCoeffs | WaveletCoeffs
Triple = tuple[ImageGrid, ImageGrid, ImageGrid]


class DecompParams(BaseModel):
    lam: float = Field(default=settings.DEFAULT_LAMBDA, gt=0.0, allow_inf_nan=False)
    mu: float = Field(default=settings.DEFAULT_MU, gt=0.0, allow_inf_nan=False)
    # 0 turns the noise step off
    delta: float = Field(default=settings.DEFAULT_DELTA, ge=0.0, allow_inf_nan=False)
    eps: float = Field(default=settings.DEFAULT_EPS, gt=0.0, allow_inf_nan=False)
    n_step: int = Field(default=settings.DEFAULT_N_STEP, ge=1)
    level_spec: list[int] = Field(default_factory=lambda: list(settings.DEFAULT_LEVELS))
    inner: ChambolleOpts = Field(default_factory=ChambolleOpts)
    noise_model: NoiseModel = NoiseModel.CONTOURLET
    stop_metric: StopMetric = StopMetric.MAX_ABS
    lp_filter: str = settings.DEFAULT_LP_FILTER
    dfb_filter: str = settings.DEFAULT_DFB_FILTER
    wavelet: str = settings.DEFAULT_WAVELET

    @field_validator("level_spec")
    @classmethod
    def validate_level_spec(cls, value: list[int]) -> list[int]:
        check_level_spec(value)
        return value


@dataclass
class TraceRecord:
    iteration: int
    du: float
    dv: float
    dw: float
    v_converged: bool
    u_converged: bool
    additivity_error: float
    v_witness_max: float
    residual_witness_max: float
    noise_coefficient_max: float


@dataclass
class ConvergenceCheck:
    converged: bool
    du: float
    dv: float
    dw: float


@dataclass
class DecompResult:
    u: ImageGrid
    v: ImageGrid
    w: ImageGrid
    residual: ImageGrid
    trace: list[TraceRecord]
    iterations: int
    converged: bool
    v_witness: DualField
    residual_witness: DualField
    noise_coefficients: NoiseCoefficients | None = None


@dataclass
class TwoComponentResult:
    u: ImageGrid
    v: ImageGrid
    residual: ImageGrid
    trace: list[TraceRecord] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    v_witness: DualField | None = None
    residual_witness: DualField | None = None


def _difference(a: ImageGrid, b: ImageGrid, metric: StopMetric) -> float:
    if metric is StopMetric.RMS:
        return float(np.sqrt(np.mean(np.square(a - b))))
    return max_abs_diff(a, b)


def convergence_check(
    prev: Triple,
    current: Triple,
    eps: float,
    metric: StopMetric = StopMetric.MAX_ABS,
) -> ConvergenceCheck:
    for old, new in zip(prev, current):
        require_same_shape(old, new)

    du, dv, dw = (_difference(new, old, metric) for old, new in zip(prev, current))
    return ConvergenceCheck(
        converged=max(du, dv, dw) <= eps,
        du=du,
        dv=dv,
        dw=dw,
    )


def _contourlet_noise(
    g: ImageGrid,
    threshold: float,
    params: DecompParams,
) -> tuple[ImageGrid, NoiseCoefficients]:
    # g - CST(g, t) is the synthesis of the clamped directional coefficients
    coeffs = ct_analyze(g, params.level_spec, params.lp_filter, params.dfb_filter)
    noise = clamp_coefficients(coeffs, threshold)
    return ct_synthesize(noise, params.lp_filter, params.dfb_filter), noise


def _wavelet_noise(
    g: ImageGrid,
    threshold: float,
    params: DecompParams,
) -> tuple[ImageGrid, NoiseCoefficients]:
    coeffs = dwt_analyze(g, len(params.level_spec), params.wavelet)
    noise = clamp_details(coeffs, threshold)
    return dwt_synthesize(noise), noise


NOISE_STEPS: dict[
    NoiseModel,
    Callable[[ImageGrid, float, DecompParams], tuple[ImageGrid, NoiseCoefficients]],
] = {
    NoiseModel.CONTOURLET: _contourlet_noise,
    NoiseModel.WAVELET: _wavelet_noise,
}


def check_decomposition_shape(shape: tuple[int, ...], params: DecompParams) -> None:
    if params.noise_model is NoiseModel.CONTOURLET:
        check_contourlet_shape(shape, params.level_spec)
    else:
        check_wavelet_shape(shape, len(params.level_spec))


def decompose_uvw(f: ImageGrid, params: DecompParams) -> DecompResult:
    """\
    Split f into structures u, textures v and noise w.

    Every iteration runs, in order:
      w <- (f - u - v) - CST(f - u - v, 2 delta)
      v <- P_G(mu)(f - u - w)
      u <- (f - v - w) - P_G(lambda)(f - v - w)
    and stops once the change of every component is within eps, or after
    n_step iterations. The residual is the last P_G(lambda) output, so
    f = u + v + w + residual.
    """
    f = ensure_finite(f, "input image")
    check_decomposition_shape(f.shape, params)
    noise_step = NOISE_STEPS[params.noise_model]
    threshold = 2.0 * params.delta

    u = np.zeros_like(f)
    v = np.zeros_like(f)
    w = np.zeros_like(f)
    residual = np.zeros_like(f)
    v_witness: DualField | None = None
    residual_witness: DualField | None = None
    noise_coefficients: NoiseCoefficients | None = None
    trace: list[TraceRecord] = []
    converged = False

    for iteration in range(1, params.n_step + 1):
        w_next, noise_coefficients = noise_step(f - u - v, threshold, params)
        v_next, v_witness = project_G(f - u - w_next, params.mu, params.inner)
        structured = f - v_next - w_next
        residual, residual_witness = project_G(structured, params.lam, params.inner)
        u_next = structured - residual

        for name, component in (("u", u_next), ("v", v_next), ("w", w_next)):
            ensure_finite(component, name)

        check = convergence_check(
            (u, v, w),
            (u_next, v_next, w_next),
            params.eps,
            params.stop_metric,
        )
        record = TraceRecord(
            iteration=iteration,
            du=check.du,
            dv=check.dv,
            dw=check.dw,
            v_converged=v_witness.converged,
            u_converged=residual_witness.converged,
            additivity_error=max_abs_diff(f, u_next + v_next + w_next + residual),
            v_witness_max=v_witness.max_magnitude,
            residual_witness_max=residual_witness.max_magnitude,
            noise_coefficient_max=noise_coefficients.max_directional_magnitude(),
        )
        trace.append(record)
        logging.debug("Decomposition iteration", extra=asdict(record))

        u, v, w = u_next, v_next, w_next
        if check.converged:
            converged = True
            break

    assert v_witness is not None and residual_witness is not None

    logging.info(
        "Decomposition finished",
        extra={
            "iterations": len(trace),
            "converged": converged,
            "noise_model": params.noise_model.value,
            "shape": list(f.shape),
        },
    )
    return DecompResult(
        u=u,
        v=v,
        w=w,
        residual=residual,
        trace=trace,
        iterations=len(trace),
        converged=converged,
        v_witness=v_witness,
        residual_witness=residual_witness,
        noise_coefficients=noise_coefficients,
    )


def decompose_uv(
    f: ImageGrid,
    lam: float = settings.DEFAULT_LAMBDA,
    mu: float = settings.DEFAULT_MU,
    eps: float = settings.DEFAULT_EPS,
    n_step: int = settings.DEFAULT_N_STEP,
    inner: ChambolleOpts | None = None,
    stop_metric: StopMetric = StopMetric.MAX_ABS,
) -> TwoComponentResult:
    """\
    Two-component structures + textures split:
      v <- P_G(mu)(f - u)
      u <- (f - v) - P_G(lambda)(f - v)
    with the same stop rule as `decompose_uvw`.
    """
    if min(lam, mu, eps) <= 0 or n_step < 1 or not math.isfinite(lam + mu + eps):
        raise ValueError("lam, mu and eps must be positive and n_step at least 1")

    f = ensure_finite(f, "input image")
    inner = inner or ChambolleOpts()
    zeros = np.zeros_like(f)

    result = TwoComponentResult(u=zeros.copy(), v=zeros.copy(), residual=zeros.copy())
    for iteration in range(1, n_step + 1):
        u, v = result.u, result.v
        v_next, v_witness = project_G(f - u, mu, inner)
        residual, residual_witness = project_G(f - v_next, lam, inner)
        u_next = f - v_next - residual

        ensure_finite(u_next, "u")
        ensure_finite(v_next, "v")

        check = convergence_check((u, v, zeros), (u_next, v_next, zeros), eps, stop_metric)
        result.trace.append(
            TraceRecord(
                iteration=iteration,
                du=check.du,
                dv=check.dv,
                dw=0.0,
                v_converged=v_witness.converged,
                u_converged=residual_witness.converged,
                additivity_error=max_abs_diff(f, u_next + v_next + residual),
                v_witness_max=v_witness.max_magnitude,
                residual_witness_max=residual_witness.max_magnitude,
                noise_coefficient_max=0.0,
            ),
        )
        result.u, result.v, result.residual = u_next, v_next, residual
        result.v_witness, result.residual_witness = v_witness, residual_witness
        result.iterations = iteration
        if check.converged:
            result.converged = True
            break

    logging.info(
        "Two-component decomposition finished",
        extra={"iterations": result.iterations, "converged": result.converged},
    )
    return result
