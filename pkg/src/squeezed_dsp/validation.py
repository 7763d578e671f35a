"""Three-way cross-validation: closed forms vs Gaussian covariance vs Fock ket.

Each backend produces the same report type, so the comparison is field by
field. Atomic quantities are rescaled from the bosonic mode b = sqrt(N) sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from . import double_lambda as dl
from . import single_lambda as sl
from .fock import (
    DEFAULT_MAX_TAIL,
    FockSpace,
    TruncationError,
    default_cutoff,
    quadrature_stats,
    squeezed_vacuum_ket,
)
from .gaussian import (
    QuadratureReport,
    SqueezeSpec,
    duan_from_report,
    quadrature_report,
    squeeze_along_mode,
    vacuum_state,
)

GAUSSIAN_TOL = 1e-12
FOCK_TOL = 1e-6


def fock_tail_tolerance(tail: float, cutoff: int) -> float:
    """Tail-scaled agreement bound for Fock statistics.

    Each discarded basis state carries a quadrature second moment of about
    4n + 2 with n near the cutoff, so the error grows like cutoff * tail.
    """
    return max(FOCK_TOL, 6.0 * (cutoff + 20) * tail)

_INPUT_FIELDS = {"x", "y1", "y2", "n_atoms", "r", "delta", "theta", "phi"}


def single_from_quadratures(
    params: sl.SingleLambdaParams, spec: SqueezeSpec, q: QuadratureReport
) -> sl.SingleLambdaReport:
    n = params.n_atoms
    rn = math.sqrt(n)
    fx, fy = float(q.var_x[0]), float(q.var_y[0])
    ax, ay = float(q.var_x[1]) / n, float(q.var_y[1]) / n
    cx, cy = float(q.corr_xx[0, 1]) / rn, float(q.corr_yy[0, 1]) / rn
    v_cs = 2.0 + 2.0 / n
    ic = duan_from_report(q, 0, 1, 1.0 / rn) / v_cs
    return sl.SingleLambdaReport(
        x=params.x,
        n_atoms=n,
        r=spec.r,
        delta=spec.delta,
        theta=sl.mixing_angle(params),
        var_x_field=fx,
        var_y_field=fy,
        var_x_atom=ax,
        var_y_atom=ay,
        corr_x=cx,
        corr_y=cy,
        f_value=(ic - 1.0) * (params.x**2 + n) * (1.0 + 1.0 / n) / 2.0,
        ic_normalized=ic,
        v_total=fx + fy + ax + ay,
        v_cs=v_cs,
        c_corr=2.0 * cx - 2.0 * cy,
    )


def double_from_quadratures(
    params: dl.DoubleLambdaParams, spec: SqueezeSpec, q: QuadratureReport
) -> dl.DoubleLambdaReport:
    n = params.n_atoms
    rn = math.sqrt(n)
    den = params.denominator
    theta, phi = dl.mixing_angles(params)
    ic_fa1 = duan_from_report(q, 0, 2, 1.0 / rn) / (2.0 + 2.0 / n)
    ic_fa2 = duan_from_report(q, 1, 2, 1.0 / rn) / (2.0 + 2.0 / n)
    ic_ff = duan_from_report(q, 0, 1, 1.0) / 4.0
    return dl.DoubleLambdaReport(
        y1=params.y1,
        y2=params.y2,
        n_atoms=n,
        r=spec.r,
        delta=spec.delta,
        theta=theta,
        phi=phi,
        var_x_1=float(q.var_x[0]),
        var_x_2=float(q.var_x[1]),
        var_x_atom=float(q.var_x[2]) / n,
        var_y_1=float(q.var_y[0]),
        var_y_2=float(q.var_y[1]),
        var_y_atom=float(q.var_y[2]) / n,
        corr_x_12=float(q.corr_xx[0, 1]),
        corr_x_1s=float(q.corr_xx[0, 2]) / rn,
        corr_x_2s=float(q.corr_xx[1, 2]) / rn,
        corr_y_12=float(q.corr_yy[0, 1]),
        corr_y_1s=float(q.corr_yy[0, 2]) / rn,
        corr_y_2s=float(q.corr_yy[1, 2]) / rn,
        g1=(ic_fa1 - 1.0) * den * (1.0 + 1.0 / n) / 2.0,
        g2=(ic_fa2 - 1.0) * den * (1.0 + 1.0 / n) / 2.0,
        h=(ic_ff - 1.0) * den,
        ic_fa1=ic_fa1,
        ic_fa2=ic_fa2,
        ic_ff=ic_ff,
    )


def _model_parts(params):
    if isinstance(params, sl.SingleLambdaParams):
        return 2, sl.polariton_decomposition(params), single_from_quadratures
    if isinstance(params, dl.DoubleLambdaParams):
        return 3, dl.polariton_decomposition(params), double_from_quadratures
    raise TypeError(f"unsupported parameter type {type(params).__name__}")


def closed_form_report(params, spec: SqueezeSpec):
    if isinstance(params, sl.SingleLambdaParams):
        return sl.single_lambda_report(params, spec)
    return dl.double_lambda_report(params, spec)


def gaussian_quadratures(params, spec: SqueezeSpec) -> QuadratureReport:
    """Mode statistics over (fields..., b) from the covariance route."""
    n_modes, direction, _ = _model_parts(params)
    return quadrature_report(squeeze_along_mode(vacuum_state(n_modes), direction, spec))


def fock_quadratures(
    params, spec: SqueezeSpec, cutoff: int | None = None, max_tail: float = DEFAULT_MAX_TAIL
) -> tuple[QuadratureReport, float]:
    """Mode statistics measured on the truncated Fock ket; returns (stats, tail)."""
    n_modes, direction, _ = _model_parts(params)
    space = FockSpace(n_modes, cutoff or default_cutoff(n_modes))
    ket = squeezed_vacuum_ket(space, direction, spec, max_tail=max_tail)
    return quadrature_stats(ket, space), ket.tail


def gaussian_report(params, spec: SqueezeSpec):
    """Report read off the covariance of the squeezed polariton vacuum."""
    _, _, build = _model_parts(params)
    return build(params, spec, gaussian_quadratures(params, spec))


def fock_report(params, spec: SqueezeSpec, cutoff: int | None = None, max_tail: float = DEFAULT_MAX_TAIL):
    """Report measured on the truncated Fock ket; returns (report, tail)."""
    _, _, build = _model_parts(params)
    stats, tail = fock_quadratures(params, spec, cutoff, max_tail)
    return build(params, spec, stats), tail


def quadrature_deviation(a: QuadratureReport, b: QuadratureReport) -> tuple[float, str]:
    """Largest entry-wise difference between two sets of mode statistics."""
    worst, name = -1.0, ""
    for key in ("var_x", "var_y", "corr_xx", "corr_yy"):
        diff = np.abs(getattr(a, key) - getattr(b, key))
        idx = np.unravel_index(np.argmax(diff), diff.shape)
        if diff[idx] > worst:
            worst, name = float(diff[idx]), f"{key}{list(idx)}"
    return worst, name


def report_fields(report) -> dict:
    return {f.name: getattr(report, f.name) for f in fields(report) if f.name not in _INPUT_FIELDS}


def max_deviation(a, b) -> tuple[float, str]:
    fa, fb = report_fields(a), report_fields(b)
    worst, name = 0.0, ""
    for k, va in fa.items():
        dev = abs(va - fb[k])
        if dev > worst or not name:
            worst, name = dev, k
    return worst, name


@dataclass
class PointCheck:
    params: object
    spec: SqueezeSpec
    closed: object
    gaussian: object
    fock: object | None
    tail: float | None
    gaussian_dev: float
    gaussian_field: str
    fock_dev: float | None = None
    fock_field: str | None = None
    fock_error: str | None = None
    fock_tolerance: float = FOCK_TOL

    @property
    def gaussian_ok(self) -> bool:
        return self.gaussian_dev <= GAUSSIAN_TOL

    @property
    def fock_ok(self) -> bool:
        return self.fock_error is None and self.fock_dev is not None and self.fock_dev <= self.fock_tolerance

    @property
    def ok(self) -> bool:
        return self.gaussian_ok and (self.fock is None and self.fock_error is None or self.fock_ok)


def check_point(
    params,
    spec: SqueezeSpec,
    cutoff: int | None = None,
    with_fock: bool = True,
    max_tail: float = DEFAULT_MAX_TAIL,
    tail_scaled: bool = True,
) -> PointCheck:
    """Compare the three routes at one parameter point.

    Closed forms and the Gaussian route are compared on every report field.
    The Fock route is compared with the Gaussian one on the raw mode
    statistics (fields and b = sqrt(N) sigma). With ``tail_scaled`` the Fock
    tolerance is ``fock_tail_tolerance``; otherwise it is a flat 1e-6.
    """
    _, _, build = _model_parts(params)
    closed = closed_form_report(params, spec)
    gq = gaussian_quadratures(params, spec)
    gauss = build(params, spec, gq)
    gdev, gname = max_deviation(closed, gauss)
    out = PointCheck(params, spec, closed, gauss, None, None, gdev, gname)
    if not with_fock:
        return out
    try:
        fq, tail = fock_quadratures(params, spec, cutoff, max_tail=max_tail)
    except TruncationError as exc:
        out.fock_error = str(exc)
        out.tail = exc.tail
        return out
    out.fock, out.tail = build(params, spec, fq), tail
    out.fock_dev, out.fock_field = quadrature_deviation(gq, fq)
    if tail_scaled:
        n_modes = 2 if isinstance(params, sl.SingleLambdaParams) else 3
        out.fock_tolerance = fock_tail_tolerance(tail, cutoff or default_cutoff(n_modes))
    return out


def random_single_params(rng: np.random.Generator, r_max: float = 1.2):
    params = sl.SingleLambdaParams(rng.uniform(0, 10), rng.uniform(1, 100))
    return params, SqueezeSpec(rng.uniform(0, r_max), rng.uniform(0, 2 * math.pi))


def random_double_params(rng: np.random.Generator, r_max: float = 1.2):
    params = dl.DoubleLambdaParams(rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(1, 100))
    return params, SqueezeSpec(rng.uniform(0, r_max), rng.uniform(0, 2 * math.pi))


def preset_points() -> list:
    """Fixed parameter points used by the worked examples."""
    return [
        (sl.SingleLambdaParams(1.0, 10.0), SqueezeSpec(1.0, 0.0)),
        (sl.SingleLambdaParams(0.3, 10.0), SqueezeSpec(1.0, 0.0)),
        (sl.SingleLambdaParams(math.sqrt(10.0), 10.0), SqueezeSpec(0.5, 0.0)),
        (sl.SingleLambdaParams(2.0, 5.0), SqueezeSpec(0.6, math.pi / 2)),
        (dl.DoubleLambdaParams(1.0, 1.0, 10.0), SqueezeSpec(0.5, 0.0)),
        (dl.DoubleLambdaParams(1.0, 1.0, 10.0), SqueezeSpec(0.5, math.pi)),
        (dl.DoubleLambdaParams(2.0, 0.5, 4.0), SqueezeSpec(0.4, 1.0)),
    ]
