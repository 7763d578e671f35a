"""Squeezed dark-state polaritons: noise partition, correlations and entanglement.

Three independent routes compute the same statistics: closed forms
(``single_lambda``, ``double_lambda``), Gaussian covariance matrices
(``gaussian``) and truncated Fock-space kets (``fock``).
"""

from .double_lambda import DoubleLambdaParams, DoubleLambdaReport, double_lambda_report
from .dynamics import ControlSchedule, PolaritonTrajectory, evolve, group_velocity_ratio
from .fock import FockSpace, KetVector, TruncationError, squeezed_vacuum_ket
from .gaussian import (
    CovarianceState,
    ModeDecomposition,
    QuadratureReport,
    SqueezeSpec,
    quadrature_report,
    squeeze_along_mode,
    vacuum_state,
)
from .scan import PRESETS, Axis, GridSpec, RegionResult, SweepTable, region, sweep
from .single_lambda import SingleLambdaParams, SingleLambdaReport, single_lambda_report

__all__ = [
    "PRESETS",
    "Axis",
    "ControlSchedule",
    "CovarianceState",
    "DoubleLambdaParams",
    "DoubleLambdaReport",
    "FockSpace",
    "GridSpec",
    "KetVector",
    "ModeDecomposition",
    "PolaritonTrajectory",
    "QuadratureReport",
    "RegionResult",
    "SingleLambdaParams",
    "SingleLambdaReport",
    "SqueezeSpec",
    "SweepTable",
    "TruncationError",
    "double_lambda_report",
    "evolve",
    "group_velocity_ratio",
    "quadrature_report",
    "region",
    "single_lambda_report",
    "squeeze_along_mode",
    "squeezed_vacuum_ket",
    "sweep",
    "vacuum_state",
]
