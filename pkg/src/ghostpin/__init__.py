"""Lensless (pinhole) quantum ghost imaging with SPDC biphotons."""

__version__ = "0.1.0"

from .exceptions import ConfigError, GhostpinError, NumericalError  # noqa: E402
from .setup import OpticalSetup, PhaseMatchingModel, PropagationMode, validate_setup  # noqa: E402
from .grid import SpectralGrid, auto_grid, fit_gaussian, make_grid, moment_width  # noqa: E402
from .source import BiphotonAmplitude, psi_spdc  # noqa: E402
from .propagation import apply_transfer, transfer  # noqa: E402
from .objects import ObjectSpec, ObjectTransmission, delta_slit, double_slit, read_object_csv, slit, uniform  # noqa: E402
from .engine import compute_jsp, ghost_pattern, illumination_width, visibility  # noqa: E402
from .analytic import optimize_pump_width, report, resolution  # noqa: E402
from .estimator import GhostImager  # noqa: E402

__all__ = [
    "GhostpinError", "ConfigError", "NumericalError",
    "OpticalSetup", "PropagationMode", "PhaseMatchingModel", "validate_setup",
    "SpectralGrid", "make_grid", "auto_grid", "fit_gaussian", "moment_width",
    "BiphotonAmplitude", "psi_spdc", "transfer", "apply_transfer",
    "ObjectSpec", "ObjectTransmission", "uniform", "slit", "delta_slit", "double_slit", "read_object_csv",
    "compute_jsp", "ghost_pattern", "illumination_width", "visibility",
    "resolution", "report", "optimize_pump_width", "GhostImager",
]
