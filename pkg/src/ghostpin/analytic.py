"""Closed-form design model of the lensless biphoton ghost imager.

Everything here is paraxial and uses the Gaussian surrogate of the
phase-matching sinc.  The two complex parameters ``alpha1`` [m^2] and
``alpha2`` [-] determine the Gaussian ghost image of a point-like slit:

    sigma_G = [2 Re(1/alpha1)]^(-1/2)
    x0 / a  = Re(alpha2/alpha1) / Re(1/alpha1)
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import BoundsInvalid, DegenerateAlpha, NonPositiveRealPart, ZeroMagnification
from .setup import validate_setup

#: sinc(u) ~ exp(-SINC_GAUSS_FACTOR * u) for u = dk_z l_z / 2 >= 0
SINC_GAUSS_FACTOR = 0.455
#: the factor as it appears in the alpha formulas (u carries l_z/2 and k^2/(2k) -> /4)
GAMMA = SINC_GAUSS_FACTOR / 4
DEFAULT_THRESHOLD = 0.4


def _crystal_term(vs, wavelength: float) -> float:
    return GAMMA * vs.l_z / math.pi * wavelength


def alphas(setup) -> tuple:
    """Return ``(alpha1, alpha2)`` for ``setup``."""
    vs = validate_setup(setup)
    two_pi = 2 * math.pi
    cross = vs.sigma_p**2 - _crystal_term(vs, vs.lambda_p)
    denom = vs.sigma_p**2 + _crystal_term(vs, vs.lambda_s - vs.lambda_p) + 1j * vs.d * vs.lambda_s / two_pi
    if abs(denom) < 1e-30:
        raise DegenerateAlpha("alpha2 denominator vanishes")
    alpha2 = cross / denom
    alpha1 = (
        vs.sigma_p**2
        + _crystal_term(vs, vs.lambda_i - vs.lambda_p)
        + 1j * vs.lambda_i * vs.z_i / two_pi
        - cross * alpha2
    )
    if abs(alpha1) < 1e-30:
        raise DegenerateAlpha("alpha1 vanishes")
    return complex(alpha1), complex(alpha2)


def _re_inv_alpha1(alpha1: complex) -> float:
    re = (1 / alpha1).real
    if not re > 0:
        raise NonPositiveRealPart(f"Re(1/alpha1) = {re:.3g} is not positive")
    return re


def sigma_g(setup) -> float:
    """Width of the ghost image of an infinitesimal slit."""
    a1, _ = alphas(setup)
    return (2 * _re_inv_alpha1(a1)) ** -0.5


def magnification(setup) -> float:
    """``x0 / a``; independent of the slit position."""
    a1, a2 = alphas(setup)
    return (a2 / a1).real / _re_inv_alpha1(a1)


def image_position(a: float, setup) -> float:
    """Centre ``x0`` of the ghost image of a slit at ``x_S = a``."""
    return a * magnification(setup)


def magnification_farfield(setup) -> float:
    """Pinhole-camera magnification ``-(z_I / d) (lambda_I / lambda_S)``.

    Warns when the far-field premises are not met by a factor of ten.
    """
    vs = validate_setup(setup)
    crystal = GAMMA * vs.l_z / math.pi * (max(vs.lambda_s, vs.lambda_i) - vs.lambda_p)
    sp2 = vs.sigma_p**2
    far = min(vs.d * vs.lambda_s, vs.z_i * vs.lambda_i) / (2 * math.pi)
    if sp2 < 10 * crystal or far < 10 * sp2:
        warnings.warn(
            "far-field magnification used outside its premises "
            f"(sigma_p^2 / crystal = {sp2 / crystal:.3g}, far-field / sigma_p^2 = {far / sp2:.3g})",
            stacklevel=2,
        )
    return -(vs.z_i / vs.d) * (vs.lambda_i / vs.lambda_s)


def pinhole_sigma0(setup) -> float:
    """Effective pinhole size of the biphoton source."""
    vs = validate_setup(setup)
    return math.sqrt(
        vs.sigma_p**2 / 2 + GAMMA * (vs.lambda_i / vs.lambda_s) * (vs.lambda_p * vs.l_z / (2 * math.pi))
    )


def sigma_g_farfield(sigma_0: float, z_i: float, lambda_i: float) -> float:
    """Ghost-image width for an object at infinity."""
    return math.sqrt(sigma_0**2 + (z_i * lambda_i / (4 * math.pi)) ** 2 / sigma_0**2)


@dataclass(frozen=True)
class OptimalSource:
    sigma_0_star: float
    sigma_g_min: float


def optimal_source(z_i: float, lambda_i: float) -> OptimalSource:
    if not (z_i > 0 and lambda_i > 0):
        raise ValueError("z_i and lambda_i must be positive")
    s0 = math.sqrt(z_i * lambda_i / (4 * math.pi))
    return OptimalSource(s0, math.sqrt(2) * s0)


def resolution(setup, threshold: float = DEFAULT_THRESHOLD) -> float:
    """Smallest separation of two point slits whose images dip below ``threshold``."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    a1, a2 = alphas(setup)
    re_inv = _re_inv_alpha1(a1)
    m = (a2 / a1).real
    if abs(m) < 1e-30:
        raise ZeroMagnification("Re(alpha2/alpha1) vanishes")
    return 2 * math.sqrt(-math.log(threshold / 2) * re_inv) / abs(m)


def n_modes(setup, sigma_s: float, threshold: float = DEFAULT_THRESHOLD) -> float:
    """Number of resolvable spots inside an illumination of width ``sigma_s``."""
    return sigma_s / resolution(setup, threshold)


@dataclass(frozen=True)
class AnalyticReport:
    alpha1: complex
    alpha2: complex
    sigma_g: float
    magnification: float
    magnification_farfield: float
    sigma_0: float
    resolution_r: float
    n_modes: Optional[float]
    sigma_s_used: Optional[float]
    threshold: float
    rayleigh_length: float

    def as_dict(self) -> dict:
        return asdict(self)


def report(setup, threshold: float = DEFAULT_THRESHOLD, sigma_s: Optional[float] = None) -> AnalyticReport:
    vs = validate_setup(setup)
    a1, a2 = alphas(vs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        m_ff = magnification_farfield(vs)
    mag = magnification(vs)
    if mag >= 0:
        warnings.warn(f"non-negative magnification {mag:.3g}", stacklevel=2)
    r = resolution(vs, threshold)
    return AnalyticReport(
        alpha1=a1,
        alpha2=a2,
        sigma_g=sigma_g(vs),
        magnification=mag,
        magnification_farfield=m_ff,
        sigma_0=pinhole_sigma0(vs),
        resolution_r=r,
        n_modes=None if sigma_s is None else sigma_s / r,
        sigma_s_used=sigma_s,
        threshold=threshold,
        rayleigh_length=vs.rayleigh_length,
    )


# --------------------------------------------------------------------------
# pump-width optimisation

INV_PHI = (math.sqrt(5) - 1) / 2
SCAN_POINTS = 32


@dataclass(frozen=True)
class OptimizeResult:
    sigma_p_star: float
    value: float
    multimodal: bool
    evaluations: int


def golden_section(f: Callable[[float], float], lo: float, hi: float, rtol: float = 1e-4):
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x), n_evals)``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    n = 2
    while (b - a) > rtol * abs(c + d) / 2:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        n += 1
    x = (a + b) / 2
    return x, f(x), n + 1


def objective_function(setup, objective: str, threshold: float = DEFAULT_THRESHOLD) -> Callable[[float], float]:
    vs = validate_setup(setup)
    if objective == "sigma_g":
        return lambda sp: sigma_g(vs.setup.replace(sigma_p=sp))
    if objective == "resolution":
        return lambda sp: resolution(vs.setup.replace(sigma_p=sp), threshold)
    raise ValueError(f"unknown objective {objective!r}")


def optimize_pump_width(
    setup, objective: str = "resolution", bounds: Sequence[float] = (20e-6, 2e-3), threshold: float = DEFAULT_THRESHOLD
) -> OptimizeResult:
    """Minimise ``objective`` over the pump width.

    A 32-point geometric scan brackets the minimum; golden-section search then
    refines it to 1e-4 relative.  If the scan shows more than one local
    minimum the best bracket is still refined but ``multimodal`` is set.
    """
    lo, hi = (float(b) for b in bounds)
    if not (0 < lo < hi and math.isfinite(hi)):
        raise BoundsInvalid(f"bounds must satisfy 0 < lo < hi, got {bounds!r}")
    f = objective_function(setup, objective, threshold)
    xs = np.geomspace(lo, hi, SCAN_POINTS)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vals = np.array([f(x) for x in xs])
    interior = (vals[1:-1] < vals[:-2]) & (vals[1:-1] < vals[2:])
    multimodal = int(interior.sum()) > 1
    i = int(np.argmin(vals))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, SCAN_POINTS - 1)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        x, fx, n = golden_section(f, a, b)
    if vals[i] < fx:
        x, fx = xs[i], vals[i]
    return OptimizeResult(float(x), float(fx), multimodal, SCAN_POINTS + n)
