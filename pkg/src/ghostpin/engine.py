"""Joint spatial probability, bucket-detector ghost pattern, and illumination width.

The pipeline for ``compute_jsp`` is the k-space convolution with the object
spectrum rewritten as a multiplication in position space:

1. propagate the signal axis to the object (``h_1S``),
2. go to ``x_S``, multiply by ``T_o(x_S)``, come back to ``k_S``,
3. propagate the signal to the bucket (``h_2S``) and the idler to its detector (``h_I``),
4. transform both axes to position and take ``|.|^2``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.signal import find_peaks

from .exceptions import FitDiverged, GridUndersampled, NotBimodal, WrongRepresentation
from .grid import (
    GaussianFit,
    Profile1D,
    SpectralGrid,
    fit_gaussian,
    make_grid,
    moment_width,
    next_pow2,
    to_position,
    to_wavevector,
)
from .objects import ObjectTransmission
from .propagation import transfer
from .setup import PhaseMatchingModel, validate_setup
from .source import BiphotonAmplitude, amplitude_block

#: fraction of mass allowed within EDGE_SAMPLES of a window boundary
ALIAS_FRACTION = 1e-3
EDGE_SAMPLES = 3


@dataclass(frozen=True)
class JspResult:
    """Normalised joint spatial probability over ``(x_S, x_I)``.

    ``raw_mass`` is the mass before normalisation (``||psi||^2`` times the
    object throughput).  ``signal_edge_fraction`` is informational: wrap-around
    on the signal axis behind the object does not change the ghost pattern.
    """

    values: np.ndarray
    grid: SpectralGrid
    setup: object
    raw_mass: float
    normalization: str = "unit_mass"
    signal_edge_fraction: float = 0.0
    object_descriptor: str = ""

    def mass(self) -> float:
        return float(self.values.sum() * self.grid.dx_s * self.grid.dx_i)


@dataclass(frozen=True)
class GhostPattern:
    profile: Profile1D
    provenance: dict = field(default_factory=dict)

    @property
    def x(self) -> np.ndarray:
        return self.profile.coordinates

    @property
    def values(self) -> np.ndarray:
        return self.profile.values


def edge_fraction(marginal: np.ndarray, n_edge: int = EDGE_SAMPLES) -> float:
    total = marginal.sum()
    if not total > 0:
        return 0.0
    return float((marginal[:n_edge].sum() + marginal[-n_edge:].sum()) / total)


def _check_edges(marginal: np.ndarray, where: str, check: bool) -> float:
    frac = edge_fraction(marginal)
    if check and frac >= ALIAS_FRACTION:
        raise GridUndersampled(
            f"{frac:.2%} of the mass sits within {EDGE_SAMPLES} samples of the {where} window edge; "
            "enlarge the window"
        )
    return frac


def compute_jsp(
    psi: BiphotonAmplitude,
    obj: ObjectTransmission,
    setup,
    grid: Optional[SpectralGrid] = None,
    *,
    check_aliasing: bool = True,
) -> JspResult:
    """Joint spatial probability at the two detector planes.

    Raises
    ------
    WrongRepresentation
        ``psi`` is not in the (k_s, k_i) representation.
    GridUndersampled
        The aliasing sentinel fired on the signal axis at the object plane
        or on the idler axis at the detector.
    """
    vs = validate_setup(setup)
    grid = grid or psi.grid
    if psi.representation != "kk":
        raise WrongRepresentation(f"compute_jsp needs a kk amplitude, got {psi.representation!r}")
    if psi.grid != grid or obj.grid != grid:
        raise ValueError("psi, object and grid must share one grid")
    mode = vs.propagation_mode
    g = grid

    h1 = transfer(g.k_s, vs.d, vs.lambda_s, mode)
    field_ = psi.data * h1[:, None]
    field_ = to_position(field_, 0, g.dx_s, g.dk_s)
    _check_edges(np.sum(np.abs(field_) ** 2, axis=1), "signal (object plane)", check_aliasing)

    field_ *= obj.samples[:, None]
    field_ = to_wavevector(field_, 0, g.dx_s, g.dk_s)
    h2 = transfer(g.k_s, vs.z_s - vs.d, vs.lambda_s, mode)
    hi = transfer(g.k_i, vs.z_i, vs.lambda_i, mode)
    field_ *= h2[:, None]
    field_ *= hi[None, :]
    field_ = to_position(field_, 0, g.dx_s, g.dk_s)
    field_ = to_position(field_, 1, g.dx_i, g.dk_i)

    jsp = np.abs(field_) ** 2
    raw = float(jsp.sum() * g.dx_s * g.dx_i)
    if not raw > 0:
        raise GridUndersampled("no biphoton amplitude passes the object on this grid")
    jsp /= raw
    _check_edges(jsp.sum(axis=0), "idler (detector plane)", check_aliasing)
    sig_frac = edge_fraction(jsp.sum(axis=1))
    return JspResult(
        values=jsp,
        grid=g,
        setup=vs,
        raw_mass=raw,
        signal_edge_fraction=sig_frac,
        object_descriptor=obj.descriptor,
    )


def ghost_pattern(jsp: JspResult) -> GhostPattern:
    """Bucket-detector pattern ``G(x_I) = sum_xS JSP dx_S``; unit mass."""
    g = jsp.grid
    values = jsp.values.sum(axis=0) * g.dx_s
    prof = Profile1D(g.x_i.copy(), values, label="x_I")
    return GhostPattern(
        prof,
        provenance={"setup": jsp.setup.setup.as_dict(), "object": jsp.object_descriptor, "grid": g.as_dict()},
    )


# --------------------------------------------------------------------------
# signal illumination at the object


@dataclass(frozen=True)
class IlluminationWidth:
    sigma_s: float
    method: str  # "fit" or "moment"
    profile: Profile1D
    fit: Optional[GaussianFit] = None

    @property
    def flagged(self) -> bool:
        return self.method != "fit"


def _gaussian_model_signal_kstd(vs) -> float:
    """k-space std of the signal marginal in the Gaussian phase-matching model."""
    from .analytic import GAMMA

    t = GAMMA * vs.l_z / math.pi
    a = vs.sigma_p**2 + t * (vs.lambda_s - vs.lambda_p)
    c = vs.sigma_p**2 - t * vs.lambda_p
    b = vs.sigma_p**2 + t * (vs.lambda_i - vs.lambda_p)
    return 1 / math.sqrt(2 * (a - c * c / b))


def illumination_grid(setup, *, max_size: int = 2**16) -> SpectralGrid:
    """Grid wide enough for the full signal illumination at the object plane."""
    vs = validate_setup(setup)
    kstd = _gaussian_model_signal_kstd(vs)
    sinc = vs.pm_model is PhaseMatchingModel.SINC
    kmax_s = (8 if sinc else 6) * kstd
    from .analytic import pinhole_sigma0

    spread = math.hypot(pinhole_sigma0(vs), kstd * vs.d / vs.k_s)
    window_s = 2 * (12 if sinc else 8) * spread
    dx_s = math.pi / kmax_s
    n_s = min(max(64, next_pow2(window_s / dx_s)), max_size)

    kmax_i = kmax_s + 6 / vs.sigma_p
    dk_i = 0.5 / vs.sigma_p
    n_i = min(max(64, next_pow2(2 * kmax_i / dk_i)), max_size)
    return make_grid(n_s, n_i, n_s * dx_s, n_i * math.pi / kmax_i)


def signal_marginal(setup, grid: SpectralGrid, psi: Optional[BiphotonAmplitude] = None, *, chunk: int = 64) -> Profile1D:
    """Signal intensity at the object plane with the idler traced out.

    The idler is left in k-space: by Parseval, summing ``|.|^2`` over ``k_I``
    equals integrating over ``x_I`` at the crystal.
    """
    vs = validate_setup(setup)
    if psi is not None and psi.representation != "kk":
        raise WrongRepresentation("illumination needs a kk amplitude")
    h = transfer(grid.k_s, vs.d, vs.lambda_s, vs.propagation_mode)[:, None]
    marg = np.zeros(grid.n_s)
    k_i = grid.k_i
    for start in range(0, grid.n_i, chunk):
        sl = slice(start, start + chunk)
        block = psi.data[:, sl] if psi is not None else amplitude_block(grid.k_s, k_i[sl], vs)
        f = to_position(block * h, 0, grid.dx_s, grid.dk_s)
        marg += np.sum(np.abs(f) ** 2, axis=1)
    marg *= grid.dk_i
    total = marg.sum() * grid.dx_s
    if total > 0:
        marg /= total
    return Profile1D(grid.x_s.copy(), marg, label="x_S")


def illumination_width(
    psi: Optional[BiphotonAmplitude], setup, grid: Optional[SpectralGrid] = None
) -> IlluminationWidth:
    """Width of the signal illumination at the object plane (no object applied).

    The width is the sigma of a Gaussian fit to the marginal; when the fit
    fails the moment width is returned and ``flagged`` is set.  With
    ``psi=None`` the amplitude is generated block-wise on ``grid`` (default:
    :func:`illumination_grid`), which keeps memory flat for large grids.
    """
    vs = validate_setup(setup)
    if grid is None:
        grid = psi.grid if psi is not None else illumination_grid(vs)
    prof = signal_marginal(vs, grid, psi)
    frac = edge_fraction(prof.values)
    if frac >= ALIAS_FRACTION:
        warnings.warn(f"illumination reaches the window edge ({frac:.2%} of mass)", stacklevel=2)
    try:
        fit = fit_gaussian(prof)
        return IlluminationWidth(fit.width, "fit", prof, fit)
    except FitDiverged:
        return IlluminationWidth(moment_width(prof), "moment", prof)


# --------------------------------------------------------------------------
# two-peak analysis


def _xy(pattern) -> tuple:
    """Coordinates and values of a GhostPattern or a bare Profile1D."""
    prof = pattern.profile if isinstance(pattern, GhostPattern) else pattern
    return np.asarray(prof.coordinates), np.asarray(prof.values)


@dataclass(frozen=True)
class Peak:
    index: int
    position: float
    height: float


def dominant_peaks(pattern, *, min_height: float = 0.5, min_prominence: float = 0.1) -> list:
    """Local maxima above ``min_height * max`` with relative prominence ``min_prominence``.

    Positions are refined by a parabola through the three top samples.
    """
    x, y = _xy(pattern)
    top = y.max()
    if not top > 0:
        return []
    padded = np.concatenate([[-np.inf], y, [-np.inf]])
    idx, _ = find_peaks(padded, height=min_height * top, prominence=min_prominence * top)
    peaks = []
    for i in idx - 1:
        pos, h = float(x[i]), float(y[i])
        if 0 < i < len(y) - 1:
            y0, y1, y2 = y[i - 1], y[i], y[i + 1]
            den = y0 - 2 * y1 + y2
            if den < 0:
                off = 0.5 * (y0 - y2) / den
                pos = float(x[i] + off * (x[1] - x[0]))
                h = float(y1 - 0.25 * (y0 - y2) * off)
        peaks.append(Peak(int(i), pos, h))
    return peaks


def visibility(pattern) -> float:
    """Ratio ``G(midpoint) / max G`` between the two dominant maxima.

    Two slits count as resolved when this dips to the threshold (0.4) or below.

    Raises
    ------
    NotBimodal
        The pattern does not have exactly two dominant maxima.
    """
    peaks = dominant_peaks(pattern)
    if len(peaks) != 2:
        raise NotBimodal(f"expected two dominant maxima, found {len(peaks)}")
    x, y = _xy(pattern)
    mid = 0.5 * (peaks[0].position + peaks[1].position)
    return float(np.interp(mid, x, y) / max(p.height for p in peaks))


@dataclass(frozen=True)
class BimodalSummary:
    centers: tuple
    widths: tuple
    maxima: tuple
    visibility: float


def bimodal_summary(pattern) -> BimodalSummary:
    """Peak positions, per-lobe Gaussian fits, and visibility of a two-lobed pattern."""
    peaks = dominant_peaks(pattern)
    vis = visibility(pattern)
    x, y = _xy(pattern)
    mid = 0.5 * (peaks[0].position + peaks[1].position)
    fits = []
    for sel in (x < mid, x >= mid):
        try:
            fits.append(fit_gaussian(Profile1D(x[sel], y[sel]), max_rel_residual=1.0))
        except (FitDiverged, ValueError):
            fits.append(None)
    return BimodalSummary(
        centers=tuple(f.center if f else math.nan for f in fits),
        widths=tuple(f.width if f else math.nan for f in fits),
        maxima=tuple(p.position for p in peaks),
        visibility=vis,
    )
