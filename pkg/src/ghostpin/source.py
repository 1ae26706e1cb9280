"""Biphoton spectral amplitude of a collimated-pump SPDC source."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .exceptions import Evanescent, GridUndersampled
from .grid import SpectralGrid
from .setup import PhaseMatchingModel, PropagationMode, validate_setup

REPRESENTATIONS = ("kk", "kx", "xk", "xx")
#: pump spectrum must span this many standard deviations of 1/sigma_p
PUMP_SPAN = 6.0
#: ...and be sampled at least this many times per 1/sigma_p
PUMP_SAMPLES = 2.0


@dataclass(frozen=True)
class BiphotonAmplitude:
    """Complex two-photon amplitude sampled on ``grid``.

    ``data[i, j]`` is indexed (signal, idler).  ``representation`` has one
    letter per axis, ``k`` or ``x``, signal first.
    """

    data: np.ndarray
    grid: SpectralGrid
    representation: str = "kk"

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ValueError(f"unknown representation {self.representation!r}")
        if self.data.shape != (self.grid.n_s, self.grid.n_i):
            raise ValueError(f"data shape {self.data.shape} does not match grid")

    def with_data(self, data: np.ndarray, representation: Optional[str] = None) -> "BiphotonAmplitude":
        return replace(self, data=data, representation=representation or self.representation)

    def measure(self) -> float:
        """Area element of one sample in the current representation."""
        g = self.grid
        ds = g.dk_s if self.representation[0] == "k" else g.dx_s
        di = g.dk_i if self.representation[1] == "k" else g.dx_i
        return ds * di

    def norm2(self) -> float:
        """``sum |psi|^2`` times the sample area."""
        return float(np.sum(np.abs(self.data) ** 2) * self.measure())


def pump_spectrum(q, setup):
    """Gaussian pump angular spectrum with unit peak, ``q = k_xS + k_xI``."""
    vs = validate_setup(setup)
    return np.exp(-(vs.sigma_p**2) * np.square(q) / 2)


def phase_mismatch(k_s, k_i, setup, *, mode=None, strict: bool = True):
    """Longitudinal mismatch ``k_zP - k_zS - k_zI`` with ``k_xP = k_s + k_i``.

    In exact mode, samples with a negative radicand are evanescent: they
    raise :class:`Evanescent` when ``strict`` and are returned as NaN
    otherwise.
    """
    vs = validate_setup(setup)
    mode = PropagationMode(mode or vs.propagation_mode)
    k_s = np.asarray(k_s, dtype=float)
    k_i = np.asarray(k_i, dtype=float)
    q = k_s + k_i
    if mode is PropagationMode.PARAXIAL:
        out = k_s**2 / (2 * vs.k_s) + k_i**2 / (2 * vs.k_i) - q**2 / (2 * vs.k_p)
        return out if out.ndim else float(out)

    rp = vs.k_p**2 - q**2
    rs = vs.k_s**2 - k_s**2
    ri = vs.k_i**2 - k_i**2
    bad = (rp < 0) | (rs < 0) | (ri < 0)
    if strict and np.any(bad):
        raise Evanescent("transverse wave vector exceeds the free-space wave number")

    # sqrt(k^2 - x^2) = k - x^2 / (k + sqrt(k^2 - x^2)) avoids subtracting 1e7-sized terms
    def lag(k, x, r):
        return x**2 / (k + np.sqrt(np.clip(r, 0, None)))

    out = (vs.k_p - vs.k_s - vs.k_i) - lag(vs.k_p, q, rp) + lag(vs.k_s, k_s, rs) + lag(vs.k_i, k_i, ri)
    out = np.where(bad, np.nan, out)
    return out if out.ndim else float(out)


def phase_matching_amplitude(dkz, setup, *, model=None):
    """Phase-matching factor at mismatch ``dkz``.

    ``sinc`` gives ``sin(u)/u`` with ``u = dkz l_z / 2``.  ``gaussian`` gives
    ``exp(-0.455 |u|)``, the surrogate whose quadratic paraxial exponent
    reproduces the closed-form model exactly.
    """
    vs = validate_setup(setup)
    model = PhaseMatchingModel(model or vs.pm_model)
    u = np.asarray(dkz, dtype=float) * vs.l_z / 2
    if model is PhaseMatchingModel.SINC:
        out = np.sinc(u / math.pi)
    else:
        from .analytic import SINC_GAUSS_FACTOR

        out = np.exp(-SINC_GAUSS_FACTOR * np.abs(u))
    return out if out.ndim else float(out)


def check_pump_sampling(grid: SpectralGrid, setup) -> None:
    vs = validate_setup(setup)
    width = 1 / vs.sigma_p
    for name, n, dk in (("signal", grid.n_s, grid.dk_s), ("idler", grid.n_i, grid.dk_i)):
        half_span = (n // 2 - 1) * dk
        if half_span < PUMP_SPAN / 2 * width:
            raise GridUndersampled(
                f"{name} k-window +-{half_span:.3g} /m does not cover {PUMP_SPAN:g} sigma of the pump spectrum"
            )
        if dk > width / PUMP_SAMPLES:
            raise GridUndersampled(
                f"{name} k-step {dk:.3g} /m is coarser than 1/({PUMP_SAMPLES:g} sigma_p) = {width / PUMP_SAMPLES:.3g} /m"
            )


def amplitude_block(k_s: np.ndarray, k_i: np.ndarray, setup) -> np.ndarray:
    """Unnormalised ``phi_P(k_s + k_i) * PM(dk_z)`` on the outer grid of ``k_s`` x ``k_i``."""
    vs = validate_setup(setup)
    ks = np.asarray(k_s, dtype=float)[:, None]
    ki = np.asarray(k_i, dtype=float)[None, :]
    dkz = phase_mismatch(ks, ki, vs, strict=False)
    pm = phase_matching_amplitude(np.nan_to_num(dkz, nan=0.0), vs)
    out = pump_spectrum(ks + ki, vs) * pm
    return np.where(np.isnan(dkz), 0.0, out).astype(complex)


def psi_spdc(grid: SpectralGrid, setup) -> BiphotonAmplitude:
    """Biphoton amplitude in the (k_s, k_i) representation, unit norm.

    Evanescent samples (exact mode) are set to zero.
    """
    vs = validate_setup(setup)
    check_pump_sampling(grid, vs)
    data = amplitude_block(grid.k_s, grid.k_i, vs)
    # the -k_max row/column has no +k_max partner; dropping it keeps psi(k) = psi(-k) exact
    data[0, :] = 0
    data[:, 0] = 0
    psi = BiphotonAmplitude(data, grid, "kk")
    norm = psi.norm2()
    if not norm > 0:
        raise GridUndersampled("biphoton amplitude vanishes on this grid")
    data /= math.sqrt(norm)
    return psi
