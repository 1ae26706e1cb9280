"""Sampling grids, the DFT convention, and 1D profile statistics.

Conventions
-----------
Arrays are stored in physical order with the zero coordinate at index ``n // 2``.
The forward transform maps x -> k with kernel ``exp(-i k x)``, the inverse maps
k -> x with ``exp(+i k x)``; both are unitary (``1/sqrt(n)`` per axis).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .exceptions import FitDiverged, InvalidSize, ObjectUnresolvable, ZeroMass

MIN_SIZE = 64
MAX_SIZE = 2**16


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def next_pow2(x: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(x, 1.0))))


def forward(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unitary centred DFT, x -> k."""
    a = scipy.fft.ifftshift(a, axes=axis)
    a = scipy.fft.fft(a, axis=axis, norm="ortho")
    return scipy.fft.fftshift(a, axes=axis)


def inverse(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unitary centred DFT, k -> x."""
    a = scipy.fft.ifftshift(a, axes=axis)
    a = scipy.fft.ifft(a, axis=axis, norm="ortho")
    return scipy.fft.fftshift(a, axes=axis)


def centered_coords(n: int, step: float) -> np.ndarray:
    return (np.arange(n) - n // 2) * step


@dataclass(frozen=True)
class SpectralGrid:
    """Paired position / wave-vector sampling of the signal and idler axes."""

    n_s: int
    n_i: int
    dx_s: float
    dx_i: float

    @property
    def window_s(self) -> float:
        return self.n_s * self.dx_s

    @property
    def window_i(self) -> float:
        return self.n_i * self.dx_i

    @property
    def dk_s(self) -> float:
        return 2 * math.pi / self.window_s

    @property
    def dk_i(self) -> float:
        return 2 * math.pi / self.window_i

    @property
    def x_s(self) -> np.ndarray:
        return centered_coords(self.n_s, self.dx_s)

    @property
    def x_i(self) -> np.ndarray:
        return centered_coords(self.n_i, self.dx_i)

    @property
    def k_s(self) -> np.ndarray:
        return centered_coords(self.n_s, self.dk_s)

    @property
    def k_i(self) -> np.ndarray:
        return centered_coords(self.n_i, self.dk_i)

    def as_dict(self) -> dict:
        return {"n_s": self.n_s, "n_i": self.n_i, "dx_s": self.dx_s, "dx_i": self.dx_i}

    def step(self, axis: str) -> tuple:
        """``(dx, dk)`` for ``axis`` in {"signal", "idler"}."""
        if axis == "signal":
            return self.dx_s, self.dk_s
        return self.dx_i, self.dk_i


def make_grid(n_s: int, n_i: int, window_s: float, window_i: float) -> SpectralGrid:
    """Uniform grid with ``dx = window / n`` on each axis.

    Raises
    ------
    InvalidSize
        A sample count is not a power of two in ``[64, 2**16]``.
    """
    for name, n in (("n_s", n_s), ("n_i", n_i)):
        if not (isinstance(n, (int, np.integer)) and _is_pow2(int(n)) and MIN_SIZE <= n <= MAX_SIZE):
            raise InvalidSize(f"{name} must be a power of two in [{MIN_SIZE}, {MAX_SIZE}], got {n!r}")
    for name, w in (("window_s", window_s), ("window_i", window_i)):
        if not (math.isfinite(w) and w > 0):
            raise InvalidSize(f"{name} must be positive, got {w!r}")
    return SpectralGrid(int(n_s), int(n_i), window_s / n_s, window_i / n_i)


def to_position(field: np.ndarray, axis: int, dx: float, dk: float) -> np.ndarray:
    """Inverse transform that preserves ``sum |f|^2 * step`` (continuous scaling)."""
    return inverse(field, axis=axis) * math.sqrt(dk / dx)


def to_wavevector(field: np.ndarray, axis: int, dx: float, dk: float) -> np.ndarray:
    return forward(field, axis=axis) * math.sqrt(dx / dk)


MIN_FEATURE = 1e-8


def auto_grid(setup, obj, fov_i: float, *, max_size: int = 2**14) -> SpectralGrid:
    """Pick a grid for imaging ``obj`` with ``setup``.

    ``obj`` needs ``feature_size`` and ``half_extent`` attributes (an
    :class:`~ghostpin.objects.ObjectSpec` or a sampled transmission).

    Rules
    -----
    * ``dx_s <= min(feature / 4, sigma_G / 4)`` and fine enough to hold the
      signal wave vectors paired with the retained idler band.
    * The idler window holds ``max(fov_i, 2 (|x0(a_max)| + 6 sigma_G))``.
    * The signal window holds the object plus the illumination that feeds it.
    """
    from . import analytic
    from .setup import validate_setup

    vs = validate_setup(setup)
    feature = float(obj.feature_size) if obj.feature_size is not None else math.inf
    if feature < MIN_FEATURE:
        raise ObjectUnresolvable(f"object feature {feature:.3g} m is below {MIN_FEATURE:g} m")
    a_max = float(obj.half_extent)
    if fov_i <= 0:
        raise InvalidSize("fov_i must be positive")

    a1, a2 = analytic.alphas(vs)
    sg = analytic.sigma_g(vs)
    inv_a1 = 1 / a1
    x0 = a_max * (inv_a1 * a2).real / inv_a1.real

    window_i = max(fov_i, 2 * (abs(x0) + 6 * sg))
    # conditional idler spectrum: Gaussian of std 1/sqrt(2 Re a1), shifted by a*Im(a2)/Re(a1)
    kappa_i = 1 / math.sqrt(2 * a1.real)
    shift_i = a_max * abs(a2.imag) / a1.real
    # geometric bound: signal rays reaching |x| <= a_max from the pumped region
    k_geo = vs.k_s * (a_max + 4 * vs.sigma_p) / vs.d
    kmax_i = max(shift_i + 8 * kappa_i, k_geo)
    dx_i = min(math.pi / kmax_i, sg / 4)
    n_i = min(max(MIN_SIZE, next_pow2(window_i / dx_i)), max_size)

    kmax_s = kmax_i + 8 / vs.sigma_p
    dx_s = min(feature / 4, sg / 4, math.pi / kmax_s)
    # where signal partners of the retained idler band land at the object plane
    reach = kmax_s * vs.d / vs.k_s + 6 * vs.sigma_p
    window_s = 2 * (a_max + reach)
    n_s = min(max(MIN_SIZE, next_pow2(window_s / dx_s)), max_size)

    # sample steps are kept; windows grow to n * dx (or shrink when capped)
    for name, n, dx, need in (("signal", n_s, dx_s, window_s), ("idler", n_i, dx_i, window_i)):
        if n * dx < need:
            warnings.warn(
                f"{name} window capped at {n * dx:.3g} m (wanted {need:.3g} m); "
                "the aliasing sentinel may reject this grid",
                stacklevel=2,
            )
    return make_grid(n_s, n_i, n_s * dx_s, n_i * dx_i)


# --------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile1D:
    coordinates: np.ndarray
    values: np.ndarray
    label: str = "x"

    def __post_init__(self):
        x = np.asarray(self.coordinates, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.shape != v.shape or x.ndim != 1:
            raise ValueError("coordinates and values must be 1D arrays of equal length")
        if not np.all(np.isfinite(v)):
            raise ValueError("profile values must be finite")
        object.__setattr__(self, "coordinates", x)
        object.__setattr__(self, "values", v)

    @property
    def step(self) -> float:
        return float(self.coordinates[1] - self.coordinates[0])

    def mass(self) -> float:
        return float(self.values.sum() * self.step)


@dataclass(frozen=True)
class GaussianFit:
    center: float
    width: float
    amplitude: float
    residual_rms: float
    rel_residual: float
    iterations: int
    converged: bool

    @property
    def suspect(self) -> bool:
        """True when the profile is visibly non-Gaussian."""
        return self.rel_residual > 0.05


def moment_width(profile: Profile1D) -> float:
    """Standard deviation of ``profile`` treated as a density."""
    x, v = profile.coordinates, profile.values
    if np.any(v < 0):
        raise ValueError("moment_width needs nonnegative values")
    total = v.sum()
    if not total > 0:
        raise ZeroMass("profile has no mass")
    p = v / total
    mean = np.dot(p, x)
    return float(math.sqrt(max(np.dot(p, (x - mean) ** 2), 0.0)))


def _gauss(x, amp, x0, sigma):
    return amp * np.exp(-((x - x0) ** 2) / (2 * sigma**2))


def _gauss_jac(x, amp, x0, sigma):
    g = np.exp(-((x - x0) ** 2) / (2 * sigma**2))
    return np.column_stack([g, amp * g * (x - x0) / sigma**2, amp * g * (x - x0) ** 2 / sigma**3])


def fit_gaussian(
    profile: Profile1D, *, max_iter: int = 200, rtol: float = 1e-10, max_rel_residual: float = 0.2
) -> GaussianFit:
    """Least-squares fit of ``A exp(-(x - x0)^2 / (2 sigma^2))``.

    Starts from the profile moments and refines with Levenberg-Marquardt.

    Raises
    ------
    FitDiverged
        The RMS residual over the profile support exceeds ``max_rel_residual``
        of the peak, or the iteration produced non-finite parameters.
    """
    x, y = profile.coordinates, profile.values
    if x.size < 8:
        raise ValueError("fit_gaussian needs at least 8 samples")
    peak = float(y.max())
    if not peak > 0:
        raise ZeroMass("profile maximum is not positive")

    # scale to O(1) so the damping parameter is meaningful
    xs = max(float(np.ptp(x)), 1e-300)
    u = (x - x[0]) / xs
    yn = y / peak
    w = np.clip(yn, 0, None)
    p = np.array([1.0, np.dot(w, u) / w.sum(), 0.0])
    p[2] = max(math.sqrt(max(np.dot(w, (u - p[1]) ** 2) / w.sum(), 0)), 1.0 / x.size)

    lam = 1e-3
    r = yn - _gauss(u, *p)
    cost = float(r @ r)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        J = _gauss_jac(u, *p)
        A = J.T @ J
        g = J.T @ r
        improved = False
        while lam < 1e12:
            step = np.linalg.solve(A + lam * np.diag(np.diag(A) + 1e-30), g)
            trial = p + step
            trial[2] = abs(trial[2])
            r_t = yn - _gauss(u, *trial)
            cost_t = float(r_t @ r_t)
            if np.isfinite(cost_t) and cost_t <= cost:
                improved = True
                break
            lam *= 10
        if not improved:
            converged = True  # no descent direction left
            break
        rel_change = np.max(np.abs(step) / np.maximum(np.abs(trial), 1e-300))
        p, r, cost = trial, r_t, cost_t
        lam = max(lam / 10, 1e-12)
        if rel_change < rtol:
            converged = True
            break

    if not np.all(np.isfinite(p)) or p[2] == 0:
        raise FitDiverged("Gaussian fit produced non-finite parameters")

    amp, x0, sigma = p[0] * peak, p[1] * xs + x[0], abs(p[2]) * xs
    model = _gauss(x, amp, x0, sigma)
    resid = y - model
    rms = float(math.sqrt(np.mean(resid**2)))
    support = (y > 0.01 * peak) | (model > 0.01 * peak)
    rel = float(math.sqrt(np.mean(resid[support] ** 2)) / peak) if support.any() else math.inf
    if rel > max_rel_residual:
        raise FitDiverged(f"Gaussian fit residual {rel:.1%} of peak exceeds {max_rel_residual:.0%}")
    return GaussianFit(
        center=float(x0),
        width=float(sigma),
        amplitude=float(amp),
        residual_rms=rms,
        rel_residual=rel,
        iterations=it,
        converged=converged,
    )
