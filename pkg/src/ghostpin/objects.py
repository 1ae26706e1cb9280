"""Object transmission functions ``T_o(x_S)`` on the signal axis."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .exceptions import NonMonotonicX, ObjectUnresolvable, OutOfWindow, ParseError, ValueOutOfRange
from .grid import SpectralGrid

CLAMP_TOL = 1e-6


@dataclass(frozen=True)
class ObjectTransmission:
    """Complex transmission sampled on the signal axis of a grid."""

    samples: np.ndarray
    descriptor: str
    grid: SpectralGrid
    snap_distance: float = 0.0

    def __post_init__(self):
        if self.samples.shape != (self.grid.n_s,):
            raise ValueError("transmission must have one sample per signal grid point")

    @property
    def half_extent(self) -> float:
        nz = np.flatnonzero(self.samples)
        if nz.size == 0:
            return 0.0
        return float(np.max(np.abs(self.grid.x_s[nz])))

    @property
    def feature_size(self) -> float:
        return self.grid.dx_s


def _window_check(lo: float, hi: float, grid: SpectralGrid) -> None:
    x = grid.x_s
    if lo < x[0] or hi > x[-1]:
        raise OutOfWindow(f"object span [{lo:.4g}, {hi:.4g}] m leaves the signal window [{x[0]:.4g}, {x[-1]:.4g}] m")


def uniform(grid: SpectralGrid) -> ObjectTransmission:
    """Fully transmitting object, ``T_o = 1``."""
    return ObjectTransmission(np.ones(grid.n_s, dtype=complex), "uniform", grid)


def _slit_mask(x: np.ndarray, center: float, width: float, dx: float) -> np.ndarray:
    # tolerance keeps samples lying exactly on the edge
    return np.abs(x - center) <= width / 2 + 1e-9 * dx


def slit(center: float, width: float, grid: SpectralGrid) -> ObjectTransmission:
    """Unit-transmission slit covering ``|x - center| <= width / 2``."""
    if width < 2 * grid.dx_s:
        raise ObjectUnresolvable(
            f"slit width {width:.3g} m is below two samples ({2 * grid.dx_s:.3g} m); use delta_slit"
        )
    _window_check(center - width / 2, center + width / 2, grid)
    t = _slit_mask(grid.x_s, center, width, grid.dx_s).astype(complex)
    return ObjectTransmission(t, f"slit(center={center!r}, width={width!r})", grid)


def delta_slit(a: float, grid: SpectralGrid) -> ObjectTransmission:
    """Discrete delta at the grid point nearest ``a``, with value ``1/dx_s``."""
    _window_check(a, a, grid)
    idx = int(round(a / grid.dx_s)) + grid.n_s // 2
    t = np.zeros(grid.n_s, dtype=complex)
    t[idx] = 1 / grid.dx_s
    snapped = grid.x_s[idx]
    return ObjectTransmission(t, f"delta_slit(a={a!r})", grid, snap_distance=float(snapped - a))


def double_slit(separation: float, width: float, grid: SpectralGrid) -> ObjectTransmission:
    """Two unit slits centred at ``+-separation / 2``; contiguous slits are allowed."""
    if not separation > width:
        raise ValueError("slit separation must exceed the slit width")
    if width < 2 * grid.dx_s:
        raise ObjectUnresolvable(f"slit width {width:.3g} m is below two samples")
    half = separation / 2
    _window_check(-half - width / 2, half + width / 2, grid)
    x = grid.x_s
    mask = _slit_mask(x, half, width, grid.dx_s) | _slit_mask(x, -half, width, grid.dx_s)
    return ObjectTransmission(
        mask.astype(complex), f"double_slit(separation={separation!r}, width={width!r})", grid
    )


def read_object_csv(path: Union[str, Path]) -> np.ndarray:
    """Read an object file: ``x [m], transmission [, phase rad]`` rows.

    Lines starting with ``#`` and a non-numeric header line are skipped.
    """
    rows = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read object file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        try:
            values = [float(p) for p in parts]
        except ValueError:
            if not rows and any(c.isalpha() for c in line):
                continue  # header
            raise ParseError(f"{path}:{lineno}: not numeric: {line!r}") from None
        if len(values) not in (2, 3):
            raise ParseError(f"{path}:{lineno}: expected 2 or 3 columns, got {len(values)}")
        rows.append(values + [0.0] * (3 - len(values)))
    if len(rows) < 2:
        raise ParseError(f"{path}: need at least two data rows")
    data = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(data)):
        raise ParseError(f"{path}: non-finite values")
    if np.any(np.diff(data[:, 0]) <= 0):
        raise NonMonotonicX(f"{path}: x column must increase strictly")
    t = data[:, 1]
    if np.any(t > 1 + CLAMP_TOL) or np.any(t < -CLAMP_TOL):
        raise ValueOutOfRange(f"{path}: transmission outside [0, 1]")
    return data


def from_file(path: Union[str, Path], grid: SpectralGrid) -> ObjectTransmission:
    """Piecewise-linear object from a CSV file, zero outside its x range."""
    data = read_object_csv(path)
    x = grid.x_s
    amp = np.clip(np.interp(x, data[:, 0], np.clip(data[:, 1], 0, 1), left=0.0, right=0.0), 0, 1)
    phase = np.interp(x, data[:, 0], data[:, 2], left=0.0, right=0.0)
    t = amp * np.exp(1j * phase) if np.any(data[:, 2]) else amp.astype(complex)
    return ObjectTransmission(t, f"file({str(path)!r})", grid)


@dataclass(frozen=True)
class ObjectSpec:
    """Grid-independent description of an object.

    ``kind`` is one of ``uniform``, ``slit``, ``delta_slit``, ``double_slit``,
    ``two_delta``, ``file``.  Used by :func:`~ghostpin.grid.auto_grid`, which
    needs the finest feature and the half-extent before any grid exists.
    """

    kind: str
    center: float = 0.0
    width: Optional[float] = None
    separation: Optional[float] = None
    path: Optional[str] = None
    _file_cache: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    KINDS = ("uniform", "slit", "delta_slit", "double_slit", "two_delta", "file")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown object kind {self.kind!r}")
        if self.kind in ("slit", "double_slit") and self.width is None:
            raise ValueError(f"{self.kind} needs a width")
        if self.kind in ("double_slit", "two_delta") and self.separation is None:
            raise ValueError(f"{self.kind} needs a separation")
        if self.kind == "file":
            if self.path is None:
                raise ValueError("file object needs a path")
            object.__setattr__(self, "_file_cache", read_object_csv(self.path))

    @property
    def feature_size(self) -> Optional[float]:
        if self.kind in ("slit", "double_slit"):
            return self.width
        if self.kind == "file":
            return float(np.min(np.diff(self._file_cache[:, 0])))
        return None

    @property
    def half_extent(self) -> float:
        if self.kind == "slit":
            return abs(self.center) + self.width / 2
        if self.kind == "delta_slit":
            return abs(self.center)
        if self.kind == "double_slit":
            return self.separation / 2 + self.width / 2
        if self.kind == "two_delta":
            return self.separation / 2
        if self.kind == "file":
            data = self._file_cache
            nz = data[data[:, 1] > 0, 0]
            return float(np.max(np.abs(nz))) if nz.size else 0.0
        return 0.0

    def sample(self, grid: SpectralGrid) -> ObjectTransmission:
        if self.kind == "uniform":
            return uniform(grid)
        if self.kind == "slit":
            return slit(self.center, self.width, grid)
        if self.kind == "delta_slit":
            return delta_slit(self.center, grid)
        if self.kind == "double_slit":
            return double_slit(self.separation, self.width, grid)
        if self.kind == "two_delta":
            a = delta_slit(self.separation / 2, grid)
            b = delta_slit(-self.separation / 2, grid)
            return ObjectTransmission(
                a.samples + b.samples, f"two_delta(separation={self.separation!r})", grid, a.snap_distance
            )
        return from_file(self.path, grid)
