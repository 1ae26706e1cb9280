"""scikit-learn style front end.

``GhostImager().fit()`` builds the grid and biphoton amplitude for one
optical setup; ``transform(X)`` maps object transmissions (one per row,
sampled on ``grid_.x_s``) to bucket-detector ghost patterns on ``grid_.x_i``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import analytic
from .engine import compute_jsp, ghost_pattern, illumination_width
from .grid import auto_grid, make_grid
from .objects import ObjectSpec, ObjectTransmission
from .setup import OpticalSetup, validate_setup
from .source import psi_spdc


def check_transmissions(X, n_s: int) -> np.ndarray:
    """Validate a stack of complex transmissions; returns shape ``(n_objects, n_s)``.

    ``check_array`` rejects complex input, so this mirrors its checks by hand.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D array of transmissions, got shape {arr.shape}")
    if arr.shape[1] != n_s:
        raise ValueError(f"X has {arr.shape[1]} samples per object, the fitted grid has n_s={n_s}")
    if not np.issubdtype(arr.dtype, np.number):
        raise ValueError("transmissions must be numeric")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("transmissions must be finite")
    return arr


class GhostImager(TransformerMixin, BaseEstimator):
    """Lensless biphoton ghost imager.

    Parameters mirror :class:`~ghostpin.setup.OpticalSetup` (SI units) plus
    the grid.  Leave ``n_s``/``n_i``/``window_s``/``window_i`` as ``None`` to
    pick the grid automatically from the object passed to :meth:`fit`.

    Attributes
    ----------
    setup_ : ValidatedSetup
    grid_ : SpectralGrid
    psi_ : BiphotonAmplitude
    report_ : AnalyticReport
    """

    def __init__(
        self,
        lambda_p=350e-9,
        lambda_s=700e-9,
        lambda_i=700e-9,
        l_z=3e-3,
        sigma_p=167e-6,
        d=0.3,
        z_s=1.2,
        z_i=1.5,
        propagation_mode="paraxial",
        pm_model="sinc",
        n_s=None,
        n_i=None,
        window_s=None,
        window_i=None,
        fov_i=10e-3,
        check_aliasing=True,
    ):
        self.lambda_p = lambda_p
        self.lambda_s = lambda_s
        self.lambda_i = lambda_i
        self.l_z = l_z
        self.sigma_p = sigma_p
        self.d = d
        self.z_s = z_s
        self.z_i = z_i
        self.propagation_mode = propagation_mode
        self.pm_model = pm_model
        self.n_s = n_s
        self.n_i = n_i
        self.window_s = window_s
        self.window_i = window_i
        self.fov_i = fov_i
        self.check_aliasing = check_aliasing

    def _setup(self) -> OpticalSetup:
        return OpticalSetup(
            lambda_p=self.lambda_p,
            lambda_s=self.lambda_s,
            lambda_i=self.lambda_i,
            l_z=self.l_z,
            sigma_p=self.sigma_p,
            d=self.d,
            z_s=self.z_s,
            z_i=self.z_i,
            propagation_mode=self.propagation_mode,
            pm_model=self.pm_model,
        )

    def fit(self, X=None, y=None):
        """Build grid and amplitude.

        ``X`` may be an :class:`ObjectSpec` describing the objects to come;
        it only informs the automatic grid.
        """
        vs = validate_setup(self._setup())
        explicit = (self.n_s, self.n_i, self.window_s, self.window_i)
        if all(v is not None for v in explicit):
            grid = make_grid(self.n_s, self.n_i, self.window_s, self.window_i)
        elif any(v is not None for v in explicit):
            raise ValueError("give all of n_s, n_i, window_s, window_i or none of them")
        else:
            spec = X if isinstance(X, ObjectSpec) else ObjectSpec("delta_slit")
            grid = auto_grid(vs, spec, self.fov_i)
        self.setup_ = vs
        self.grid_ = grid
        self.psi_ = psi_spdc(grid, vs)
        self.report_ = analytic.report(vs)
        self.n_features_in_ = grid.n_s
        return self

    def _objects(self, X):
        if isinstance(X, ObjectSpec):
            return [X.sample(self.grid_)]
        if isinstance(X, ObjectTransmission):
            return [X]
        arr = check_transmissions(X, self.grid_.n_s)
        return [ObjectTransmission(row, "array", self.grid_) for row in arr]

    def jsp(self, X):
        """Joint spatial probability for a single object."""
        check_is_fitted(self, "psi_")
        (obj,) = self._objects(X)[:1]
        return compute_jsp(self.psi_, obj, self.setup_, check_aliasing=self.check_aliasing)

    def transform(self, X):
        """Ghost patterns, one row of length ``n_i`` per object (unit mass each)."""
        check_is_fitted(self, "psi_")
        rows = []
        for obj in self._objects(X):
            jsp = compute_jsp(self.psi_, obj, self.setup_, check_aliasing=self.check_aliasing)
            rows.append(ghost_pattern(jsp).values)
        return np.vstack(rows)

    def illumination_width(self):
        check_is_fitted(self, "setup_")
        return illumination_width(None, self.setup_).sigma_s

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "grid_")
        return np.array([f"G[{i}]" for i in range(self.grid_.n_i)], dtype=object)
