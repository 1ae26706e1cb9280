"""Physical parameters of the lensless ghost-imaging experiment.

All lengths are SI metres. The crystal refractive index is fixed to 1.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Union

from .exceptions import ConfigError, EnergyMismatch, GeometryOrder, NonPositiveLength

SPEED_OF_LIGHT = 299_792_458.0
ENERGY_RTOL = 1e-9

_UNITS = {
    "nm": 1e-9,
    "um": 1e-6,
    "µm": 1e-6,
    "μm": 1e-6,
    "mm": 1e-3,
    "cm": 1e-2,
    "m": 1.0,
}
_LENGTH_RE = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(nm|um|µm|μm|mm|cm|m)?\s*$"
)


def parse_length(text: Union[str, float, int]) -> float:
    """Parse a unit-suffixed length such as ``"167um"`` into metres.

    Bare numbers are taken to be metres.
    """
    if isinstance(text, (int, float)):
        return float(text)
    match = _LENGTH_RE.match(text)
    if match is None:
        raise ConfigError(f"cannot parse length {text!r}")
    value, unit = match.groups()
    return float(value) * _UNITS[unit or "m"]


class PropagationMode(str, Enum):
    PARAXIAL = "paraxial"
    EXACT = "exact"


class PhaseMatchingModel(str, Enum):
    SINC = "sinc"
    GAUSSIAN = "gaussian"


LENGTH_FIELDS = ("lambda_p", "lambda_s", "lambda_i", "l_z", "sigma_p", "d", "z_s", "z_i")


@dataclass(frozen=True)
class OpticalSetup:
    """Raw experiment parameters.

    Parameters
    ----------
    lambda_p, lambda_s, lambda_i : float
        Pump, signal and idler vacuum wavelengths [m].
    l_z : float
        Crystal thickness [m].
    sigma_p : float
        Pump width in position space [m].
    d : float
        Crystal-to-object distance [m].
    z_s : float
        Crystal-to-bucket-detector distance [m].
    z_i : float
        Crystal-to-resolving-detector distance [m].
    propagation_mode : {"paraxial", "exact"}
    pm_model : {"sinc", "gaussian"}
    """

    lambda_p: float = 350e-9
    lambda_s: float = 700e-9
    lambda_i: float = 700e-9
    l_z: float = 3e-3
    sigma_p: float = 167e-6
    d: float = 0.3
    z_s: float = 1.2
    z_i: float = 1.5
    propagation_mode: PropagationMode = PropagationMode.PARAXIAL
    pm_model: PhaseMatchingModel = PhaseMatchingModel.SINC

    def __post_init__(self):
        object.__setattr__(self, "propagation_mode", PropagationMode(self.propagation_mode))
        object.__setattr__(self, "pm_model", PhaseMatchingModel(self.pm_model))

    def replace(self, **changes) -> "OpticalSetup":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.value if isinstance(value, Enum) else value
        return out


@dataclass(frozen=True)
class ValidatedSetup:
    """An :class:`OpticalSetup` that passed validation, plus derived quantities."""

    setup: OpticalSetup
    omega_p: float
    omega_s: float
    omega_i: float
    k_p: float
    k_s: float
    k_i: float
    rayleigh_length: float

    def __getattr__(self, name):
        # forwards raw parameters, e.g. ``vs.sigma_p``
        if name == "setup":
            raise AttributeError(name)
        return getattr(self.setup, name)

    def replace(self, **changes) -> "ValidatedSetup":
        return validate_setup(self.setup.replace(**changes))


def validate_setup(setup: Union[OpticalSetup, ValidatedSetup]) -> ValidatedSetup:
    """Check the invariants of ``setup`` and attach derived wave numbers.

    Raises
    ------
    NonPositiveLength
        Any length is zero, negative or not finite.
    EnergyMismatch
        ``1/lambda_p != 1/lambda_s + 1/lambda_i`` beyond a relative 1e-9.
    GeometryOrder
        The bucket detector sits before the object (``z_s < d``).
    """
    if isinstance(setup, ValidatedSetup):
        return setup
    for name in LENGTH_FIELDS:
        value = getattr(setup, name)
        if not (math.isfinite(value) and value > 0):
            raise NonPositiveLength(f"{name} must be a positive length, got {value!r}")

    inv_p = 1.0 / setup.lambda_p
    inv_si = 1.0 / setup.lambda_s + 1.0 / setup.lambda_i
    if abs(inv_p - inv_si) > ENERGY_RTOL * inv_p:
        raise EnergyMismatch(
            f"1/lambda_p = {inv_p:.9g} /m but 1/lambda_s + 1/lambda_i = {inv_si:.9g} /m"
        )
    if setup.z_s < setup.d:
        raise GeometryOrder(f"z_s = {setup.z_s} m lies before the object at d = {setup.d} m")

    rayleigh = 2 * math.pi * setup.sigma_p**2 / setup.lambda_p
    if rayleigh < 10 * setup.l_z:
        warnings.warn(
            f"pump Rayleigh length {rayleigh:.3g} m is less than 10x the crystal "
            f"thickness {setup.l_z:.3g} m; the collimated-pump model is questionable",
            stacklevel=2,
        )

    two_pi_c = 2 * math.pi * SPEED_OF_LIGHT
    return ValidatedSetup(
        setup=setup,
        omega_p=two_pi_c / setup.lambda_p,
        omega_s=two_pi_c / setup.lambda_s,
        omega_i=two_pi_c / setup.lambda_i,
        k_p=2 * math.pi / setup.lambda_p,
        k_s=2 * math.pi / setup.lambda_s,
        k_i=2 * math.pi / setup.lambda_i,
        rayleigh_length=rayleigh,
    )
