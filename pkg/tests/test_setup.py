import math

import pytest

from ghostpin.exceptions import ConfigError, EnergyMismatch, GeometryOrder, NonPositiveLength
from ghostpin.setup import OpticalSetup, PhaseMatchingModel, PropagationMode, parse_length, validate_setup


@pytest.mark.parametrize(
    "text, metres",
    [("350nm", 350e-9), ("167um", 167e-6), ("167 µm", 167e-6), ("3mm", 3e-3), ("30cm", 0.3), ("1.5m", 1.5), ("0.2", 0.2)],
)
def test_parse_length_units(text, metres):
    assert parse_length(text) == pytest.approx(metres, rel=1e-15)


@pytest.mark.parametrize("text", ["3 furlongs", "mm", ""])
def test_parse_length_rejects(text):
    with pytest.raises(ConfigError):
        parse_length(text)


def test_paper_parameters_are_valid(fig2c):
    vs = validate_setup(fig2c)
    assert vs.k_p == pytest.approx(vs.k_s * (vs.lambda_s / vs.lambda_p), rel=1e-12)
    assert vs.omega_p == pytest.approx(vs.omega_s + vs.omega_i, rel=1e-12)


def test_rayleigh_length_recorded(fig2c):
    # 2 pi (167 um)^2 / 350 nm, independent evaluation
    assert validate_setup(fig2c).rayleigh_length == pytest.approx(0.50066215723408996, rel=1e-14)


def test_energy_mismatch():
    with pytest.raises(EnergyMismatch):
        validate_setup(OpticalSetup(lambda_i=600e-9))


@pytest.mark.parametrize("name", ["lambda_p", "l_z", "sigma_p", "d", "z_i"])
def test_nonpositive_length(name):
    with pytest.raises(NonPositiveLength):
        validate_setup(OpticalSetup(**{name: 0.0}))
    with pytest.raises(NonPositiveLength):
        validate_setup(OpticalSetup(**{name: math.nan}))


def test_geometry_order():
    with pytest.raises(GeometryOrder):
        validate_setup(OpticalSetup(d=1.3, z_s=1.2))
    validate_setup(OpticalSetup(d=1.2, z_s=1.2))


def test_short_rayleigh_length_warns_but_passes():
    with pytest.warns(UserWarning, match="Rayleigh"):
        vs = validate_setup(OpticalSetup(sigma_p=5e-6))
    assert vs.rayleigh_length < 10 * vs.l_z


def test_validate_is_idempotent(fig2c):
    vs = validate_setup(fig2c)
    assert validate_setup(vs) is vs
    assert validate_setup(fig2c) == vs


def test_validated_forwards_and_replaces(fig2c):
    vs = validate_setup(fig2c)
    assert vs.sigma_p == fig2c.sigma_p
    vs2 = vs.replace(d=1.0)
    assert vs2.d == 1.0 and vs2.k_s == vs.k_s
    with pytest.raises(GeometryOrder):
        vs.replace(d=2.0)


def test_enum_coercion():
    s = OpticalSetup(propagation_mode="exact", pm_model="gaussian")
    assert s.propagation_mode is PropagationMode.EXACT
    assert s.pm_model is PhaseMatchingModel.GAUSSIAN
    assert s.as_dict()["pm_model"] == "gaussian"
    with pytest.raises(ValueError):
        OpticalSetup(pm_model="lorentzian")
