import math

import numpy as np
import pytest

from ghostpin.exceptions import Evanescent, GridUndersampled
from ghostpin.grid import make_grid
from ghostpin.setup import OpticalSetup, validate_setup
from ghostpin.source import phase_matching_amplitude, phase_mismatch, psi_spdc, pump_spectrum


def test_pump_spectrum(fig2c):
    assert pump_spectrum(0.0, fig2c) == 1.0
    assert pump_spectrum(1 / fig2c.sigma_p, fig2c) == pytest.approx(math.exp(-0.5), rel=1e-15)
    # exp(-(167e-6)^2 1e8 / 2), evaluated at 40 digits
    assert pump_spectrum(1e4, fig2c) == pytest.approx(0.24796938202885063, rel=1e-14)


@pytest.mark.parametrize("mode", ["paraxial", "exact"])
def test_mismatch_zero_on_axis(fig2c, mode):
    assert phase_mismatch(0.0, 0.0, fig2c, mode=mode) == pytest.approx(0.0, abs=1e-9)


def test_mismatch_antidiagonal_paraxial(fig2c):
    kappa = 3e4
    expected = kappa**2 * fig2c.lambda_s / (2 * math.pi)
    assert phase_mismatch(kappa, -kappa, fig2c) == pytest.approx(expected, rel=1e-12)


def test_exact_matches_paraxial_at_small_angle(fig2c):
    kappa = 0.05 * validate_setup(fig2c).k_s
    ex = phase_mismatch(kappa, -kappa, fig2c, mode="exact")
    px = phase_mismatch(kappa, -kappa, fig2c, mode="paraxial")
    assert abs(ex / px - 1) < 1e-3


def test_evanescent(fig2c):
    k = 1.1 * validate_setup(fig2c).k_s
    with pytest.raises(Evanescent):
        phase_mismatch(k, 0.0, fig2c, mode="exact")
    assert math.isnan(phase_mismatch(k, 0.0, fig2c, mode="exact", strict=False))


def test_phase_matching_values(fig2c):
    l = fig2c.l_z
    dkz = lambda u: 2 * u / l  # noqa: E731
    assert phase_matching_amplitude(0.0, fig2c) == 1.0
    assert phase_matching_amplitude(0.0, fig2c, model="gaussian") == 1.0
    assert phase_matching_amplitude(dkz(math.pi), fig2c) == pytest.approx(0.0, abs=1e-15)
    assert phase_matching_amplitude(dkz(1.0), fig2c) == pytest.approx(0.8414709848078965, rel=1e-12)
    assert phase_matching_amplitude(dkz(1.0), fig2c, model="gaussian") == pytest.approx(0.6344479679, rel=1e-9)


def _grid():
    return make_grid(256, 256, 256 * 20e-6, 256 * 20e-6)


def test_psi_normalised_and_symmetric(fig2c):
    psi = psi_spdc(_grid(), fig2c)
    assert psi.representation == "kk"
    assert psi.norm2() == pytest.approx(1.0, abs=1e-10)
    assert np.array_equal(psi.data, psi.data.T)
    assert np.all(np.isfinite(psi.data))


def test_psi_thin_crystal_is_pump_only(fig2c):
    g = _grid()
    s = fig2c.replace(l_z=1e-12)
    psi = psi_spdc(g, s).data
    pump = pump_spectrum(g.k_s[:, None] + g.k_i[None, :], s)
    pump[0, :] = 0
    pump[:, 0] = 0
    pump /= math.sqrt(np.sum(pump**2) * g.dk_s * g.dk_i)
    assert np.max(np.abs(psi - pump)) < 1e-9 * np.max(pump)


def _antidiagonal_width(psi):
    # spread of |psi|^2 along k_s + k_i (the direction across the anti-diagonal)
    g = psi.grid
    q = g.k_s[:, None] + g.k_i[None, :]
    p = np.abs(psi.data) ** 2
    p /= p.sum()
    return math.sqrt(np.sum(p * q**2) - np.sum(p * q) ** 2)


def test_antidiagonal_width_shrinks_with_pump_width(fig2c):
    g = make_grid(512, 512, 512 * 25e-6, 512 * 25e-6)
    widths = [_antidiagonal_width(psi_spdc(g, fig2c.replace(sigma_p=s))) for s in (58e-6, 167e-6, 800e-6)]
    assert widths[0] > widths[1] > widths[2]


def test_undersampled_pump(fig2c):
    with pytest.raises(GridUndersampled):
        psi_spdc(make_grid(64, 64, 1e-3, 1e-3), fig2c)
    with pytest.raises(GridUndersampled):
        psi_spdc(make_grid(64, 64, 64 * 20e-6, 64 * 20e-6), fig2c.replace(sigma_p=800e-6))


def test_exact_mode_matches_paraxial_for_slow_grid(fig2c):
    g = _grid()
    a = psi_spdc(g, fig2c).data
    b = psi_spdc(g, fig2c.replace(propagation_mode="exact")).data
    assert np.max(np.abs(a - b)) < 1e-3 * np.max(np.abs(a))


def test_nondegenerate_source():
    s = OpticalSetup(lambda_s=600e-9, lambda_i=1 / (1 / 350e-9 - 1 / 600e-9))
    psi = psi_spdc(_grid(), s)
    assert psi.norm2() == pytest.approx(1.0, abs=1e-10)
    assert not np.allclose(psi.data, psi.data.T)
