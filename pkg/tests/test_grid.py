import math

import numpy as np
import pytest
from scipy.optimize import curve_fit

from ghostpin.exceptions import FitDiverged, InvalidSize, ObjectUnresolvable, ZeroMass
from ghostpin.grid import (
    Profile1D,
    auto_grid,
    centered_coords,
    fit_gaussian,
    forward,
    inverse,
    make_grid,
    moment_width,
    to_position,
    to_wavevector,
)
from ghostpin.objects import ObjectSpec
from ghostpin import analytic


def _gauss(x, a, x0, s):
    return a * np.exp(-((x - x0) ** 2) / (2 * s**2))


def test_make_grid_steps():
    g = make_grid(1024, 1024, 40e-3, 40e-3)
    assert g.dx_s == pytest.approx(39.0625e-6, rel=1e-15)
    assert g.dk_s == pytest.approx(157.07963267948966, rel=1e-14)


@pytest.mark.parametrize("n", [2, 32, 100, 3 * 1024, 2**17])
def test_make_grid_rejects_sizes(n):
    with pytest.raises(InvalidSize):
        make_grid(n, 64, 1e-3, 1e-3)


def test_make_grid_rejects_window():
    with pytest.raises(InvalidSize):
        make_grid(64, 64, -1.0, 1e-3)


def test_coordinates_centred():
    g = make_grid(64, 128, 1.0, 2.0)
    assert g.x_s[32] == 0.0 and g.k_i[64] == 0.0
    assert g.x_s[0] == -0.5 and g.x_s[-1] == pytest.approx(0.5 - 1 / 64)
    assert np.array_equal(centered_coords(4, 1.0), [-2.0, -1.0, 0.0, 1.0])


def test_dft_round_trip_and_unitarity():
    rng = np.random.default_rng(7)
    f = rng.normal(size=(256, 64)) + 1j * rng.normal(size=(256, 64))
    for axis in (0, 1):
        back = inverse(forward(f, axis=axis), axis=axis)
        assert np.max(np.abs(back - f)) / np.max(np.abs(f)) < 1e-12
        assert np.linalg.norm(forward(f, axis=axis)) == pytest.approx(np.linalg.norm(f), rel=1e-12)


def test_dft_kernel_sign():
    # a plane wave exp(+i k0 x) lands on +k0 under the forward (exp(-ikx)) transform
    g = make_grid(128, 64, 1.0, 1.0)
    m = 5
    f = np.exp(1j * m * g.dk_s * g.x_s)
    spec = np.abs(forward(f))
    assert g.k_s[np.argmax(spec)] == pytest.approx(m * g.dk_s)


def test_continuous_scaling_preserves_norm():
    g = make_grid(256, 64, 1e-2, 1e-2)
    f = np.exp(-(g.x_s**2) / (2 * (1e-3) ** 2)).astype(complex)
    k = to_wavevector(f, 0, g.dx_s, g.dk_s)
    assert np.sum(np.abs(k) ** 2) * g.dk_s == pytest.approx(np.sum(np.abs(f) ** 2) * g.dx_s, rel=1e-12)
    assert np.allclose(to_position(k, 0, g.dx_s, g.dk_s), f, atol=1e-12)


def test_fit_exact_gaussian():
    x = np.linspace(-2e-3, 4e-3, 601)
    fit = fit_gaussian(Profile1D(x, _gauss(x, 2.0, 1e-3, 0.3e-3)))
    assert fit.center == pytest.approx(1e-3, rel=1e-6)
    assert fit.width == pytest.approx(0.3e-3, rel=1e-6)
    assert fit.amplitude == pytest.approx(2.0, rel=1e-6)
    assert fit.converged and not fit.suspect


def test_fit_perturbed_gaussian_against_curve_fit():
    # 1% uniform perturbation; scipy's generic least squares is the reference
    rng = np.random.default_rng(11)
    x = np.linspace(-2e-3, 4e-3, 601)
    y = _gauss(x, 1.0, 1e-3, 0.3e-3) + 0.01 * rng.uniform(-1, 1, x.size)
    ref, _ = curve_fit(_gauss, x, y, p0=[1.0, 0.9e-3, 0.25e-3])
    fit = fit_gaussian(Profile1D(x, y))
    assert fit.center == pytest.approx(ref[1], rel=1e-4)
    assert fit.width == pytest.approx(ref[2], rel=1e-4)
    assert fit.center == pytest.approx(1e-3, rel=0.02)
    assert fit.width == pytest.approx(0.3e-3, rel=0.02)


def test_fit_top_hat_is_rejected_or_flagged():
    x = np.linspace(-1, 1, 401)
    y = (np.abs(x) < 0.5).astype(float)
    try:
        fit = fit_gaussian(Profile1D(x, y))
    except FitDiverged:
        return
    assert fit.suspect


def test_fit_divergence_limit():
    x = np.linspace(-1, 1, 401)
    y = (np.abs(x) < 0.5).astype(float)
    with pytest.raises(FitDiverged):
        fit_gaussian(Profile1D(x, y), max_rel_residual=0.01)


def test_fit_preconditions():
    with pytest.raises(ValueError):
        fit_gaussian(Profile1D(np.arange(5.0), np.ones(5)))
    with pytest.raises(ZeroMass):
        fit_gaussian(Profile1D(np.arange(10.0), np.zeros(10)))


def test_moment_width():
    x = np.linspace(-3e-3, 3e-3, 1201)
    assert moment_width(Profile1D(x, _gauss(x, 1, 0, 0.3e-3))) == pytest.approx(0.3e-3, rel=1e-6)
    w = 1.0
    xt = np.linspace(-1, 1, 200001)
    top = (np.abs(xt) <= w / 2).astype(float)
    assert moment_width(Profile1D(xt, top)) == pytest.approx(w / math.sqrt(12), rel=1e-4)
    with pytest.raises(ZeroMass):
        moment_width(Profile1D(x, np.zeros_like(x)))


def test_fit_and_moment_agree():
    x = np.linspace(-5, 7, 2001)
    y = _gauss(x, 3.0, 1.0, 0.8)
    assert fit_gaussian(Profile1D(x, y)).width == pytest.approx(moment_width(Profile1D(x, y)), rel=0.01)


def test_auto_grid_double_slit(fig2c):
    spec = ObjectSpec("double_slit", width=50e-6, separation=940e-6)
    g = auto_grid(fig2c, spec, 10e-3)
    assert g.dx_s <= 12.5e-6
    sg = analytic.sigma_g(fig2c)
    # far-field magnification 5 on the slit centres, as a lower bound
    assert g.window_i >= 2 * (5 * 470e-6 + 6 * sg)
    assert g.window_i >= 2 * (abs(analytic.image_position(495e-6, fig2c)) + 6 * sg)
    assert g.window_i >= 10e-3


def test_auto_grid_rejects_nanometre_slit(fig2c):
    with pytest.raises(ObjectUnresolvable):
        auto_grid(fig2c, ObjectSpec("slit", width=1e-9), 10e-3)


def test_auto_grid_pump_coverage(fig2c):
    g = auto_grid(fig2c, ObjectSpec("delta_slit"), 10e-3)
    for n, dk in ((g.n_s, g.dk_s), (g.n_i, g.dk_i)):
        assert (n // 2 - 1) * dk >= 3 / fig2c.sigma_p
