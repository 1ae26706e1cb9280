import numpy as np
import pytest

from ghostpin.exceptions import NonMonotonicX, ObjectUnresolvable, OutOfWindow, ParseError, ValueOutOfRange
from ghostpin.grid import make_grid
from ghostpin.objects import ObjectSpec, delta_slit, double_slit, from_file, read_object_csv, slit, uniform
from ghostpin.reproduce import complex_object_path

GRID = make_grid(1024, 64, 1024 * 12.5e-6, 64 * 1e-5)


def test_slit_samples():
    t = slit(0.0, 50e-6, GRID)
    n = int(np.count_nonzero(t.samples))
    assert 4 <= n <= 5
    nz = np.flatnonzero(t.samples)
    assert GRID.x_s[nz].mean() == pytest.approx(0.0, abs=1e-15)


def test_slit_power_fraction():
    g = make_grid(4096, 64, 4096 * 1e-6, 64e-5)
    t = slit(1e-4, 200e-6, g)
    frac = np.sum(np.abs(t.samples) ** 2) / g.n_s
    assert frac == pytest.approx(200e-6 / g.window_s, rel=0.01)


def test_slit_errors():
    with pytest.raises(OutOfWindow):
        slit(10e-3, 50e-6, GRID)
    with pytest.raises(ObjectUnresolvable):
        slit(0.0, 20e-6, GRID)


def test_delta_slit():
    t = delta_slit(0.0, GRID)
    assert np.flatnonzero(t.samples).tolist() == [GRID.n_s // 2]
    assert t.samples[GRID.n_s // 2] == 1 / GRID.dx_s
    s = delta_slit(0.3 * GRID.dx_s, GRID)
    assert np.flatnonzero(s.samples).tolist() == [GRID.n_s // 2]
    assert s.snap_distance == pytest.approx(-0.3 * GRID.dx_s)
    with pytest.raises(OutOfWindow):
        delta_slit(1.0, GRID)


def test_two_delta_symmetric():
    t = ObjectSpec("two_delta", separation=40 * GRID.dx_s).sample(GRID)
    nz = np.flatnonzero(t.samples)
    assert GRID.x_s[nz].tolist() == [-20 * GRID.dx_s, 20 * GRID.dx_s]


def test_double_slit_symmetric():
    t = double_slit(940e-6, 50e-6, GRID).samples
    # x = 0 sits at n/2, so the mirror of index i is n - i
    assert np.array_equal(t[1:], t[1:][::-1])
    assert np.all(np.abs(t) <= 1)
    double_slit(100e-6, 50e-6, GRID)
    with pytest.raises(ValueError):
        double_slit(50e-6, 50e-6, GRID)


def test_uniform():
    assert np.all(uniform(GRID).samples == 1)


def _write(tmp_path, text):
    p = tmp_path / "obj.csv"
    p.write_text(text)
    return p


def test_file_triangle(tmp_path):
    p = _write(tmp_path, "x_m,transmission\n-1e-3,0\n0,1\n1e-3,0\n")
    t = from_file(p, GRID).samples.real
    x = GRID.x_s
    expected = np.clip(1 - np.abs(x) / 1e-3, 0, 1)
    assert np.allclose(t, expected, atol=1e-12)


def test_file_phase_column(tmp_path):
    p = _write(tmp_path, "# comment\n-1e-3,1,0.5\n1e-3,1,0.5\n")
    t = from_file(p, GRID).samples
    inside = np.abs(GRID.x_s) <= 1e-3
    assert np.allclose(t[inside], np.exp(0.5j))
    assert np.all(np.abs(t) <= 1 + 1e-12)


@pytest.mark.parametrize(
    "text, exc",
    [
        ("0,0\n-1e-3,1\n", NonMonotonicX),
        ("0,0\n1e-3,1.5\n", ValueOutOfRange),
        ("0,0\n1e-3,abc\n", ParseError),
        ("0,0,0,0\n1,1,1,1\n", ParseError),
        ("0,0\n", ParseError),
    ],
)
def test_file_errors(tmp_path, text, exc):
    with pytest.raises(exc):
        read_object_csv(_write(tmp_path, text))


def test_file_clamp_tolerance(tmp_path):
    t = from_file(_write(tmp_path, "-1e-3,1.0000005\n1e-3,1.0000005\n"), GRID).samples
    assert np.max(np.abs(t)) == 1.0


def test_shipped_complex_object():
    data = read_object_csv(complex_object_path())
    assert data.shape[1] == 3
    spec = ObjectSpec("file", path=str(complex_object_path()))
    assert spec.feature_size > 0 and spec.half_extent > 1e-3


def test_spec_extents():
    assert ObjectSpec("double_slit", width=50e-6, separation=940e-6).half_extent == pytest.approx(495e-6)
    assert ObjectSpec("slit", center=-1e-3, width=2e-4).half_extent == pytest.approx(1.1e-3)
    with pytest.raises(ValueError):
        ObjectSpec("slit")
    with pytest.raises(ValueError):
        ObjectSpec("hologram")
