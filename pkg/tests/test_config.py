import pytest

from ghostpin.config import dump_config, load_config, parse_config
from ghostpin.exceptions import ConfigError
from ghostpin.setup import PhaseMatchingModel

FIG2C = """
[setup]
lambda_p = 350nm
lambda_s = 700nm
lambda_i = 700nm
l_z = 3mm
sigma_p = 167um   # pump width
d = 30cm
z_s = 1.2m
z_i = 1.5m
pm_model = sinc

[grid]
n_s = auto
fov_i = 16mm

[object]
kind = double_slit
separation = 940um
width = 50um

[run]
threshold = 0.4
axis = d
engine = false

[output]
directory = results
formats = csv
"""


def test_parse():
    cfg = parse_config(FIG2C)
    assert cfg.setup.sigma_p == pytest.approx(167e-6)
    assert cfg.setup.pm_model is PhaseMatchingModel.SINC
    assert cfg.grid.auto and cfg.grid.fov_i == pytest.approx(16e-3)
    assert cfg.object.kind == "double_slit"
    assert cfg.run.axis == "d" and cfg.output.formats == ("csv",)


def test_round_trip_lossless():
    cfg = parse_config(FIG2C)
    text = dump_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert dump_config(again) == text


def test_round_trip_awkward_floats():
    cfg = parse_config("[setup]\nsigma_p = 0.1\nd = 0.30000000000000004\nz_s=1.2\n[grid]\nfov_i=1e-3\n")
    again = parse_config(dump_config(cfg))
    assert again.setup.d == 0.30000000000000004
    assert again == cfg


@pytest.mark.parametrize(
    "text",
    [
        "[setup]\nsigma_q = 1mm\n",
        "[extra]\na = 1\n",
        "[grid]\nn_s = many\n",
        "[grid]\nfov_i = auto\n",
        "[object]\nwidth = 1mm\n",
        "[object]\nkind = hologram\n",
        "[setup]\npm_model = lorentz\n",
        "[run]\nengine = maybe\n",
        "[setup]\nd = 3 parsecs\n",
        "no section header\n",
    ],
)
def test_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_missing_object_section():
    cfg = parse_config("[setup]\nd = 30cm\n")
    with pytest.raises(ConfigError):
        cfg.object_spec()


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.ini")


def test_relative_object_path(tmp_path):
    (tmp_path / "obj.csv").write_text("-1e-3,0\n0,1\n1e-3,0\n")
    (tmp_path / "run.ini").write_text("[object]\nkind = file\npath = obj.csv\n")
    spec = load_config(tmp_path / "run.ini").object_spec()
    assert spec.half_extent == pytest.approx(0.0, abs=1e-3)


def test_overrides():
    cfg = parse_config(FIG2C).with_overrides(propagation_mode="exact", pm_model=None)
    assert cfg.setup.propagation_mode.value == "exact"
    assert cfg.setup.pm_model.value == "sinc"
