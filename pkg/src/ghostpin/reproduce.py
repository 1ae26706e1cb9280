"""Built-in parameter sets for the published figures, with self-checks."""
from __future__ import annotations

import math
import warnings
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import List

import numpy as np

from . import analytic
from .commands import ImagingRun, export_jsp, sweep_rows
from .config import ObjectOptions, OutputOptions, RunConfig, RunOptions
from .engine import compute_jsp, dominant_peaks, ghost_pattern, illumination_width, visibility
from .exceptions import NotBimodal
from .grid import auto_grid
from .io import write_csv, write_sidecar
from .setup import OpticalSetup, validate_setup
from .source import psi_spdc

FIG2_PUMPS = {"a": 58e-6, "b": 102e-6, "c": 167e-6, "d": 800e-6}
FIG3_DISTANCES = (0.1, 0.3, 1.0)
FIG4_DISTANCES = (0.1, 0.3, 1.0)
FIG4_THICKNESSES = (0.5e-3, 1e-3, 2e-3, 3e-3, 5e-3, 10e-3)
FIG4_MODE_DISTANCES = (0.3, 1.0)
DOUBLE_SLIT = ObjectOptions(kind="double_slit", separation=940e-6, width=50e-6)
BASE = OpticalSetup(pm_model="sinc", propagation_mode="paraxial")


def complex_object_path() -> Path:
    return Path(str(resources.files("ghostpin") / "data" / "complex_object.csv"))


class CheckLog:
    def __init__(self):
        self.lines: List[str] = []
        self.failed = 0

    def add(self, name: str, passed: bool, detail: str) -> None:
        self.failed += not passed
        self.lines.append(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

    def write(self, path: Path) -> Path:
        path.write_text("\n".join(self.lines) + "\n")
        return path


def _complete_sidecars(paths: List[Path], command: str) -> List[Path]:
    """Give every output without a sidecar a minimal one; the command alone re-runs it."""
    out = list(paths)
    for p in paths:
        side = Path(str(p) + ".meta.json")
        if not p.name.endswith(".meta.json") and side not in paths:
            out.append(write_sidecar(p, command, ""))
    return out


def _imaging(setup: OpticalSetup, obj: ObjectOptions, fov_i: float = 16e-3) -> ImagingRun:
    cfg = RunConfig(setup=setup, object=obj, output=OutputOptions(jsp_max_size=512))
    cfg = replace(cfg, grid=replace(cfg.grid, fov_i=fov_i))
    spec = cfg.object_spec()
    grid = auto_grid(setup, spec, fov_i)
    psi = psi_spdc(grid, setup)
    return ImagingRun(cfg, grid, compute_jsp(psi, spec.sample(grid), setup))


def fig2(out: Path) -> List[Path]:
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    x_common = np.linspace(-8e-3, 8e-3, 1601)
    curves = {}
    runs = {}
    for tag, sp in FIG2_PUMPS.items():
        run = _imaging(BASE.replace(sigma_p=sp, d=0.3), DOUBLE_SLIT)
        runs[tag] = run
        paths += export_jsp(run, out, stem=f"fig2{tag}_jsp", command="reproduce fig2")
        g = ghost_pattern(run.jsp)
        curves[tag] = np.interp(x_common, g.x, g.values, left=0.0, right=0.0)
    header = ["x_i_m"] + [f"G_{t}_sigma_p_{FIG2_PUMPS[t] * 1e6:g}um" for t in FIG2_PUMPS]
    p = write_csv(out / "fig2e_ghost.csv", header, zip(x_common, *curves.values()))
    paths += [p, write_sidecar(p, "reproduce fig2", "", interpolated=True, pumps=FIG2_PUMPS)]

    checks = CheckLog()
    rl = validate_setup(BASE.replace(sigma_p=167e-6)).rayleigh_length
    checks.add("rayleigh_length", abs(rl / 0.5 - 1) <= 0.01, f"{rl:.5g} m vs 0.5 m +-1%")
    g = ghost_pattern(runs["c"].jsp)
    try:
        peaks = sorted(p.position for p in dominant_peaks(g))
        vis = visibility(g)
        ok = len(peaks) == 2 and all(abs(abs(x) / 2.35e-3 - 1) <= 0.05 for x in peaks) and vis < 0.4
        checks.add("fig2c_two_maxima", ok, f"maxima {peaks} m (+-2.35 mm +-5%), midpoint ratio {vis:.4f} (<0.4)")
    except NotBimodal as exc:
        checks.add("fig2c_two_maxima", False, str(exc))
    try:
        visibility(ghost_pattern(runs["a"].jsp))
        checks.add("fig2a_unresolved", False, "pattern resolved as two maxima")
    except NotBimodal:
        checks.add("fig2a_unresolved", True, "single dominant lobe")
    s2 = BASE.replace(sigma_p=167e-6, d=0.3, z_s=0.6)
    run = runs["c"]
    g2 = ghost_pattern(compute_jsp(psi_spdc(run.grid, s2), DOUBLE_SLIT.spec().sample(run.grid), s2))
    dev = float(np.max(np.abs(g2.values - g.values)) / np.max(g.values))
    checks.add("z_s_invariance", dev <= 1e-10, f"L-inf relative deviation {dev:.3g} (<=1e-10)")
    paths.append(checks.write(out / "fig2_checks.txt"))
    return _complete_sidecars(paths, "reproduce fig2")


def fig3(out: Path) -> List[Path]:
    out.mkdir(parents=True, exist_ok=True)
    sps = np.linspace(50e-6, 800e-6, 200)
    sg_cols, mag_cols = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for d in FIG3_DISTANCES:
            sg_cols.append([analytic.sigma_g(BASE.replace(sigma_p=s, d=d)) for s in sps])
            mag_cols.append([analytic.magnification(BASE.replace(sigma_p=s, d=d)) for s in sps])
        inf = [
            analytic.sigma_g_farfield(analytic.pinhole_sigma0(BASE.replace(sigma_p=s)), BASE.z_i, BASE.lambda_i)
            for s in sps
        ]
    dcols = [f"d_{d:g}m" for d in FIG3_DISTANCES]
    p1 = write_csv(out / "fig3a_sigma_g.csv", ["sigma_p"] + [f"sigma_g_{c}" for c in dcols] + ["sigma_g_d_inf"],
                   zip(sps, *sg_cols, inf))
    p2 = write_csv(out / "fig3b_magnification.csv", ["sigma_p"] + [f"x0_over_a_{c}" for c in dcols],
                   zip(sps, *mag_cols))
    paths = [p1, write_sidecar(p1, "reproduce fig3", ""), p2, write_sidecar(p2, "reproduce fig3", "")]

    checks = CheckLog()
    m = analytic.magnification_farfield(BASE.replace(d=0.3))
    checks.add("farfield_magnification", m == -5.0, f"{m!r} (exactly -5)")
    opt = analytic.optimize_pump_width(BASE.replace(d=0.3), "sigma_g", (50e-6, 800e-6))
    checks.add("sigma_g_argmin", abs(opt.sigma_p_star / 167e-6 - 1) <= 0.15,
               f"{opt.sigma_p_star * 1e6:.2f} um (167 um +-15%)")
    s0 = analytic.optimal_source(BASE.z_i, BASE.lambda_i)
    w = analytic.sigma_g_farfield(s0.sigma_0_star, BASE.z_i, BASE.lambda_i)
    rel = abs(w / (math.sqrt(2) * s0.sigma_0_star) - 1)
    checks.add("pinhole_optimum", rel <= 1e-9, f"relative deviation {rel:.3g} (<=1e-9)")
    paths.append(checks.write(out / "fig3_checks.txt"))
    return _complete_sidecars(paths, "reproduce fig3")


def fig4(out: Path) -> List[Path]:
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    sps = np.linspace(50e-6, 800e-6, 200)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cols = [[analytic.resolution(BASE.replace(sigma_p=s, d=d)) for s in sps] for d in FIG4_DISTANCES]
        p = write_csv(out / "fig4a_resolution.csv", ["sigma_p"] + [f"R_d_{d:g}m" for d in FIG4_DISTANCES],
                      zip(sps, *cols))
        paths += [p, write_sidecar(p, "reproduce fig4", "")]
        locus = []
        for d in np.geomspace(0.05, 2.0, 20):
            # the bucket plane only has to lie behind the object; G does not depend on it
            s = BASE.replace(d=float(d), z_s=max(BASE.z_s, float(d)))
            o = analytic.optimize_pump_width(s, "resolution", (20e-6, 2e-3))
            locus.append([float(d), o.sigma_p_star, o.value])
    p = write_csv(out / "fig4a_minima.csv", ["d", "sigma_p_star", "R_min"], locus)
    paths += [p, write_sidecar(p, "reproduce fig4", "")]

    mode_rows = []
    for d in FIG4_MODE_DISTANCES:
        cfg = RunConfig(setup=BASE.replace(d=d), run=RunOptions(reoptimize="resolution"))
        _, rows = sweep_rows(cfg, "l_z", np.array(FIG4_THICKNESSES), engine=True)
        mode_rows += [[d] + r for r in rows]
    p = write_csv(out / "fig4c_modes.csv",
                  ["d", "l_z", "sigma_p", "sigma_g", "magnification", "sigma_0", "resolution", "sigma_s", "n_modes"],
                  mode_rows)
    paths += [p, write_sidecar(p, "reproduce fig4", "")]

    run_b = _imaging(BASE.replace(sigma_p=102e-6, d=0.1), DOUBLE_SLIT, fov_i=40e-3)
    paths += export_jsp(run_b, out, stem="fig4b_jsp", command="reproduce fig4")
    gb = ghost_pattern(run_b.jsp)
    p = write_csv(out / "fig4b_ghost.csv", ["x_i_m", "G"], zip(gb.x, gb.values))
    paths += [p, write_sidecar(p, "reproduce fig4", "")]

    obj_d = ObjectOptions(kind="file", path=str(complex_object_path()))
    run_d = _imaging(BASE.replace(sigma_p=258e-6, d=1.0), obj_d, fov_i=24e-3)
    paths += export_jsp(run_d, out, stem="fig4d_jsp", command="reproduce fig4")
    gd = ghost_pattern(run_d.jsp)
    t = obj_d.spec().sample(run_d.grid).samples.real
    p = write_csv(out / "fig4d_ghost.csv", ["x_i_m", "G"], zip(gd.x, gd.values))
    q = write_csv(out / "fig4d_object.csv", ["x_s_m", "transmission"], zip(run_d.grid.x_s, t))
    paths += [p, write_sidecar(p, "reproduce fig4", "", object="illustrative, not published data"), q]

    checks = CheckLog()
    s = BASE.replace(sigma_p=258e-6, d=1.0)
    m = analytic.magnification(s)
    checks.add("magnification_eq3", abs(m + 1.2) <= 0.05, f"{m:.4f} (-1.2 +-0.05)")
    r = analytic.resolution(s)
    checks.add("resolution_eq7", abs(r / 1.5e-3 - 1) <= 0.05, f"{r * 1e3:.4f} mm (1.5 mm +-5%)")
    sig = illumination_width(None, validate_setup(s)).sigma_s
    checks.add("mode_count", abs(sig / r - 10) <= 2, f"N = {sig / r:.3f} with sigma_S = {sig * 1e3:.3f} mm (10 +-2)")
    n_col = [row[-1] for row in mode_rows if row[0] == 1.0]
    mono = all(a > b for a, b in zip(n_col, n_col[1:]))
    checks.add("modes_decrease_with_l_z", mono, f"N at d=1 m: {[round(v, 3) for v in n_col]}")
    paths.append(checks.write(out / "fig4_checks.txt"))
    return _complete_sidecars(paths, "reproduce fig4")


FIGURES = {"fig2": fig2, "fig3": fig3, "fig4": fig4}
