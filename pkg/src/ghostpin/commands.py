"""Orchestration behind the CLI subcommands."""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import analytic
from .config import RunConfig
from .engine import JspResult, bimodal_summary, compute_jsp, ghost_pattern, illumination_width
from .exceptions import BoundsInvalid, NotBimodal
from .grid import SpectralGrid, auto_grid, make_grid
from .io import write_csv, write_matrix_csv, write_pgm, write_sidecar
from .setup import validate_setup
from .source import psi_spdc

log = logging.getLogger(__name__)


@dataclass
class ImagingRun:
    config: RunConfig
    grid: SpectralGrid
    jsp: JspResult


def resolve_grid(cfg: RunConfig, spec) -> SpectralGrid:
    g = cfg.grid
    if g.auto:
        return auto_grid(cfg.setup, spec, g.fov_i)
    return make_grid(g.n_s, g.n_i, g.window_s, g.window_i)


def run_imaging(cfg: RunConfig) -> ImagingRun:
    vs = validate_setup(cfg.setup)
    spec = cfg.object_spec()
    grid = resolve_grid(cfg, spec)
    log.info("grid n_s=%d n_i=%d dx_s=%.4g dx_i=%.4g", grid.n_s, grid.n_i, grid.dx_s, grid.dx_i)
    psi = psi_spdc(grid, vs)
    jsp = compute_jsp(psi, spec.sample(grid), vs)
    return ImagingRun(cfg, grid, jsp)


def _meta(run: ImagingRun) -> dict:
    g = run.grid
    return {
        "setup": run.config.setup.as_dict(),
        "grid": {**g.as_dict(), "x_s0": float(g.x_s[0]), "x_i0": float(g.x_i[0])},
        "normalization": run.jsp.normalization,
        "raw_mass": run.jsp.raw_mass,
        "object": run.jsp.object_descriptor,
        "signal_edge_fraction": run.jsp.signal_edge_fraction,
    }


def _stride(n: int, max_size: int) -> int:
    return max(1, math.ceil(n / max_size))


def export_jsp(run: ImagingRun, out: Path, stem: str = "jsp", command: str = "jsp") -> List[Path]:
    """JSP matrix CSV (rows are x_S samples) and a log-scaled PGM preview."""
    out.mkdir(parents=True, exist_ok=True)
    cfg = run.config
    ss = _stride(run.grid.n_s, cfg.output.jsp_max_size)
    si = _stride(run.grid.n_i, cfg.output.jsp_max_size)
    m = run.jsp.values[::ss, ::si]
    meta = {**_meta(run), "stride_s": ss, "stride_i": si, "rows": "x_S", "columns": "x_I"}
    paths = []
    if "csv" in cfg.output.formats:
        p = write_matrix_csv(out / f"{stem}.csv", m)
        paths += [p, write_sidecar(p, command, cfg.to_text(), **meta)]
    if "pgm" in cfg.output.formats:
        p = write_pgm(out / f"{stem}.pgm", m)
        paths += [p, write_sidecar(p, command, cfg.to_text(), **meta, log_floor=1e-6)]
    return paths


def cmd_jsp(cfg: RunConfig, out: Path) -> List[Path]:
    return export_jsp(run_imaging(cfg), out)


def cmd_ghost(cfg: RunConfig, out: Path) -> List[Path]:
    run = run_imaging(cfg)
    pattern = ghost_pattern(run.jsp)
    out.mkdir(parents=True, exist_ok=True)
    p = write_csv(out / "ghost.csv", ["x_i_m", "G"], zip(pattern.x, pattern.values))
    paths = [p, write_sidecar(p, "ghost", cfg.to_text(), **_meta(run))]
    try:
        s = bimodal_summary(pattern)
    except NotBimodal as exc:
        print(f"NotBimodal: {exc}; no peak summary written")
        return paths
    rows = [
        ["lower", s.maxima[0], s.centers[0], s.widths[0], s.visibility],
        ["upper", s.maxima[1], s.centers[1], s.widths[1], s.visibility],
    ]
    q = write_csv(out / "ghost_summary.csv", ["peak", "max_position_m", "fit_center_m", "fit_width_m", "visibility"], rows)
    paths += [q, write_sidecar(q, "ghost", cfg.to_text(), **_meta(run))]
    print(f"maxima at {s.maxima[0]:.6g} m and {s.maxima[1]:.6g} m, midpoint ratio {s.visibility:.4f}")
    return paths


REPORT_UNITS = {
    "alpha1": "m^2",
    "alpha2": "",
    "sigma_g": "m",
    "magnification": "",
    "magnification_farfield": "",
    "sigma_0": "m",
    "resolution_r": "m",
    "n_modes": "",
    "sigma_s_used": "m",
    "threshold": "",
    "rayleigh_length": "m",
}


def format_report(rep: analytic.AnalyticReport) -> str:
    d = rep.as_dict()
    width = max(len(k) for k in d)
    lines = []
    for k, v in d.items():
        if v is None:
            text = "n/a"
        elif isinstance(v, complex):
            text = f"{v.real:.10g} {'+' if v.imag >= 0 else '-'} {abs(v.imag):.10g}j"
        else:
            text = f"{v:.10g}"
        unit = REPORT_UNITS.get(k, "") if v is not None else ""
        lines.append(f"{k:<{width}} = {text}{' ' + unit if unit else ''}")
    return "\n".join(lines)


def cmd_analytic(cfg: RunConfig, out: Optional[Path]) -> List[Path]:
    vs = validate_setup(cfg.setup)
    sigma_s = illumination_width(None, vs).sigma_s if cfg.run.engine else None
    rep = analytic.report(vs, cfg.run.threshold, sigma_s)
    print(format_report(rep))
    paths = []
    if out is not None and "csv" in cfg.output.formats:
        out.mkdir(parents=True, exist_ok=True)
        d = rep.as_dict()
        flat = {}
        for k, v in d.items():
            if isinstance(v, complex):
                flat[f"{k}_re"], flat[f"{k}_im"] = v.real, v.imag
            else:
                flat[k] = math.nan if v is None else v
        p = write_csv(out / "analytic.csv", list(flat), [list(flat.values())])
        paths += [p, write_sidecar(p, "analytic", cfg.to_text(), setup=cfg.setup.as_dict())]
    return paths


SWEEP_DEFAULTS = {"sigma_p": (50e-6, 800e-6), "d": (0.05, 2.0), "l_z": (0.5e-3, 10e-3)}


def sweep_rows(cfg: RunConfig, axis: str, values: np.ndarray, engine: bool) -> tuple:
    header = ["value", "sigma_p", "sigma_g", "magnification", "sigma_0", "resolution"]
    if engine:
        header += ["sigma_s", "n_modes"]
    rows = []
    for v in values:
        s = cfg.setup.replace(**{axis: float(v)})
        if cfg.run.reoptimize != "none" and axis != "sigma_p":
            opt = analytic.optimize_pump_width(
                s, cfg.run.reoptimize, (cfg.run.bounds_lo, cfg.run.bounds_hi), cfg.run.threshold
            )
            s = s.replace(sigma_p=opt.sigma_p_star)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vs = validate_setup(s)
        r = analytic.resolution(vs, cfg.run.threshold)
        row = [float(v), vs.sigma_p, analytic.sigma_g(vs), analytic.magnification(vs), analytic.pinhole_sigma0(vs), r]
        if engine:
            sig = illumination_width(None, vs).sigma_s
            row += [sig, sig / r]
        rows.append(row)
    return header, rows


def sweep_values(cfg: RunConfig, axis: str) -> np.ndarray:
    if axis not in SWEEP_DEFAULTS:
        raise BoundsInvalid(f"sweep axis must be one of {sorted(SWEEP_DEFAULTS)}, got {axis!r}")
    lo, hi = SWEEP_DEFAULTS[axis]
    start = cfg.run.start if cfg.run.start is not None else lo
    stop = cfg.run.stop if cfg.run.stop is not None else hi
    if cfg.run.points < 2:
        raise BoundsInvalid("a sweep needs at least two points")
    if not 0 < start < stop:
        raise BoundsInvalid(f"sweep range must be positive and increasing, got [{start}, {stop}]")
    return np.linspace(start, stop, cfg.run.points)


def cmd_sweep(cfg: RunConfig, out: Path) -> List[Path]:
    axis = cfg.run.axis
    values = sweep_values(cfg, axis)
    header, rows = sweep_rows(cfg, axis, values, cfg.run.engine)
    out.mkdir(parents=True, exist_ok=True)
    p = write_csv(out / f"sweep_{axis}.csv", header, rows)
    return [p, write_sidecar(p, "sweep", cfg.to_text(), axis=axis)]


def cmd_optimize(cfg: RunConfig, out: Optional[Path]) -> List[Path]:
    res = analytic.optimize_pump_width(
        cfg.setup, cfg.run.objective, (cfg.run.bounds_lo, cfg.run.bounds_hi), cfg.run.threshold
    )
    print(f"objective    = {cfg.run.objective}")
    print(f"sigma_p_star = {res.sigma_p_star:.10g} m")
    print(f"value        = {res.value:.10g} m")
    if res.multimodal:
        print("warning: objective is multimodal on the bounds; best bracket refined")
    paths = []
    if out is not None and "csv" in cfg.output.formats:
        out.mkdir(parents=True, exist_ok=True)
        p = write_csv(
            out / "optimize.csv",
            ["objective", "sigma_p_star", "value", "multimodal"],
            [[cfg.run.objective, res.sigma_p_star, res.value, str(res.multimodal).lower()]],
        )
        paths += [p, write_sidecar(p, "optimize", cfg.to_text())]
    return paths
