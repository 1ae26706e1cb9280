"""Run configuration: a sectioned key-value file with unit-suffixed lengths.

Example::

    [setup]
    sigma_p = 167um
    d = 30cm

    [object]
    kind = double_slit
    separation = 940um
    width = 50um

Unknown sections or keys are rejected.  Missing setup keys take the
defaults of :class:`~ghostpin.setup.OpticalSetup`.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Union

from .exceptions import ConfigError
from .objects import ObjectSpec
from .setup import LENGTH_FIELDS, OpticalSetup, parse_length


@dataclass(frozen=True)
class GridOptions:
    """``None`` means "auto" for every field except ``fov_i``."""

    n_s: Optional[int] = None
    n_i: Optional[int] = None
    window_s: Optional[float] = None
    window_i: Optional[float] = None
    fov_i: float = 10e-3

    @property
    def auto(self) -> bool:
        return None in (self.n_s, self.n_i, self.window_s, self.window_i)


@dataclass(frozen=True)
class ObjectOptions:
    kind: str
    center: float = 0.0
    width: Optional[float] = None
    separation: Optional[float] = None
    path: Optional[str] = None

    def spec(self, base_dir: Optional[Path] = None) -> ObjectSpec:
        path = self.path
        if path is not None and base_dir is not None and not Path(path).is_absolute():
            path = str(base_dir / path)
        try:
            return ObjectSpec(self.kind, self.center, self.width, self.separation, path)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"[object] {exc}") from exc


@dataclass(frozen=True)
class RunOptions:
    threshold: float = 0.4
    axis: str = "sigma_p"
    start: Optional[float] = None
    stop: Optional[float] = None
    points: int = 50
    engine: bool = False
    reoptimize: str = "none"
    objective: str = "resolution"
    bounds_lo: float = 20e-6
    bounds_hi: float = 2e-3


@dataclass(frozen=True)
class OutputOptions:
    directory: str = "out"
    formats: tuple = ("csv", "pgm")
    jsp_max_size: int = 512


@dataclass(frozen=True)
class RunConfig:
    setup: OpticalSetup = field(default_factory=OpticalSetup)
    grid: GridOptions = field(default_factory=GridOptions)
    object: Optional[ObjectOptions] = None
    run: RunOptions = field(default_factory=RunOptions)
    output: OutputOptions = field(default_factory=OutputOptions)
    base_dir: Optional[Path] = field(default=None, compare=False)

    def object_spec(self) -> ObjectSpec:
        if self.object is None:
            raise ConfigError("config has no [object] section")
        return self.object.spec(self.base_dir)

    def with_overrides(self, **setup_changes) -> "RunConfig":
        changes = {k: v for k, v in setup_changes.items() if v is not None}
        return replace(self, setup=self.setup.replace(**changes)) if changes else self

    def to_text(self) -> str:
        return dump_config(self)


_SETUP_ENUMS = ("propagation_mode", "pm_model")
_GRID_INT = ("n_s", "n_i")
_GRID_LEN = ("window_s", "window_i", "fov_i")
_OBJECT_LEN = ("center", "width", "separation")
_RUN_LEN = ("start", "stop", "bounds_lo", "bounds_hi")
_RUN_AXIS_LEN = ("sigma_p", "d", "l_z")


def _check_keys(section: str, items: dict, allowed) -> None:
    unknown = set(items) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _int(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from None


def parse_config(text: str, base_dir: Optional[Path] = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    sections = set(cp.sections())
    unknown = sections - {"setup", "grid", "object", "run", "output"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    kw = {}
    if "setup" in sections:
        items = dict(cp["setup"])
        _check_keys("setup", items, LENGTH_FIELDS + _SETUP_ENUMS)
        for k, v in items.items():
            kw[k] = v.strip() if k in _SETUP_ENUMS else parse_length(v)
    try:
        setup = OpticalSetup(**kw)
    except ValueError as exc:
        raise ConfigError(f"[setup] {exc}") from exc

    gkw = {}
    if "grid" in sections:
        items = dict(cp["grid"])
        _check_keys("grid", items, _GRID_INT + _GRID_LEN)
        for k, v in items.items():
            if v.strip().lower() == "auto":
                if k == "fov_i":
                    raise ConfigError("fov_i cannot be auto")
                continue
            gkw[k] = _int(v, k) if k in _GRID_INT else parse_length(v)
    grid = GridOptions(**gkw)

    obj = None
    if "object" in sections:
        items = dict(cp["object"])
        _check_keys("object", items, ("kind", "path") + _OBJECT_LEN)
        if "kind" not in items:
            raise ConfigError("[object] needs a kind")
        okw = {k: parse_length(v) for k, v in items.items() if k in _OBJECT_LEN}
        obj = ObjectOptions(kind=items["kind"].strip(), path=items.get("path"), **okw)
        if obj.kind not in ObjectSpec.KINDS:
            raise ConfigError(f"[object] unknown kind {obj.kind!r}")

    rkw = {}
    if "run" in sections:
        items = dict(cp["run"])
        allowed = [f.name for f in fields(RunOptions)]
        _check_keys("run", items, allowed)
        for k, v in items.items():
            if k in _RUN_LEN:
                rkw[k] = parse_length(v)
            elif k == "threshold":
                rkw[k] = float(v)
            elif k == "points":
                rkw[k] = _int(v, k)
            elif k == "engine":
                rkw[k] = _bool(v)
            else:
                rkw[k] = v.strip()
    run = RunOptions(**rkw)

    ookw = {}
    if "output" in sections:
        items = dict(cp["output"])
        _check_keys("output", items, [f.name for f in fields(OutputOptions)])
        for k, v in items.items():
            if k == "formats":
                ookw[k] = tuple(s.strip() for s in v.split(",") if s.strip())
            elif k == "jsp_max_size":
                ookw[k] = _int(v, k)
            else:
                ookw[k] = v.strip()
    output = OutputOptions(**ookw)
    return RunConfig(setup, grid, obj, run, output, base_dir)


def load_config(path: Union[str, Path]) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, p.parent)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(value)
    if hasattr(value, "value"):
        return value.value
    return str(value)


def dump_config(cfg: RunConfig) -> str:
    """Serialise ``cfg``; floats use the shortest round-trip representation (metres)."""
    lines = ["[setup]"]
    for k, v in cfg.setup.as_dict().items():
        lines.append(f"{k} = {_fmt(v)}")
    lines += ["", "[grid]"]
    for f in fields(GridOptions):
        v = getattr(cfg.grid, f.name)
        lines.append(f"{f.name} = {'auto' if v is None else _fmt(v)}")
    if cfg.object is not None:
        lines += ["", "[object]"]
        for f in fields(ObjectOptions):
            v = getattr(cfg.object, f.name)
            if v is not None:
                lines.append(f"{f.name} = {_fmt(v)}")
    lines += ["", "[run]"]
    for f in fields(RunOptions):
        v = getattr(cfg.run, f.name)
        if v is not None:
            lines.append(f"{f.name} = {_fmt(v)}")
    lines += ["", "[output]"]
    for f in fields(OutputOptions):
        lines.append(f"{f.name} = {_fmt(getattr(cfg.output, f.name))}")
    return "\n".join(lines) + "\n"
