"""Run configuration read from a TOML file.

A config names the system either by its raw matrix entries (``[raw]``) or by
its Liénard parameters (``[params]``), never both::

    method = "cubic"

    [params]
    tL = 0.4
    tR = -0.3
    dL = 3.0
    dR = 0.1
    a = -0.2

    [integrator]
    rel_tol = 1e-10

    [scan]
    grid_size = 64

    [output]
    dir = "out"
    figures = true

    [sweep]
    workers = 2
    axes = { tL = [-1.0, 1.0, 11], a = [-0.5, 0.5, 11] }

Every unknown key is an error, so a typo cannot silently fall back to a
default.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..cycle import DEFAULT_SCAN, ScanConfig
from ..errors import ConfigError
from ..flow import DEFAULT_CONFIG, IntegratorConfig
from ..lienard import LienardParams, PwlSystem

__all__ = [
    "METHODS",
    "EmitFlags",
    "SweepSpec",
    "RunConfig",
    "parse_config",
    "load_config",
    "params_config",
]

METHODS = ("direct", "cubic", "both")
PARAM_NAMES = ("tL", "tR", "dL", "dR", "a")
RAW_NAMES = ("aL11", "aL21", "aR11", "aR21", "a12", "a22", "b1", "b2")


@dataclass(frozen=True)
class EmitFlags:
    figures: bool = True
    orbits: bool = True
    report: bool = True

    def to_dict(self):
        return {"figures": self.figures, "orbits": self.orbits, "report": self.report}


@dataclass(frozen=True)
class SweepSpec:
    """Grid axes as ``name -> (lo, hi, n)``; unswept parameters keep the base value."""

    axes: tuple[tuple[str, float, float, int], ...]
    workers: int = 1

    def axis_values(self):
        out = []
        for name, lo, hi, n in self.axes:
            if n == 1:
                out.append((name, [float(lo)]))
            else:
                step = (hi - lo) / (n - 1)
                out.append((name, [lo + i * step for i in range(n - 1)] + [float(hi)]))
        return out

    def to_dict(self):
        return {
            "workers": self.workers,
            "axes": {name: [lo, hi, n] for name, lo, hi, n in self.axes},
        }


@dataclass(frozen=True)
class RunConfig:
    raw: PwlSystem | None = None
    params: LienardParams | None = None
    integrator: IntegratorConfig = DEFAULT_CONFIG
    scan: ScanConfig = DEFAULT_SCAN
    method: str = "cubic"
    out_dir: Path = Path("out")
    emit: EmitFlags = field(default_factory=EmitFlags)
    sweep: SweepSpec | None = None
    source: str | None = None

    def __post_init__(self):
        if (self.raw is None) == (self.params is None):
            raise ConfigError("exactly one of [raw] and [params] must be given")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")

    @property
    def scan_config(self) -> ScanConfig:
        """Scan settings carrying this run's integrator settings."""
        return replace(self.scan, integrator=self.integrator)

    def with_overrides(self, *, method=None, out_dir=None) -> "RunConfig":
        changes = {}
        if method is not None:
            changes["method"] = method
        if out_dir is not None:
            changes["out_dir"] = Path(out_dir)
        return replace(self, **changes) if changes else self

    def to_dict(self):
        d = {
            "method": self.method,
            "integrator": self.integrator.to_dict(),
            "scan": {k: v for k, v in self.scan.to_dict().items() if k != "integrator"},
            "output": {"dir": str(self.out_dir), **self.emit.to_dict()},
        }
        if self.raw is not None:
            d["raw"] = {n: getattr(self.raw, n) for n in RAW_NAMES}
        else:
            d["params"] = self.params.to_dict()
        if self.sweep is not None:
            d["sweep"] = self.sweep.to_dict()
        if self.source is not None:
            d["source"] = self.source
        return d


def _table(doc, key):
    t = doc.get(key, {})
    if not isinstance(t, dict):
        raise ConfigError(f"[{key}] must be a table")
    return t


def _reject_unknown(table, allowed, where):
    extra = sorted(set(table) - set(allowed))
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _number(table, key, where):
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{where}.{key} must be finite")
    return v


def _numbers(table, names, where, required):
    _reject_unknown(table, names, where)
    if required:
        missing = [n for n in names if n not in table]
        if missing:
            raise ConfigError(f"missing key(s) in {where}: {', '.join(missing)}")
    return {n: _number(table, n, where) for n in names if n in table}


def _build(cls, kwargs, where):
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{where}]: {exc}") from exc


def _parse_sweep(t):
    _reject_unknown(t, ("axes", "workers"), "[sweep]")
    axes_t = t.get("axes", {})
    if not isinstance(axes_t, dict) or not axes_t:
        raise ConfigError("[sweep] needs a non-empty axes table")
    _reject_unknown(axes_t, PARAM_NAMES, "[sweep.axes]")
    axes = []
    for name in PARAM_NAMES:
        if name not in axes_t:
            continue
        spec = axes_t[name]
        if not (isinstance(spec, list) and len(spec) == 3):
            raise ConfigError(f"sweep axis {name} must be [lo, hi, n]")
        lo, hi, n = spec
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(f"sweep axis {name}: n must be a positive integer")
        box = {"lo": lo, "hi": hi}
        axes.append((name, _number(box, "lo", name), _number(box, "hi", name), n))
    workers = t.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("[sweep] workers must be a positive integer")
    return SweepSpec(tuple(axes), workers)


def parse_config(doc: dict, source: str | None = None) -> RunConfig:
    """Validate a decoded TOML document into a :class:`RunConfig`."""
    _reject_unknown(
        doc, ("method", "params", "raw", "integrator", "scan", "output", "sweep"), "config"
    )
    raw = params = None
    if "raw" in doc:
        vals = _numbers(_table(doc, "raw"), RAW_NAMES, "[raw]", required=True)
        raw = _build(PwlSystem, vals, "raw")
    if "params" in doc:
        vals = _numbers(_table(doc, "params"), PARAM_NAMES, "[params]", required=True)
        params = _build(LienardParams, vals, "params")

    integ_t = _table(doc, "integrator")
    integ_names = [f.name for f in fields(IntegratorConfig)]
    _reject_unknown(integ_t, integ_names, "[integrator]")
    integ_kw = {}
    for k, v in integ_t.items():
        integ_kw[k] = int(v) if k == "max_steps" and isinstance(v, int) else _number(integ_t, k, "[integrator]")
    integrator = _build(IntegratorConfig, integ_kw, "integrator")

    scan_t = _table(doc, "scan")
    _reject_unknown(scan_t, ("grid_size", "grid_lo", "domain_cap", "root_tol"), "[scan]")
    scan_kw = {}
    for k in scan_t:
        if k == "grid_size":
            if isinstance(scan_t[k], bool) or not isinstance(scan_t[k], int):
                raise ConfigError("[scan] grid_size must be an integer")
            scan_kw[k] = scan_t[k]
        else:
            scan_kw[k] = _number(scan_t, k, "[scan]")
    scan = _build(ScanConfig, {**scan_kw, "integrator": integrator}, "scan")

    out_t = _table(doc, "output")
    _reject_unknown(out_t, ("dir", "figures", "orbits", "report"), "[output]")
    flags = {}
    for k in ("figures", "orbits", "report"):
        if k in out_t:
            if not isinstance(out_t[k], bool):
                raise ConfigError(f"[output] {k} must be true or false")
            flags[k] = out_t[k]
    out_dir = out_t.get("dir", "out")
    if not isinstance(out_dir, str) or not out_dir:
        raise ConfigError("[output] dir must be a non-empty string")

    method = doc.get("method", "cubic")
    sweep = _parse_sweep(_table(doc, "sweep")) if "sweep" in doc else None
    return RunConfig(
        raw=raw,
        params=params,
        integrator=integrator,
        scan=scan,
        method=method,
        out_dir=Path(out_dir),
        emit=EmitFlags(**flags),
        sweep=sweep,
        source=source,
    )


def load_config(path) -> RunConfig:
    """Read and validate a TOML config file.

    Raises
    ------
    ConfigError
        Unreadable file, TOML syntax error, or invalid contents.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(doc, source=str(path))


def params_config(params: LienardParams, **kwargs) -> RunConfig:
    """A config for ``params`` with default settings, for programmatic use."""
    return RunConfig(params=params, **kwargs)
