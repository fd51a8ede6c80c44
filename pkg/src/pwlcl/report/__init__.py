"""Configuration, run records, figures and parameter sweeps for the CLI."""

from .config import RunConfig, load_config, parse_config
from .figures import render_figures, write_figures
from .record import SCHEMA_VERSION, build_record, load_record, save_record
from .sweep import run_sweep

__all__ = [
    "RunConfig",
    "SCHEMA_VERSION",
    "build_record",
    "load_config",
    "load_record",
    "parse_config",
    "render_figures",
    "run_sweep",
    "save_record",
    "write_figures",
]
