"""Command-line interface: ``pwlcl analyze|halfmap|sweep|figures|reproduce-example``.

Exit codes: 0 on success, 2 when the verdict rules out a limit cycle (not
an error), 1 on any error. ``PWLCL_LOG`` sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .audit import property_audit
from .errors import ConfigError, PwlError
from .flow import Direction, Half
from .halfmap import MAPS
from .report.config import METHODS, RunConfig, load_config
from .report.figures import csv_text, write_figures
from .report.record import build_record, halfmap_table, load_record, resolve_input, save_record
from .report.sweep import atlas_csv, run_sweep
from .sampling import EXAMPLE_PARAMS

log = logging.getLogger("pwlcl")

EXIT_OK, EXIT_ERROR, EXIT_NO_CYCLE = 0, 1, 2


def _setup_logging():
    level = os.environ.get("PWLCL_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _provenance(exc: BaseException) -> str:
    """Module of the innermost package frame that raised ``exc``."""
    tb, mod = exc.__traceback__, "pwlcl"
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", "")
        if name.startswith("pwlcl"):
            mod = name
        tb = tb.tb_next
    return mod


def _fail(exc: BaseException) -> int:
    print(f"error [{_provenance(exc)}] {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


def _config(args) -> RunConfig:
    if args.config is None:
        raise ConfigError("--config PATH is required")
    return load_config(args.config).with_overrides(method=args.method, out_dir=args.out)


def _summary(rec) -> str:
    lines = [f"verdict: {rec['verdict']}"]
    if rec.get("params"):
        lines.append("params: " + ", ".join(f"{k}={v:.10g}" for k, v in rec["params"].items()))
    for m, s in rec.get("searches", {}).items():
        c = s["cycle"]
        if c:
            lines.append(
                f"[{m}] limit cycle y0*={c['y0_star']:.15g} y1*={c['y1_star']:.15g} "
                f"delta'={c['delta_prime']:.6g} {c['stability']} period={c['period']:.6g}"
            )
        else:
            lines.append(f"[{m}] no limit cycle: {s['reason']}")
    for w in rec.get("warnings", []):
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def _run_analyze(cfg: RunConfig) -> int:
    rec = build_record(cfg)
    out = cfg.out_dir
    if cfg.emit.report:
        path = save_record(rec, out / "record.json")
        log.info("record written to %s", path)
    if cfg.emit.figures and "figures" in rec:
        # render from the persisted form so a later re-render is identical
        write_figures(json.loads(json.dumps(rec)), out)
    print(_summary(rec))
    return EXIT_OK if rec["verdict"] == "MayHaveLimitCycle" else EXIT_NO_CYCLE


def cmd_analyze(args) -> int:
    return _run_analyze(_config(args))


def cmd_halfmap(args) -> int:
    cfg = _config(args)
    p, verdict, _ = resolve_input(cfg)
    if p is None:
        raise ConfigError(f"verdict {verdict.value}: no Liénard form, no half-maps")
    half = Half(args.half)
    default_dir = dict(MAPS)[half]
    direction = Direction(args.direction) if args.direction else default_dir
    if direction is not default_dir:
        raise ConfigError(
            f"only left/forward and right/backward half-maps are supported, got "
            f"{half.value}/{direction.value}"
        )
    orbits, (lo, hi) = halfmap_table(p, half, direction, cfg, top=args.y0_max, n=args.points)
    rows = []
    for (x, c), (_, d) in zip(orbits["cubic"].samples, orbits["direct"].samples):
        rows.append([x, c, d, abs(c - d)])
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / f"halfmap_{half.value}_{direction.value}.csv"
    path.write_text(csv_text(["y0", "y1_cubic", "y1_direct", "abs_diff"], rows), encoding="utf-8")
    worst = max(r[3] for r in rows)
    print(f"{half.value}/{direction.value}: domain [{lo:.12g}, {hi:.12g}], {len(rows)} points, "
          f"max |cubic - direct| = {worst:.3g}; wrote {path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if cfg.sweep is None:
        raise ConfigError("sweep needs a [sweep] table with axes")
    p, verdict, _ = resolve_input(cfg)
    if p is None:
        raise ConfigError(f"verdict {verdict.value}: no Liénard form to sweep around")
    method = "cubic" if cfg.method == "both" else cfg.method
    rows = run_sweep(p, cfg.sweep, cfg.scan_config, method, workers=args.workers)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "atlas.csv").write_text(atlas_csv(rows), encoding="utf-8")
    (out / "atlas.json").write_text(
        json.dumps({"config": cfg.to_dict(), "method": method, "rows": rows}, indent=1) + "\n",
        encoding="utf-8",
    )
    n_cycle = sum(r["status"] == "cycle" for r in rows)
    n_err = sum(r["status"].startswith("error") for r in rows)
    print(f"{len(rows)} points: {n_cycle} with a limit cycle, {n_err} errors; wrote {out / 'atlas.csv'}")
    return EXIT_OK


def cmd_figures(args) -> int:
    rec = load_record(args.record)
    out = Path(args.out) if args.out else Path(args.record).parent
    paths = write_figures(rec, out)
    print("\n".join(str(p) for p in paths))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    cfg = RunConfig(params=EXAMPLE_PARAMS, method=args.method or "both",
                    out_dir=Path(args.out or "example_out"))
    code = _run_analyze(cfg)
    if args.seed is not None:
        audit = property_audit(np.random.default_rng(args.seed), n_draws=args.draws, scan=cfg.scan_config)
        audit["seed"] = args.seed
        (cfg.out_dir / "audit.json").write_text(json.dumps(audit, indent=1) + "\n", encoding="utf-8")
        for name in ("cross_method", "gamma_sign", "uniqueness"):
            a = audit[name]
            print(f"audit {name}: {a['draws']} draws, {a['checked']} checks, "
                  f"{len(a['failures'])} failures")
        if not audit["passed"]:
            return EXIT_ERROR
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pwlcl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", type=Path, help="TOML run configuration")
        sp.add_argument("--out", help="output directory (overrides [output].dir)")
        sp.add_argument("--method", choices=METHODS, help="half-map route")

    sp = sub.add_parser("analyze", help="classify, locate the limit cycle, write a record")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("halfmap", help="tabulate one half-map by both routes")
    common(sp)
    sp.add_argument("--half", choices=[h.value for h in Half], required=True)
    sp.add_argument("--direction", choices=[d.value for d in Direction])
    sp.add_argument("--y0-max", type=float, help="largest start ordinate")
    sp.add_argument("--points", type=int, default=81)
    sp.set_defaults(func=cmd_halfmap)

    sp = sub.add_parser("sweep", help="analyze a parameter grid")
    common(sp)
    sp.add_argument("--workers", type=int, help="process pool size (overrides [sweep].workers)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figures", help="render the figures of a saved record")
    sp.add_argument("record", type=Path)
    sp.add_argument("--out", help="output directory (default: next to the record)")
    sp.set_defaults(func=cmd_figures)

    sp = sub.add_parser("reproduce-example", help="run the built-in example system")
    sp.add_argument("--out", help="output directory (default example_out)")
    sp.add_argument("--method", choices=METHODS)
    sp.add_argument("--seed", type=int, help="also run a randomized property audit")
    sp.add_argument("--draws", type=int, default=20, help="draws per audit check")
    sp.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PwlError, ValueError, OSError) as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())
