"""Render the figure section of a record to CSV tables and static SVG.

Three bundles: ``fig1_phase_planes``, ``fig2_cubic_fields`` and
``fig3_q_diagram``, each a ``.svg`` plus one or more ``.csv`` files with a
header row and 17 significant digits.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from ..errors import ConfigError
from .svg import Panel, SvgDocument

__all__ = ["render_figures", "write_figures", "csv_text"]

STYLE = {
    "solid": {"width": 1.2},
    "dotted": {"width": 1.0, "dash": "2,3"},
    "dashed": {"width": 1.2, "dash": "6,4"},
    "thin": {"width": 0.8},
    "thick": {"width": 2.6},
}
COLORS = {"left": "#1f4e9c", "right": "#b2361f"}


def _num(v):
    return format(float(v) + 0.0, ".17g")  # no "-0"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _curve_rows(panel, curves):
    for c in curves:
        for x, y in c["points"]:
            yield [panel, c["id"], c["style"], float(x), float(y)]


def _section(rec, name):
    figs = rec.get("figures")
    if not isinstance(figs, dict) or name not in figs:
        raise ConfigError(f"record has no figures.{name} section")
    return figs[name]


def _draw_curves(panel, curves, color):
    for c in curves:
        st = STYLE[c["style"]]
        stroke = "#d08000" if c.get("role") == "cycle" else color
        width = 2.2 if c.get("role") == "cycle" else st["width"]
        panel.polyline(c["points"], stroke=stroke, width=width, dash=st.get("dash"))


def _fig1(rec):
    data = _section(rec, "phase_planes")
    w = data["window"]
    lim = (-1.5 * w, 1.5 * w)
    doc = SvgDocument(760, 400)
    rows = []
    for i, side in enumerate(("left", "right")):
        panel = Panel(doc, 50 + i * 370, 40, 320, 320, lim, lim, f"{side} linear system")
        panel.axes()
        curves = data["panels"][side]["curves"]
        _draw_curves(panel, curves, COLORS[side])
        panel.ticks("x", "y")
        rows.extend(_curve_rows(side, curves))
    csvs = {"fig1_phase_planes.csv": csv_text(["panel", "curve", "style", "x", "y"], rows)}
    return doc.render(), csvs


def _fig2(rec):
    data = _section(rec, "cubic_fields")
    w = data["window"]
    doc = SvgDocument(760, 400)
    rows, arrows = [], []
    for i, side in enumerate(("left", "right")):
        label = "y_L" if side == "left" else "y_R"
        panel = Panel(doc, 50 + i * 370, 40, 320, 320, (0.0, w), (-w, 0.0), f"X_{side[0].upper()} and {label}")
        for x, y, u, v in data["panels"][side]["arrows"]:
            panel.arrow(x, y, u, v, length_px=12.0, stroke="#777", width=0.8)
            arrows.append([side, float(x), float(y), float(u), float(v)])
        curves = data["panels"][side]["curves"]
        _draw_curves(panel, curves, COLORS[side])
        panel.ticks("y0", "y1")
        rows.extend(_curve_rows(side, curves))
    csvs = {
        "fig2_cubic_fields_curves.csv": csv_text(["panel", "curve", "style", "y0", "y1"], rows),
        "fig2_cubic_fields_arrows.csv": csv_text(["panel", "y0", "y1", "u", "v"], arrows),
    }
    return doc.render(), csvs


def _fig3(rec):
    data = _section(rec, "q_diagram")
    w = data["window"]
    doc = SvgDocument(420, 420)
    panel = Panel(doc, 60, 40, 320, 320, (0.0, w), (-w, 0.0), "Q: gamma_L, gamma_R and F = 0")
    for c in data["curves"]:
        st = STYLE[c["style"]]
        color = {"gamma_L": COLORS["left"], "gamma_R": COLORS["right"]}.get(c["id"], "#222")
        panel.polyline(c["points"], stroke=color, width=st["width"], dash=st.get("dash"))
    arrows = []
    for y0, y1, ul, vl, ur, vr in data["arrows"]:
        panel.arrow(y0, y1, ul, vl, length_px=14.0, stroke="#2a7a2a", width=1.2)
        arrows.append([float(y0), float(y1), float(ul), float(vl), float(ur), float(vr)])
    points = []
    if data.get("cycle_point") is not None:
        y0, y1 = data["cycle_point"]
        panel.marker(y0, y1)
        points.append(["cycle", float(y0), float(y1)])
    panel.ticks("y0", "y1")
    rows = []
    for c in data["curves"]:
        for y0, y1 in c["points"]:
            rows.append([c["id"], c["style"], float(y0), float(y1)])
    csvs = {
        "fig3_q_diagram_curves.csv": csv_text(["curve", "style", "y0", "y1"], rows),
        "fig3_q_diagram_arrows.csv": csv_text(["y0", "y1", "uL", "vL", "uR", "vR"], arrows),
        "fig3_q_diagram_points.csv": csv_text(["label", "y0", "y1"], points),
    }
    return doc.render(), csvs


def render_figures(rec: dict) -> dict[str, str]:
    """File name to text content for all figure outputs of ``rec``.

    Raises
    ------
    ConfigError
        A figure section is missing from the record.
    """
    out = {}
    for name, fn in (
        ("fig1_phase_planes", _fig1),
        ("fig2_cubic_fields", _fig2),
        ("fig3_q_diagram", _fig3),
    ):
        svg, csvs = fn(rec)
        out[f"{name}.svg"] = svg
        out.update(csvs)
    return out


def write_figures(rec: dict, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in sorted(render_figures(rec).items()):
        path = out_dir / name
        path.write_bytes(text.encode("utf-8"))
        paths.append(path)
    return paths
