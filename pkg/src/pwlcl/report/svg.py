"""Minimal static SVG writer with data-space panels.

Coordinates are printed with a fixed number of decimals, so the same data
always produce the same bytes.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

__all__ = ["Panel", "SvgDocument", "fmt"]


def fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


class Panel:
    """A rectangle of the page showing ``xlim x ylim`` of data space."""

    def __init__(self, doc, left, top, width, height, xlim, ylim, title=""):
        self.doc = doc
        self.left, self.top = left, top
        self.width, self.height = width, height
        self.xlim, self.ylim = xlim, ylim
        self.clip = doc.new_clip(left, top, width, height)
        doc.add(
            f'<rect x="{fmt(left)}" y="{fmt(top)}" width="{fmt(width)}" height="{fmt(height)}" '
            'fill="none" stroke="#444" stroke-width="1"/>'
        )
        if title:
            doc.text(left + width / 2, top - 8, title, anchor="middle", size=13)

    def px(self, x, y):
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        u = self.left + (x - x0) / (x1 - x0) * self.width
        v = self.top + (y1 - y) / (y1 - y0) * self.height
        return u, v

    def polyline(self, points, stroke="#000", width=1.0, dash=None):
        if len(points) < 2:
            return
        coords = " ".join(f"{fmt(u)},{fmt(v)}" for u, v in (self.px(x, y) for x, y in points))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.doc.add(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"{extra} clip-path="url(#{self.clip})"/>'
        )

    def arrow(self, x, y, u, v, length_px=12.0, stroke="#000", width=1.0):
        """Arrow of fixed pixel length along the data direction ``(u, v)``."""
        a, b = self.px(x, y)
        sx = self.width / (self.xlim[1] - self.xlim[0])
        sy = self.height / (self.ylim[1] - self.ylim[0])
        du, dv = u * sx, -v * sy
        n = (du * du + dv * dv) ** 0.5
        if n == 0.0:
            return
        du, dv = du / n * length_px, dv / n * length_px
        ex, ey = a + du, b + dv
        # head: two short strokes at +-25 degrees
        hx, hy = -du * 0.35, -dv * 0.35
        c, s = 0.906, 0.423
        p1 = (ex + c * hx - s * hy, ey + s * hx + c * hy)
        p2 = (ex + c * hx + s * hy, ey - s * hx + c * hy)
        self.doc.add(
            f'<path d="M{fmt(a)},{fmt(b)} L{fmt(ex)},{fmt(ey)} M{fmt(p1[0])},{fmt(p1[1])} '
            f'L{fmt(ex)},{fmt(ey)} L{fmt(p2[0])},{fmt(p2[1])}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"/>'
        )

    def marker(self, x, y, r=4.0, fill="#c00"):
        u, v = self.px(x, y)
        self.doc.add(f'<circle cx="{fmt(u)}" cy="{fmt(v)}" r="{fmt(r)}" fill="{fill}"/>')

    def axes(self):
        """Coordinate axes through the origin when it is in view."""
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        if x0 <= 0.0 <= x1:
            self.polyline([(0.0, y0), (0.0, y1)], stroke="#999", width=0.8)
        if y0 <= 0.0 <= y1:
            self.polyline([(x0, 0.0), (x1, 0.0)], stroke="#999", width=0.8)

    def ticks(self, xlabel="", ylabel=""):
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        d = self.doc
        d.text(self.left, self.top + self.height + 14, f"{x0:.3g}", anchor="start")
        d.text(self.left + self.width, self.top + self.height + 14, f"{x1:.3g}", anchor="end")
        d.text(self.left - 4, self.top + self.height, f"{y0:.3g}", anchor="end")
        d.text(self.left - 4, self.top + 10, f"{y1:.3g}", anchor="end")
        if xlabel:
            d.text(self.left + self.width / 2, self.top + self.height + 16, xlabel, anchor="middle")
        if ylabel:
            d.text(self.left - 6, self.top + self.height / 2, ylabel, anchor="end")


class SvgDocument:
    def __init__(self, width, height):
        self.width, self.height = width, height
        self._defs = []
        self._body = []

    def new_clip(self, left, top, width, height):
        cid = f"clip{len(self._defs)}"
        self._defs.append(
            f'<clipPath id="{cid}"><rect x="{fmt(left)}" y="{fmt(top)}" '
            f'width="{fmt(width)}" height="{fmt(height)}"/></clipPath>'
        )
        return cid

    def add(self, element: str):
        self._body.append(element)

    def text(self, x, y, s, anchor="start", size=11):
        self._body.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-family="sans-serif" font-size="{size}" '
            f'text-anchor="{anchor}">{escape(s)}</text>'
        )

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n'
        )
        parts = [head, f'<rect width="{self.width}" height="{self.height}" fill="#fff"/>\n']
        parts.append("<defs>" + "".join(self._defs) + "</defs>\n")
        parts.extend(e + "\n" for e in self._body)
        parts.append("</svg>\n")
        return "".join(parts)
