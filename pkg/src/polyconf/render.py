"""Deterministic SVG drawings of realizations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .geometry import Line2, Point2
from .realizer import Realization

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
_COLOR = re.compile(r"#[0-9a-fA-F]{6}|#[0-9a-fA-F]{3}|[a-z]+")


@dataclass(frozen=True)
class RenderSpec:
    width: int = 800
    height: int = 800
    margin: float = 0.08  # fraction of the drawing box added on each side
    colors: Mapping[str, str] = field(default_factory=dict)
    point_radius: float = 4.0
    line_width: float = 1.2
    emphasize_first: bool = True  # draw element 0 of each class larger / thicker
    marks: Sequence[Point2] = ()  # extra locations drawn as hollow rings

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.point_radius <= 0 or self.line_width <= 0:
            raise ValueError("render dimensions must be positive")
        if self.margin < 0:
            raise ValueError("margin must be non-negative")
        for c in self.colors.values():
            if not _COLOR.fullmatch(c):
                raise ValueError(f"bad color {c!r}")


def _f(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def clip_line(l: Line2, box: tuple[float, float, float, float]) -> Optional[tuple[Point2, Point2]]:
    """Segment of ``l`` inside ``(xmin, ymin, xmax, ymax)``, or None."""
    x0, y0, x1, y1 = box
    base = l.foot()
    d = l.direction
    lo, hi = -float("inf"), float("inf")
    for p, dp, a, b in ((base.x, d.x, x0, x1), (base.y, d.y, y0, y1)):
        if abs(dp) < 1e-15:
            if p < a or p > b:
                return None
            continue
        s0, s1 = sorted(((a - p) / dp, (b - p) / dp))
        lo, hi = max(lo, s0), min(hi, s1)
    if lo >= hi:
        return None
    return base + d.scale(lo), base + d.scale(hi)


def _class_colors(real: Realization, spec: RenderSpec) -> dict:
    names = sorted(set(real.points) | set(real.lines))
    return {c: spec.colors.get(c, PALETTE[i % len(PALETTE)]) for i, c in enumerate(names)}


def render_svg(real: Realization, spec: Optional[RenderSpec] = None) -> str:
    spec = spec or RenderSpec()
    pts = [p for _, _, p in real.point_items()] + list(spec.marks)
    if not pts:
        raise ValueError("nothing to draw")
    xs, ys = [p.x for p in pts], [p.y for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    pad = span * spec.margin
    box = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    scale = min(spec.width / (box[2] - box[0]), spec.height / (box[3] - box[1]))

    def tx(p: Point2) -> tuple[str, str]:
        return _f((p.x - box[0]) * scale), _f((box[3] - p.y) * scale)

    colors = _class_colors(real, spec)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
    ]
    for c, j, l in real.line_items():
        seg = clip_line(l, box)
        if seg is None:
            continue
        (ax, ay), (bx, by) = tx(seg[0]), tx(seg[1])
        w = spec.line_width * (2.5 if spec.emphasize_first and j == 0 else 1.0)
        out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="{colors[c]}" '
                   f'stroke-width="{_f(w)}"><title>{real.label(c, j)}</title></line>')
    for c, j, p in real.point_items():
        x, y = tx(p)
        r = spec.point_radius * (1.6 if spec.emphasize_first and j == 0 else 1.0)
        out.append(f'<circle cx="{x}" cy="{y}" r="{_f(r)}" fill="{colors[c]}" stroke="black" '
                   f'stroke-width="0.5"><title>{real.label(c, j)}</title></circle>')
    for p in spec.marks:
        x, y = tx(p)
        out.append(f'<circle cx="{x}" cy="{y}" r="{_f(spec.point_radius * 2.5)}" fill="none" '
                   f'stroke="black" stroke-dasharray="2,2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
