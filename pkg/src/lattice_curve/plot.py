"""Standalone SVG figures: curve polyline, lattice dots, optional δ band, counted points."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .counting import count_near, count_on
from .errors import ConfigInvalid
from .lattice import enumerate_in_box

MAX_DOTS = 20000


@dataclass
class PlotSpec:
    curve: object
    lattice: object
    window: tuple | None = None
    delta: float | None = None
    highlight: object = "on"
    size: tuple = (512, 512)
    out: str | None = None
    title: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        w, h = (int(v) for v in self.size)
        if w < 64 or h < 64:
            raise ConfigInvalid("plot size must be at least 64x64")
        self.size = (w, h)
        if self.window is not None:
            x0, y0, x1, y1 = (float(v) for v in self.window)
            if not (x1 > x0 and y1 > y0):
                raise ConfigInvalid(f"empty plot window {self.window}")
            self.window = (x0, y0, x1, y1)
        if isinstance(self.highlight, str) and self.highlight not in ("on", "near", "none"):
            raise ConfigInvalid("highlight must be 'on', 'near', 'none' or a list of points")
        if self.highlight == "near" and self.delta is None:
            raise ConfigInvalid("highlight 'near' needs delta")


def _highlighted(spec):
    h = spec.highlight
    if isinstance(h, str):
        if h == "none":
            return np.empty((0, 2))
        rep = count_on(spec.curve, spec.lattice) if h == "on" else count_near(spec.curve, spec.lattice, spec.delta)
        return rep.lattice_points()
    return np.asarray(h, dtype=float).reshape(-1, 2)


def render_svg(spec):
    """SVG text for ``spec``; y is flipped so the plane reads as usual."""
    C, L = spec.curve, spec.lattice
    if spec.window is None:
        x0, y0, x1, y1 = C.bbox()
        pad = 0.1 * max(x1 - x0, y1 - y0) + (spec.delta or 0.0) + 0.5 * L.min_distance
        window = (x0 - pad, y0 - pad, x1 + pad, y1 + pad)
    else:
        window = spec.window
    x0, y0, x1, y1 = window
    W, H = spec.size
    s = min(W / (x1 - x0), H / (y1 - y0))

    def tx(P):
        P = np.atleast_2d(P)
        return np.stack([(P[:, 0] - x0) * s, H - (P[:, 1] - y0) * s], axis=1)

    _, pts, _ = C.polyline(1024)
    poly = " ".join(f"{x:.3f},{y:.3f}" for x, y in tx(pts))
    dots = enumerate_in_box(L, window)
    if len(dots) > MAX_DOTS:
        dots = dots[:0]
    hi = _highlighted(spec)
    r = max(1.5, min(4.0, 0.12 * L.min_distance * s))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
    ]
    if spec.title:
        out.append(f"<title>{escape(spec.title)}</title>")
    if spec.delta:
        # the δ band drawn as a thick translucent stroke of width 2δ
        out.append(f'<polyline class="band" points="{poly}" fill="none" stroke="#9ecae1" '
                   f'stroke-opacity="0.5" stroke-width="{2 * spec.delta * s:.3f}" stroke-linejoin="round"/>')
    out.append('<g class="lattice" fill="#888">')
    out.extend(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{0.5 * r:.3f}"/>' for x, y in tx(dots) if len(dots))
    out.append("</g>")
    closed = " Z" if C.closed else ""
    out.append(f'<polyline class="curve" points="{poly}" fill="none" stroke="black" stroke-width="1.2"/>'
               if not closed else f'<polygon class="curve" points="{poly}" fill="none" stroke="black" stroke-width="1.2"/>')
    out.append('<g class="highlight" fill="#d62728">')
    out.extend(f'<circle class="hit" cx="{x:.3f}" cy="{y:.3f}" r="{r:.3f}"/>' for x, y in (tx(hi) if len(hi) else []))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(spec, path=None):
    text = render_svg(spec)
    path = path or spec.out
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
