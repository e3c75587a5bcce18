"""Static SVG rendering of layout snapshots.

A pure function of the snapshot dict, so regenerating from a saved
snapshot reproduces the exact same bytes.  Renders the first two axes
only; text size follows compressed occurrence counts, line width the
base spring constants, and line opacity the per-edge attraction
energy.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

EDGE_COLOR = "#8b0000"
FONT_MIN = 10.0
FONT_RANGE = 18.0
LINE_MIN = 0.6
LINE_RANGE = 4.0
ALPHA_MIN = 0.15
ALPHA_RANGE = 0.85


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def render_svg(snap: dict, width: int = 900, height: int = 700, pad: float = 50.0) -> str:
    """Render a snapshot as deterministic SVG text."""
    words = snap["words"]
    edges = snap["edges"]
    gamma = snap["config"]["gamma"]

    points = np.array([w["x"][:2] for w in words], dtype=float) if words else np.zeros((0, 2))
    if len(points):
        low = points.min(axis=0)
        high = points.max(axis=0)
    else:
        low = high = np.zeros(2)
    span = np.maximum(high - low, 1e-9)
    scale = min((width - 2 * pad) / span[0], (height - 2 * pad) / span[1])
    mid = (low + high) / 2.0

    def to_screen(x) -> tuple[float, float]:
        return (width / 2.0 + (x[0] - mid[0]) * scale,
                height / 2.0 - (x[1] - mid[1]) * scale)

    coords = {(w["lang"], w["word"]): w["x"][:2] for w in words}
    sizes = [w["occ"] ** gamma for w in words]
    max_size = max(sizes) if sizes else 1.0
    kbar_max = max((e["kbar"] for e in edges), default=0.0)
    energies = []
    for e in edges:
        xu = np.array(coords[(e["u"]["lang"], e["u"]["word"])])
        xv = np.array(coords[(e["v"]["lang"], e["v"]["word"])])
        energies.append(e["k"] * float(np.sum((xu - xv) ** 2)))
    energy_max = max(energies) if energies else 0.0

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for e, energy in zip(edges, energies):
        xu = to_screen(coords[(e["u"]["lang"], e["u"]["word"])])
        xv = to_screen(coords[(e["v"]["lang"], e["v"]["word"])])
        stroke = LINE_MIN + (LINE_RANGE * e["kbar"] / kbar_max if kbar_max > 0 else 0.0)
        alpha = ALPHA_MIN + (ALPHA_RANGE * energy / energy_max if energy_max > 0 else 0.0)
        lines.append(
            f'<line x1="{_fmt(xu[0])}" y1="{_fmt(xu[1])}" x2="{_fmt(xv[0])}" '
            f'y2="{_fmt(xv[1])}" stroke="{EDGE_COLOR}" '
            f'stroke-width="{_fmt(stroke)}" stroke-opacity="{_fmt(alpha)}"/>')
    for w, size in zip(words, sizes):
        px, py = to_screen(w["x"][:2])
        font = FONT_MIN + (FONT_RANGE * size / max_size if max_size > 0 else 0.0)
        lines.append(
            f'<text x="{_fmt(px)}" y="{_fmt(py)}" font-size="{_fmt(font)}" '
            f'text-anchor="middle" font-family="sans-serif">'
            f'{escape(w["word"])}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
