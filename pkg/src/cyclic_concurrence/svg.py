"""Minimal SVG scatter and polyline plots on the fixed square [-1, 1]^2."""

from xml.sax.saxutils import escape

import numpy as np

SIZE = 480
MARGIN = 48
CURVE_COLOURS = {
    "domain-edge": "#d62728",
    "jacobian-zero": "#ff7f0e",
    "closed-form": "#2ca02c",
    "envelope": "#000000",
}


def _to_px(xy, size):
    span = size - 2 * MARGIN
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    px = MARGIN + (xy[:, 0] + 1.0) / 2.0 * span
    py = MARGIN + (1.0 - xy[:, 1]) / 2.0 * span
    return np.column_stack([px, py])


def _axes(size, xlabel, ylabel):
    lo, hi = MARGIN, size - MARGIN
    mid = size / 2
    out = [
        f'<rect x="{lo}" y="{lo}" width="{hi - lo}" height="{hi - lo}" fill="none" stroke="#444"/>',
        f'<line x1="{lo}" y1="{mid}" x2="{hi}" y2="{mid}" stroke="#bbb" stroke-dasharray="4 3"/>',
        f'<line x1="{mid}" y1="{lo}" x2="{mid}" y2="{hi}" stroke="#bbb" stroke-dasharray="4 3"/>',
    ]
    for v in (-1.0, -0.5, 0.0, 0.5, 1.0):
        (x, _), = _to_px([v, -1.0], size)
        (_, y), = _to_px([-1.0, v], size)
        out.append(f'<text x="{x:.1f}" y="{hi + 16}" font-size="11" text-anchor="middle">{v:g}</text>')
        out.append(f'<text x="{lo - 6}" y="{y + 4:.1f}" font-size="11" text-anchor="end">{v:g}</text>')
    out.append(
        f'<text x="{mid}" y="{size - 8}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="14" y="{mid}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 14 {mid})">{escape(ylabel)}</text>'
    )
    return out


def plot_svg(points=None, curves=(), title="", xlabel="sC1", ylabel="sC2", metadata=None, size=SIZE):
    """Render scatter points and boundary curves as an SVG document string.

    Points sharing a tenth-of-a-pixel cell are drawn once, which keeps files
    from large samples small without changing the picture.
    """
    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    ]
    if metadata is not None:
        body.append(f"<metadata>{escape(metadata)}</metadata>")
    body.append(f'<rect width="{size}" height="{size}" fill="white"/>')
    if title:
        body.append(f'<text x="{size / 2}" y="24" font-size="14" text-anchor="middle">{escape(title)}</text>')
    body += _axes(size, xlabel, ylabel)
    if points is not None and len(points):
        px = np.unique(np.round(_to_px(points, size), 1), axis=0)
        d = "".join(f"M{x:.1f} {y:.1f}h1v1h-1z" for x, y in px)
        body.append(f'<path d="{d}" fill="#1f77b4" fill-opacity="0.5"/>')
    for c in curves:
        if len(c.points) < 2:
            continue
        px = _to_px(c.points, size)
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in px)
        colour = CURVE_COLOURS.get(c.source, "#000000")
        body.append(
            f'<polyline points="{coords}" fill="none" stroke="{colour}" stroke-width="1">'
            f"<title>{escape(c.parametrization_id)}</title></polyline>"
        )
    body.append("</svg>")
    return "\n".join(body) + "\n"
