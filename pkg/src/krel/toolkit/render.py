"""Raster pictures of the excluded locus Gamma_T and its complement C_T.

Pixels are the points of a rectangular grid over the window, top row at the
largest imaginary part.  Output bytes depend only on the inputs.
"""

from __future__ import annotations

import numpy as np

from ..errors import UsageError
from ..spectra import in_gamma_grid

__all__ = ["FORMATS", "locus_grid", "render_locus", "parse_window"]

FORMATS = ("csv", "svg", "ppm")
GRAY = 160


def parse_window(text: str):
    """'XMIN,XMAX,YMIN,YMAX' -> tuple of floats."""
    try:
        w = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"window must be four numbers, got {text!r}") from exc
    if len(w) != 4:
        raise UsageError(f"window must be four numbers, got {text!r}")
    return w


def _resolution(resolution):
    if np.isscalar(resolution):
        nx = ny = int(resolution)
    else:
        nx, ny = (int(v) for v in resolution)
    if nx < 2 or ny < 2:
        raise UsageError("resolution must be at least 2 x 2")
    return nx, ny


def locus_grid(m, p, window, resolution):
    """(xs, ys, in_gamma, in_c) with boolean arrays of shape (ny, nx), row 0 at the top."""
    if m < 0 or p < 0 or not np.isfinite(m) or not np.isfinite(p):
        raise UsageError("m and p must be finite and non-negative")
    try:
        x0, x1, y0, y1 = (float(v) for v in window)
    except (TypeError, ValueError) as exc:
        raise UsageError("window must be (xmin, xmax, ymin, ymax)") from exc
    if not all(np.isfinite([x0, x1, y0, y1])) or x0 >= x1 or y0 >= y1:
        raise UsageError(f"invalid window {window!r}")
    nx, ny = _resolution(resolution)
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y1, y0, ny)
    L = xs[None, :] + 1j * ys[:, None]
    g = in_gamma_grid(L.ravel(), m, p).reshape(L.shape)
    c = (L.imag != 0) & ~g
    return xs, ys, g, c


def _csv(xs, ys, g, c) -> bytes:
    lines = ["re,im,in_gamma,in_c"]
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            lines.append(f"{x:.12g},{y:.12g},{int(g[j, i])},{int(c[j, i])}")
    return ("\n".join(lines) + "\n").encode()


def _svg(xs, ys, g) -> bytes:
    ny, nx = g.shape
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{nx}" height="{ny}" '
           f'viewBox="0 0 {nx} {ny}" shape-rendering="crispEdges">',
           f'<rect x="0" y="0" width="{nx}" height="{ny}" fill="#ffffff"/>']
    fill = f"#{GRAY:02x}{GRAY:02x}{GRAY:02x}"
    for j in range(ny):
        row = g[j]
        i = 0
        while i < nx:
            if row[i]:
                k = i
                while k < nx and row[k]:
                    k += 1
                out.append(f'<rect x="{i}" y="{j}" width="{k - i}" height="1" fill="{fill}"/>')
                i = k
            else:
                i += 1
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()


def _ppm(g) -> bytes:
    ny, nx = g.shape
    px = np.where(g, GRAY, 255).astype(np.uint8)
    rgb = np.repeat(px[:, :, None], 3, axis=2)
    return f"P6\n{nx} {ny}\n255\n".encode() + rgb.tobytes()


def render_locus(m, p, window=(-3.0, 3.0, -3.0, 3.0), resolution=601, fmt="csv") -> bytes:
    """Classify the grid and encode it as csv (re,im,in_gamma,in_c), svg or ppm."""
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    xs, ys, g, c = locus_grid(m, p, window, resolution)
    if fmt == "csv":
        return _csv(xs, ys, g, c)
    if fmt == "svg":
        return _svg(xs, ys, g)
    return _ppm(g)
