"""Flat-file emission: CSV, JSON summaries, static SVG snapshot art.

All numeric text uses the shortest round-trip decimal form of binary64 so
repeated runs are byte-identical; files land via temp-file + rename so
parallel scenario runs never interleave bytes.
"""
from __future__ import annotations

import json
import os
import tempfile

import numpy as np


def format_float(x) -> str:
    return repr(float(x))


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".himcf-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def csv_text(header: list[str], rows) -> str:
    """Header row plus data rows; floats in shortest round-trip form."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, (int, np.integer)):
                cells.append(str(int(cell)))
            else:
                cells.append(format_float(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def svg_text(polylines, width: int = 640, height: int = 640) -> str:
    """Static SVG 1.1 with one closed polyline outline per snapshot.

    The viewBox is the padded bounding box of every snapshot, so the image
    frames the whole evolution.  First outline dark, last accented, the rest
    light; y is negated to keep mathematical orientation on screen.
    """
    if not polylines:
        raise ValueError("nothing to draw")
    flipped = [np.column_stack([p[:, 0], -p[:, 1]]) for p in polylines]
    allpts = np.vstack(flipped)
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    pad = 0.05 * float(span.max())
    x0, y0 = lo - pad
    w, h = (hi - lo) + 2 * pad
    stroke = 0.004 * float(max(w, h))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="{format_float(x0)} {format_float(y0)} '
        f'{format_float(w)} {format_float(h)}">',
        f'<rect x="{format_float(x0)}" y="{format_float(y0)}" '
        f'width="{format_float(w)}" height="{format_float(h)}" fill="white"/>',
    ]
    last = len(flipped) - 1
    for i, p in enumerate(flipped):
        if i == 0:
            color = "#1f2430"
        elif i == last:
            color = "#c03028"
        else:
            color = "#9aa3b2"
        pts = " ".join(f"{format_float(x)},{format_float(y)}" for x, y in p)
        parts.append(
            f'<polygon points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{format_float(stroke)}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
