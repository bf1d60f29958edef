"""Deterministic static SVG rendering of result CSVs.

SVGs are assembled as plain strings (no plotting library, no display
dependency), so identical inputs produce identical bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .errors import ParseError

WIDTH, HEIGHT, MARGIN = 640, 480, 60
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def data_to_pixel(x: float, y: float, bounds) -> tuple[float, float]:
    """Map a data point into the plot area given (xmin, xmax, ymin, ymax)."""
    xmin, xmax, ymin, ymax = bounds
    sx = (xmax - xmin) or 1.0
    sy = (ymax - ymin) or 1.0
    px = MARGIN + (x - xmin) / sx * (WIDTH - 2 * MARGIN)
    py = HEIGHT - MARGIN - (y - ymin) / sy * (HEIGHT - 2 * MARGIN)
    return px, py


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def svg_line_plot(series, xlabel: str, ylabel: str, title: str) -> str:
    """series: list of (label, xs, ys). Empty series render empty axes."""
    points = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys)]
    if points:
        xs, ys = zip(*points)
        bounds = (min(xs), max(xs), min(ys), max(ys))
    else:
        bounds = (0.0, 1.0, 0.0, 1.0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 16}" text-anchor="middle" font-size="13">{xlabel}</text>',
        f'<text x="18" y="{HEIGHT // 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {HEIGHT // 2})">{ylabel}</text>',
    ]
    for idx, (label, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(
            "{},{}".format(*map(_fmt, data_to_pixel(x, y, bounds))) for x, y in zip(xs, ys)
        )
        if pts:
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
            )
        parts.append(
            f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 16 * (idx + 1)}" text-anchor="end" '
            f'font-size="12" fill="{color}">{label}</text>'
        )
    # Axis extent labels.
    parts.append(
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 16}" font-size="11">{bounds[0]:g}</text>'
    )
    parts.append(
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 16}" text-anchor="end" '
        f'font-size="11">{bounds[1]:g}</text>'
    )
    parts.append(f'<text x="{MARGIN - 6}" y="{HEIGHT - MARGIN}" text-anchor="end" font-size="11">{bounds[2]:g}</text>')
    parts.append(f'<text x="{MARGIN - 6}" y="{MARGIN + 4}" text-anchor="end" font-size="11">{bounds[3]:g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def read_result_csv(path):
    """Read a result CSV, skipping '#' metadata lines; returns (header, rows)."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
        rows = list(csv.reader(lines))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: no header row")
    return rows[0], rows[1:]


def _columns(header, rows):
    cols = {name: [] for name in header}
    for row in rows:
        if len(row) != len(header):
            raise ParseError(f"row width {len(row)} != header width {len(header)}")
        for name, cell in zip(header, row):
            cols[name].append(cell)
    return cols


def _floats(values):
    return [float(v) for v in values]


def plot_csv(path, out_dir) -> Path:
    """Render one result CSV to an SVG next to its stem in out_dir."""
    header, rows = read_result_csv(path)
    cols = _columns(header, rows)
    stem = Path(path).stem
    if {"alpha", "beta"} <= set(header):
        series = [("PRD", _floats(cols["beta"]), _floats(cols["alpha"]))]
        svg = svg_line_plot(series, "recall", "precision", stem)
    elif len(header) >= 2:
        try:
            x = _floats(cols[header[0]]) if rows else []
        except ValueError:
            x = list(range(len(rows)))  # categorical first column: index positions
        series = []
        for name in header[1:]:
            try:
                ys = _floats(cols[name]) if rows else []
            except ValueError:
                continue  # non-numeric column, not plottable
            series.append((name, x, ys))
        svg = svg_line_plot(series, header[0], "value", stem)
    else:
        svg = svg_line_plot([], header[0] if header else "", "value", stem)
    out = Path(out_dir) / f"{stem}.svg"
    out.write_text(svg, encoding="utf-8")
    return out


def emit_plots(csv_paths, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [plot_csv(p, out_dir) for p in csv_paths]
