"""Static SVG figures: barcode interval plots and rank-frequency curves."""

from __future__ import annotations

import math


def render_barcode_svg(intervals, radius: int, title: str = "") -> str:
    """One horizontal bar per interval over shells 0..radius."""
    intervals = sorted(intervals)
    width, left, right = 640, 60, 20
    bar_h, gap, top, bottom = 18, 8, 40, 46
    span = max(radius, 1)
    scale = (width - left - right) / span
    height = top + max(len(intervals), 1) * (bar_h + gap) + bottom

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    axis_y = height - bottom + 10
    parts.append(
        f'<line x1="{left}" y1="{axis_y}" x2="{width - right}" y2="{axis_y}" '
        'stroke="black" stroke-width="1"/>'
    )
    for s in range(radius + 1):
        x = left + s * scale
        parts.append(
            f'<line x1="{x:.1f}" y1="{axis_y - 4}" x2="{x:.1f}" y2="{axis_y + 4}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{axis_y + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{s}</text>'
        )
    if not intervals:
        parts.append(
            f'<text x="{width / 2:.1f}" y="{top + bar_h}" text-anchor="middle" '
            'font-family="sans-serif" font-size="12">empty barcode</text>'
        )
    for k, (a, b) in enumerate(intervals):
        y = top + k * (bar_h + gap)
        x1 = left + a * scale
        x2 = left + b * scale
        parts.append(
            f'<rect x="{x1:.1f}" y="{y}" width="{max(x2 - x1, 2):.1f}" height="{bar_h}" '
            'fill="#3465a4" stroke="#1c3a5e"/>'
        )
        parts.append(
            f'<text x="{x2 + 6:.1f}" y="{y + bar_h - 4}" font-family="sans-serif" '
            f'font-size="11">({a},{b})</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_rank_frequency_svg(rows, labels=("f1", "f2"), title: str = "") -> str:
    """Rank-frequency curves (log frequency vs rank) with standard-error bands."""
    width, height = 640, 420
    left, right, top, bottom = 64, 20, 40, 48
    colors = ("#3465a4", "#4e9a06", "#cc0000", "#75507b")
    n = len(rows)
    if n == 0:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="10" height="10"/>'

    freqs = [max(row[lab] for lab in labels ) for row in rows]
    fmin = min(
        (row[lab] for row in rows for lab in labels if row[lab] > 0), default=1e-6
    )
    fmax = max(freqs + [1e-12])
    lo, hi = math.log10(fmin) - 0.2, math.log10(fmax) + 0.2

    def x_of(rank):
        return left + (rank - 1) / max(n - 1, 1) * (width - left - right)

    def y_of(f):
        if f <= 0:
            return height - bottom
        t = (math.log10(f) - lo) / (hi - lo)
        return height - bottom - t * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{height - bottom}" x2="{width - right}" y2="{height - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">rank</text>',
        f'<text x="16" y="{height / 2}" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {height / 2})" text-anchor="middle">frequency</text>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="14">{title}</text>'
        )
    for i, lab in enumerate(labels):
        color = colors[i % len(colors)]
        pts = " ".join(f"{x_of(r['rank']):.1f},{y_of(r[lab]):.1f}" for r in rows)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        se = f"se{lab[1:]}"
        if se in rows[0]:
            band_up = " ".join(f"{x_of(r['rank']):.1f},{y_of(r[lab] + r[se]):.1f}" for r in rows)
            band_dn = " ".join(f"{x_of(r['rank']):.1f},{y_of(max(r[lab] - r[se], 0)):.1f}" for r in rows)
            for band in (band_up, band_dn):
                parts.append(
                    f'<polyline points="{band}" fill="none" stroke="{color}" '
                    'stroke-width="0.8" stroke-dasharray="4,3"/>'
                )
        parts.append(
            f'<text x="{width - right - 8}" y="{top + 16 * (i + 1)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12" fill="{color}">{lab}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
