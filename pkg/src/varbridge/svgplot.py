"""Minimal deterministic SVG line plots (no plotting dependencies).

Output is a standalone SVG 1.1 document; identical input gives byte-identical
output, which keeps rendered curves diffable in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySeriesError, NonFiniteError, OutOfRangeError

_WIDTH, _HEIGHT = 640, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 62, 16, 16, 44
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_N_TICKS = 5


@dataclass(frozen=True)
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.size == 0 or y.size == 0:
            raise EmptySeriesError(f"series {self.label!r} is empty")
        if x.shape != y.shape or x.ndim != 1:
            raise EmptySeriesError(f"series {self.label!r} must be equal-length 1-D")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise NonFiniteError(f"series {self.label!r} contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def _ticks(lo: float, hi: float) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (_N_TICKS - 1) for i in range(_N_TICKS)]


def _fmt(value: float) -> str:
    return format(value, ".6g")


def render_curve_svg(series: list[Series], log_x: bool = False) -> str:
    """Render series as polylines with axes and a legend.

    With ``log_x`` the x axis is logarithmic (all x must be > 0); tick labels
    then show the data values, not their logs.
    """
    if not series:
        raise EmptySeriesError("no series to plot")

    def xt(values: np.ndarray) -> np.ndarray:
        if log_x:
            if np.any(values <= 0.0):
                raise OutOfRangeError("x", "log-x plots need strictly positive x")
            return np.log10(values)
        return values

    tx = [xt(s.x) for s in series]
    x_lo = min(float(t.min()) for t in tx)
    x_hi = max(float(t.max()) for t in tx)
    y_lo = min(float(s.y.min()) for s in series)
    y_hi = max(float(s.y.max()) for s in series)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(t: float) -> float:
        return _MARGIN_L + (t - x_lo) / (x_hi - x_lo) * plot_w

    def py(value: float) -> float:
        return _MARGIN_T + (y_hi - value) / (y_hi - y_lo) * plot_h

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]

    for t in _ticks(x_lo, x_hi):
        x_pix = px(t)
        label = _fmt(10.0**t) if log_x else _fmt(t)
        lines.append(
            f'<line x1="{x_pix:.2f}" y1="{_MARGIN_T + plot_h}" '
            f'x2="{x_pix:.2f}" y2="{_MARGIN_T + plot_h + 5}" stroke="#333333"/>'
        )
        lines.append(
            f'<text x="{x_pix:.2f}" y="{_MARGIN_T + plot_h + 18}" '
            f'font-family="sans-serif" font-size="11" text-anchor="middle">{label}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        y_pix = py(t)
        lines.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{y_pix:.2f}" '
            f'x2="{_MARGIN_L}" y2="{y_pix:.2f}" stroke="#333333"/>'
        )
        lines.append(
            f'<text x="{_MARGIN_L - 8}" y="{y_pix + 4:.2f}" '
            f'font-family="sans-serif" font-size="11" text-anchor="end">{_fmt(t)}</text>'
        )

    for idx, (s, t) in enumerate(zip(series, tx)):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(t, s.y))
        lines.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )

    legend_x = _MARGIN_L + 10
    legend_y = _MARGIN_T + 16
    for idx, s in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        y_pix = legend_y + 16 * idx
        lines.append(
            f'<line x1="{legend_x}" y1="{y_pix - 4}" x2="{legend_x + 22}" '
            f'y2="{y_pix - 4}" stroke="{color}" stroke-width="1.5"/>'
        )
        lines.append(
            f'<text x="{legend_x + 28}" y="{y_pix}" font-family="sans-serif" '
            f'font-size="12">{s.label}</text>'
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
