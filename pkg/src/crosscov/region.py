"""Raster pictures of the feasible (rho, alpha) set.

Columns sample ``rho`` at ``steps`` evenly spaced points of ``[0, 1]`` with
both ends included, so the last column is the single-latent boundary
``rho = 1``.  Rows sample ``alpha`` at the centres of ``steps`` equal cells of
``[0, 1.1 * alpha_max]``.  A cell is shaded when its sample point is feasible.
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .covariance import AlphaBounds
from .parameterization import is_feasible

ALPHA_HEADROOM = 1.1


@dataclass(frozen=True)
class RegionGrid:
    rhos: np.ndarray
    alphas: np.ndarray
    mask: np.ndarray  # mask[j, i]: alpha index j (ascending), rho index i


def region_grid(bounds: AlphaBounds, steps: int) -> RegionGrid:
    if steps < 2:
        raise ValueError("steps must be at least 2")
    rhos = np.linspace(0.0, 1.0, steps)
    top = ALPHA_HEADROOM * bounds.alpha_max
    alphas = (np.arange(steps) + 0.5) * top / steps
    mask = np.array([[is_feasible(bounds, (r, a)) for r in rhos] for a in alphas])
    return RegionGrid(rhos, alphas, mask)


def render_ascii(grid: RegionGrid, bounds: AlphaBounds) -> str:
    n = grid.rhos.size
    lines = [
        f"alpha_min={bounds.alpha_min:.6f} alpha_max={bounds.alpha_max:.6f} rho_min={bounds.rho_min:.6f}",
        "alpha",
    ]
    for j in range(grid.alphas.size - 1, -1, -1):
        row = "".join("#" if grid.mask[j, i] else "." for i in range(n))
        lines.append(f"{grid.alphas[j]:9.4f} |{row}|")
    lines.append(" " * 10 + "+" + "-" * n + "+")
    axis = ["0".ljust(n - 1), "1"] if n > 1 else ["1"]
    lines.append(" " * 11 + "".join(axis) + "  rho")
    lines.append(" " * 11 + " " * (n - 1) + "^ rho = 1: single latent model")
    return "\n".join(lines) + "\n"


def parse_ascii(text: str) -> np.ndarray:
    """Inverse of the raster part of :func:`render_ascii` (mask with ascending alpha rows)."""
    rows = [ln.split("|")[1] for ln in text.splitlines() if ln.count("|") == 2 and ln.rstrip().endswith("|")]
    return np.array([[c == "#" for c in r] for r in reversed(rows)])


def render_svg(grid: RegionGrid, bounds: AlphaBounds, cell: int = 8) -> str:
    n_r, n_a = grid.rhos.size, grid.alphas.size
    left, top, bottom = 60, 20, 40
    w, h = n_r * cell, n_a * cell
    top_alpha = ALPHA_HEADROOM * bounds.alpha_max

    def y_of(alpha):
        return top + h - alpha / top_alpha * h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{left + w + 20}" height="{top + h + bottom}" '
        f'viewBox="0 0 {left + w + 20} {top + h + bottom}">',
        f"<title>{escape('feasible (rho, alpha) region')}</title>",
        f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="white" stroke="black"/>',
    ]
    for j in range(n_a):
        for i in range(n_r):
            if grid.mask[j, i]:
                out.append(
                    f'<rect class="feasible" data-i="{i}" data-j="{j}" x="{left + i * cell}" '
                    f'y="{top + (n_a - 1 - j) * cell}" width="{cell}" height="{cell}" fill="#888888"/>'
                )
    x1 = left + (n_r - 0.5) * cell
    out.append(
        f'<line class="single-latent" x1="{x1:.2f}" y1="{y_of(bounds.alpha_min):.2f}" '
        f'x2="{x1:.2f}" y2="{y_of(bounds.alpha_max):.2f}" stroke="black" stroke-width="2"/>'
    )
    out += [
        f'<text x="{left}" y="{top + h + 16}" font-size="12">0</text>',
        f'<text x="{left + w - 8}" y="{top + h + 16}" font-size="12">1</text>',
        f'<text x="{left + w / 2:.1f}" y="{top + h + 32}" font-size="12">rho</text>',
        f'<text x="4" y="{top + h / 2:.1f}" font-size="12">alpha</text>',
        f'<text x="4" y="{y_of(bounds.alpha_max):.1f}" font-size="10">{bounds.alpha_max:.3f}</text>',
        "</svg>",
    ]
    return "\n".join(out) + "\n"
