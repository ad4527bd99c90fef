"""Report rendering: dependency-free SVG heatmaps plus matplotlib figures.

The SVG writer is deterministic (fixed float formatting, no timestamps) so
heatmaps can be diffed in tests; the PNG renderers produce the same reports
as publication-style figures next to the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import SweepGrid

# linear color scale anchors, dark blue -> teal -> yellow
_STOPS = np.array([
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
], dtype=float)


def _color(x: float) -> str:
    """Map x in [0, 1] onto the color scale as '#rrggbb'."""
    x = min(1.0, max(0.0, x))
    pos = x * (len(_STOPS) - 1)
    i = min(int(pos), len(_STOPS) - 2)
    frac = pos - i
    rgb = _STOPS[i] * (1 - frac) + _STOPS[i + 1] * frac
    return "#{:02x}{:02x}{:02x}".format(*(int(round(c)) for c in rgb))


def write_svg_heatmap(grid: SweepGrid, path: str) -> None:
    """Heatmap of a sweep grid as a standalone SVG file.

    One rect per grid cell (axis2 along x, axis1 along y, origin bottom
    left), linear color scale over [0, max], axes labeled with the
    parameter names.
    """
    n1, n2 = len(grid.axis1), len(grid.axis2)
    cell = 18 if max(n1, n2) <= 40 else 10
    margin_l, margin_b, margin_t, margin_r = 70, 56, 24, 24
    width = margin_l + n2 * cell + margin_r
    height = margin_t + n1 * cell + margin_b
    vmax = float(grid.values.max())
    scale = vmax if vmax > 0 else 1.0

    rows = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for i in range(n1):
        y = margin_t + (n1 - 1 - i) * cell  # axis1 increases upward
        for j in range(n2):
            x = margin_l + j * cell
            rows.append(
                f'<rect class="cell" x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{_color(grid.values[i, j] / scale)}"/>'
            )

    def text(x, y, s, anchor="middle", rotate=None):
        attr = f' transform="rotate(-90 {x} {y})"' if rotate else ""
        rows.append(
            f'<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" '
            f'text-anchor="{anchor}"{attr}>{s}</text>'
        )

    text(margin_l + n2 * cell / 2, height - 18, grid.axis2_name)
    text(18, margin_t + n1 * cell / 2, grid.axis1_name, rotate=True)
    text(margin_l, height - 36, f"{grid.axis2[0]:.4g}", anchor="start")
    text(margin_l + n2 * cell, height - 36, f"{grid.axis2[-1]:.4g}", anchor="end")
    text(margin_l - 6, margin_t + n1 * cell, f"{grid.axis1[0]:.4g}", anchor="end")
    text(margin_l - 6, margin_t + 10, f"{grid.axis1[-1]:.4g}", anchor="end")
    text(width - margin_r, 16, f"concurrence max = {vmax:.6g}", anchor="end")
    rows.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def save_heatmap_png(grid: SweepGrid, path: str) -> None:
    """Same heatmap through matplotlib, with a colorbar."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=150)
    mesh = ax.pcolormesh(grid.axis2, grid.axis1, grid.values, shading="nearest",
                         cmap="viridis", vmin=0.0)
    ax.set_xlabel(grid.axis2_name)
    ax.set_ylabel(grid.axis1_name)
    fixed = " ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}"
                     for k, v in sorted(grid.fixed.items()))
    ax.set_title(f"A-B concurrence ({fixed})", fontsize=9)
    fig.colorbar(mesh, ax=ax, label="concurrence")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_trajectory_png(times, concurrence, populations, site_labels, path: str) -> None:
    """Concurrence and excited-state populations along one trajectory."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 5.2), dpi=150, sharex=True)
    ax1.plot(times, concurrence, color="tab:red")
    ax1.set_ylabel("A-B concurrence")
    ax1.grid(alpha=0.3)
    for k, lab in enumerate(site_labels):
        ax2.plot(times, populations[:, k], label=lab)
    ax2.set_xlabel("t  (units of 1/g0)")
    ax2.set_ylabel("excited population")
    ax2.grid(alpha=0.3)
    ax2.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_shorttime_png(times, c_numeric, c_analytic, window, path: str) -> None:
    """Integrated vs. quadratic-law concurrence over the short-time window."""
    times = np.asarray(times)
    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=150)
    ax.plot(times, c_numeric, "o-", ms=3, label="integrated")
    ax.plot(times, c_analytic, "--", label="g gamma_D n_T t^2")
    if np.any(window):
        t_edge = times[np.flatnonzero(window)[-1]]
        ax.axvline(t_edge, color="gray", lw=0.8, label="window edge")
    ax.set_xlabel("t  (units of 1/g0)")
    ax.set_ylabel("C-D concurrence")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
