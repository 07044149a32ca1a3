"""Figure specs and rendering.

Input is always a CSV produced by the entdist CLI (sweep or scan schema).
Three figure kinds are supported:

- ``lines``: one line per value of an optional group column, y vs x.
- ``heatmap``: a z column pivoted over (x, y), with the rows at
  y >= mask_y_above (the entanglement-breaking band of the depolarizing
  parameter by default) masked in a distinct color.
- ``region``: a two-color separability diagram from a boolean column,
  optionally overlaid with the analytic boundary curves.

Rendering is a pure function of the CSV and the spec: the style is pinned
so identical inputs produce identical image files.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .boundaries import DEPOL_EB_THRESHOLD, depol_pf_boundary, gad_boundary_gamma

_STYLE = {
    "figure.figsize": (6.0, 4.5),
    "figure.dpi": 110,
    "savefig.dpi": 150,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
}

MASK_COLOR = "#bdbdbd"
SEPARABLE_COLOR = "#d62728"  # red region = separable output
ENTANGLED_COLOR = "#1f77b4"


class FigureKind(enum.Enum):
    LINES = "lines"
    HEATMAP = "heatmap"
    REGION = "region"


@dataclass(frozen=True)
class FigureSpec:
    kind: FigureKind
    input_csv: str
    x: str
    y: str
    output: str
    z: str | None = None
    group: str | None = None
    overlay: str = "none"
    mask_y_above: float | None = DEPOL_EB_THRESHOLD
    title: str | None = None


def _parse(token: str):
    if token == "true":
        return True
    if token == "false":
        return False
    return float(token)


def load_csv(path: str) -> dict[str, np.ndarray]:
    """Parse a CLI CSV into named columns (floats, or bools for flags)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: CSV has a header but no data rows")
    columns = {}
    for i, name in enumerate(header):
        columns[name] = np.array([_parse(row[i]) for row in rows])
    return columns


def _require(columns, names):
    missing = [n for n in names if n and n not in columns]
    if missing:
        raise ValueError(f"missing CSV columns: {', '.join(missing)}")


def pivot_grid(x, y, z):
    """Pivot flat (x, y, z) samples onto a rectangular grid (nan = absent)."""
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[yi, xi] = z
    return xs, ys, grid


def masked_heatmap_grid(columns, spec: FigureSpec):
    """Pivoted z grid with the y >= mask_y_above rows masked."""
    xs, ys, grid = pivot_grid(columns[spec.x], columns[spec.y], columns[spec.z])
    mask = np.isnan(grid)
    if spec.mask_y_above is not None:
        mask = mask | (ys[:, None] >= spec.mask_y_above - 1e-12)
    return xs, ys, np.ma.MaskedArray(grid, mask=mask)


def _edges(vals):
    if len(vals) == 1:
        return np.array([vals[0] - 0.5, vals[0] + 0.5])
    mids = (vals[1:] + vals[:-1]) / 2
    return np.concatenate([[2 * vals[0] - mids[0]], mids, [2 * vals[-1] - mids[-1]]])


def _draw_overlay(ax, spec: FigureSpec, ys):
    if spec.overlay == "none":
        return
    if spec.overlay == "depol-pf":
        p_grid = np.linspace(0.0, min(float(np.max(ys)), 0.665), 200)
        lows, highs = zip(*(depol_pf_boundary(p) for p in p_grid))
        ax.plot(lows, p_grid, "k--", linewidth=1.2, label="analytic boundary")
        ax.plot(highs, p_grid, "k--", linewidth=1.2)
        ax.legend(loc="upper right")
    elif spec.overlay == "gad":
        n_grid = np.linspace(0.001, 0.999, 400)
        ax.plot(n_grid, [gad_boundary_gamma(n) for n in n_grid], "k--",
                linewidth=1.2, label="analytic boundary")
        ax.legend(loc="upper right")
    else:
        raise ValueError(f"unknown overlay '{spec.overlay}'")


def _render_lines(ax, columns, spec):
    if spec.group is None:
        order = np.argsort(columns[spec.x], kind="stable")
        ax.plot(columns[spec.x][order], columns[spec.y][order], marker=".")
    else:
        for value in np.unique(columns[spec.group]):
            sel = columns[spec.group] == value
            order = np.argsort(columns[spec.x][sel], kind="stable")
            ax.plot(
                columns[spec.x][sel][order],
                columns[spec.y][sel][order],
                marker=".",
                label=f"{spec.group} = {value:g}",
            )
        ax.legend()
    ax.set_ylabel(spec.y)


def _render_heatmap(fig, ax, columns, spec):
    xs, ys, grid = masked_heatmap_grid(columns, spec)
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad(MASK_COLOR)
    mesh = ax.pcolormesh(_edges(xs), _edges(ys), grid, cmap=cmap, shading="flat")
    fig.colorbar(mesh, ax=ax, label=spec.z)
    _draw_overlay(ax, spec, ys)
    ax.set_ylabel(spec.y)


def _render_region(ax, columns, spec):
    xs, ys, grid = pivot_grid(
        columns[spec.x], columns[spec.y], columns[spec.z].astype(float)
    )
    cmap = matplotlib.colors.ListedColormap([ENTANGLED_COLOR, SEPARABLE_COLOR])
    ax.pcolormesh(
        _edges(xs), _edges(ys),
        np.ma.MaskedArray(grid, mask=np.isnan(grid)),
        cmap=cmap, vmin=0, vmax=1, shading="flat",
    )
    _draw_overlay(ax, spec, ys)
    ax.set_ylabel(spec.y)


def render(spec: FigureSpec) -> str:
    """Render the figure and return the output path."""
    columns = load_csv(spec.input_csv)
    needed = [spec.x, spec.y]
    if spec.kind in (FigureKind.HEATMAP, FigureKind.REGION):
        if spec.z is None:
            raise ValueError(f"{spec.kind.value} figures need a z column")
        needed.append(spec.z)
    needed.append(spec.group)
    _require(columns, needed)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        try:
            if spec.kind is FigureKind.LINES:
                _render_lines(ax, columns, spec)
            elif spec.kind is FigureKind.HEATMAP:
                _render_heatmap(fig, ax, columns, spec)
            elif spec.kind is FigureKind.REGION:
                _render_region(ax, columns, spec)
            else:
                raise ValueError(f"unknown figure kind {spec.kind!r}")
            ax.set_xlabel(spec.x)
            if spec.title:
                ax.set_title(spec.title)
            fig.savefig(spec.output, metadata={"Software": "entdist-plot"})
        finally:
            plt.close(fig)
    return spec.output
