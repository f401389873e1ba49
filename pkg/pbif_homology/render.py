"""
SVG heatmaps of bifurcation and error plots.
"""

from typing import Dict, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import BoundaryNorm, ListedColormap

from .bifurcation import BifurcationPlot
from .errors import FormatError
from .utils import log

# fixed ids and no date so the same plot always renders to the same bytes
SVG_RC = {"svg.hashsalt": "pbif_homology", "svg.fonttype": "none"}


def _edges(centers: np.ndarray) -> np.ndarray:
    centers = np.asarray(centers, dtype=float)
    if centers.size == 1:
        return np.array([centers[0] - 0.5, centers[0] + 0.5])
    mids = (centers[:-1] + centers[1:]) / 2
    return np.concatenate([[2 * centers[0] - mids[0]], mids, [2 * centers[-1] - mids[-1]]])


def _discrete(values: np.ndarray, cmap_name: str, lo: Optional[int] = None, hi: Optional[int] = None):
    """One colour per integer in [lo, hi]."""
    lo = int(values.min()) if lo is None else lo
    hi = int(values.max()) if hi is None else hi
    ticks = np.arange(lo, hi + 1)
    base = plt.get_cmap(cmap_name)
    colors = [base(x) for x in (np.linspace(0, 1, len(ticks)) if len(ticks) > 1 else [0.5])]
    bounds = np.arange(lo, hi + 2) - 0.5
    return ListedColormap(colors), BoundaryNorm(bounds, len(ticks)), ticks


def _draw(params, levels, matrix, cmap, norm, ticks, title: str, label: str, sweep_param: str, out):
    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(7, 5))
        # matrix is (params, levels); pcolormesh wants (rows=L, cols=h)
        mesh = ax.pcolormesh(_edges(params), _edges(levels), matrix.T, cmap=cmap, norm=norm, shading="flat")
        bar = fig.colorbar(mesh, ax=ax, ticks=ticks)
        bar.set_label(label)
        ax.set_xlabel(sweep_param)
        ax.set_ylabel("L")
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(out, format="svg", metadata={"Date": None})
        plt.close(fig)


def _check_matrix(matrix: np.ndarray, params: np.ndarray, levels: np.ndarray):
    if matrix.size == 0 or matrix.shape != (len(params), len(levels)):
        raise FormatError(f"cannot render a {matrix.shape} matrix over {len(params)}x{len(levels)} cells")


def render_svg(plot: BifurcationPlot, dim: int, out):
    if dim not in plot.betti:
        raise FormatError(f"plot has no beta_{dim}; available: {plot.dims}")
    matrix = plot.betti[dim]
    _check_matrix(matrix, plot.params, plot.levels)
    cmap, norm, ticks = _discrete(matrix, "viridis")
    title = f"{plot.provenance} {plot.family}: beta_{dim}"
    _draw(plot.params, plot.levels, matrix, cmap, norm, ticks, title, f"beta_{dim}", plot.sweep_param, out)
    log(f"Rendered beta_{dim} heatmap to {out}")


def render_error_svg(params: np.ndarray, levels: np.ndarray, errors: Dict[int, np.ndarray], dim: int, out, sweep_param: str = "h"):
    if dim not in errors:
        raise FormatError(f"error plot has no dim {dim}; available: {sorted(errors)}")
    matrix = errors[dim]
    _check_matrix(matrix, params, levels)
    # symmetric about zero so a perfect estimate is always the middle colour
    span = max(1, int(np.abs(matrix).max()))
    cmap, norm, ticks = _discrete(matrix, "RdBu_r", -span, span)
    title = f"error beta_{dim} (true - estimate)"
    _draw(params, levels, matrix, cmap, norm, ticks, title, "error", sweep_param, out)
    log(f"Rendered error heatmap for dim {dim} to {out}")
