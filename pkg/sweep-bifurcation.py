#!/usr/bin/env python3
# -----------------------------------------------------------------------------
# P-bifurcation sweep (Duffing by default, PBIF_FAMILY to change)
# -----------------------------------------------------------------------------
# What this script does:
# 1) Sweep the bifurcation parameter over [-1, 1] and build the analytical
#    homological bifurcation plot from the closed-form stationary density.
# 2) Simulate the SDE for every parameter value and build the estimated plot with
#    the topologically consistent estimator.
# 3) Compute the error plot (true - estimate) and detect transitions in both.
# 4) Write CSVs, SVG heatmaps, a transition summary and metadata sidecars
#    into the data directory.
# -----------------------------------------------------------------------------

import logging
import os

import numpy as np

from pbif_homology.bifurcation import analytical_plot, error_plot, estimated_plot, transition_summary
from pbif_homology.config import H_RANGE, NUM_LEVELS, SEED, TRANSITION_CELLS, WORKERS
from pbif_homology.render import render_error_svg, render_svg
from pbif_homology.store import write_errors, write_metadata, write_plot, write_summary
from pbif_homology.utils import level_grid, sweep_values

# Configure logging: INFO for normal run; set to DEBUG for per-column detail.
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

DATA_DIR = os.getenv("PBIF_DATA_DIR", "data")
FAMILY = os.getenv("PBIF_FAMILY", "duffing")
SKIP_ESTIMATE = os.getenv("PBIF_SKIP_ESTIMATE", "") == "1"


def sweep_config():
    return {
        "family": FAMILY,
        "h_range": list(H_RANGE),
        "levels": NUM_LEVELS,
        "tau": TRANSITION_CELLS,
        "workers": WORKERS,
    }


def save_plot(plot, name):
    """Write a plot CSV, its heatmaps and its transition summary."""
    csv_path = os.path.join(DATA_DIR, f"{name}_plot.csv")
    write_plot(plot, csv_path)
    write_metadata(csv_path, SEED, sweep_config())
    for p in plot.dims:
        render_svg(plot, p, os.path.join(DATA_DIR, f"{name}_beta{p}.svg"))

    transitions = transition_summary(plot, TRANSITION_CELLS)
    write_summary(plot, transitions, TRANSITION_CELLS, os.path.join(DATA_DIR, f"{name}_summary.json"))
    for p, found in transitions.items():
        logger.info(f"{name} beta_{p} transitions at {plot.sweep_param} = {found}")
    return transitions


def main():
    """
    Entry point:
      - Run the analytical sweep (and the estimated one unless skipped).
      - Persist every artifact under DATA_DIR.
      - Emit a short summary of transitions and error cells.
    """
    os.makedirs(DATA_DIR, exist_ok=True)
    values = sweep_values(*H_RANGE)
    levels = level_grid(NUM_LEVELS)

    logger.info(f"Starting {FAMILY} sweep over {len(values)} parameter values...")
    true = analytical_plot(FAMILY, values, levels)
    save_plot(true, "analytical")

    if SKIP_ESTIMATE:
        logger.info("PBIF_SKIP_ESTIMATE=1, stopping after the analytical sweep.")
        return

    est = estimated_plot(FAMILY, values, levels, master_seed=SEED)
    save_plot(est, "estimated")

    errors = error_plot(true, est)
    error_path = os.path.join(DATA_DIR, "error_plot.csv")
    write_errors(true, errors, error_path)
    write_metadata(error_path, SEED, sweep_config())
    for p in errors:
        render_error_svg(true.params, true.levels, errors, p, os.path.join(DATA_DIR, f"error_beta{p}.svg"), true.sweep_param)

    logger.info("=== Summary ===")
    for p, matrix in errors.items():
        wrong = int(np.count_nonzero(matrix))
        logger.info(f"beta_{p}: {wrong} of {matrix.size} cells differ from the analytical plot")


if __name__ == "__main__":
    main()
