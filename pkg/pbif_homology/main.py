import argparse
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from .bifurcation import analytical_plot, error_plot, estimated_plot, transition_summary
from .config import (
    BURN_IN,
    CRATER_SAMPLES,
    DT,
    EPSILON,
    GRID_SIZE,
    H_RANGE,
    NUM_LEVELS,
    NUM_SAMPLES,
    SEED,
    STRIDE,
    SUBSAMPLE_SIZE,
    TRANSITION_CELLS,
    VERSION,
    WINDOW,
    WORKERS,
)
from .consistency import betti_from_sample
from .cubical import DIRECTIONS, SUPERLEVEL, Window, betti_vector, field_persistence
from .densities import evaluate_on_grid, normalize_max
from .errors import FormatError, PbifError
from .families import FAMILIES, get_family, make_model, make_system, model_from_spec, simulation_config
from .kde import fit_kde, kde_on_grid
from .render import render_error_svg, render_svg
from .simplicial import rips_filtration, rips_persistence
from .stochastic import SimulationConfig, euler_maruyama, greedy_permutation, stationary_sample
from .store import (
    load_json,
    read_diagram,
    read_errors,
    read_grid,
    read_plot,
    read_points,
    write_betti,
    write_diagram,
    write_errors,
    write_grid,
    write_metadata,
    write_plot,
    write_points,
    write_summary,
)
from .utils import level_grid, log, parse_range, split_params, sweep_values, window_from_ranges

# flags whose values may start with '-' (e.g. --h-range -1:1:21)
RANGE_FLAGS = ("--h-range", "--x-range", "--y-range")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _join_range_args(argv: List[str]) -> List[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in RANGE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _dims(text: str) -> List[int]:
    try:
        dims = sorted({int(v) for v in text.split(",")})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated dimensions, got {text!r}") from None
    if any(p not in (0, 1) for p in dims):
        raise argparse.ArgumentTypeError(f"dimensions must be 0 or 1, got {text!r}")
    return dims


def _range(text: str):
    try:
        return parse_range(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _levels(args) -> np.ndarray:
    return level_grid(args.levels)


def _window(args) -> Window:
    return Window(*window_from_ranges(args.x_range, args.y_range))


def _family_params(args) -> Dict[str, float]:
    params = split_params(args.param)
    if getattr(args, "h", None) is not None:
        params[get_family(args.family).sweep_param] = args.h
    return params


def _sim_config(args) -> SimulationConfig:
    return simulation_config(args.family, dt=args.dt, burn_in=args.burn_in, stride=args.stride, n_samples=args.samples)


def _recorded(args) -> Dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _finish(args, out):
    write_metadata(out, args.seed, _recorded(args))


# -----------------------------------------------------------------------------
# Subcommands
# -----------------------------------------------------------------------------

def cmd_pdf_grid(args):
    if args.spec:
        model, window, nx, ny = model_from_spec(load_json(args.spec))
    else:
        model, window, nx, ny = make_model(args.family, **_family_params(args)), _window(args), args.nx, args.ny
    field = evaluate_on_grid(model, window, nx, ny)
    write_grid(field if args.raw else normalize_max(field), args.out)
    _finish(args, args.out)


def cmd_simulate(args):
    sim = _sim_config(args)
    system = make_system(args.family, **_family_params(args))
    traj = euler_maruyama(system, sim.x0, sim.dt, sim.n_steps, args.seed)
    if args.trajectory:
        cloud = stationary_sample(traj, 0, 1)
    else:
        cloud = stationary_sample(traj, sim.burn_in, sim.stride)
        if args.greedy:
            cloud = greedy_permutation(cloud, args.greedy)
    write_points(cloud, args.out)
    _finish(args, args.out)


def cmd_kde(args):
    cloud = read_points(args.input)
    bandwidths = [float(v) for v in args.bandwidth.split(",")] if args.bandwidth else None
    model = fit_kde(cloud, bandwidths)
    write_grid(kde_on_grid(model, _window(args), args.nx, args.ny, normalize=args.normalize), args.out)
    _finish(args, args.out)


def cmd_persist(args):
    if args.grid:
        diag = field_persistence(read_grid(args.grid), args.direction)
    else:
        diag = rips_persistence(rips_filtration(read_points(args.points), args.r_max, args.max_dim))
    write_diagram(diag, args.out)
    _finish(args, args.out)


def cmd_betti(args):
    if args.estimate:
        if not args.points:
            raise FormatError("betti --estimate needs --points")
        cfg = load_json(args.config) if args.config else {}
        levels = np.asarray(cfg.get("levels", _levels(args)), dtype=float)
        vectors = betti_from_sample(
            read_points(args.points),
            levels,
            dims=cfg.get("dims", args.dims),
            r=cfg.get("r", args.r),
            epsilon=float(cfg.get("epsilon", args.epsilon)),
            n=int(cfg.get("n", args.n)),
        )
    else:
        if not args.diagram:
            raise FormatError("betti needs --diagram (or --estimate with --points)")
        diag = read_diagram(args.diagram)
        vectors = [betti_vector(diag, _levels(args), p) for p in args.dims]
    write_betti(vectors, args.out)
    _finish(args, args.out)


def cmd_bifurcation_plot(args):
    values = sweep_values(*args.h_range)
    common = dict(levels=_levels(args), dims=args.dims, params=split_params(args.param), workers=args.workers)
    if args.analytical:
        plot = analytical_plot(args.family, values, window=_window(args), nx=args.nx, ny=args.ny, **common)
    else:
        plot = estimated_plot(
            args.family, values, sim=_sim_config(args), epsilon=args.epsilon, r=args.r, n=args.n,
            master_seed=args.seed, **common,
        )
    write_plot(plot, args.out)
    _finish(args, args.out)
    if args.summary:
        write_summary(plot, transition_summary(plot, args.tau), args.tau, args.summary)
        _finish(args, args.summary)


def cmd_error_plot(args):
    true, est = read_plot(args.true), read_plot(args.estimate)
    write_errors(true, error_plot(true, est), args.out)
    _finish(args, args.out)


def cmd_render(args):
    if args.error:
        params, levels, errors = read_errors(args.input)
        render_error_svg(params, levels, errors, args.dim, args.out)
    else:
        render_svg(read_plot(args.input), args.dim, args.out)
    _finish(args, args.out)


# -----------------------------------------------------------------------------
# Parser
# -----------------------------------------------------------------------------

def _add_family(p, sweep: bool = True):
    p.add_argument("--family", default="duffing", choices=sorted(FAMILIES), help="density family")
    if sweep:
        p.add_argument("--h", type=float, help="value of the family's bifurcation parameter")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="other family parameters")


def _add_window(p):
    x_lo, x_hi, y_lo, y_hi = WINDOW
    p.add_argument("--x-range", default=f"{x_lo}:{x_hi}", help="x_min:x_max")
    p.add_argument("--y-range", default=f"{y_lo}:{y_hi}", help="y_min:y_max")
    p.add_argument("--nx", type=int, default=GRID_SIZE)
    p.add_argument("--ny", type=int, default=GRID_SIZE)


def _add_sim(p):
    p.add_argument("--dt", type=float, help=f"time step (default {DT})")
    p.add_argument("--burn-in", type=int, help=f"steps dropped before sampling (default {BURN_IN})")
    p.add_argument("--stride", type=int, help=f"steps between kept samples (default {STRIDE})")
    p.add_argument("--samples", type=int, help=f"stationary samples kept (default {NUM_SAMPLES}, crater {CRATER_SAMPLES})")


def _add_estimator(p):
    p.add_argument("--epsilon", type=float, default=EPSILON)
    p.add_argument("--r", type=float, default=None, help="ball radius (default: clamped KDE bandwidth)")
    p.add_argument("--n", type=int, default=SUBSAMPLE_SIZE, help="greedy subsample size")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="pbif_homology",
        description="Detect P-bifurcations of stationary densities with superlevel persistent homology.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)
    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=int, default=SEED, help="master random seed")

    p = sub.add_parser("pdf-grid", parents=[seeded], help="evaluate an analytical density on a grid")
    _add_family(p)
    _add_window(p)
    p.add_argument("--spec", help="model spec JSON {family, params, window, nx, ny}")
    p.add_argument("--raw", action="store_true", help="skip max-normalization")
    p.add_argument("--out", required=True, help="grid CSV")
    p.set_defaults(func=cmd_pdf_grid)

    p = sub.add_parser("simulate", parents=[seeded], help="Euler-Maruyama simulation to a point CSV")
    _add_family(p)
    _add_sim(p)
    p.add_argument("--greedy", type=int, default=0, help="keep the first N greedy-permuted samples")
    p.add_argument("--trajectory", action="store_true", help="write every state instead of the stationary sample")
    p.add_argument("--out", required=True, help="point CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("kde", parents=[seeded], help="Gaussian KDE of a point CSV on a grid")
    p.add_argument("--in", dest="input", required=True, help="point CSV")
    _add_window(p)
    p.add_argument("--bandwidth", help="comma-separated per-dimension bandwidths (default: Scott's rule)")
    p.add_argument("--normalize", action="store_true", help="divide by the grid maximum")
    p.add_argument("--out", required=True, help="grid CSV")
    p.set_defaults(func=cmd_kde)

    p = sub.add_parser("persist", parents=[seeded], help="persistence diagram of a grid or point cloud")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--grid", help="grid CSV (cubical complex)")
    source.add_argument("--points", help="point CSV (Rips complex)")
    p.add_argument("--direction", choices=DIRECTIONS, default=SUPERLEVEL, help="grid filtration direction")
    p.add_argument("--r-max", type=float, default=1.0, help="largest Rips edge length")
    p.add_argument("--max-dim", type=int, default=2, choices=(0, 1, 2))
    p.add_argument("--out", required=True, help="diagram CSV")
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("betti", parents=[seeded], help="Betti vectors from a diagram, or estimated from samples")
    p.add_argument("--diagram", help="diagram CSV")
    p.add_argument("--estimate", action="store_true", help="estimate from --points instead")
    p.add_argument("--points", help="stationary sample CSV")
    p.add_argument("--config", help="estimator JSON {epsilon, r, n, levels[], dims[]}")
    p.add_argument("--levels", type=int, default=NUM_LEVELS, help="number of uniform levels in (0, 1]")
    p.add_argument("--dims", type=_dims, default=[0, 1])
    _add_estimator(p)
    p.add_argument("--out", required=True, help="Betti CSV")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("bifurcation-plot", parents=[seeded], help="Betti numbers over (parameter, level)")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--analytical", action="store_true")
    mode.add_argument("--estimated", action="store_true")
    _add_family(p, sweep=False)
    start, stop, count = H_RANGE
    p.add_argument("--h-range", type=_range, default=H_RANGE, help=f"start:stop:count (default {start:g}:{stop:g}:{count})")
    p.add_argument("--levels", type=int, default=NUM_LEVELS)
    p.add_argument("--dims", type=_dims, default=[0, 1])
    _add_window(p)
    _add_sim(p)
    _add_estimator(p)
    p.add_argument("--workers", type=int, default=WORKERS, help="process pool size")
    p.add_argument("--tau", type=int, default=TRANSITION_CELLS, help="transition threshold in level cells")
    p.add_argument("--summary", help="transition summary JSON")
    p.add_argument("--out", required=True, help="plot CSV")
    p.set_defaults(func=cmd_bifurcation_plot)

    p = sub.add_parser("error-plot", parents=[seeded], help="beta_true - beta_estimate")
    p.add_argument("--true", required=True, help="analytical plot CSV")
    p.add_argument("--estimate", required=True, help="estimated plot CSV")
    p.add_argument("--out", required=True, help="error CSV")
    p.set_defaults(func=cmd_error_plot)

    p = sub.add_parser("render", parents=[seeded], help="SVG heatmap of a plot CSV")
    p.add_argument("--in", dest="input", required=True, help="plot or error CSV")
    p.add_argument("--dim", type=int, default=0)
    p.add_argument("--error", action="store_true", help="input is an error CSV")
    p.add_argument("--out", required=True, help="SVG path")
    p.set_defaults(func=cmd_render)

    parser.epilog = "subcommands:\n" + "".join(
        "  " + choice.format_usage().replace("usage: ", "") for choice in sub.choices.values()
    )
    return parser


def dispatch(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_range_args(argv))
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)

    try:
        args.func(args)
    except (PbifError, ValueError, OSError) as e:
        print(f"error: {e}".replace("\n", " "), file=sys.stderr)
        return 1
    log(f"{args.command} done.")
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
