"""
File storage for every artifact the pipeline exchanges.

CSV is the format of record; floats are written with %.17g so a value read
back is bit-identical and re-running a pipeline reproduces the same bytes.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import json5
import numpy as np
import pandas as pd

from .bifurcation import BifurcationPlot
from .config import VERSION
from .cubical import DIRECTIONS, SUPERLEVEL, BettiVector, PersistenceDiagram, ScalarField2D
from .errors import FormatError
from .simplicial import PointCloud
from .utils import log

FLOAT_FORMAT = "%.17g"


def _comments(path) -> List[str]:
    lines = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            lines.append(line[1:].strip())
    return lines


def _attributes(comment: str) -> Dict[str, str]:
    """'a=1 b=x' -> {'a': '1', 'b': 'x'}"""
    attrs = {}
    for token in comment.split():
        key, sep, value = token.partition("=")
        if sep:
            attrs[key] = value
    return attrs


def _read_table(path, header: Optional[int] = 0) -> pd.DataFrame:
    try:
        return pd.read_csv(path, comment="#", header=header)
    except pd.errors.EmptyDataError:
        raise FormatError(f"{path}: no data rows") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise FormatError(f"{path}: {e}") from e


def _require_columns(df: pd.DataFrame, columns: List[str], path) -> pd.DataFrame:
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise FormatError(f"{path}: missing column(s) {missing}")
    if df.empty:
        raise FormatError(f"{path}: no data rows")
    try:
        return df[columns].astype(float)
    except ValueError as e:
        raise FormatError(f"{path}: non-numeric value ({e})") from e


# -----------------------------------------------------------------------------
# Grids
# -----------------------------------------------------------------------------

def write_grid(field: ScalarField2D, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("# x_min y_min dx dy nx ny\n")
        f.write("# " + " ".join(FLOAT_FORMAT % v for v in (field.x_min, field.y_min, field.dx, field.dy)))
        f.write(f" {field.nx} {field.ny}\n")
        pd.DataFrame(field.values).to_csv(f, header=False, index=False, float_format=FLOAT_FORMAT)
    log(f"Wrote {field.ny}x{field.nx} grid to {path}")


def read_grid(path) -> ScalarField2D:
    comments = _comments(path)
    if len(comments) < 2:
        raise FormatError(f"{path}: expected '# x_min y_min dx dy nx ny' and a values line")
    parts = comments[1].split()
    if len(parts) != 6:
        raise FormatError(f"{path}: grid header needs 6 values, got {len(parts)}")
    try:
        x_min, y_min, dx, dy = (float(v) for v in parts[:4])
        nx, ny = int(parts[4]), int(parts[5])
    except ValueError as e:
        raise FormatError(f"{path}: bad grid header ({e})") from e

    df = _read_table(path, header=None)
    if df.shape != (ny, nx):
        raise FormatError(f"{path}: header says {ny}x{nx}, found {df.shape[0]}x{df.shape[1]}")
    try:
        values = df.to_numpy(dtype=float)
    except ValueError as e:
        raise FormatError(f"{path}: non-numeric cell ({e})") from e
    try:
        return ScalarField2D(x_min, y_min, dx, dy, values)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e


# -----------------------------------------------------------------------------
# Persistence diagrams
# -----------------------------------------------------------------------------

def write_diagram(diag: PersistenceDiagram, path):
    df = pd.DataFrame({"dim": diag.dims.astype(int), "birth": diag.births, "death": diag.deaths})
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# direction={diag.direction}\n")
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT)
    log(f"Wrote {len(diag)} persistence pairs to {path}")


def read_diagram(path) -> PersistenceDiagram:
    direction = SUPERLEVEL
    for comment in _comments(path):
        direction = _attributes(comment).get("direction", direction)
    if direction not in DIRECTIONS:
        raise FormatError(f"{path}: unknown direction {direction!r}")
    df = _read_table(path)
    columns = ["dim", "birth", "death"]
    if df.empty and list(df.columns) == columns:
        return PersistenceDiagram.from_rows(direction, [])
    rows = _require_columns(df, columns, path)
    return PersistenceDiagram.from_rows(
        direction,
        [(int(d), float(b), float(e)) for d, b, e in rows.itertuples(index=False)],
    )


# -----------------------------------------------------------------------------
# Point clouds
# -----------------------------------------------------------------------------

def write_points(cloud: PointCloud, path):
    pd.DataFrame(cloud.points).to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
    log(f"Wrote {len(cloud)} points to {path}")


def read_points(path) -> PointCloud:
    df = _read_table(path, header=None)
    try:
        return PointCloud(df.to_numpy(dtype=float))
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e


# -----------------------------------------------------------------------------
# Betti vectors and bifurcation plots
# -----------------------------------------------------------------------------

def write_betti(vectors: List[BettiVector], path):
    frames = [pd.DataFrame({"L": v.levels, "dim": v.dim, "beta": v.counts.astype(int)}) for v in vectors]
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    log(f"Wrote Betti vectors for dims {[v.dim for v in vectors]} to {path}")


def plot_frame(plot: BifurcationPlot, matrices: Optional[Dict[int, np.ndarray]] = None, value: str = "beta") -> pd.DataFrame:
    """Long format, ordered by dim, then h, then L."""
    matrices = plot.betti if matrices is None else matrices
    J, K = len(plot.params), len(plot.levels)
    frames = [
        pd.DataFrame({
            "h": np.repeat(plot.params, K),
            "L": np.tile(plot.levels, J),
            "dim": p,
            value: matrices[p].reshape(-1).astype(int),
        })
        for p in sorted(matrices)
    ]
    return pd.concat(frames, ignore_index=True)


def _write_long(df: pd.DataFrame, header: str, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# {header}\n")
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT)


def write_plot(plot: BifurcationPlot, path):
    header = f"provenance={plot.provenance} family={plot.family} param={plot.sweep_param}"
    _write_long(plot_frame(plot), header, path)
    log(f"Wrote {plot.provenance} plot ({len(plot.params)}x{len(plot.levels)}, dims {plot.dims}) to {path}")


def write_errors(true: BifurcationPlot, errors: Dict[int, np.ndarray], path):
    header = f"provenance=error family={true.family} param={true.sweep_param}"
    _write_long(plot_frame(true, errors, value="err"), header, path)
    log(f"Wrote error plot to {path}")


def _matrices_from_long(df: pd.DataFrame, value: str, path) -> Tuple[np.ndarray, np.ndarray, Dict[int, np.ndarray]]:
    rows = _require_columns(df, ["h", "L", "dim", value], path)
    params = pd.unique(rows["h"]).astype(float)
    levels = pd.unique(rows["L"]).astype(float)
    matrices = {}
    for p, group in rows.groupby("dim", sort=True):
        if len(group) != len(params) * len(levels):
            raise FormatError(f"{path}: dim {int(p)} has {len(group)} rows, expected {len(params) * len(levels)}")
        table = group.pivot_table(index="h", columns="L", values=value, aggfunc="first")
        table = table.reindex(index=params, columns=levels)
        if table.isna().to_numpy().any():
            raise FormatError(f"{path}: dim {int(p)} does not cover the full (h, L) grid")
        matrices[int(p)] = table.to_numpy().astype(int)
    return params, levels, matrices


def read_plot(path) -> BifurcationPlot:
    attrs = {}
    for comment in _comments(path):
        attrs.update(_attributes(comment))
    df = _read_table(path)
    params, levels, matrices = _matrices_from_long(df, "beta", path)
    try:
        return BifurcationPlot(
            family=attrs.get("family", "unknown"),
            sweep_param=attrs.get("param", "h"),
            params=params,
            levels=levels,
            betti=matrices,
            provenance=attrs.get("provenance", "unknown"),
        )
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e


def read_errors(path) -> Tuple[np.ndarray, np.ndarray, Dict[int, np.ndarray]]:
    return _matrices_from_long(_read_table(path), "err", path)


# -----------------------------------------------------------------------------
# JSON: metadata sidecars, summaries, input configs
# -----------------------------------------------------------------------------

def metadata_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".meta.json")


def _dump_json(data: Dict[str, Any], path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True, default=_jsonable)
        f.write("\n")


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (np.ndarray, tuple)):
        return list(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def write_metadata(out, seed: int, config: Dict[str, Any]) -> Path:
    path = metadata_path(out)
    _dump_json({"seed": int(seed), "config": config, "version": VERSION}, path)
    return path


def write_summary(plot: BifurcationPlot, transitions: Dict[str, List[float]], tau: int, path):
    _dump_json({
        "family": plot.family,
        "param": plot.sweep_param,
        "provenance": plot.provenance,
        "tau": int(tau),
        "transitions": transitions,
    }, path)
    log(f"Wrote transition summary to {path}")


def load_json(path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json5.load(f)
        except ValueError as e:
            raise FormatError(f"{path}: {e}") from e
    if not isinstance(data, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return data
