"""
Filtered cubical complexes on 2D scalar fields.

A field of nx x ny values is the top-dimensional layer of a cubical complex:
value M[i, j] sits on the square in row i, column j. Cells are addressed on
the doubled grid (a, b), 0 <= a <= 2*ny, 0 <= b <= 2*nx; the dimension of a
cell is the number of odd coordinates. Lower cells take the max (superlevel)
or min (sublevel) of the squares they bound.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import ndimage

from .config import NUM_LEVELS
from .utils import level_grid
from .z2core import Z2Matrix, reduce

SUPERLEVEL = "superlevel"
SUBLEVEL = "sublevel"
DIRECTIONS = (SUPERLEVEL, SUBLEVEL)


def _sign(direction: str) -> int:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    return 1 if direction == SUPERLEVEL else -1


def grid_centers(lo: float, hi: float, n: int) -> np.ndarray:
    """Centres of n equal cells over [lo, hi]; offsets are symmetric about the midpoint."""
    mid = 0.5 * (lo + hi)
    step = (hi - lo) / n
    return mid + (np.arange(n) - (n - 1) / 2) * step


@dataclass(frozen=True)
class Window:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError(f"empty window {self}")


@dataclass(frozen=True, eq=False)
class ScalarField2D:
    x_min: float
    y_min: float
    dx: float
    dy: float
    values: np.ndarray  # shape (ny, nx); row index follows y

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or min(values.shape) < 1:
            raise ValueError(f"field values must be a non-empty 2D array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        if self.dx <= 0 or self.dy <= 0:
            raise ValueError("grid spacings must be positive")
        object.__setattr__(self, "values", values)

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    @classmethod
    def on_window(cls, window: Window, values: np.ndarray) -> "ScalarField2D":
        values = np.asarray(values, dtype=float)
        ny, nx = values.shape
        dx = (window.x_max - window.x_min) / nx
        dy = (window.y_max - window.y_min) / ny
        return cls(window.x_min, window.y_min, dx, dy, values)

    def x_centers(self) -> np.ndarray:
        return grid_centers(self.x_min, self.x_min + self.nx * self.dx, self.nx)

    def y_centers(self) -> np.ndarray:
        return grid_centers(self.y_min, self.y_min + self.ny * self.dy, self.ny)

    def with_values(self, values: np.ndarray) -> "ScalarField2D":
        return ScalarField2D(self.x_min, self.y_min, self.dx, self.dy, values)


@dataclass(frozen=True, eq=False)
class CubicalFiltration:
    shape: Tuple[int, int]
    direction: str
    dims: np.ndarray  # per cell, in filtration order
    coords: np.ndarray  # (n_cells, 2) doubled-grid coordinates
    values: np.ndarray
    boundary: Z2Matrix
    order: np.ndarray  # order[k] = flat doubled-grid index of the k-th cell

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    direction: str
    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray

    @classmethod
    def from_rows(cls, direction: str, rows: Sequence[Tuple[int, float, float]]) -> "PersistenceDiagram":
        _sign(direction)
        rows = list(rows)
        dims = np.array([r[0] for r in rows], dtype=int)
        births = np.array([r[1] for r in rows], dtype=float)
        deaths = np.array([r[2] for r in rows], dtype=float)
        return cls(direction, dims, births, deaths)

    def __len__(self) -> int:
        return len(self.dims)

    def rows(self):
        return list(zip(self.dims.tolist(), self.births.tolist(), self.deaths.tolist()))

    def in_dim(self, p: int) -> Tuple[np.ndarray, np.ndarray]:
        mask = self.dims == p
        return self.births[mask], self.deaths[mask]

    def essential(self, p: int) -> int:
        _, deaths = self.in_dim(p)
        return int(np.count_nonzero(np.isinf(deaths)))

    def finite_pairs(self, p: int) -> np.ndarray:
        births, deaths = self.in_dim(p)
        keep = np.isfinite(deaths)
        return np.column_stack([births[keep], deaths[keep]])

    def negated(self) -> "PersistenceDiagram":
        """The diagram of the negated function with the opposite direction."""
        flipped = SUBLEVEL if self.direction == SUPERLEVEL else SUPERLEVEL
        return PersistenceDiagram(flipped, self.dims.copy(), -self.births, -self.deaths)


@dataclass(frozen=True, eq=False)
class BettiVector:
    dim: int
    levels: np.ndarray
    counts: np.ndarray

    def __len__(self) -> int:
        return len(self.levels)


def default_levels() -> np.ndarray:
    return level_grid(NUM_LEVELS)


def cell_values(values: np.ndarray, direction: str = SUPERLEVEL) -> np.ndarray:
    """Filtration value of every cell on the doubled grid, shape (2ny+1, 2nx+1)."""
    s = _sign(direction)
    m = s * np.asarray(values, dtype=float)
    ny, nx = m.shape
    mp = np.pad(m, 1, constant_values=-np.inf)
    f = np.empty((2 * ny + 1, 2 * nx + 1))
    f[1::2, 1::2] = m
    f[0::2, 0::2] = np.maximum.reduce([mp[:-1, :-1], mp[:-1, 1:], mp[1:, :-1], mp[1:, 1:]])
    f[0::2, 1::2] = np.maximum(mp[:-1, 1:-1], mp[1:, 1:-1])
    f[1::2, 0::2] = np.maximum(mp[1:-1, :-1], mp[1:-1, 1:])
    return s * f


def build_filtration(field: ScalarField2D, direction: str = SUPERLEVEL) -> CubicalFiltration:
    s = _sign(direction)
    f = cell_values(field.values, direction)
    width = f.shape[1]
    a, b = np.indices(f.shape)
    dims = (a % 2) + (b % 2)

    # superlevel: descending value; ties by dimension, then row-major position
    order = np.lexsort((b.ravel(), a.ravel(), dims.ravel(), -s * f.ravel()))
    position = np.empty(order.size, dtype=np.int64)
    position[order] = np.arange(order.size)

    flat = np.arange(order.size).reshape(f.shape)
    columns = [()] * order.size
    a_odd, b_odd = (a % 2 == 1), (b % 2 == 1)
    groups = [
        (a_odd & ~b_odd, (-width, width)),
        (~a_odd & b_odd, (-1, 1)),
        (a_odd & b_odd, (-width, width, -1, 1)),
    ]
    for mask, offsets in groups:
        cells = flat[mask]
        if cells.size == 0:
            continue
        faces = np.sort(np.stack([position[cells + o] for o in offsets], axis=1), axis=1)
        for p, face_row in zip(position[cells].tolist(), faces.tolist()):
            columns[p] = tuple(face_row)

    return CubicalFiltration(
        shape=(field.ny, field.nx),
        direction=direction,
        dims=dims.ravel()[order],
        coords=np.column_stack([a.ravel()[order], b.ravel()[order]]),
        values=f.ravel()[order],
        boundary=Z2Matrix(order.size, order.size, tuple(columns)),
        order=order,
    )


def persistence(filt: CubicalFiltration) -> PersistenceDiagram:
    return diagram_from_boundary(filt.boundary, filt.dims, filt.values, filt.direction)


def diagram_from_boundary(boundary: Z2Matrix, dims: np.ndarray, values: np.ndarray, direction: str) -> PersistenceDiagram:
    """Reduce a filtration-ordered boundary matrix and read off (dim, birth, death)."""
    s = _sign(direction)
    reduced = reduce(boundary, dims=dims)

    rows = []
    for birth, death in reduced.pairing:
        b, d = float(values[birth]), float(values[death])
        if b != d:
            rows.append((int(dims[birth]), b, d))
    never_dies = -s * np.inf
    for j in reduced.essential():
        rows.append((int(dims[j]), float(values[j]), never_dies))

    rows.sort(key=lambda r: (r[0], -s * r[1], -s * r[2]))
    return PersistenceDiagram.from_rows(direction, rows)


def field_persistence(field: ScalarField2D, direction: str = SUPERLEVEL) -> PersistenceDiagram:
    return persistence(build_filtration(field, direction))


def _alive(diag: PersistenceDiagram, levels: np.ndarray, p: int) -> np.ndarray:
    births, deaths = diag.in_dim(p)
    lv = np.asarray(levels, dtype=float)[None, :]
    b, d = births[:, None], deaths[:, None]
    if diag.direction == SUPERLEVEL:
        alive = (d < lv) & (lv <= b)
    else:
        alive = (b <= lv) & (lv < d)
    return alive.sum(axis=0)


def betti_at(diag: PersistenceDiagram, L: float, p: int) -> int:
    return int(_alive(diag, np.array([L]), p)[0])


def betti_vector(diag: PersistenceDiagram, levels: Sequence[float], p: int) -> BettiVector:
    levels = np.asarray(levels, dtype=float)
    if levels.size == 0:
        return BettiVector(p, levels, np.zeros(0, dtype=int))
    return BettiVector(p, levels, _alive(diag, levels, p).astype(int))


def brute_force_betti(field: ScalarField2D, L: float) -> Tuple[int, int]:
    """
    (beta0, beta1) of the superlevel complex at L without any reduction:
    components by flood fill over squares (squares sharing a vertex touch),
    loops from the Euler characteristic V - E + F = beta0 - beta1.
    """
    f = cell_values(field.values, SUPERLEVEL)
    a, b = np.indices(f.shape)
    dims = (a % 2) + (b % 2)
    present = f >= L
    v = int(np.count_nonzero(present & (dims == 0)))
    e = int(np.count_nonzero(present & (dims == 1)))
    q = int(np.count_nonzero(present & (dims == 2)))
    _, beta0 = ndimage.label(field.values >= L, structure=np.ones((3, 3), dtype=int))
    return int(beta0), int(beta0 - (v - e + q))
