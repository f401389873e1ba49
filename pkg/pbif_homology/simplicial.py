"""
Rips filtrations and fixed-scale Rips complexes on point clouds.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .cubical import SUBLEVEL, PersistenceDiagram, diagram_from_boundary
from .z2core import Z2Matrix, rank

Simplex = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray  # (n, d)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2:
            raise ValueError(f"points must be an (n, d) array, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def subset(self, indices: Sequence[int]) -> "PointCloud":
        return PointCloud(self.points[np.asarray(indices, dtype=int)].reshape(-1, self.dim))


@dataclass(frozen=True, eq=False)
class SimplicialFiltration:
    simplices: List[Simplex]
    values: np.ndarray
    max_dim: int

    @property
    def dims(self) -> np.ndarray:
        return np.array([len(s) - 1 for s in self.simplices], dtype=int)

    def __len__(self) -> int:
        return len(self.simplices)


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A Rips complex frozen at one scale; vertex k is point k of the cloud."""

    n_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    triangles: Tuple[Tuple[int, int, int], ...]
    scale: float
    edge_index: Dict[Tuple[int, int], int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.edge_index:
            object.__setattr__(self, "edge_index", {e: k for k, e in enumerate(self.edges)})

    def count(self, p: int) -> int:
        return (self.n_vertices, len(self.edges), len(self.triangles))[p] if p <= 2 else 0

    def boundary(self, p: int) -> Z2Matrix:
        """Boundary map C_p -> C_{p-1}."""
        if p == 1:
            return Z2Matrix(self.n_vertices, len(self.edges), self.edges)
        if p == 2:
            idx = self.edge_index
            columns = tuple(
                tuple(sorted((idx[(i, j)], idx[(i, k)], idx[(j, k)]))) for i, j, k in self.triangles
            )
            return Z2Matrix(len(self.edges), len(self.triangles), columns)
        raise ValueError(f"no boundary map for dimension {p}")


def _distances(cloud: PointCloud) -> np.ndarray:
    if len(cloud) < 2:
        return np.zeros((len(cloud), len(cloud)))
    return squareform(pdist(cloud.points))


def _cliques(dist: np.ndarray, scale: float, max_dim: int):
    """Edges and triangles with diameter <= scale, in lexicographic vertex order."""
    n = dist.shape[0]
    adjacent = np.triu(dist <= scale, k=1)
    ii, jj = np.nonzero(adjacent)
    edges = list(zip(ii.tolist(), jj.tolist()))
    triangles = []
    if max_dim >= 2 and edges:
        neighbours = adjacent | adjacent.T
        for i, j in edges:
            common = np.flatnonzero(neighbours[i] & neighbours[j])
            triangles.extend((i, j, k) for k in common[common > j].tolist())
    return edges, triangles


def _check_max_dim(max_dim: int):
    if max_dim not in (0, 1, 2):
        raise ValueError(f"max_dim must be 0, 1 or 2, got {max_dim}")


def rips_filtration(cloud: PointCloud, r_max: float, max_dim: int = 2) -> SimplicialFiltration:
    _check_max_dim(max_dim)
    if r_max <= 0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    dist = _distances(cloud)
    edges, triangles = _cliques(dist, r_max, max_dim)

    entries = [(0.0, 0, (v,)) for v in range(len(cloud))]
    entries += [(float(dist[i, j]), 1, (i, j)) for i, j in edges]
    entries += [
        (float(max(dist[i, j], dist[i, k], dist[j, k])), 2, (i, j, k)) for i, j, k in triangles
    ]
    entries.sort()
    return SimplicialFiltration(
        simplices=[e[2] for e in entries],
        values=np.array([e[0] for e in entries], dtype=float),
        max_dim=max_dim,
    )


def filtration_boundary(filt: SimplicialFiltration) -> Z2Matrix:
    position = {s: k for k, s in enumerate(filt.simplices)}
    columns = []
    for s in filt.simplices:
        if len(s) == 1:
            columns.append(())
            continue
        faces = [s[:m] + s[m + 1:] for m in range(len(s))]
        columns.append(tuple(sorted(position[f] for f in faces)))
    return Z2Matrix(len(filt.simplices), len(filt.simplices), tuple(columns))


def rips_persistence(filt: SimplicialFiltration) -> PersistenceDiagram:
    return diagram_from_boundary(filtration_boundary(filt), filt.dims, filt.values, SUBLEVEL)


def complex_at(cloud: PointCloud, scale: float, max_dim: int = 2) -> SimplicialComplex:
    _check_max_dim(max_dim)
    if scale < 0:
        raise ValueError(f"scale must be >= 0, got {scale}")
    edges, triangles = _cliques(_distances(cloud), scale, max_dim if max_dim >= 1 else 0)
    if max_dim == 0:
        edges = []
    return SimplicialComplex(len(cloud), tuple(edges), tuple(triangles), float(scale))


def betti_numbers(cx: SimplicialComplex) -> List[int]:
    """[beta0, beta1] of a fixed complex."""
    r1 = rank(cx.boundary(1)) if cx.edges else 0
    r2 = rank(cx.boundary(2)) if cx.triangles else 0
    return [cx.n_vertices - r1, len(cx.edges) - r1 - r2]
