"""
Linear algebra over Z2 for chain complexes.

Matrices are stored column-wise; each column is a chain, kept as a sorted
tuple of the row indices carrying a 1. Column addition is the symmetric
difference of the two index sets.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DimensionMismatchError

Column = Tuple[int, ...]


@dataclass(frozen=True)
class Z2Matrix:
    rows: int
    cols: int
    columns: Tuple[Column, ...]

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Iterable[int]], check: bool = True) -> "Z2Matrix":
        cols = tuple(tuple(c) for c in columns)
        matrix = cls(rows, len(cols), cols)
        if check:
            matrix.validate()
        return matrix

    @classmethod
    def identity_columns(cls, rows: int, indices: Iterable[int]) -> "Z2Matrix":
        """One unit column per index (chains made of a single cell)."""
        return cls.from_columns(rows, ((int(i),) for i in indices))

    def validate(self):
        if len(self.columns) != self.cols:
            raise ValueError(f"expected {self.cols} columns, got {len(self.columns)}")
        for j, col in enumerate(self.columns):
            for a, b in zip(col, col[1:]):
                if a >= b:
                    raise ValueError(f"column {j} is not strictly increasing: {col}")
            if col and (col[0] < 0 or col[-1] >= self.rows):
                raise ValueError(f"column {j} has a row index outside [0, {self.rows})")

    def hstack(self, other: "Z2Matrix") -> "Z2Matrix":
        if self.rows != other.rows:
            raise DimensionMismatchError(f"row counts differ: {self.rows} vs {other.rows}")
        return Z2Matrix(self.rows, self.cols + other.cols, self.columns + other.columns)

    def select(self, indices: Sequence[int]) -> "Z2Matrix":
        return Z2Matrix(self.rows, len(indices), tuple(self.columns[j] for j in indices))


@dataclass(frozen=True)
class ReducedMatrix:
    reduced: Z2Matrix
    low_map: Dict[int, int]
    pairing: Tuple[Tuple[int, int], ...]
    births: frozenset = field(default_factory=frozenset)

    def essential(self) -> List[int]:
        """Zero columns that never appear as a birth: the classes that never die."""
        return [j for j, col in enumerate(self.reduced.columns) if not col and j not in self.births]

    def rank(self) -> int:
        return len(self.low_map)


def add_columns(a: Column, b: Column) -> Column:
    """Sum of two chains over Z2."""
    if not a:
        return tuple(b)
    if not b:
        return tuple(a)
    return tuple(sorted(set(a).symmetric_difference(b)))


def _column_order(cols: int, dims: Optional[Sequence[int]]) -> List[List[int]]:
    if dims is None:
        return [list(range(cols))]
    groups: Dict[int, List[int]] = {}
    for j in range(cols):
        groups.setdefault(int(dims[j]), []).append(j)
    # top dimension first so its pivots can clear the columns below
    return [groups[d] for d in sorted(groups, reverse=True)]


def reduce(boundary: Z2Matrix, dims: Optional[Sequence[int]] = None) -> ReducedMatrix:
    """
    Standard left-to-right column reduction.

    With `dims` (the cell dimension of every column) the columns are processed
    top dimension first and every row that becomes a pivot is cleared: the
    column of that cell is known to reduce to zero and is skipped.
    """
    columns: List[Column] = list(boundary.columns)
    pivot_of_row: Dict[int, int] = {}
    cleared = set()

    for group in _column_order(boundary.cols, dims):
        for j in group:
            if j in cleared:
                columns[j] = ()
                continue
            col = columns[j]
            while col:
                k = pivot_of_row.get(col[-1])
                if k is None:
                    break
                col = add_columns(col, columns[k])
            columns[j] = col
            if col:
                pivot_of_row[col[-1]] = j
                if dims is not None:
                    cleared.add(col[-1])

    low_map = {j: low for low, j in pivot_of_row.items()}
    pairing = tuple(sorted(((low, j) for j, low in low_map.items()), key=lambda p: p[1]))
    return ReducedMatrix(
        reduced=Z2Matrix(boundary.rows, boundary.cols, tuple(columns)),
        low_map=dict(sorted(low_map.items())),
        pairing=pairing,
        births=frozenset(pivot_of_row),
    )


def rank(m: Z2Matrix) -> int:
    """Rank over Z2 (column echelon form via reduction)."""
    return reduce(m).rank()


def cycle_basis(boundary: Z2Matrix) -> Z2Matrix:
    """
    Basis of the kernel of `boundary`, one chain per column. Rows of the
    result index the columns of `boundary`.
    """
    columns: List[Column] = list(boundary.columns)
    combos: List[Column] = [(j,) for j in range(boundary.cols)]
    pivot_of_row: Dict[int, int] = {}
    basis: List[Column] = []

    for j in range(boundary.cols):
        col, combo = columns[j], combos[j]
        while col:
            k = pivot_of_row.get(col[-1])
            if k is None:
                break
            col = add_columns(col, columns[k])
            combo = add_columns(combo, combos[k])
        columns[j], combos[j] = col, combo
        if col:
            pivot_of_row[col[-1]] = j
        else:
            basis.append(combo)

    return Z2Matrix(boundary.cols, len(basis), tuple(basis))


def image_rank(cycles_a: Z2Matrix, boundaries_b: Z2Matrix) -> int:
    """
    Rank of the map H_p(A) -> H_p(B) induced by inclusion, given cycles of A
    and boundaries of B written in B's cell indexing:
    rank([cycles_a | boundaries_b]) - rank(boundaries_b).
    """
    if cycles_a.rows != boundaries_b.rows:
        raise DimensionMismatchError(
            f"cycles live in a {cycles_a.rows}-dim chain space, boundaries in {boundaries_b.rows}"
        )
    if cycles_a.cols == 0:
        return 0
    # boundaries first: a cycle column survives iff it is independent of them
    stacked = reduce(boundaries_b.hstack(cycles_a))
    first_cycle = boundaries_b.cols
    return sum(1 for j in stacked.low_map if j >= first_cycle)
