"""State and action spaces with their distance metrics.

Points are plain Python values: a grid state is an ``(row, col)`` tuple of
ints, a continuous state or action is a tuple of floats, a discrete action
is a non-negative int. Space objects validate points and own the distance
metric used by the fuzzy compliance machinery:

* grid states use Manhattan distance on cells;
* continuous states use Euclidean distance on coordinates normalized to
  [0, 1] per dimension, so no dimension dominates by sheer scale;
* discrete actions use the exact-match metric (0 when equal, inf otherwise);
* continuous actions use raw Euclidean distance, paired downstream with a
  membership shape scaled by the space diameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ActionKindMismatchError

GridCell = tuple[int, int]
Coords = tuple[float, ...]


@dataclass(frozen=True)
class GridSpace:
    """Discrete rectangular grid of cells addressed as (row, col)."""

    rows: int
    cols: int

    def contains(self, point) -> bool:
        if not (isinstance(point, tuple) and len(point) == 2):
            return False
        r, c = point
        return (
            isinstance(r, int)
            and isinstance(c, int)
            and 0 <= r < self.rows
            and 0 <= c < self.cols
        )

    def distance(self, a: GridCell, b: GridCell) -> float:
        return float(abs(a[0] - b[0]) + abs(a[1] - b[1]))

    def all_cells(self) -> list[GridCell]:
        return [(r, c) for r in range(self.rows) for c in range(self.cols)]


@dataclass(frozen=True)
class BoxSpace:
    """Axis-aligned box of real vectors with per-dimension bounds."""

    lows: Coords
    highs: Coords

    def __post_init__(self):
        if len(self.lows) != len(self.highs) or not self.lows:
            raise ValueError("bounds must be non-empty and of equal length")
        for lo, hi in zip(self.lows, self.highs):
            if not lo < hi:
                raise ValueError(f"bounds must satisfy low < high, got [{lo}, {hi}]")

    @property
    def dim(self) -> int:
        return len(self.lows)

    def contains(self, point) -> bool:
        if not (isinstance(point, tuple) and len(point) == self.dim):
            return False
        return all(
            isinstance(x, (int, float)) and lo <= x <= hi
            for x, lo, hi in zip(point, self.lows, self.highs)
        )

    def distance(self, a: Coords, b: Coords) -> float:
        """Euclidean distance after scaling each dimension to [0, 1]."""
        total = 0.0
        for x, y, lo, hi in zip(a, b, self.lows, self.highs):
            d = (x - y) / (hi - lo)
            total += d * d
        return math.sqrt(total)

    def raw_distance(self, a: Coords, b: Coords) -> float:
        """Plain Euclidean distance in original units."""
        total = 0.0
        for x, y in zip(a, b):
            d = x - y
            total += d * d
        return math.sqrt(total)

    @property
    def diameter(self) -> float:
        """Euclidean length of the box diagonal in original units."""
        total = 0.0
        for lo, hi in zip(self.lows, self.highs):
            d = hi - lo
            total += d * d
        return math.sqrt(total)


@dataclass(frozen=True)
class DiscreteSpace:
    """Finite action set {0, ..., n-1}."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("discrete space needs at least one action")

    def contains(self, point) -> bool:
        return isinstance(point, int) and not isinstance(point, bool) and 0 <= point < self.n

    def distance(self, a: int, b: int) -> float:
        """Exact-match metric: 0 for equal ids, inf otherwise."""
        self._check_kind(a)
        self._check_kind(b)
        return 0.0 if a == b else math.inf

    def _check_kind(self, point):
        if not isinstance(point, int) or isinstance(point, bool):
            raise ActionKindMismatchError(
                f"expected a discrete action id, got {type(point).__name__}"
            )


def continuous_action_distance(a, b) -> float:
    """Euclidean distance between continuous action vectors.

    Raises ActionKindMismatchError when either operand is not a float
    vector or the arities differ.
    """
    for point in (a, b):
        if not isinstance(point, tuple) or not point:
            raise ActionKindMismatchError(
                f"expected a continuous action tuple, got {type(point).__name__}"
            )
    if len(a) != len(b):
        raise ActionKindMismatchError(
            f"action arity mismatch: {len(a)} vs {len(b)}"
        )
    total = 0.0
    for x, y in zip(a, b):
        d = x - y
        total += d * d
    return math.sqrt(total)
