"""Layered grid graph with tile-based edge costs.

The routing space is the 3-D grid ``Z x Z x {1..l}``. Edge costs are given
per tile: a grid ``xs`` / ``ys`` of sorted coordinates cuts the plane into
closed rectangles ("tiles"), and every tile carries one horizontal, one
vertical and one via cost per layer. An edge lying on the boundary of several
tiles costs the minimum over those tiles.

Costs are non-negative Python ints, or ``INF`` (``math.inf``) for unusable
edges. Arithmetic on ints never overflows, so distances stay exact.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

INF = math.inf


def is_inf(c) -> bool:
    return c == INF


def mul(c, d: int):
    """Cost times a non-negative distance. A zero distance costs nothing, even at INF."""
    if d == 0:
        return 0
    return c * d


class Point3(NamedTuple):
    x: int
    y: int
    z: int


class Edge(NamedTuple):
    u: Point3
    v: Point3

    @property
    def kind(self) -> str:
        if self.u.z != self.v.z:
            return "via"
        return "horiz" if self.u.y == self.v.y else "vert"

    def canonical(self) -> "Edge":
        return self if self.u <= self.v else Edge(self.v, self.u)


def is_unit_edge(u: Point3, v: Point3) -> bool:
    return abs(u.x - v.x) + abs(u.y - v.y) + abs(u.z - v.z) == 1


@dataclass(frozen=True)
class Rect:
    """Closed axis-parallel rectangle on a single layer."""

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int
    z: int

    def __post_init__(self):
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError(f"empty rectangle {self}")

    def contains(self, p: Point3) -> bool:
        return (p.z == self.z and self.x_lo <= p.x <= self.x_hi
                and self.y_lo <= p.y <= self.y_hi)

    def points(self) -> Iterator[Point3]:
        for x in range(self.x_lo, self.x_hi + 1):
            for y in range(self.y_lo, self.y_hi + 1):
                yield Point3(x, y, self.z)

    def gap(self, x: int, y: int) -> tuple[int, int]:
        """Axis distances from (x, y) to the rectangle."""
        dx = max(self.x_lo - x, 0, x - self.x_hi)
        dy = max(self.y_lo - y, 0, y - self.y_hi)
        return dx, dy

    @classmethod
    def point(cls, p: Point3) -> "Rect":
        return cls(p.x, p.x, p.y, p.y, p.z)


@dataclass(frozen=True)
class TargetSet:
    rects: tuple[Rect, ...]

    def __init__(self, rects: Iterable[Rect]):
        object.__setattr__(self, "rects", tuple(rects))

    def contains(self, p: Point3) -> bool:
        return any(r.contains(p) for r in self.rects)

    def __iter__(self):
        return iter(self.rects)

    def __len__(self):
        return len(self.rects)


def as_targets(targets) -> TargetSet:
    if isinstance(targets, TargetSet):
        return targets
    return TargetSet(Rect.point(t) if isinstance(t, Point3) else t for t in targets)


@dataclass(frozen=True)
class SimpleCosts:
    """One horizontal and one vertical cost per layer, one cost per via layer pair."""

    horiz: tuple
    vert: tuple
    via: tuple

    def __init__(self, horiz: Sequence, vert: Sequence, via: Sequence):
        object.__setattr__(self, "horiz", tuple(horiz))
        object.__setattr__(self, "vert", tuple(vert))
        object.__setattr__(self, "via", tuple(via))
        l = len(self.horiz)
        if l < 1 or len(self.vert) != l or len(self.via) != l - 1:
            raise ValueError("simple costs need l horizontal, l vertical and l-1 via entries")
        for c in self.horiz + self.vert + self.via:
            if not (isinstance(c, int) and c > 0):
                raise ValueError(f"simple costs must be positive ints, got {c!r}")

    @property
    def l(self) -> int:
        return len(self.horiz)

    def cum_via(self) -> list[int]:
        """Prefix sums so that via(z1 -> z2) = |cum[z2] - cum[z1]| (0-based layers)."""
        out = [0]
        for c in self.via:
            out.append(out[-1] + c)
        return out

    def to_general(self) -> "GeneralCosts":
        grid = TileGrid((), (), self.l)
        return GeneralCosts(grid, [[list(self.horiz)]], [[list(self.vert)]], [[list(self.via)]])


@dataclass(frozen=True)
class TileGrid:
    """Sorted tile coordinates. Tile column ``i`` spans ``[xi^i, xi^{i+1}]`` with
    ``xi^0 = -inf`` and ``xi^{p+1} = +inf`` (``xi^i = xs[i-1]``)."""

    xs: tuple
    ys: tuple
    l: int

    def __init__(self, xs: Sequence[int], ys: Sequence[int], l: int):
        object.__setattr__(self, "xs", tuple(xs))
        object.__setattr__(self, "ys", tuple(ys))
        object.__setattr__(self, "l", l)
        if list(self.xs) != sorted(self.xs) or list(self.ys) != sorted(self.ys):
            raise ValueError("grid coordinates must be sorted")
        if l < 1:
            raise ValueError("need at least one layer")

    @property
    def p(self) -> int:
        return len(self.xs)

    @property
    def q(self) -> int:
        return len(self.ys)

    def xi(self, i: int):
        """Extended x coordinate, ``xi(0) = -inf`` and ``xi(p+1) = +inf``."""
        if i <= 0:
            return -INF
        if i > self.p:
            return INF
        return self.xs[i - 1]

    def upsilon(self, j: int):
        if j <= 0:
            return -INF
        if j > self.q:
            return INF
        return self.ys[j - 1]

    def col_bounds(self, i: int):
        return self.xi(i), self.xi(i + 1)

    def row_bounds(self, j: int):
        return self.upsilon(j), self.upsilon(j + 1)

    # columns/rows whose closed span contains the coordinate
    def cols_containing(self, x: int) -> range:
        return range(bisect_left(self.xs, x), bisect_right(self.xs, x) + 1)

    def rows_containing(self, y: int) -> range:
        return range(bisect_left(self.ys, y), bisect_right(self.ys, y) + 1)

    # the unique column containing the unit segment [x, x+1]
    def col_of_step(self, x: int) -> int:
        return bisect_right(self.xs, x)

    def row_of_step(self, y: int) -> int:
        return bisect_right(self.ys, y)

    def tile_of(self, x: int, y: int) -> tuple[int, int]:
        """A tile of positive extent containing (x, y)."""
        i = bisect_right(self.xs, x)
        j = bisect_right(self.ys, y)
        if i == self.p + 1:
            i = self.p
        if j == self.q + 1:
            j = self.q
        return i, j


@dataclass(frozen=True)
class GeneralCosts:
    """Per-tile costs, indexed ``[i][j][z]`` with 0-based layer ``z``.

    ``via[i][j][z]`` is the cost of the via between layers ``z`` and ``z+1``.
    """

    grid: TileGrid
    horiz: list
    vert: list
    via: list

    def __post_init__(self):
        g = self.grid
        for name, arr, depth in (("horiz", self.horiz, g.l), ("vert", self.vert, g.l),
                                 ("via", self.via, g.l - 1)):
            if len(arr) != g.p + 1 or any(len(col) != g.q + 1 for col in arr):
                raise ValueError(f"{name} must be a ({g.p + 1} x {g.q + 1}) tile array")
            for col in arr:
                for cell in col:
                    if len(cell) != depth:
                        raise ValueError(f"{name} needs {depth} entries per tile")
                    for c in cell:
                        if not (c == INF or (isinstance(c, int) and c >= 0)):
                            raise ValueError(f"{name} costs must be non-negative ints or INF")

    @property
    def l(self) -> int:
        return self.grid.l

    def horiz_cost(self, x: int, y: int, z: int):
        """Cost of (x, y, z) -- (x+1, y, z), 0-based z."""
        i = self.grid.col_of_step(x)
        return min(self.horiz[i][j][z] for j in self.grid.rows_containing(y))

    def vert_cost(self, x: int, y: int, z: int):
        """Cost of (x, y, z) -- (x, y+1, z), 0-based z."""
        j = self.grid.row_of_step(y)
        return min(self.vert[i][j][z] for i in self.grid.cols_containing(x))

    def via_cost(self, x: int, y: int, z: int):
        """Cost of (x, y, z) -- (x, y, z+1), 0-based z."""
        return min(self.via[i][j][z] for i in self.grid.cols_containing(x)
                   for j in self.grid.rows_containing(y))

    def distinct_wire_costs(self) -> int:
        vals = set()
        for arr in (self.horiz, self.vert):
            for col in arr:
                for cell in col:
                    vals.update(cell)
        return len(vals)

    def min_costs(self) -> SimpleCosts:
        """Per-layer, per-direction minima over finite tiles (a pointwise lower bound)."""
        def layer_min(arr, z, fallback):
            vals = [cell[z] for col in arr for cell in col if cell[z] != INF]
            return max(1, min(vals)) if vals else fallback

        def overall(arr):
            vals = [c for col in arr for cell in col for c in cell if c != INF]
            return max(1, min(vals)) if vals else 1

        fh, fv, fz = overall(self.horiz), overall(self.vert), overall(self.via)
        l = self.l
        return SimpleCosts([layer_min(self.horiz, z, fh) for z in range(l)],
                           [layer_min(self.vert, z, fv) for z in range(l)],
                           [layer_min(self.via, z, fz) for z in range(l - 1)])


def edge_cost(costs, u: Point3, v: Point3):
    """Cost of the unit edge between u and v (1-based layers in points)."""
    if isinstance(costs, SimpleCosts):
        if u.z != v.z:
            return costs.via[min(u.z, v.z) - 1]
        return costs.horiz[u.z - 1] if u.y == v.y else costs.vert[u.z - 1]
    if not is_unit_edge(u, v):
        raise ValueError(f"{u} and {v} are not adjacent")
    if u.z != v.z:
        return costs.via_cost(u.x, u.y, min(u.z, v.z) - 1)
    if u.y == v.y:
        return costs.horiz_cost(min(u.x, v.x), u.y, u.z - 1)
    return costs.vert_cost(u.x, min(u.y, v.y), u.z - 1)


def is_consistent(grid: TileGrid, targets) -> bool:
    """True iff every target rectangle boundary lies on grid coordinates."""
    xs, ys = set(grid.xs), set(grid.ys)
    return all(r.x_lo in xs and r.x_hi in xs and r.y_lo in ys and r.y_hi in ys
               for r in as_targets(targets))


def _merge_coords(old: Sequence[int], wanted: Iterable[int], duplicate: Iterable[int]) -> list[int]:
    out = list(old)
    have = set(old)
    for c in set(wanted) - have:
        out.append(c)
        have.add(c)
    # a degenerate rectangle side gets a zero-width tile of its own
    for c in set(duplicate):
        while out.count(c) < 2:
            out.append(c)
    return sorted(out)


def _old_spans(old: Sequence[int], new: Sequence[int]) -> list[range]:
    """For every new tile column, the old columns that contain it."""
    ext = [-INF] + list(new) + [INF]
    spans = []
    for i in range(len(new) + 1):
        lo, hi = ext[i], ext[i + 1]
        if lo == hi:
            first_old = bisect_left(old, lo)
            k = (i - 1) - bisect_left(new, lo)
            if k < bisect_right(old, lo) - first_old - 1:
                # an existing zero-width tile keeps its own costs
                spans.append(range(first_old + 1 + k, first_old + 2 + k))
            else:
                spans.append(range(first_old, bisect_right(old, lo) + 1))
        elif lo == -INF:
            spans.append(range(0, 1))
        else:
            k = bisect_right(old, lo)
            spans.append(range(k, k + 1))
    return spans


def refine_grid(costs, targets, duplicate_degenerate: bool = False) -> GeneralCosts:
    """Add the missing target coordinates to the tile grid without changing any edge cost.

    With ``duplicate_degenerate`` a zero-width (or zero-height) rectangle side is
    doubled, so the rectangle becomes a union of tiles of its own.
    """
    if isinstance(costs, SimpleCosts):
        costs = costs.to_general()
    rects = list(as_targets(targets))
    g = costs.grid
    dup_x = [r.x_lo for r in rects if duplicate_degenerate and r.x_lo == r.x_hi]
    dup_y = [r.y_lo for r in rects if duplicate_degenerate and r.y_lo == r.y_hi]
    xs = _merge_coords(g.xs, [c for r in rects for c in (r.x_lo, r.x_hi)], dup_x)
    ys = _merge_coords(g.ys, [c for r in rects for c in (r.y_lo, r.y_hi)], dup_y)
    if xs == list(g.xs) and ys == list(g.ys):
        return costs
    cx, cy = _old_spans(g.xs, xs), _old_spans(g.ys, ys)

    def remap(arr, depth):
        out = []
        for ci in cx:
            col = []
            for rj in cy:
                cell = [min(arr[i][j][z] for i in ci for j in rj) for z in range(depth)]
                col.append(cell)
            out.append(col)
        return out

    return GeneralCosts(TileGrid(xs, ys, g.l), remap(costs.horiz, g.l),
                        remap(costs.vert, g.l), remap(costs.via, g.l - 1))


def uniform_costs(grid: TileGrid, horiz: Sequence, vert: Sequence, via: Sequence) -> GeneralCosts:
    """General costs with the same per-layer values on every tile."""
    p1, q1 = grid.p + 1, grid.q + 1
    return GeneralCosts(grid,
                        [[list(horiz) for _ in range(q1)] for _ in range(p1)],
                        [[list(vert) for _ in range(q1)] for _ in range(p1)],
                        [[list(via) for _ in range(q1)] for _ in range(p1)])
