"""Goal-oriented Dijkstra with pluggable potentials, and net routing.

A potential ``pi`` is feasible if ``pi(t) = 0`` on the targets and
``c(v, w) - pi(v) + pi(w) >= 0`` for every edge: then running Dijkstra on the
reduced costs finds the same cheapest paths while visiting fewer vertices.
Four flavors are offered, in increasing strength: ``zero``, ``l1`` (scaled
l1 distance with the cheapest per-direction costs), ``simple`` (exact distance
under per-layer minimum costs) and ``general`` (exact distance in the full
grid graph).
"""

from __future__ import annotations

import hashlib
import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .general import general_potential_for
from .model import (INF, Edge, GeneralCosts, Point3, Rect, SimpleCosts, TargetSet, as_targets,
                    edge_cost, refine_grid)
from .oracle import Subgraph
from .simple import SimpleOracle, l1_potential

FLAVORS = ("zero", "l1", "simple", "general")


class InfeasiblePotentialError(RuntimeError):
    """A reduced edge cost came out negative."""


@dataclass
class PotentialProvider:
    flavor: str
    fn: Callable[[Point3], object]
    prep_seconds: float = 0.0

    def __call__(self, v: Point3):
        return self.fn(v)


def _as_general(costs) -> GeneralCosts:
    return costs.to_general() if isinstance(costs, SimpleCosts) else costs


def make_potential(flavor: str, costs, targets, epsilon=Fraction(1, 2)) -> PotentialProvider:
    """Build the potential of the given flavor for a target set."""
    T = as_targets(targets)
    t0 = time.perf_counter()
    if flavor == "zero":
        fn = _zero
    elif flavor in ("l1", "simple"):
        m = costs if isinstance(costs, SimpleCosts) else costs.min_costs()
        if flavor == "l1":
            def fn(v, m=m):
                return l1_potential(m, v, T)
        else:
            fn = SimpleOracle(m, T).query
    elif flavor == "general":
        fn = general_potential_for(_as_general(costs), T, epsilon).query
    else:
        raise ValueError(f"unknown potential flavor {flavor!r}")
    return PotentialProvider(flavor, fn, time.perf_counter() - t0)


def _zero(v):
    return 0


@dataclass
class SearchStats:
    labeled: int = 0
    popped: int = 0
    popped_below: int = 0   # pops with key strictly below the final cost
    prep_us: float = 0.0
    search_us: float = 0.0

    def add(self, other: "SearchStats") -> None:
        self.labeled += other.labeled
        self.popped += other.popped
        self.popped_below += other.popped_below
        self.prep_us += other.prep_us
        self.search_us += other.search_us


@dataclass
class SearchResult:
    cost: object
    path: list | None
    stats: SearchStats


def edge_hash(v: Point3, w: Point3) -> int:
    """Deterministic pseudo-random 64-bit weight of an undirected edge."""
    a, b = (v, w) if v <= w else (w, v)
    return int.from_bytes(hashlib.blake2b(repr((a, b)).encode(), digest_size=8).digest(), "big")


def dijkstra_reduced(sub: Subgraph, costs, S: Iterable[Point3], T, pot=None,
                     check: bool = True, tiebreak: Callable | None = None) -> SearchResult:
    """Cheapest path from S to T inside ``sub`` using the reduced costs of ``pot``.

    Ties in the key are broken towards larger distance labels, then vertex order.
    With ``tiebreak`` every edge also carries a secondary weight and the path
    minimizing (cost, secondary sum) lexicographically is returned, which makes
    the chosen path independent of the potential with overwhelming probability.
    Raises InfeasiblePotentialError when a reduced cost is negative.
    """
    if isinstance(T, (set, frozenset)):
        is_target = T.__contains__
    else:
        is_target = as_targets(T).contains
    pot = pot or _zero
    cache: dict = {}

    def pi(v):
        val = cache.get(v)
        if val is None:
            val = pot(v)
            cache[v] = val
        return val

    t0 = time.perf_counter()
    stats = SearchStats()
    dist: dict = {}
    pred: dict = {}
    heap = []
    for s in sorted(set(S)):
        if s not in sub.vertices:
            continue
        ps = pi(s)
        if ps == INF:
            continue
        dist[s] = (0, 0)
        pred[s] = None
        heap.append((ps, 0, 0, s))
    heapq.heapify(heap)
    done = set()
    keys = []
    found = None
    while heap:
        k, h, negd, v = heapq.heappop(heap)
        d = -negd
        if v in done or (d, h) > dist[v]:
            continue
        done.add(v)
        keys.append(k)
        if is_target(v):
            found = (d, v)
            break
        pv = pi(v)
        for w in sub.neighbors(v):
            c = edge_cost(costs, v, w)
            if c == INF:
                continue
            pw = pi(w)
            if pw == INF:
                continue
            if check and c - pv + pw < 0:
                raise InfeasiblePotentialError(
                    f"negative reduced cost on {v} -> {w}: {c} - {pv} + {pw}")
            nd = d + c
            nh = h + tiebreak(v, w) if tiebreak else 0
            if (nd, nh) < dist.get(w, (INF, 0)):
                dist[w] = (nd, nh)
                pred[w] = v
                heapq.heappush(heap, (nd + pw, nh, -nd, w))
    stats.search_us = (time.perf_counter() - t0) * 1e6
    stats.labeled = len(dist)
    stats.popped = len(keys)
    if found is None:
        stats.popped_below = stats.popped
        return SearchResult(INF, None, stats)
    cost, v = found
    stats.popped_below = sum(1 for k in keys if k < cost)
    path = [v]
    while pred[path[-1]] is not None:
        path.append(pred[path[-1]])
    return SearchResult(cost, path[::-1], stats)


def check_potential(costs, targets, pot, points: Iterable[Point3], l: int) -> list[str]:
    """Feasibility violations of ``pot`` on all oriented finite edges among ``points``."""
    T = as_targets(targets)
    pts = set(points)
    bad = []
    vals = {p: pot(p) for p in pts}
    for p in pts:
        if T.contains(p) and vals[p] != 0:
            bad.append(f"pi{tuple(p)} = {vals[p]} on a target")
        for w in (Point3(p.x + 1, p.y, p.z), Point3(p.x, p.y + 1, p.z), Point3(p.x, p.y, p.z + 1)):
            if w not in pts:
                continue
            c = edge_cost(costs, p, w)
            if c == INF:
                continue
            for a, b in ((p, w), (w, p)):
                if vals[b] == INF:
                    continue
                if vals[a] == INF or c - vals[a] + vals[b] < 0:
                    bad.append(f"reduced cost of {tuple(a)} -> {tuple(b)} is negative")
    return bad


# --- reservations ----------------------------------------------------------

@dataclass(frozen=True)
class Reservation:
    net: str
    rect: Rect


def reserved_edges(rect: Rect) -> Iterable[Edge]:
    """In-layer edges with both endpoints in the rectangle."""
    z = rect.z
    for x in range(rect.x_lo, rect.x_hi + 1):
        for y in range(rect.y_lo, rect.y_hi + 1):
            p = Point3(x, y, z)
            if x < rect.x_hi:
                yield Edge(p, Point3(x + 1, y, z))
            if y < rect.y_hi:
                yield Edge(p, Point3(x, y + 1, z))


def _share_edge(a: Rect, b: Rect) -> bool:
    if a.z != b.z:
        return False
    x0, x1 = max(a.x_lo, b.x_lo), min(a.x_hi, b.x_hi)
    y0, y1 = max(a.y_lo, b.y_lo), min(a.y_hi, b.y_hi)
    return x0 <= x1 and y0 <= y1 and (x1 > x0 or y1 > y0)


def check_reservations(res: Sequence[Reservation]) -> None:
    for k, a in enumerate(res):
        for b in res[k + 1:]:
            if a.net != b.net and _share_edge(a.rect, b.rect):
                raise ValueError(f"reservations of {a.net} and {b.net} overlap")


def apply_reservations(costs, res: Sequence[Reservation] | Reservation, net: str | None = None,
                       delta=Fraction(3, 4)) -> tuple[GeneralCosts, int]:
    """Discount the wire costs inside the net's reserved rectangles by ``delta``.

    All costs are scaled by the denominator of ``delta`` so they stay integral;
    returns the new costs and that scale factor.
    """
    if isinstance(res, Reservation):
        res = [res]
    res = list(res)
    check_reservations(res)
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if net is None:
        nets = {r.net for r in res}
        if len(nets) > 1:
            raise ValueError("several nets reserved; say which one is routed")
        net = nets.pop() if nets else None
    mine = [r.rect for r in res if r.net == net]
    num, den = delta.numerator, delta.denominator
    refined = refine_grid(_as_general(costs), mine, duplicate_degenerate=True)
    g = refined.grid

    def inside(i, j, z):
        x0, x1 = g.col_bounds(i)
        y0, y1 = g.row_bounds(j)
        return any(r.z == z + 1 and r.x_lo <= x0 and x1 <= r.x_hi and r.y_lo <= y0 and y1 <= r.y_hi
                   for r in mine)

    def scale(c, f):
        return c if c == INF else c * f

    def wires(arr):
        return [[[scale(c, num if inside(i, j, z) else den) for z, c in enumerate(cell)]
                 for j, cell in enumerate(col)] for i, col in enumerate(arr)]

    via = [[[scale(c, den) for c in cell] for cell in col] for col in refined.via]
    return GeneralCosts(g, wires(refined.horiz), wires(refined.vert), via), den


# --- nets ------------------------------------------------------------------

@dataclass
class RouteResult:
    cost: object = 0
    paths: list = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    failed: bool = False


def route_net(sub: Subgraph, costs, pins: Sequence[Sequence[Rect]],
              factory: Callable[[TargetSet], PotentialProvider] | None = None,
              check: bool = True) -> RouteResult:
    """Connect the pins one at a time, always from the tree grown so far.

    Each step searches from the current tree to the union of the remaining
    pins, with a potential built by ``factory`` for exactly those targets.
    """
    if factory is None:
        def factory(T):
            return PotentialProvider("zero", _zero)
    out = RouteResult()
    if not pins:
        return out
    tree = {p for r in pins[0] for p in r.points() if p in sub.vertices}
    remaining = [list(p) for p in pins[1:]]
    while remaining:
        T = TargetSet(r for pin in remaining for r in pin)
        pot = factory(T)
        res = dijkstra_reduced(sub, costs, tree, T, pot, check=check, tiebreak=edge_hash)
        res.stats.prep_us += pot.prep_seconds * 1e6
        out.stats.add(res.stats)
        if res.path is None:
            out.failed = True
            out.cost = INF
            return out
        end = res.path[-1]
        k = next(n for n, pin in enumerate(remaining) if any(r.contains(end) for r in pin))
        tree.update(res.path)
        tree.update(p for r in remaining[k] for p in r.points() if p in sub.vertices)
        del remaining[k]
        out.paths.append(res.path)
        out.cost += res.cost
    return out


def path_cost(costs, path: Sequence[Point3]):
    return sum(edge_cost(costs, a, b) for a, b in zip(path, path[1:]))
