"""Reference shortest paths on an explicit finite part of the grid graph.

``oracle_distances`` runs a multi-source Dijkstra (scipy's csgraph) on the grid
induced by a bounding box that covers the query window, every tile coordinate
and every target. Outside that box the costs no longer change in the outward
direction, so clamping any path into the box never makes it more expensive and
the distances inside the window are exact.

``oracle_subgraph_shortest_path`` is a plain heap Dijkstra on an arbitrary
vertex-induced subgraph, used as ground truth for the router.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .model import INF, Edge, GeneralCosts, Point3, Rect, SimpleCosts, as_targets, edge_cost


@dataclass(frozen=True)
class Window:
    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int
    l: int

    def contains(self, p: Point3) -> bool:
        return (self.x_lo <= p.x <= self.x_hi and self.y_lo <= p.y <= self.y_hi
                and 1 <= p.z <= self.l)

    def points(self) -> Iterator[Point3]:
        for z in range(1, self.l + 1):
            for y in range(self.y_lo, self.y_hi + 1):
                for x in range(self.x_lo, self.x_hi + 1):
                    yield Point3(x, y, z)

    def __len__(self):
        return (self.x_hi - self.x_lo + 1) * (self.y_hi - self.y_lo + 1) * self.l


_STEPS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


@dataclass(frozen=True)
class Subgraph:
    """Vertex-induced subgraph, minus an optional set of removed edges."""

    vertices: frozenset
    removed: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_window(cls, window: Window, blocked: Iterable[Rect] = (),
                    removed: Iterable[Edge] = ()) -> "Subgraph":
        blocked = list(blocked)
        verts = frozenset(p for p in window.points() if not any(b.contains(p) for b in blocked))
        return cls(verts, frozenset(e.canonical() for e in removed))

    def __contains__(self, v) -> bool:
        return v in self.vertices

    def neighbors(self, v: Point3) -> Iterator[Point3]:
        x, y, z = v
        for dx, dy, dz in _STEPS:
            w = Point3(x + dx, y + dy, z + dz)
            if w in self.vertices:
                if self.removed and Edge(v, w).canonical() in self.removed:
                    continue
                yield w

    def edges(self) -> Iterator[Edge]:
        for v in self.vertices:
            for w in self.neighbors(v):
                if v < w:
                    yield Edge(v, w)


class DistanceMap:
    """Distances on a box of vertices; missing or unreachable vertices read as INF."""

    def __init__(self, x0: int, y0: int, arr: np.ndarray, window: Window):
        self.x0, self.y0 = x0, y0
        self.array = arr  # [z, y, x], float
        self.window = window

    def __getitem__(self, p: Point3):
        z, y, x = p.z - 1, p.y - self.y0, p.x - self.x0
        nz, ny, nx = self.array.shape
        if not (0 <= z < nz and 0 <= y < ny and 0 <= x < nx):
            raise KeyError(p)
        d = self.array[z, y, x]
        return INF if np.isinf(d) else int(d)

    def items(self):
        for p in self.window.points():
            yield p, self[p]


def _as_array(arr, depth: int) -> np.ndarray:
    a = np.array(arr, dtype=float)
    return a.reshape(len(arr), len(arr[0]), depth)


def _edge_arrays(costs: GeneralCosts, X: np.ndarray, Y: np.ndarray):
    """Per-edge costs on the box X x Y, shapes [x, y, z]."""
    g = costs.grid
    l = g.l
    xs, ys = np.array(g.xs, dtype=float), np.array(g.ys, dtype=float)
    Hc, Vc = _as_array(costs.horiz, l), _as_array(costs.vert, l)
    Zc = _as_array(costs.via, l - 1) if l > 1 else None
    col_step = np.searchsorted(xs, X[:-1], side="right")
    row_step = np.searchsorted(ys, Y[:-1], side="right")
    rlo, rhi = np.searchsorted(ys, Y, "left"), np.searchsorted(ys, Y, "right")
    clo, chi = np.searchsorted(xs, X, "left"), np.searchsorted(xs, X, "right")

    H = np.empty((len(X) - 1, len(Y), l))
    for k in range(len(Y)):
        H[:, k, :] = Hc[:, rlo[k]:rhi[k] + 1, :].min(axis=1)[col_step]
    V = np.empty((len(X), len(Y) - 1, l))
    for k in range(len(X)):
        V[k, :, :] = Vc[clo[k]:chi[k] + 1, :, :].min(axis=0)[row_step]
    Z = None
    if Zc is not None:
        B = np.stack([Zc[:, rlo[k]:rhi[k] + 1, :].min(axis=1) for k in range(len(Y))])
        Z = np.empty((len(X), len(Y), l - 1))
        for k in range(len(X)):
            Z[k] = B[:, clo[k]:chi[k] + 1, :].min(axis=1)
    return H, V, Z


def oracle_distances(costs, window: Window, targets) -> DistanceMap:
    """Exact dist(v, T) for every vertex v of the window."""
    if isinstance(costs, SimpleCosts):
        costs = costs.to_general()
    T = as_targets(targets)
    if not T.rects:
        raise ValueError("empty target set")
    g = costs.grid
    l = g.l
    xs_all = [window.x_lo, window.x_hi, *g.xs] + [c for r in T for c in (r.x_lo, r.x_hi)]
    ys_all = [window.y_lo, window.y_hi, *g.ys] + [c for r in T for c in (r.y_lo, r.y_hi)]
    x0, x1 = min(xs_all) - 1, max(xs_all) + 1
    y0, y1 = min(ys_all) - 1, max(ys_all) + 1
    X, Y = np.arange(x0, x1 + 1), np.arange(y0, y1 + 1)
    nx, ny = len(X), len(Y)
    H, V, Z = _edge_arrays(costs, X, Y)

    idx = np.arange(l * ny * nx).reshape(l, ny, nx)  # [z, y, x]
    rows, cols, vals = [], [], []

    def add(a, b, c):
        keep = np.isfinite(c)
        rows.extend((a[keep], b[keep]))
        cols.extend((b[keep], a[keep]))
        vals.extend((c[keep], c[keep]))

    # H is [x, y, z]; idx is [z, y, x]
    add(idx[:, :, :-1], idx[:, :, 1:], H.transpose(2, 1, 0))
    add(idx[:, :-1, :], idx[:, 1:, :], V.transpose(2, 1, 0))
    if Z is not None:
        add(idx[:-1, :, :], idx[1:, :, :], Z.transpose(2, 1, 0))
    n = l * ny * nx
    graph = csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                       shape=(n, n))

    sources = set()
    for r in T:
        if not 1 <= r.z <= l:
            continue
        sub = idx[r.z - 1, r.y_lo - y0:r.y_hi - y0 + 1, r.x_lo - x0:r.x_hi - x0 + 1]
        sources.update(sub.ravel().tolist())
    if not sources:
        arr = np.full((l, ny, nx), np.inf)
    else:
        dist = dijkstra(graph, directed=False, indices=sorted(sources), min_only=True)
        arr = dist.reshape(l, ny, nx)
    return DistanceMap(x0, y0, arr, window)


def oracle_subgraph_shortest_path(sub: Subgraph, costs, S: Iterable[Point3], T) -> tuple:
    """Cheapest S-T path inside ``sub``; returns (cost, vertex list) or (INF, None).

    Ties are broken by lexicographic vertex order, so the result is deterministic.
    """
    if isinstance(T, (set, frozenset)):
        is_target = T.__contains__
    else:
        is_target = as_targets(T).contains
    dist: dict = {}
    pred: dict = {}
    heap = []
    for s in sorted(set(S)):
        if s in sub.vertices:
            dist[s] = 0
            pred[s] = None
            heap.append((0, s))
    heapq.heapify(heap)
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if is_target(v):
            path = [v]
            while pred[path[-1]] is not None:
                path.append(pred[path[-1]])
            return d, path[::-1]
        for w in sub.neighbors(v):
            if w in done:
                continue
            c = edge_cost(costs, v, w)
            if c == INF:
                continue
            nd = d + c
            if nd < dist.get(w, INF):
                dist[w] = nd
                pred[w] = v
                heapq.heappush(heap, (nd, w))
    return INF, None


__all__ = ["Window", "Subgraph", "DistanceMap", "oracle_distances",
           "oracle_subgraph_shortest_path"]
