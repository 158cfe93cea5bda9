"""Distances when every layer has one horizontal and one vertical cost.

With layer-uniform costs a cheapest path to a target rectangle needs at most
two wire segments (one per direction), so distances have closed forms:

* ``l1_potential``: scaled l1 distance with the cheapest wire costs, a lower bound;
* ``simple_distance_quadratic``: enumerate the wiring layers, O(t l^2);
* ``simple_distance_linear``: a downward/upward sweep over the layers, O(t l).

``SimpleOracle`` precomputes, for each tile of the target-induced grid and
each layer, a set of affine functions whose minimum is the distance, and
answers queries with an envelope index per tile and layer.
"""

from __future__ import annotations

import threading

import numpy as np

from .envelope import AffineFn2, envelope_build
from .model import INF, Point3, SimpleCosts, as_targets, refine_grid


def _check(costs, s: Point3):
    if not isinstance(costs, SimpleCosts):
        raise TypeError("simple-model distances need SimpleCosts")
    if not 1 <= s.z <= costs.l:
        raise ValueError(f"layer {s.z} out of range")


def l1_potential(costs: SimpleCosts, s: Point3, T) -> int:
    _check(costs, s)
    cum = costs.cum_via()
    h, v = min(costs.horiz), min(costs.vert)
    best = INF
    for r in as_targets(T):
        dx, dy = r.gap(s.x, s.y)
        best = min(best, dx * h + dy * v + abs(cum[r.z - 1] - cum[s.z - 1]))
    return best


def simple_distance_quadratic(costs: SimpleCosts, s: Point3, T) -> int:
    _check(costs, s)
    cum = costs.cum_via()
    l = costs.l
    zs = s.z - 1
    best = INF
    for r in as_targets(T):
        dx, dy = r.gap(s.x, s.y)
        zr = r.z - 1
        for zh in range(l):
            ch = dx * costs.horiz[zh]
            for zv in range(l):
                cv = dy * costs.vert[zv]
                mid = abs(cum[zh] - cum[zv])
                # horizontal wire next to the target, or next to s
                a = abs(cum[zr] - cum[zh]) + ch + mid + cv + abs(cum[zv] - cum[zs])
                b = abs(cum[zs] - cum[zh]) + ch + mid + cv + abs(cum[zv] - cum[zr])
                best = min(best, a, b)
    return best


def _sweep(cum, h, v, dx: int, dy: int, za: int, zb: int) -> int:
    """Cheapest za -> (dx along h) -> (dy along v) -> zb."""
    l = len(cum)
    # dbar[z]: reach layer z after the horizontal wire, using only vias from above
    dbar = [0] * l
    dbar[l - 1] = abs(cum[za] - cum[l - 1]) + dx * h[l - 1]
    for z in range(l - 2, -1, -1):
        dbar[z] = min(abs(cum[za] - cum[z]) + dx * h[z], dbar[z + 1] + cum[z + 1] - cum[z])
    d = dbar
    for z in range(1, l):
        d[z] = min(d[z], d[z - 1] + cum[z] - cum[z - 1])
    return min(d[z] + dy * v[z] + abs(cum[z] - cum[zb]) for z in range(l))


def simple_distance_linear(costs: SimpleCosts, s: Point3, T) -> int:
    _check(costs, s)
    cum = costs.cum_via()
    best = INF
    for r in as_targets(T):
        dx, dy = r.gap(s.x, s.y)
        zr, zs = r.z - 1, s.z - 1
        best = min(best,
                   _sweep(cum, costs.horiz, costs.vert, dx, dy, zr, zs),
                   _sweep(cum, costs.horiz, costs.vert, dx, dy, zs, zr))
    return best


_BIG = np.int64(2 ** 62)


class SimpleOracle:
    """Tile-wise affine function sets for distance queries in O(log) time.

    The per-tile constants are computed eagerly by dynamic programming over
    the tiles; the envelope index of a tile and layer is built on first use.
    """

    def __init__(self, costs: SimpleCosts, targets):
        if not isinstance(costs, SimpleCosts):
            raise TypeError("SimpleOracle needs SimpleCosts")
        self.costs = costs
        self.targets = as_targets(targets)
        if not self.targets.rects:
            raise ValueError("empty target set")
        for r in self.targets:
            if not 1 <= r.z <= costs.l:
                raise ValueError(f"target layer {r.z} out of range")
        self.grid = refine_grid(costs, self.targets).grid
        self._lock = threading.Lock()
        self._cache: dict = {}
        self._precompute()

    # membership of grid features in T, as lists of 0-based layers
    def _layers_point(self, x, y):
        return [r.z - 1 for r in self.targets if r.x_lo <= x <= r.x_hi and r.y_lo <= y <= r.y_hi]

    def _layers_hseg(self, x0, x1, y):
        if x0 == -INF or x1 == INF:
            return []
        return [r.z - 1 for r in self.targets
                if r.x_lo <= x0 and x1 <= r.x_hi and r.y_lo <= y <= r.y_hi]

    def _layers_vseg(self, x, y0, y1):
        if y0 == -INF or y1 == INF:
            return []
        return [r.z - 1 for r in self.targets
                if r.y_lo <= y0 and y1 <= r.y_hi and r.x_lo <= x <= r.x_hi]

    def _precompute(self):
        c = self.costs
        g = self.grid
        l, p, q = c.l, g.p, g.q
        cum = np.array(c.cum_via(), dtype=np.int64)
        h = np.array(c.horiz, dtype=np.int64)
        v = np.array(c.vert, dtype=np.int64)
        D = np.abs(cum[:, None] - cum[None, :])
        V3 = D[:, :, None] + D[None, :, :]                       # z, a, zt
        V4 = D[:, :, None, None] + D[None, :, :, None] + D[None, None, :, :]
        VC = np.minimum(V4, V4.transpose(0, 2, 1, 3))            # z, a, b, zt
        xi, up = g.xi, g.upsilon
        full2 = np.full((l, l), _BIG)
        full3 = np.full((l, l, l), _BIG)

        def axis_term(layers, coord, cost):
            if not layers:
                return None
            return coord * cost[None, :] + V3[:, :, layers].min(axis=2)

        def corner_term(layers, cy, cx, cost_y, cost_x):
            if not layers:
                return None
            base = cy * cost_y[None, :, None] + cx * cost_x[None, None, :]
            return base + VC[..., layers].min(axis=3)

        def fold(prev, term):
            return prev if term is None else np.minimum(prev, term)

        N, S, E, W = {}, {}, {}, {}
        for i in range(p + 1):
            N[i, q] = full2
            for j in range(q - 1, -1, -1):
                y = up(j + 1)
                N[i, j] = fold(N[i, j + 1], axis_term(self._layers_hseg(xi(i), xi(i + 1), y), y, v))
            S[i, 0] = full2
            for j in range(1, q + 1):
                y = up(j)
                S[i, j] = fold(S[i, j - 1], axis_term(self._layers_hseg(xi(i), xi(i + 1), y), -y, v))
        for j in range(q + 1):
            E[p, j] = full2
            for i in range(p - 1, -1, -1):
                x = xi(i + 1)
                E[i, j] = fold(E[i + 1, j], axis_term(self._layers_vseg(x, up(j), up(j + 1)), x, h))
            W[0, j] = full2
            for i in range(1, p + 1):
                x = xi(i)
                W[i, j] = fold(W[i - 1, j], axis_term(self._layers_vseg(x, up(j), up(j + 1)), -x, h))

        NW, NE, SW, SE = {}, {}, {}, {}
        for i in range(p + 1):
            for j in range(q, -1, -1):
                if i == 0 or j == q:
                    NW[i, j] = full3
                    continue
                x, y = xi(i), up(j + 1)
                t = corner_term(self._layers_point(x, y), y, -x, v, h)
                NW[i, j] = fold(np.minimum(NW[i, j + 1], NW[i - 1, j]), t)
        for i in range(p, -1, -1):
            for j in range(q, -1, -1):
                if i == p or j == q:
                    NE[i, j] = full3
                    continue
                x, y = xi(i + 1), up(j + 1)
                t = corner_term(self._layers_point(x, y), y, x, v, h)
                NE[i, j] = fold(np.minimum(NE[i, j + 1], NE[i + 1, j]), t)
        for i in range(p + 1):
            for j in range(q + 1):
                if i == 0 or j == 0:
                    SW[i, j] = full3
                    continue
                x, y = xi(i), up(j)
                t = corner_term(self._layers_point(x, y), -y, -x, v, h)
                SW[i, j] = fold(np.minimum(SW[i, j - 1], SW[i - 1, j]), t)
        for i in range(p, -1, -1):
            for j in range(q + 1):
                if i == p or j == 0:
                    SE[i, j] = full3
                    continue
                x, y = xi(i + 1), up(j)
                t = corner_term(self._layers_point(x, y), -y, x, v, h)
                SE[i, j] = fold(np.minimum(SE[i, j - 1], SE[i + 1, j]), t)

        minus = {}
        for i in range(p + 1):
            for j in range(q + 1):
                x0, x1, y0, y1 = xi(i), xi(i + 1), up(j), up(j + 1)
                layers = [] if INF in (x1, y1) or -INF in (x0, y0) else \
                    [r.z - 1 for r in self.targets
                     if r.x_lo <= x0 and x1 <= r.x_hi and r.y_lo <= y0 and y1 <= r.y_hi]
                minus[i, j] = D[:, layers].min(axis=1) if layers else np.full(l, _BIG)
        self._tables = (minus, N, S, E, W, NW, NE, SW, SE)
        self._hv = (h.tolist(), v.tolist())

    def functions(self, i: int, j: int, z: int) -> list[AffineFn2]:
        """The affine functions of tile (i, j) on 0-based layer z."""
        minus, N, S, E, W, NW, NE, SW, SE = self._tables
        h, v = self._hv
        l = self.costs.l
        out = []

        def add(a, b, c):
            c = int(c)
            if c < _BIG:
                out.append(AffineFn2(a, b, c))

        add(0, 0, minus[i, j][z])
        for a in range(l):
            add(0, -v[a], N[i, j][z, a])
            add(0, v[a], S[i, j][z, a])
            add(-h[a], 0, E[i, j][z, a])
            add(h[a], 0, W[i, j][z, a])
        for a in range(l):
            for b in range(l):
                # corner families: a is the vertical wire layer, b the horizontal one
                add(h[b], -v[a], NW[i, j][z, a, b])
                add(-h[b], -v[a], NE[i, j][z, a, b])
                add(h[b], v[a], SW[i, j][z, a, b])
                add(-h[b], v[a], SE[i, j][z, a, b])
        return out

    def _index(self, i: int, j: int, z: int):
        key = (i, j, z)
        idx = self._cache.get(key)
        if idx is None:
            with self._lock:
                idx = self._cache.get(key)
                if idx is None:
                    g = self.grid
                    fns = self.functions(i, j, z)
                    idx = envelope_build(fns, (*g.col_bounds(i), *g.row_bounds(j))) if fns else False
                    self._cache[key] = idx
        return idx

    def query(self, s: Point3):
        _check(self.costs, s)
        i, j = self.grid.tile_of(s.x, s.y)
        idx = self._index(i, j, s.z - 1)
        if idx is False:
            return INF
        return idx.query(s.x, s.y)


def simple_preprocess(costs: SimpleCosts, targets) -> SimpleOracle:
    return SimpleOracle(costs, targets)


def simple_query(oracle: SimpleOracle, s: Point3):
    return oracle.query(s)

