"""Exact distances for tile-based costs.

Every grid line piece between two consecutive tile coordinates is a
"segment". A Dijkstra-like search whose labels are affine functions computes,
for every segment, a ``FunctionSet`` whose minimum is the exact distance to the
targets at each point of the segment (``label_segments``). A point inside a
tile reaches the targets either by vias alone or through the tile boundary, so
its distance is a minimum of affine functions built from the boundary labels.
These are grouped by layer ranges along a shallow arborescence over the
layers so that a query touches O(l^eps) envelope indexes.

INF costs are replaced by a huge integer ``BIG`` while labeling; any value at
or above ``BIG`` is reported as INF.
"""

from __future__ import annotations

import heapq
import itertools
import math
import threading
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .envelope import AffineFn1, AffineFn2, FunctionSet, envelope_build
from .model import INF, GeneralCosts, Point3, Rect, as_targets, is_consistent, refine_grid

BIG = 2 ** 128


def _big(c):
    return BIG if c == INF else c


def _mulb(c, d):
    return 0 if d == 0 else c * d


@dataclass
class PassStats:
    pops: int = 0
    pushes: int = 0
    max_set: int = 0
    k_prime: int = 0
    set_bound: int = 0
    pop_bound: int = 0
    keys_monotone: bool = True

    def within_bounds(self) -> bool:
        return self.max_set <= self.set_bound and self.pops <= self.pop_bound and self.keys_monotone


@dataclass
class SegmentLabels:
    grid: object
    hor: dict       # (i, j, z) -> FunctionSet over x, segment y = ys[j-1]
    ver: dict       # (i, j, z) -> FunctionSet over y, segment x = xs[i-1]
    stats_h: PassStats
    stats_v: PassStats


def _label_pass(xs, ys, H, V, Z, l, targets, k_count, check=True):
    """Label the horizontal segments. Arrays are ``[i][j][z]`` with BIG for INF."""
    p, q = len(xs), len(ys)
    ext = [-INF] + list(xs) + [INF]
    sets: dict = {}
    stats = PassStats()
    stats.k_prime = min(k_count, (q + 1) * l)
    stats.set_bound = 2 * stats.k_prime + 1
    stats.pop_bound = (p + 1) * q * (2 * stats.k_prime + 1) * l
    if q == 0:
        return sets, stats
    heap: list = []
    live: dict = {}   # uid -> (segment key, piece)
    done: set = set()
    uids = itertools.count(1)

    def push(seg, piece):
        i, j, z = seg
        stats.pushes += 1
        heapq.heappush(heap, (piece.key, z, j, i, -piece.fn.slope, piece.uid))

    def insert(seg, fn):
        F = sets[seg]
        r = F.insert(fn)
        if not r.inserted:
            return
        for old in r.removed:
            live.pop(old.uid, None)
        for upd in r.updated:
            if upd.uid not in done:
                push(seg, upd)
        live[r.piece.uid] = (seg, r.piece)
        push(seg, r.piece)
        if len(F) > stats.max_set:
            stats.max_set = len(F)

    def wire(i, j, z):
        return min(H[i][j][z], H[i][j - 1][z])

    for i in range(p + 1):
        x0, x1 = ext[i], ext[i + 1]
        for j in range(1, q + 1):
            y = ys[j - 1]
            for z in range(l):
                seg = (i, j, z)
                sets[seg] = FunctionSet(x0, x1, uids)
                zz = z + 1
                full = x0 != -INF and x1 != INF and any(
                    r.z == zz and r.y_lo <= y <= r.y_hi and r.x_lo <= x0 and x1 <= r.x_hi
                    for r in targets)
                if full or (x0 == x1 and any(r.contains(Point3(x0, y, zz)) for r in targets)):
                    insert(seg, AffineFn1(0, 0))
                    continue
                c = wire(i, j, z)
                if x0 != -INF and any(r.contains(Point3(x0, y, zz)) for r in targets):
                    insert(seg, AffineFn1(c, -c * x0))
                if x1 != INF and any(r.contains(Point3(x1, y, zz)) for r in targets):
                    insert(seg, AffineFn1(-c, c * x1))

    last = -INF
    while heap:
        key, z, j, i, _, uid = heapq.heappop(heap)
        ent = live.get(uid)
        if ent is None or uid in done or ent[1].key != key:
            continue
        done.add(uid)
        stats.pops += 1
        if key < last:
            stats.keys_monotone = False
        last = key
        f = ent[1].fn
        a, b = f.slope, f.offset
        if z > 0:
            c = min(Z[i][j][z - 1], Z[i][j - 1][z - 1])
            if c < BIG:
                insert((i, j, z - 1), AffineFn1(a, b + c))
        if z < l - 1:
            c = min(Z[i][j][z], Z[i][j - 1][z])
            if c < BIG:
                insert((i, j, z + 1), AffineFn1(a, b + c))
        if j < q:
            c = _mulb(V[i][j][z], ys[j] - ys[j - 1])
            if c < BIG:
                insert((i, j + 1, z), AffineFn1(a, b + c))
        if j > 1:
            c = _mulb(V[i][j - 1][z], ys[j - 1] - ys[j - 2])
            if c < BIG:
                insert((i, j - 1, z), AffineFn1(a, b + c))
        if i > 0:
            x = ext[i]
            val = a * x + b
            if val < BIG:
                c = min(H[i - 1][j][z], H[i - 1][j - 1][z])
                insert((i - 1, j, z), AffineFn1(-c, val + c * x))
        if i < p:
            x = ext[i + 1]
            val = a * x + b
            if val < BIG:
                c = min(H[i + 1][j][z], H[i + 1][j - 1][z])
                insert((i + 1, j, z), AffineFn1(c, val - c * x))
    if check:
        assert stats.within_bounds(), stats
    return sets, stats


def _bigify(arr):
    return [[[_big(c) for c in cell] for cell in col] for col in arr]


def _transpose(arr):
    return [list(col) for col in zip(*arr)]


def label_segments(costs: GeneralCosts, targets, check: bool = True) -> SegmentLabels:
    """Exact distance functions on every segment; targets must be consistent with the grid."""
    T = as_targets(targets)
    g = costs.grid
    if not is_consistent(g, T):
        raise ValueError("targets are not consistent with the tile grid; refine it first")
    H, V, Z = _bigify(costs.horiz), _bigify(costs.vert), _bigify(costs.via)
    k = costs.distinct_wire_costs()
    hor, sh = _label_pass(g.xs, g.ys, H, V, Z, g.l, T.rects, k, check)
    Tt = [Rect(r.y_lo, r.y_hi, r.x_lo, r.x_hi, r.z) for r in T]
    vt, sv = _label_pass(g.ys, g.xs, _transpose(V), _transpose(H), _transpose(Z), g.l, Tt, k, check)
    ver = {(i, j, z): F for (j, i, z), F in vt.items()}
    return SegmentLabels(g, hor, ver, sh, sv)


# --- layer arborescence --------------------------------------------------

@dataclass
class LayerNode:
    lo: int
    hi: int
    children: list = field(default_factory=list)
    parent: "LayerNode | None" = None

    def ranges(self):
        return [(c.lo, c.hi) for c in self.children]


def _split(lo: int, hi: int, d: int) -> list[tuple[int, int]]:
    n = hi - lo + 1
    parts = min(d, n)
    base, extra = divmod(n, parts)
    out, start = [], lo
    for k in range(parts):
        size = base + (1 if k < extra else 0)
        out.append((start, start + size - 1))
        start += size
    return out


def out_degree(l: int, epsilon) -> int:
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    d = max(2, math.ceil(l ** float(eps) - 1e-9))
    return d


def arborescence(l: int, epsilon=Fraction(1, 2)) -> LayerNode:
    """Layers 1..l split into balanced consecutive ranges, out-degree ceil(l^eps)."""
    d = out_degree(l, epsilon)
    root = LayerNode(1, l)
    stack = [root]
    while stack:
        node = stack.pop()
        if node.lo == node.hi:
            continue
        for a, b in _split(node.lo, node.hi, d):
            child = LayerNode(a, b, parent=node)
            node.children.append(child)
            stack.append(child)
    return root


def _leaves(root: LayerNode) -> dict:
    out, stack = {}, [root]
    while stack:
        n = stack.pop()
        if not n.children:
            out[n.lo] = n
        stack.extend(n.children)
    return out


def _path_ranges(leaf: LayerNode):
    """(L^>, L^<) layer ranges of the non-root nodes from a leaf to the root."""
    up, down = [], []
    node = leaf
    while node.parent is not None:
        par = node.parent
        if node.hi < par.hi:
            up.append((node.hi + 1, par.hi))
        if par.lo < node.lo:
            down.append((par.lo, node.lo - 1))
        node = par
    return up, down


# --- query structure ------------------------------------------------------

@dataclass
class TileStructure:
    vias_only: list            # per layer (0-based)
    same: list                 # per layer: EnvelopeIndex or None
    up: dict                   # (a, b) 1-based -> EnvelopeIndex
    down: dict
    cum: list


class GeneralOracle:
    """Distance queries for a fixed target set under tile-based costs."""

    def __init__(self, costs: GeneralCosts, targets, epsilon=Fraction(1, 2),
                 labels: SegmentLabels | None = None, check: bool = True):
        self.targets = as_targets(targets)
        if not self.targets.rects:
            raise ValueError("empty target set")
        self.costs = costs
        self.grid = costs.grid
        self.epsilon = Fraction(epsilon)
        self.labels = labels or label_segments(costs, self.targets, check)
        self.tree = arborescence(self.grid.l, self.epsilon)
        self._leaf_paths = {z: _path_ranges(n) for z, n in _leaves(self.tree).items()}
        self._H = _bigify(costs.horiz)
        self._V = _bigify(costs.vert)
        self._Z = _bigify(costs.via)
        self._tiles: dict = {}
        self._lock = threading.Lock()

    # boundary functions of tile (i, j) on layer z, as functions of (x, y)
    def _boundary_functions(self, i: int, j: int, z: int) -> list[AffineFn2]:
        g = self.grid
        L = self.labels
        x0, x1 = g.col_bounds(i)
        y0, y1 = g.row_bounds(j)
        ch, cv = self._H[i][j][z], self._V[i][j][z]
        out = []

        def usable(f, lo, hi):
            return abs(f.slope) < BIG and min(f(lo), f(hi)) < BIG

        if cv < BIG:
            if j >= 1:
                for f in L.hor[i, j, z]:
                    if usable(f, x0, x1):
                        out.append(AffineFn2(f.slope, cv, f.offset - cv * y0))
            if j + 1 <= g.q:
                for f in L.hor[i, j + 1, z]:
                    if usable(f, x0, x1):
                        out.append(AffineFn2(f.slope, -cv, f.offset + cv * y1))
        if ch < BIG:
            if i >= 1:
                for f in L.ver[i, j, z]:
                    if usable(f, y0, y1):
                        out.append(AffineFn2(ch, f.slope, f.offset - ch * x0))
            if i + 1 <= g.p:
                for f in L.ver[i + 1, j, z]:
                    if usable(f, y0, y1):
                        out.append(AffineFn2(-ch, f.slope, f.offset + ch * x1))
        return out

    def _build_tile(self, i: int, j: int) -> TileStructure:
        g = self.grid
        l = g.l
        bounds = (*g.col_bounds(i), *g.row_bounds(j))
        cum = [0]
        for z in range(l - 1):
            cum.append(cum[-1] + self._Z[i][j][z])
        x0, x1, y0, y1 = bounds
        full = [] if INF in (x1, y1) or -INF in (x0, y0) else \
            [r.z - 1 for r in self.targets
             if r.x_lo <= x0 and x1 <= r.x_hi and r.y_lo <= y0 and y1 <= r.y_hi]
        vias_only = [min((abs(cum[z] - cum[w]) for w in full), default=BIG) for z in range(l)]
        per_layer = [self._boundary_functions(i, j, z) for z in range(l)]

        def build(fns):
            fns = [f for f in fns if f.c < BIG]
            return envelope_build(fns, bounds) if fns else None

        same = [build(per_layer[z]) for z in range(l)]
        up, down = {}, {}
        needed_up = {r for ups, _ in self._leaf_paths.values() for r in ups}
        needed_down = {r for _, downs in self._leaf_paths.values() for r in downs}
        for a, b in needed_up:
            fns = []
            for w in range(a - 1, b):
                extra = cum[w] - cum[a - 1]
                if extra < BIG:
                    fns.extend(AffineFn2(f.a, f.b, f.c + extra) for f in per_layer[w])
            up[a, b] = build(fns)
        for a, b in needed_down:
            fns = []
            for w in range(a - 1, b):
                extra = cum[b - 1] - cum[w]
                if extra < BIG:
                    fns.extend(AffineFn2(f.a, f.b, f.c + extra) for f in per_layer[w])
            down[a, b] = build(fns)
        return TileStructure(vias_only, same, up, down, cum)

    def tile(self, i: int, j: int) -> TileStructure:
        t = self._tiles.get((i, j))
        if t is None:
            with self._lock:
                t = self._tiles.get((i, j))
                if t is None:
                    t = self._build_tile(i, j)
                    self._tiles[i, j] = t
        return t

    def build_all(self) -> None:
        g = self.grid
        for i in range(g.p + 1):
            for j in range(g.q + 1):
                x0, x1 = g.col_bounds(i)
                y0, y1 = g.row_bounds(j)
                if x1 - x0 >= 2 and y1 - y0 >= 2:
                    self.tile(i, j)

    def raw_query(self, s: Point3):
        """Distance with BIG in place of INF."""
        g = self.grid
        x, y, z = s.x, s.y, s.z - 1
        ys, xs = g.ys, g.xs
        k = bisect_left(ys, y)
        if k < len(ys) and ys[k] == y:
            i = min(bisect_right(xs, x), g.p)
            return self.labels.hor[i, k + 1, z].value(x)
        k = bisect_left(xs, x)
        if k < len(xs) and xs[k] == x:
            j = min(bisect_right(ys, y), g.q)
            return self.labels.ver[k + 1, j, z].value(y)
        i, j = g.tile_of(x, y)
        t = self.tile(i, j)
        best = t.vias_only[z]
        idx = t.same[z]
        if idx is not None:
            best = min(best, idx.query(x, y))
        ups, downs = self._leaf_paths[z + 1]
        for a, b in ups:
            idx = t.up[a, b]
            if idx is not None:
                best = min(best, idx.query(x, y) + t.cum[a - 1] - t.cum[z])
        for a, b in downs:
            idx = t.down[a, b]
            if idx is not None:
                best = min(best, idx.query(x, y) + t.cum[z] - t.cum[b - 1])
        return best

    def query(self, s: Point3):
        if not 1 <= s.z <= self.grid.l:
            raise ValueError(f"layer {s.z} out of range")
        d = self.raw_query(s)
        return INF if d >= BIG else d

    __call__ = query


def build_query_structure(labels: SegmentLabels, costs: GeneralCosts, targets,
                          epsilon=Fraction(1, 2)) -> GeneralOracle:
    return GeneralOracle(costs, targets, epsilon, labels=labels)


def general_query(oracle: GeneralOracle, s: Point3):
    return oracle.query(s)


def general_potential_for(costs: GeneralCosts, targets, epsilon=Fraction(1, 2)) -> GeneralOracle:
    """Refine the grid for the targets, label the segments and build the query structure."""
    T = as_targets(targets)
    refined = refine_grid(costs, T)
    return GeneralOracle(refined, T, epsilon)
