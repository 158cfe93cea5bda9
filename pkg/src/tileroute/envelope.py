"""Lower envelopes of affine functions.

``FunctionSet`` keeps the non-dominated affine functions of one variable on an
interval. Every stored function wins on an interval of positive length, the
functions are stored left to right (slopes decreasing), and the key of a
function is its minimum over its winning interval.

``EnvelopeIndex`` answers ``min_f f(x, y)`` over a rectangle for a fixed set of
affine functions of two variables. Cells of the envelope are computed by exact
half-plane clipping in homogeneous integer coordinates and located with a slab
decomposition.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .model import INF


def _q(n, d):
    """n / d as an int when exact, else a Fraction."""
    if isinstance(n, int) and isinstance(d, int):
        if d < 0:
            n, d = -n, -d
        if n % d == 0:
            return n // d
    return Fraction(n) / Fraction(d)


def _ev1(s, o, x):
    if x == INF or x == -INF:
        return o if s == 0 else s * x
    return s * x + o


class AffineFn1(NamedTuple):
    slope: object
    offset: object

    def __call__(self, x):
        return _ev1(self.slope, self.offset, x)


@dataclass(eq=False)
class Piece:
    fn: AffineFn1
    xl: object
    xr: object
    key: object = None
    uid: int = 0
    version: int = 0

    def refresh_key(self) -> bool:
        k = min(self.fn(self.xl), self.fn(self.xr))
        changed = k != self.key
        self.key = k
        return changed


class InsertResult(NamedTuple):
    inserted: bool
    removed_count: int
    removed: list
    updated: list
    piece: Piece | None


def _strict_win(f: AffineFn1, g: AffineFn1, xl, xr):
    """Sub-interval of [xl, xr] where g < f, if it has positive length."""
    ds = f.slope - g.slope
    do = f.offset - g.offset
    if ds == 0:
        return (xl, xr) if do > 0 else None
    r = _q(-do, ds)
    if ds > 0:
        a, b = max(xl, r), xr
    else:
        a, b = xl, min(xr, r)
    return (a, b) if a < b else None


class FunctionSet:
    """Non-dominated affine functions on ``[lo, hi]`` (bounds may be infinite)."""

    def __init__(self, lo, hi, uids=None):
        if lo > hi:
            raise ValueError("empty domain")
        self.lo, self.hi = lo, hi
        self.pieces: list[Piece] = []
        # a shared counter keeps piece ids unique across several sets
        self._uids = uids if uids is not None else itertools.count(1)

    def __len__(self):
        return len(self.pieces)

    def __iter__(self):
        return (p.fn for p in self.pieces)

    def functions(self) -> list[AffineFn1]:
        return [p.fn for p in self.pieces]

    def value(self, x):
        if not self.pieces:
            return INF
        k = bisect_right(self.pieces, x, key=lambda p: p.xl) - 1
        return self.pieces[max(k, 0)].fn(x)

    def _new_piece(self, g, xl, xr) -> Piece:
        p = Piece(g, xl, xr, uid=next(self._uids))
        p.refresh_key()
        return p

    def insert(self, g: AffineFn1) -> InsertResult:
        """Insert g if it is strictly below the envelope somewhere."""
        if not isinstance(g, AffineFn1):
            g = AffineFn1(*g)
        if self.lo == self.hi:
            return self._insert_point(g)
        if not self.pieces:
            p = self._new_piece(g, self.lo, self.hi)
            self.pieces.append(p)
            return InsertResult(True, 0, [], [], p)
        A = B = None
        for p in self.pieces:
            iv = _strict_win(p.fn, g, p.xl, p.xr)
            if iv is not None:
                A = iv[0] if A is None else min(A, iv[0])
                B = iv[1] if B is None else max(B, iv[1])
        if A is None:
            return InsertResult(False, 0, [], [], None)
        ins = self._new_piece(g, A, B)
        new, removed, updated = [], [], []
        placed = False
        for p in self.pieces:
            if p.xr <= A:
                new.append(p)
            elif p.xl >= B:
                if not placed:
                    new.append(ins)
                    placed = True
                new.append(p)
            elif p.xl < A:
                assert p.xr <= B, "winning region of one function split in two"
                p.xr = A
                if p.refresh_key():
                    updated.append(p)
                new.append(p)
            elif p.xr > B:
                if not placed:
                    new.append(ins)
                    placed = True
                p.xl = B
                if p.refresh_key():
                    updated.append(p)
                new.append(p)
            else:
                removed.append(p)
        if not placed:
            new.append(ins)
        self.pieces = new
        return InsertResult(True, len(removed), removed, updated, ins)

    def _insert_point(self, g) -> InsertResult:
        x = self.lo
        if self.pieces and not g(x) < self.pieces[0].fn(x):
            return InsertResult(False, 0, [], [], None)
        old = self.pieces
        p = self._new_piece(g, x, x)
        self.pieces = [p]
        return InsertResult(True, len(old), old, [], p)

    def check(self) -> None:
        """Assert the structural invariants."""
        ps = self.pieces
        if not ps:
            return
        assert ps[0].xl == self.lo and ps[-1].xr == self.hi
        for a, b in zip(ps, ps[1:]):
            assert a.xr == b.xl
            assert a.fn.slope > b.fn.slope
        for p in ps:
            assert p.xl < p.xr or self.lo == self.hi


def fnset_insert(F: FunctionSet, g) -> tuple[bool, int]:
    r = F.insert(g)
    return r.inserted, r.removed_count


# --- two variables -------------------------------------------------------

class AffineFn2(NamedTuple):
    a: int
    b: int
    c: int

    def __call__(self, x, y):
        return self.a * x + self.b * y + self.c


def naive_min(functions: Iterable, x, y):
    return min((f(x, y) for f in functions), default=INF)


def _meet(l1, l2):
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    X = b1 * c2 - c1 * b2
    Y = c1 * a2 - a1 * c2
    W = a1 * b2 - b1 * a2
    if W < 0:
        X, Y, W = -X, -Y, -W
    g = math.gcd(X, Y, W)
    if g > 1:
        X, Y, W = X // g, Y // g, W // g
    return (X, Y, W)


def _side(h, v) -> int:
    return h[0] * v[0] + h[1] * v[1] + h[2] * v[2]


def _clip(poly: list, h) -> list:
    """Clip a convex CCW polygon [(vertex, line_of_outgoing_edge)] by h >= 0."""
    out = []
    n = len(poly)
    for k in range(n):
        v, L = poly[k]
        w = poly[(k + 1) % n][0]
        sv, sw = _side(h, v), _side(h, w)
        if sv >= 0 and sw >= 0:
            out.append((v, L))
        elif sv >= 0:
            if sv > 0:
                out.append((v, L))
                out.append((_meet(L, h), h))
            else:
                out.append((v, h))
        elif sw > 0:
            out.append((_meet(L, h), L))
    if len(out) < 3:
        return []
    clean = []
    for k, (v, L) in enumerate(out):
        if v != out[(k + 1) % len(out)][0]:
            clean.append((v, L))
    return clean if len(clean) >= 3 else []


def _area2(poly) -> Fraction:
    s = Fraction(0)
    n = len(poly)
    for k in range(n):
        (X1, Y1, W1), (X2, Y2, W2) = poly[k][0], poly[(k + 1) % n][0]
        s += Fraction(X1 * Y2 - X2 * Y1, W1 * W2)
    return s


def _intline(a, b, c):
    if isinstance(a, int) and isinstance(b, int) and isinstance(c, int):
        return (a, b, c)
    fa, fb, fc = Fraction(a), Fraction(b), Fraction(c)
    m = math.lcm(fa.denominator, fb.denominator, fc.denominator)
    return (int(fa * m), int(fb * m), int(fc * m))


def _below(f, g):
    """Half-plane where f <= g."""
    return _intline(g.a - f.a, g.b - f.b, g.c - f.c)


def _box_poly(X0, X1, Y0, Y1) -> list:
    return [((X0, Y0, 1), (0, 1, -Y0)), ((X1, Y0, 1), (-1, 0, X1)),
            ((X1, Y1, 1), (0, -1, Y1)), ((X0, Y1, 1), (1, 0, -X0))]


def _bound(functions, bounds) -> int:
    A = max(max(abs(Fraction(f.a)), abs(Fraction(f.b))) for f in functions)
    C = max(abs(Fraction(f.c)) for f in functions)
    R = max((abs(c) for c in bounds if c not in (INF, -INF)), default=0)
    return int(8 * (A + 1) * (C + R + 1)) + int(R) + 1


@dataclass
class EnvelopeIndex:
    bounds: tuple
    cells: list  # [(fn, polygon)]
    breaks: list = field(default_factory=list)
    slabs: list = field(default_factory=list)  # per slab: [(line, fn)] bottom to top

    def query(self, x, y):
        if len(self.cells) == 1:
            return self.cells[0][0](x, y)
        k = bisect_right(self.breaks, x) - 1
        k = min(max(k, 0), len(self.slabs) - 1)
        entries = self.slabs[k]
        lo, hi = 0, len(entries) - 1
        # entries[0] is taken as always below the point
        while lo < hi:
            mid = (lo + hi + 1) // 2
            a, b, c = entries[mid][0]
            if a * x + b * y + c >= 0:
                lo = mid
            else:
                hi = mid - 1
        return entries[lo][1](x, y)

    @property
    def functions(self) -> list:
        return [f for f, _ in self.cells]


def envelope_build(functions: Iterable, bounds: Sequence) -> EnvelopeIndex:
    """Index of the lower envelope of ``functions`` over the closed box
    ``bounds = (x_lo, x_hi, y_lo, y_hi)``; infinite bounds are allowed."""
    if hasattr(bounds, "x_lo"):
        bounds = (bounds.x_lo, bounds.x_hi, bounds.y_lo, bounds.y_hi)
    fns = []
    seen = set()
    for f in functions:
        if not isinstance(f, AffineFn2):
            f = AffineFn2(*f)
        if f.c == INF or f in seen:
            continue
        seen.add(f)
        fns.append(f)
    if not fns:
        raise ValueError("empty function set")
    x_lo, x_hi, y_lo, y_hi = bounds
    if len(fns) == 1:
        return EnvelopeIndex(tuple(bounds), [(fns[0], None)])
    B = _bound(fns, bounds)
    X0 = -B if x_lo == -INF else int(x_lo)
    X1 = B if x_hi == INF else int(x_hi)
    Y0 = -B if y_lo == -INF else int(y_lo)
    Y1 = B if y_hi == INF else int(y_hi)
    if X0 >= X1 or Y0 >= Y1:
        raise ValueError("envelope domain must have positive area")
    box = _box_poly(X0, X1, Y0, Y1)

    # seeds: the minimisers at a few sample points
    samples = [(X0, Y0), (X1, Y0), (X0, Y1), (X1, Y1), ((X0 + X1) // 2, (Y0 + Y1) // 2)]
    seeds = []
    for sx, sy in samples:
        best = min(fns, key=lambda f: f(sx, sy))
        if best not in seeds:
            seeds.append(best)
    seed_cells = _cells(seeds, seeds, box)
    # any other winner must beat its owner at some vertex of the seed envelope
    verts, owner = [], []
    for f, poly in seed_cells:
        for (X, Y, W), _ in poly:
            verts.append((X / W, Y / W))
            owner.append(f(Fraction(X, W), Fraction(Y, W)))
    cand = list(seeds)
    rest = [f for f in fns if f not in seeds]
    if rest and verts:
        P = np.array(verts, dtype=float)
        own = np.array([float(o) for o in owner])
        M = np.array([(float(f.a), float(f.b), float(f.c)) for f in rest])
        vals = M[:, :1] * P[:, 0] + M[:, 1:2] * P[:, 1] + M[:, 2:]
        tol = 1e-7 * (np.abs(vals) + np.abs(own) + 1.0)
        keep = (vals - own < tol).any(axis=1)
        cand.extend(f for f, k in zip(rest, keep) if k)
    cells = seed_cells if len(cand) == len(seeds) else _cells(cand, cand, box)
    index = EnvelopeIndex(tuple(bounds), cells)
    if len(cells) > 1:
        _build_slabs(index)
    return index


def _cells(fns, others, box):
    out = []
    for f in fns:
        poly = box
        for g in others:
            if g is f:
                continue
            poly = _clip(poly, _below(f, g))
            if not poly:
                break
        if poly and _area2(poly) > 0:
            out.append((f, poly))
    return out


def _build_slabs(index: EnvelopeIndex) -> None:
    xs = sorted({Fraction(X, W) for _, poly in index.cells for (X, _, W), _ in poly})
    index.breaks = xs
    slabs = [[] for _ in range(len(xs) - 1)]
    for f, poly in index.cells:
        n = len(poly)
        for k in range(n):
            v, L = poly[k]
            w = poly[(k + 1) % n][0]
            if L[1] <= 0:
                continue
            xa, xb = sorted((Fraction(v[0], v[2]), Fraction(w[0], w[2])))
            ia = bisect_right(xs, xa) - 1
            for s in range(ia, len(xs) - 1):
                if xs[s + 1] > xb:
                    break
                slabs[s].append((L, f))
    for s, entries in enumerate(slabs):
        xm = (xs[s] + xs[s + 1]) / 2
        entries.sort(key=lambda e: Fraction(-(e[0][0] * xm + e[0][2]), e[0][1]))
    index.slabs = slabs


def envelope_query(index: EnvelopeIndex, p) -> object:
    x, y = p[0], p[1]
    return index.query(x, y)
