"""Routing instances: a window of the grid, tile costs, blockages and nets.

Instances are stored as JSON. INF costs are written as the string ``"inf"``,
rectangles as ``{"x": [lo, hi], "y": [lo, hi], "z": layer}`` and fractions
(``delta``, ``epsilon``) as strings like ``"3/4"``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .model import INF, GeneralCosts, Point3, Rect, TileGrid, refine_grid
from .oracle import Subgraph, Window, oracle_subgraph_shortest_path
from .router import Reservation, check_reservations, reserved_edges


class InstanceError(ValueError):
    """Invalid instance file; ``errors`` lists every problem found."""

    def __init__(self, errors: list[str]):
        super().__init__("\n".join(errors))
        self.errors = errors


@dataclass
class Net:
    name: str
    pins: list            # list of pins, each a list of Rect
    reservations: list = field(default_factory=list)


@dataclass
class Instance:
    name: str
    window: Window
    costs: GeneralCosts
    blocked: list = field(default_factory=list)
    nets: list = field(default_factory=list)
    delta: Fraction = Fraction(3, 4)
    epsilon: Fraction = Fraction(1, 2)

    def reservations(self) -> list[Reservation]:
        return [Reservation(n.name, r) for n in self.nets for r in n.reservations]

    def subgraph(self, net: Net | None = None, honor_reservations: bool = False) -> Subgraph:
        """Window minus blockages; with reservations, other nets' reserved edges are removed."""
        removed = []
        if honor_reservations:
            for other in self.nets:
                if net is not None and other.name == net.name:
                    continue
                for r in other.reservations:
                    removed.extend(reserved_edges(r))
        return Subgraph.from_window(self.window, self.blocked, removed)


# --- serialization ----------------------------------------------------------

def _cost_out(c):
    return "inf" if c == INF else c


def _rect_out(r: Rect) -> dict:
    return {"x": [r.x_lo, r.x_hi], "y": [r.y_lo, r.y_hi], "z": r.z}


def to_json(inst: Instance) -> dict:
    c = inst.costs
    w = inst.window

    def arr(a):
        return [[[_cost_out(x) for x in cell] for cell in col] for col in a]

    return {
        "name": inst.name,
        "window": {"x": [w.x_lo, w.x_hi], "y": [w.y_lo, w.y_hi], "layers": w.l},
        "grid": {"xs": list(c.grid.xs), "ys": list(c.grid.ys)},
        "costs": {"horiz": arr(c.horiz), "vert": arr(c.vert), "via": arr(c.via)},
        "blocked": [_rect_out(r) for r in inst.blocked],
        "nets": [{"name": n.name, "pins": [[_rect_out(r) for r in pin] for pin in n.pins],
                  "reservations": [_rect_out(r) for r in n.reservations]} for n in inst.nets],
        "delta": str(inst.delta),
        "epsilon": str(inst.epsilon),
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(to_json(inst), indent=1)


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(serialize_instance(inst) + "\n")


class _Reader:
    def __init__(self):
        self.errors: list[str] = []

    def err(self, where: str, msg: str):
        self.errors.append(f"{where}: {msg}")

    def int_(self, v, where):
        if isinstance(v, bool) or not isinstance(v, int):
            self.err(where, f"expected an integer, got {v!r}")
            return 0
        return v

    def pair(self, v, where):
        if not isinstance(v, list) or len(v) != 2:
            self.err(where, "expected [lo, hi]")
            return 0, 0
        return self.int_(v[0], where + "[0]"), self.int_(v[1], where + "[1]")

    def cost(self, v, where):
        if v == "inf":
            return INF
        c = self.int_(v, where)
        if c < 0:
            self.err(where, "costs must be non-negative")
        return c

    def rect(self, v, where, l):
        if not isinstance(v, dict):
            self.err(where, "expected a rectangle object")
            return None
        x0, x1 = self.pair(v.get("x"), where + ".x")
        y0, y1 = self.pair(v.get("y"), where + ".y")
        z = self.int_(v.get("z"), where + ".z")
        if x0 > x1 or y0 > y1:
            self.err(where, "empty rectangle")
            return None
        if not 1 <= z <= l:
            self.err(where, f"layer {z} outside 1..{l}")
            return None
        return Rect(x0, x1, y0, y1, z)

    def frac(self, v, where, default):
        if v is None:
            return default
        try:
            f = Fraction(str(v))
        except (ValueError, ZeroDivisionError):
            self.err(where, f"not a fraction: {v!r}")
            return default
        if not 0 < f <= 1:
            self.err(where, "must lie in (0, 1]")
        return f

    def cost_array(self, v, where, p1, q1, depth):
        if not isinstance(v, list) or len(v) != p1:
            self.err(where, f"expected {p1} tile columns")
            return None
        out = []
        for i, col in enumerate(v):
            if not isinstance(col, list) or len(col) != q1:
                self.err(f"{where}[{i}]", f"expected {q1} tile rows")
                return None
            row = []
            for j, cell in enumerate(col):
                if not isinstance(cell, list) or len(cell) != depth:
                    self.err(f"{where}[{i}][{j}]", f"expected {depth} layer entries")
                    return None
                row.append([self.cost(c, f"{where}[{i}][{j}][{k}]") for k, c in enumerate(cell)])
            out.append(row)
        return out


def parse_instance(text: str) -> Instance:
    """Parse and validate; raises InstanceError listing all problems."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError([f"line {e.lineno}, column {e.colno}: {e.msg}"]) from None
    R = _Reader()
    if not isinstance(data, dict):
        raise InstanceError(["top level: expected an object"])
    win = data.get("window") or {}
    wx = R.pair(win.get("x"), "window.x")
    wy = R.pair(win.get("y"), "window.y")
    l = R.int_(win.get("layers"), "window.layers")
    if l < 1:
        R.err("window.layers", "need at least one layer")
        raise InstanceError(R.errors)
    if wx[0] > wx[1] or wy[0] > wy[1]:
        R.err("window", "empty window")
    grid = data.get("grid") or {}
    xs = [R.int_(v, f"grid.xs[{k}]") for k, v in enumerate(grid.get("xs", []))]
    ys = [R.int_(v, f"grid.ys[{k}]") for k, v in enumerate(grid.get("ys", []))]
    if xs != sorted(xs) or ys != sorted(ys):
        R.err("grid", "coordinates must be sorted")
    costs_in = data.get("costs") or {}
    p1, q1 = len(xs) + 1, len(ys) + 1
    H = R.cost_array(costs_in.get("horiz"), "costs.horiz", p1, q1, l)
    V = R.cost_array(costs_in.get("vert"), "costs.vert", p1, q1, l)
    Z = R.cost_array(costs_in.get("via"), "costs.via", p1, q1, l - 1)
    blocked = [R.rect(v, f"blocked[{k}]", l) for k, v in enumerate(data.get("blocked", []))]
    nets = []
    for k, n in enumerate(data.get("nets", [])):
        where = f"nets[{k}]"
        if not isinstance(n, dict):
            R.err(where, "expected an object")
            continue
        name = str(n.get("name", f"net{k}"))
        pins = []
        for a, pin in enumerate(n.get("pins", [])):
            shapes = [R.rect(v, f"{where}.pins[{a}][{b}]", l) for b, v in enumerate(pin)]
            if not shapes:
                R.err(f"{where}.pins[{a}]", "pin without shapes")
            pins.append([s for s in shapes if s is not None])
        if len(pins) < 2:
            R.err(where, "a net needs at least two pins")
        res = [R.rect(v, f"{where}.reservations[{b}]", l)
               for b, v in enumerate(n.get("reservations", []))]
        nets.append(Net(name, pins, [r for r in res if r is not None]))
    if len({n.name for n in nets}) != len(nets):
        R.err("nets", "net names must be unique")
    delta = R.frac(data.get("delta"), "delta", Fraction(3, 4))
    eps = R.frac(data.get("epsilon"), "epsilon", Fraction(1, 2))
    if R.errors:
        raise InstanceError(R.errors)
    try:
        costs = GeneralCosts(TileGrid(xs, ys, l), H, V, Z)
    except ValueError as e:
        raise InstanceError([f"costs: {e}"]) from None
    inst = Instance(str(data.get("name", "instance")), Window(wx[0], wx[1], wy[0], wy[1], l), costs,
                    [b for b in blocked if b is not None], nets, delta, eps)
    errors = []
    w = inst.window
    named = [(f"blocked[{k}]", r) for k, r in enumerate(inst.blocked)]
    for k, n in enumerate(nets):
        named += [(f"nets[{k}].pins[{a}][{b}]", r) for a, pin in enumerate(n.pins)
                  for b, r in enumerate(pin)]
        named += [(f"nets[{k}].reservations[{b}]", r) for b, r in enumerate(n.reservations)]
    for where, r in named:
        if not (w.x_lo <= r.x_lo and r.x_hi <= w.x_hi and w.y_lo <= r.y_lo and r.y_hi <= w.y_hi):
            errors.append(f"{where}: rectangle {_rect_out(r)} leaves the window")
    if not errors:
        sub = inst.subgraph()
        for k, n in enumerate(nets):
            for a, pin in enumerate(n.pins):
                if not any(v in sub.vertices for r in pin for v in r.points()):
                    errors.append(f"nets[{k}].pins[{a}]: pin lies entirely on blocked vertices")
    if errors:
        raise InstanceError(errors)
    try:
        check_reservations(inst.reservations())
    except ValueError as e:
        raise InstanceError([f"nets: {e}"]) from None
    return inst


def load_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


# --- generation -------------------------------------------------------------

def _path_rects(path: list[Point3]) -> list[Rect]:
    """Cover the in-layer runs of a path by rectangles."""
    rects = []
    k = 0
    while k < len(path) - 1:
        a = path[k]
        m = k
        while m + 1 < len(path) and path[m + 1].z == a.z and (
                all(p.x == a.x for p in path[k:m + 2]) or all(p.y == a.y for p in path[k:m + 2])):
            m += 1
        if m > k:
            b = path[m]
            rects.append(Rect(min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y), a.z))
            k = m
        else:
            k += 1
    return rects


def generate_instance(seed: int, p: int = 4, q: int = 4, l: int = 3, t: int = 3, nets: int = 6,
                      block_density: float = 0.05, cost_max: int = 20, size: int | None = None,
                      inf_frac: float = 0.05, reserve_frac: float = 0.5,
                      name: str | None = None) -> Instance:
    """Seeded random instance whose nets are all connectible inside the window.

    ``p``/``q`` grid coordinates, ``l`` layers, ``t`` pins per net. Wire costs
    are drawn from ``1..cost_max`` with a per-layer preferred direction.
    """
    if p < 0 or q < 0 or l < 1 or t < 2 or nets < 0 or cost_max < 1:
        raise ValueError("need p, q, nets >= 0, l >= 1, t >= 2 and cost_max >= 1")
    if not 0 <= block_density < 1 or not 0 <= inf_frac < 1 or not 0 <= reserve_frac <= 1:
        raise ValueError("densities and fractions must lie in [0, 1)")
    rng = random.Random(seed)
    size = size or 4 * (max(p, q) + 1)
    span = size - 1
    grid = TileGrid(sorted(rng.randint(0, span) for _ in range(p)),
                    sorted(rng.randint(0, span) for _ in range(q)), l)
    cheap = [max(1, cost_max // 5) for _ in range(l)]

    def wire(z, preferred):
        if rng.random() < inf_frac:
            return INF
        top = cheap[z] if preferred else cost_max
        return rng.randint(1, top)

    def arr(horizontal):
        return [[[wire(z, (z % 2 == 0) == horizontal) for z in range(l)] for _ in range(grid.q + 1)]
                for _ in range(grid.p + 1)]

    H, V = arr(True), arr(False)
    Z = [[[rng.randint(1, cost_max) for _ in range(l - 1)] for _ in range(grid.q + 1)]
         for _ in range(grid.p + 1)]
    costs = GeneralCosts(grid, H, V, Z)
    window = Window(0, span, 0, span, l)
    blocks = []
    target = block_density * len(window)
    covered = 0
    while covered < target:
        x, y = rng.randint(0, span), rng.randint(0, span)
        r = Rect(x, min(span, x + rng.randint(0, 3)), y, min(span, y + rng.randint(0, 3)),
                 rng.randint(1, l))
        blocks.append(r)
        covered += len(list(r.points()))
    inst = Instance(name or f"gen{seed}", window, costs, blocks, [])
    sub = inst.subgraph()
    free = sorted(sub.vertices)
    used: set = set()
    for k in range(nets):
        for _attempt in range(50):
            pts = rng.sample(free, t)
            if any(v in used for v in pts):
                continue
            paths = [oracle_subgraph_shortest_path(sub, costs, [pts[0]], {v})[1] for v in pts[1:]]
            if any(path is None for path in paths):
                continue
            net = Net(f"n{k}", [[Rect.point(v)] for v in pts])
            if rng.random() < reserve_frac:
                # a corridor along current cheapest paths, as a global router would hand out
                res = [r for path in paths for r in _path_rects(path)]
                trial = inst.reservations() + [Reservation(net.name, r) for r in res]
                try:
                    check_reservations(trial)
                    net.reservations = res
                except ValueError:
                    pass
            used.update(pts)
            inst.nets.append(net)
            break
    return inst


def refined_costs(inst: Instance) -> GeneralCosts:
    """Costs refined by every pin shape, for potentials of many target sets."""
    return refine_grid(inst.costs, [r for n in inst.nets for pin in n.pins for r in pin])


def bundled(name: str) -> Instance:
    """Load one of the instances shipped with the package (``fig6``, ``corridor``)."""
    from importlib.resources import files
    return parse_instance(files("tileroute").joinpath("data", f"{name}.json").read_text())
