"""Benchmark harness: route every net of an instance under several potentials."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .instance import Instance
from .model import INF
from .router import (FLAVORS, InfeasiblePotentialError, SearchStats, apply_reservations,
                     make_potential, route_net)

COLUMNS = ("chip", "net", "flavor", "prep_us", "search_us", "labeled", "popped", "cost")
MODES = ("bulk", "incremental")


@dataclass
class BenchRow:
    chip: str
    net: str
    flavor: str
    prep_us: float
    search_us: float
    labeled: int
    popped: int
    cost: object          # Fraction in base-cost units, or INF
    error: str = ""

    def as_csv(self) -> list:
        cost = "inf" if self.cost == INF else str(self.cost)
        return [self.chip, self.net, self.flavor, f"{self.prep_us:.1f}", f"{self.search_us:.1f}",
                self.labeled, self.popped, cost]


@dataclass
class BenchReport:
    mode: str
    rows: list = field(default_factory=list)

    def failures(self) -> list[BenchRow]:
        return [r for r in self.rows if r.error]

    def inconsistent_nets(self) -> list[str]:
        """Nets whose found cost differs between flavors (should never happen)."""
        seen: dict = {}
        for r in self.rows:
            if not r.error:
                seen.setdefault(r.net, set()).add(r.cost)
        return sorted(n for n, c in seen.items() if len(c) > 1)

    def total(self, flavor: str, attr: str = "popped"):
        return sum(getattr(r, attr) for r in self.rows if r.flavor == flavor)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow(r.as_csv())
        return buf.getvalue()


def run_benchmark(inst: Instance, flavors=FLAVORS, mode: str = "bulk", timing: bool = True,
                  delta=None, epsilon=None) -> BenchReport:
    """Route each net once per flavor and collect search statistics.

    ``bulk`` ignores reservations. ``incremental`` discounts the routed net's
    reservations by ``delta`` and removes the other nets' reserved edges.
    Nets are routed independently of each other.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    for f in flavors:
        if f not in FLAVORS:
            raise ValueError(f"unknown potential flavor {f!r}")
    delta = Fraction(delta if delta is not None else inst.delta)
    eps = Fraction(epsilon if epsilon is not None else inst.epsilon)
    report = BenchReport(mode)
    for net in inst.nets:
        if mode == "incremental":
            costs, scale = apply_reservations(inst.costs, inst.reservations(), net=net.name,
                                              delta=delta)
            sub = inst.subgraph(net, honor_reservations=True)
        else:
            costs, scale = inst.costs, 1
            sub = inst.subgraph()
        for flavor in flavors:
            def factory(T, flavor=flavor):
                return make_potential(flavor, costs, T, eps)
            error = ""
            try:
                res = route_net(sub, costs, net.pins, factory)
                cost = INF if res.failed else Fraction(res.cost, scale)
                stats = res.stats
                if res.failed:
                    error = "unreachable"
            except InfeasiblePotentialError as e:
                stats, cost, error = SearchStats(), INF, f"infeasible potential: {e}"
            report.rows.append(BenchRow(inst.name, net.name, flavor,
                                        stats.prep_us if timing else 0.0,
                                        stats.search_us if timing else 0.0,
                                        stats.labeled, stats.popped, cost, error))
    return report
