"""Seeded random instances for tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import INF, GeneralCosts, Rect, SimpleCosts, TargetSet, TileGrid, refine_grid
from .oracle import Window


@dataclass
class RandomCase:
    costs: object
    targets: TargetSet
    window: Window


def _coords(rng: random.Random, n: int, span: int) -> list[int]:
    return sorted(rng.randint(0, span) for _ in range(n))


def random_rect(rng: random.Random, span: int, l: int, max_side: int = 3) -> Rect:
    x = rng.randint(0, span)
    y = rng.randint(0, span)
    return Rect(x, min(span, x + rng.randint(0, max_side)), y,
                min(span, y + rng.randint(0, max_side)), rng.randint(1, l))


def random_general(rng: random.Random, p_max: int = 6, q_max: int = 6, l_max: int = 4,
                   t_max: int = 3, c_lo: int = 1, c_hi: int = 20, inf_frac: float = 0.2,
                   span: int = 14, refine: bool = True) -> RandomCase:
    """Random tile costs with about ``inf_frac`` INF tile entries; the grid is
    refined so that the targets are consistent with it."""
    l = rng.randint(1, l_max)
    grid = TileGrid(_coords(rng, rng.randint(0, p_max), span),
                    _coords(rng, rng.randint(0, q_max), span), l)

    def cost():
        return INF if rng.random() < inf_frac else rng.randint(c_lo, c_hi)

    def arr(depth):
        return [[[cost() for _ in range(depth)] for _ in range(grid.q + 1)]
                for _ in range(grid.p + 1)]

    costs = GeneralCosts(grid, arr(l), arr(l), arr(l - 1))
    targets = TargetSet(random_rect(rng, span, l) for _ in range(rng.randint(1, t_max)))
    if refine:
        costs = refine_grid(costs, targets)
    window = Window(-2, span + 2, -2, span + 2, l)
    return RandomCase(costs, targets, window)


def random_simple(rng: random.Random, l_max: int = 8, t_max: int = 4, c_lo: int = 1,
                  c_hi: int = 20, span: int = 12) -> RandomCase:
    l = rng.randint(1, l_max)
    costs = SimpleCosts([rng.randint(c_lo, c_hi) for _ in range(l)],
                        [rng.randint(c_lo, c_hi) for _ in range(l)],
                        [rng.randint(c_lo, c_hi) for _ in range(l - 1)])
    targets = TargetSet(random_rect(rng, span, l) for _ in range(rng.randint(1, t_max)))
    return RandomCase(costs, targets, Window(-2, span + 2, -2, span + 2, l))
