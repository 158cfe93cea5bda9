import random

import pytest

from tileroute.model import (INF, GeneralCosts, Point3, Rect, SimpleCosts, TargetSet, TileGrid,
                             edge_cost, is_consistent, refine_grid)
from tileroute.synth import random_general, random_rect

from .helpers import two_tile_costs


def all_edges(box):
    x0, x1, y0, y1, l = box
    for z in range(1, l + 1):
        for x in range(x0, x1 + 1):
            for y in range(y0, y1 + 1):
                p = Point3(x, y, z)
                yield p, Point3(x + 1, y, z)
                yield p, Point3(x, y + 1, z)
                if z < l:
                    yield p, Point3(x, y, z + 1)


def test_boundary_edge_takes_minimum():
    costs = two_tile_costs()
    # the vertical edge on x=4 lies in both tiles
    assert edge_cost(costs, Point3(4, 0, 1), Point3(4, 1, 1)) == 10
    assert edge_cost(costs, Point3(1, 0, 1), Point3(1, 1, 1)) == 20
    # horizontal edges on y=1 lie in the tile row above too (INF there)
    assert edge_cost(costs, Point3(1, 1, 1), Point3(2, 1, 1)) == 2
    assert edge_cost(costs, Point3(5, 1, 1), Point3(4, 1, 1)) == 1
    assert edge_cost(costs, Point3(7, 0, 1), Point3(8, 0, 1)) == INF


def test_simple_edge_cost():
    c = SimpleCosts([2, 8], [20, 3], [5])
    assert edge_cost(c, Point3(0, 0, 1), Point3(1, 0, 1)) == 2
    assert edge_cost(c, Point3(0, 0, 2), Point3(0, 1, 2)) == 3
    assert edge_cost(c, Point3(0, 0, 2), Point3(0, 0, 1)) == 5


def test_validation():
    with pytest.raises(ValueError):
        SimpleCosts([0], [1], [])
    with pytest.raises(ValueError):
        TileGrid((3, 1), (), 1)
    with pytest.raises(ValueError):
        Rect(2, 1, 0, 0, 1)
    with pytest.raises(ValueError):
        GeneralCosts(TileGrid((1,), (), 1), [[[1]]], [[[1]]], [[[]]])


def test_consistency():
    costs = two_tile_costs()
    assert is_consistent(costs.grid, [Rect(0, 0, 0, 0, 1)])
    assert not is_consistent(costs.grid, [Rect(2, 2, 0, 0, 1)])
    refined = refine_grid(costs, [Rect(2, 2, 0, 0, 1)])
    assert is_consistent(refined.grid, [Rect(2, 2, 0, 0, 1)])
    # already consistent: the grid is untouched
    assert refine_grid(costs, [Rect(0, 0, 0, 0, 1)]) is costs


def test_duplicate_degenerate():
    costs = two_tile_costs()
    r = Rect(1, 3, 1, 1, 1)
    g = refine_grid(costs, [r], duplicate_degenerate=True).grid
    assert g.ys.count(1) == 2
    assert g.xs.count(1) == 1 and g.xs.count(3) == 1


@pytest.mark.parametrize("seed", range(30))
def test_refine_preserves_costs(seed):
    rng = random.Random(seed)
    case = random_general(rng, p_max=4, q_max=4, l_max=3, span=10, refine=False)
    rects = [random_rect(rng, 10, case.costs.l) for _ in range(3)]
    dup = bool(seed % 2)
    refined = refine_grid(case.costs, rects, duplicate_degenerate=dup)
    assert is_consistent(refined.grid, rects)
    assert refined.grid.p <= case.costs.grid.p + 2 * len(rects) * (2 if dup else 1)
    assert refined.distinct_wire_costs() == case.costs.distinct_wire_costs()
    for u, v in all_edges((-2, 12, -2, 12, case.costs.l)):
        assert edge_cost(refined, u, v) == edge_cost(case.costs, u, v), (u, v)
    again = refine_grid(refined, rects)
    assert again.grid == refined.grid


def test_min_costs_lower_bound():
    costs = two_tile_costs()
    m = costs.min_costs()
    assert m.horiz == (1,) and m.vert == (10,)


def test_target_set():
    T = TargetSet([Rect(0, 1, 0, 1, 2)])
    assert T.contains(Point3(1, 1, 2)) and not T.contains(Point3(1, 1, 1))
