import heapq
import random

import pytest

from tileroute.model import INF, Point3, Rect, SimpleCosts, TargetSet, edge_cost
from tileroute.oracle import Subgraph, Window, oracle_distances, oracle_subgraph_shortest_path
from tileroute.synth import random_general, random_simple

from .helpers import two_tile_costs


def brute_distances(costs, box: Window, targets):
    """Dijkstra over the box using edge_cost directly."""
    T = TargetSet(targets)
    dist = {}
    heap = [(0, p) for p in box.points() if T.contains(p)]
    heapq.heapify(heap)
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        for dx, dy, dz in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)):
            w = Point3(v.x + dx, v.y + dy, v.z + dz)
            if w in dist or not box.contains(w):
                continue
            c = edge_cost(costs, v, w)
            if c != INF:
                heapq.heappush(heap, (d + c, w))
    return dist


def test_two_tile_distances():
    costs = two_tile_costs()
    dm = oracle_distances(costs, Window(0, 7, 0, 1, 1), [Rect(0, 0, 0, 0, 1)])
    assert dm[Point3(4, 1, 1)] == 18
    assert dm[Point3(2, 1, 1)] == 22
    assert dm[Point3(0, 1, 1)] == 20
    assert dm[Point3(7, 0, 1)] == 11
    # outside tiles are INF, so points beyond the two tiles are unreachable
    dm2 = oracle_distances(costs, Window(-2, 9, -2, 3, 1), [Rect(0, 0, 0, 0, 1)])
    assert dm2[Point3(-1, 0, 1)] == INF
    assert dm2[Point3(4, 2, 1)] == INF


def test_simple_example():
    costs = SimpleCosts([2, 8], [20, 3], [5])
    dm = oracle_distances(costs, Window(0, 4, 0, 3, 2), [Rect(4, 4, 3, 3, 1)])
    assert dm[Point3(0, 0, 1)] == 27


@pytest.mark.parametrize("seed", range(25))
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    case = random_general(rng, p_max=3, q_max=3, l_max=3, span=8) if seed % 2 else \
        random_simple(rng, l_max=3, span=8)
    # a box much larger than the window: any path leaving it is never cheaper
    big = Window(-8, 16, -8, 16, case.window.l)
    ref = brute_distances(case.costs, big, case.targets)
    dm = oracle_distances(case.costs, case.window, case.targets)
    for p in case.window.points():
        assert dm[p] == ref.get(p, INF), p


def test_padding_stability():
    rng = random.Random(7)
    case = random_general(rng, span=10)
    small = oracle_distances(case.costs, case.window, case.targets)
    w = case.window
    wide = oracle_distances(case.costs, Window(w.x_lo - 5, w.x_hi + 5, w.y_lo - 5, w.y_hi + 5, w.l),
                            case.targets)
    assert all(small[p] == wide[p] for p in w.points())


def test_subgraph_path():
    w = Window(0, 4, 0, 2, 1)
    sub = Subgraph.from_window(w, blocked=[Rect(2, 2, 0, 1, 1)])
    costs = SimpleCosts([1], [1], [])
    cost, path = oracle_subgraph_shortest_path(sub, costs, [Point3(0, 0, 1)], [Rect(4, 4, 0, 0, 1)])
    assert cost == 8
    assert path[0] == Point3(0, 0, 1) and path[-1] == Point3(4, 0, 1)
    assert Point3(2, 2, 1) in path
    assert all(p in sub for p in path)
    # determinism
    assert oracle_subgraph_shortest_path(sub, costs, [Point3(0, 0, 1)], [Rect(4, 4, 0, 0, 1)])[1] == path


def test_subgraph_unreachable():
    w = Window(0, 4, 0, 0, 1)
    sub = Subgraph.from_window(w, blocked=[Rect(2, 2, 0, 0, 1)])
    cost, path = oracle_subgraph_shortest_path(sub, SimpleCosts([1], [1], []), [Point3(0, 0, 1)],
                                               [Rect(4, 4, 0, 0, 1)])
    assert cost == INF and path is None
