import random
from fractions import Fraction

import pytest

from tileroute.envelope import AffineFn1
from tileroute.general import (GeneralOracle, arborescence, build_query_structure, general_potential_for,
                               general_query, label_segments, out_degree)
from tileroute.model import INF, Point3, Rect, refine_grid
from tileroute.oracle import Window, oracle_distances
from tileroute.synth import random_general

from .helpers import two_tile_costs


def _finite(F):
    return [(p.fn, p.xl, p.xr) for p in F.pieces]


def test_two_tile_labels():
    costs = two_tile_costs()
    T = [Rect(0, 0, 0, 0, 1)]
    L = label_segments(costs, T)
    assert _finite(L.hor[1, 1, 0]) == [(AffineFn1(2, 0), 0, 4)]
    assert _finite(L.hor[2, 1, 0]) == [(AffineFn1(1, 4), 4, 7)]
    assert _finite(L.hor[1, 2, 0]) == [(AffineFn1(2, 20), 0, Fraction(3, 2)),
                                      (AffineFn1(-2, 26), Fraction(3, 2), 4)]
    assert _finite(L.hor[2, 2, 0]) == [(AffineFn1(1, 14), 4, 7)]
    o = build_query_structure(L, costs, T)
    assert general_query(o, Point3(4, 1, 1)) == 18
    assert general_query(o, Point3(2, 1, 1)) == 22
    assert general_query(o, Point3(0, 1, 1)) == 20
    assert general_query(o, Point3(-1, 0, 1)) == INF


def test_inconsistent_targets_rejected():
    with pytest.raises(ValueError):
        label_segments(two_tile_costs(), [Rect(2, 2, 0, 0, 1)])


def test_arborescence_splits():
    assert out_degree(39, Fraction(1, 3)) == 4
    root = arborescence(39, Fraction(1, 3))
    assert root.ranges() == [(1, 10), (11, 20), (21, 30), (31, 39)]
    assert root.children[2].ranges() == [(21, 23), (24, 26), (27, 28), (29, 30)]

    def depth(n):
        return 0 if not n.children else 1 + max(depth(c) for c in n.children)
    assert depth(root) <= 3
    with pytest.raises(ValueError):
        arborescence(4, 0)


@pytest.mark.parametrize("seed", range(40))
def test_matches_oracle(seed):
    rng = random.Random(seed)
    case = random_general(rng, p_max=4, q_max=4, l_max=4, span=10)
    eps = [Fraction(1, 2), Fraction(1, 3), Fraction(1)][seed % 3]
    o = GeneralOracle(case.costs, case.targets, eps)
    assert o.labels.stats_h.within_bounds() and o.labels.stats_v.within_bounds()
    dm = oracle_distances(case.costs, case.window, case.targets)
    for p in case.window.points():
        assert o.query(p) == dm[p], p


def test_potential_for_refines():
    rng = random.Random(3)
    case = random_general(rng, span=10, refine=False)
    pot = general_potential_for(case.costs, case.targets)
    dm = oracle_distances(case.costs, case.window, case.targets)
    for p in case.window.points():
        assert pot(p) == dm[p]


def test_duplicated_coordinates():
    costs = refine_grid(two_tile_costs(), [Rect(1, 3, 1, 1, 1), Rect(5, 5, 0, 1, 1)],
                        duplicate_degenerate=True)
    T = [Rect(0, 0, 0, 0, 1), Rect(7, 7, 1, 1, 1)]
    o = GeneralOracle(refine_grid(costs, T), T)
    window = Window(-1, 8, -1, 2, 1)
    dm = oracle_distances(costs, window, T)
    for p in window.points():
        assert o.query(p) == dm[p]
