import random
from fractions import Fraction

import pytest

from tileroute.envelope import (AffineFn1, AffineFn2, FunctionSet, envelope_build, envelope_query,
                                fnset_insert, naive_min)
from tileroute.model import INF

from .helpers import five_line_scenario, through


def test_insert_drops_two_and_raises_one_key():
    fs, g = five_line_scenario()
    F = FunctionSet(2, 12)
    for f in fs:
        assert F.insert(f).inserted
    before = {p.fn: (p.xl, p.xr, p.key) for p in F.pieces}
    r = F.insert(g)
    assert r.inserted and r.removed_count == 2
    assert {p.fn for p in r.removed} == {fs[2], fs[3]}
    assert [p.fn for p in r.updated] == [fs[1]]
    after = {p.fn: (p.xl, p.xr, p.key) for p in F.pieces}
    assert after[fs[1]][2] > before[fs[1]][2]
    assert after[fs[1]][1] < before[fs[1]][1]  # right end of f2 moves left
    assert after[fs[4]][0] > before[fs[4]][0]  # left end of f5 moves right
    assert after[fs[4]][2] == before[fs[4]][2]
    assert [p.fn for p in F.pieces] == [fs[0], fs[1], g, fs[4]]
    F.check()


def test_dominated_and_duplicates():
    F = FunctionSet(0, 10)
    assert fnset_insert(F, AffineFn1(1, 0)) == (True, 0)
    assert fnset_insert(F, AffineFn1(1, 0)) == (False, 0)
    assert fnset_insert(F, AffineFn1(1, 5)) == (False, 0)
    # touches the envelope in a single point only
    assert fnset_insert(F, AffineFn1(2, 0)) == (False, 0)
    assert fnset_insert(F, AffineFn1(-1, 5)) == (True, 0)
    assert len(F) == 2 and F.value(2) == 2 and F.value(8) == -3
    assert fnset_insert(F, AffineFn1(0, -10)) == (True, 2)


def test_infinite_domain_and_point():
    F = FunctionSet(-INF, 0)
    F.insert(AffineFn1(-2, 0))
    F.insert(AffineFn1(-1, 3))
    assert F.value(-100) == 103 and F.value(0) == 0
    assert [p.key for p in F.pieces] == [6, 0]
    P = FunctionSet(4, 4)
    assert P.insert(AffineFn1(3, 1)).inserted
    assert not P.insert(AffineFn1(0, 13)).inserted
    assert P.insert(AffineFn1(0, 12)).removed_count == 1
    assert P.value(4) == 12


def _random_fn1(rng):
    return AffineFn1(rng.randint(-6, 6), rng.randint(-30, 30))


@pytest.mark.parametrize("seed", range(40))
def test_function_set_matches_naive(seed):
    rng = random.Random(seed)
    for _ in range(50):
        lo = rng.randint(-10, 10)
        hi = lo + rng.randint(0, 12)
        F = FunctionSet(lo, hi)
        inserted = []
        for _ in range(rng.randint(1, 12)):
            keys = {p.uid: p.key for p in F.pieces}
            g = _random_fn1(rng)
            r = F.insert(g)
            inserted.append(g)
            F.check()
            # keys never decrease and at most one survivor's key moves
            for p in F.pieces:
                if p.uid in keys:
                    assert p.key >= keys[p.uid]
            assert len(r.updated) <= 1
            pts = list(range(lo, hi + 1)) + [Fraction(rng.randint(lo * 7, hi * 7), 7)]
            for x in pts:
                assert F.value(x) == min(f(x) for f in inserted)
        assert len(F) <= len({f.slope for f in inserted})


def _random_fn2(rng, span=8):
    return AffineFn2(rng.randint(-span, span), rng.randint(-span, span), rng.randint(-60, 60))


@pytest.mark.parametrize("seed", range(40))
def test_envelope_index_matches_naive(seed):
    rng = random.Random(1000 + seed)
    for _ in range(25):
        x0 = rng.randint(-6, 4)
        y0 = rng.randint(-6, 4)
        bounds = (x0, x0 + rng.randint(1, 8), y0, y0 + rng.randint(1, 8))
        if seed % 3 == 0:
            bounds = (-INF, bounds[1], bounds[2], INF)
        F = [_random_fn2(rng) for _ in range(rng.randint(1, 15))]
        idx = envelope_build(F, bounds)
        xl = bounds[0] if bounds[0] != -INF else bounds[1] - 12
        yh = bounds[3] if bounds[3] != INF else bounds[2] + 12
        for x in range(xl, bounds[1] + 1):
            for y in range(bounds[2], yh + 1):
                assert envelope_query(idx, (x, y)) == naive_min(F, x, y), (x, y)
        x, y = Fraction(rng.randint(0, 70), 7) + xl, Fraction(rng.randint(0, 50), 9) + bounds[2]
        if x <= bounds[1] and y <= yh:
            assert idx.query(x, y) == naive_min(F, x, y)


def test_envelope_far_away_points():
    F = [AffineFn2(1, 0, 0), AffineFn2(-1, 0, 0), AffineFn2(0, 1, -5), AffineFn2(3, -2, 1)]
    idx = envelope_build(F, (-INF, INF, -INF, INF))
    for x, y in [(10 ** 9, 3), (-10 ** 12, 10 ** 11), (7, -10 ** 15), (10 ** 20, 10 ** 20)]:
        assert idx.query(x, y) == naive_min(F, x, y)


def test_envelope_prunes_dominated():
    F = [AffineFn2(0, 0, 0), AffineFn2(0, 0, 5), AffineFn2(1, 1, 3)]
    idx = envelope_build(F, (0, 4, 0, 4))
    assert idx.functions == [AffineFn2(0, 0, 0)]
    with pytest.raises(ValueError):
        envelope_build([AffineFn2(0, 0, INF)], (0, 1, 0, 1))
