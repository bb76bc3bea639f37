import math
import random
from fractions import Fraction

import pytest

from dynds.core_geom import ScaledInt, VisitCounter
from dynds.geom_dyn import (
    HalfspaceSystem,
    SemiOnlineEngine,
    Skyline3DBlock,
    klee_union_volume,
    klee_union_volume_ie,
    maximal3d_flags,
    maximal_flags,
    skyline_oracle,
)


# ---------------- skyline oracles ----------------

def test_maximal_flags_basic():
    pts = [(1, 1, 1), (2, 2, 2), (3, 1, 1), (1, 3, 1)]
    assert maximal_flags(pts) == [False, True, True, True]
    assert skyline_oracle(pts) == 3


def test_maximal_flags_duplicates_kill_each_other():
    pts = [(2, 2, 2), (2, 2, 2), (1, 1, 3)]
    assert maximal_flags(pts) == [False, False, True]
    assert skyline_oracle([(5, 5, 5)] * 3) == 0


def test_maximal3d_matches_scan():
    rng = random.Random(11)
    for trial in range(120):
        n = rng.randint(0, 24)
        hi = rng.choice([3, 6, 20])
        pts = [(rng.randint(1, hi), rng.randint(1, hi), rng.randint(1, hi))
               for _ in range(n)]
        assert maximal3d_flags(pts) == maximal_flags(pts), (trial, pts)


def test_maximal3d_large_agrees():
    rng = random.Random(12)
    pts = [(rng.randint(1, 12), rng.randint(1, 12), rng.randint(1, 12))
           for _ in range(400)]
    assert sum(maximal3d_flags(pts)) == skyline_oracle(pts)


# ---------------- semi-online engine ----------------

class CountBlock:
    # trivial block: answers the number of live elements
    alpha = 1.0
    beta = 1.0

    def preprocess(self, core):
        return len(core)

    def query(self, state, buffer):
        return state + len(buffer)


def test_engine_block_size_default():
    eng = SemiOnlineEngine(CountBlock(), 100)
    assert eng.b == 10
    eng = SemiOnlineEngine(CountBlock(), 100, block_size=4)
    assert eng.b == 4


def test_engine_basic_lifecycle():
    eng = SemiOnlineEngine(CountBlock(), 16, initial=["a", "b"], block_size=3)
    assert eng.query() == 2           # op 1
    eng.insert("c", death=4)          # op 2
    assert eng.query() == 3           # op 3
    eng.delete()                      # op 4 removes "c"
    assert eng.query() == 2           # op 5
    assert sorted(eng.live_elements()) == ["a", "b"]


def test_engine_delete_without_death_errors():
    eng = SemiOnlineEngine(CountBlock(), 8, block_size=2)
    eng.insert("x", death=3)
    with pytest.raises(ValueError, match="op 2"):
        eng.delete()


def test_engine_death_validation():
    eng = SemiOnlineEngine(CountBlock(), 8, block_size=2)
    with pytest.raises(ValueError):
        eng.insert("x", death=1)      # not beyond the current op
    with pytest.raises(ValueError):
        eng.insert("x", death=2.5)
    eng.insert("x", death=9)
    with pytest.raises(ValueError):
        eng.insert("y", death=9)      # death index already taken


def test_engine_windows_and_rebuilds():
    eng = SemiOnlineEngine(CountBlock(), 9, initial=["p"], block_size=3)
    for _ in range(7):
        eng.query()
    # ops 1..7 span windows [1,3], [4,6], [7,9]
    assert eng.rebuilds == 3


def test_engine_core_excludes_doomed():
    eng = SemiOnlineEngine(CountBlock(), 9, block_size=3)
    eng.insert("x", death=6)   # op 1, dies inside window 2
    eng.insert("y", death=11)  # op 2, survives window 2
    eng.insert("z")            # op 3
    assert eng.query() == 3    # op 4, new window: x stays in the buffer
    assert len(eng._buffer) == 1
    assert eng._buffer[0].elem == "x"
    eng.query()                # op 5
    eng.delete()               # op 6
    assert eng.query() == 2


def random_sky_trace(seed, n_ops, hi, block_size):
    rng = random.Random(seed)
    block = Skyline3DBlock()
    init = [(rng.randint(1, hi), rng.randint(1, hi), rng.randint(1, hi))
            for _ in range(rng.randint(0, 8))]
    eng = SemiOnlineEngine(block, 64, initial=init, block_size=block_size)
    live = list(init)
    pending = {}  # death -> point
    op = 0
    while op < n_ops:
        op += 1
        r = rng.random()
        deaths_now = op in pending
        if deaths_now:
            eng.delete()
            live.remove(pending.pop(op))
        elif r < 0.55:
            p = (rng.randint(1, hi), rng.randint(1, hi), rng.randint(1, hi))
            if rng.random() < 0.7:
                d = rng.randint(op + 1, op + 12)
                while d in pending:
                    d += 1
                eng.insert(p, death=d)
                pending[d] = p
            else:
                eng.insert(p)
            live.append(p)
        else:
            got = eng.query()
            want = skyline_oracle(live)
            assert got == want, (seed, op, live, got, want)
    # drain the declared deaths so every announced index is honoured
    for d in sorted(pending):
        while op + 1 < d:
            op += 1
            eng.query()
            assert eng.query is not None
        op += 1
        eng.delete()
        live.remove(pending.pop(d))
    assert sorted(eng.live_elements()) == sorted(live)


@pytest.mark.parametrize("seed", range(10))
def test_skyline_random_traces(seed):
    random_sky_trace(seed, 60, hi=6, block_size=4)


def test_skyline_trace_dense_coords():
    random_sky_trace(99, 80, hi=3, block_size=5)
    random_sky_trace(98, 80, hi=40, block_size=7)


def test_skyline_empty_buffer_query():
    block = Skyline3DBlock()
    eng = SemiOnlineEngine(block, 16, initial=[(1, 2, 3), (3, 2, 1)],
                           block_size=4)
    assert eng.query() == 2


def test_skyline_counter_moves():
    vc = VisitCounter()
    block = Skyline3DBlock(counter=vc)
    eng = SemiOnlineEngine(block, 16, initial=[(1, 1, 1)], block_size=4)
    eng.query()
    assert vc.count > 0


# ---------------- Klee oracles ----------------

def test_klee_single_cube():
    assert klee_union_volume([(2, 2)], 2) == 4
    assert klee_union_volume([(1, 1, 1)], 1) == 1


def test_klee_disjoint_and_overlap():
    # two unit squares sharing half their area
    corners = [(1, 1), (1, Fraction(3, 2))]
    assert klee_union_volume(corners, 1) == Fraction(3, 2)
    assert klee_union_volume_ie(corners, 1) == Fraction(3, 2)
    corners = [(1, 1), (5, 5)]
    assert klee_union_volume(corners, 1) == 2


def test_klee_identical_cubes():
    assert klee_union_volume([(3, 3, 3)] * 4, 2) == 8


def test_klee_empty_and_validation():
    assert klee_union_volume([], 5) == 0
    with pytest.raises(ValueError):
        klee_union_volume([(1, 1)], 0)


def test_klee_scaledint_corners():
    corners = [(ScaledInt(4, 2), ScaledInt(4, 2)), (1, 1)]
    # cube side 2 anchored at (2,2) plus unit... no: both side 3/2
    v = klee_union_volume(corners, Fraction(3, 2))
    assert v == klee_union_volume_ie(corners, Fraction(3, 2))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_klee_matches_inclusion_exclusion(d):
    rng = random.Random(70 + d)
    for _ in range(40):
        m = rng.randint(1, 6)
        side = rng.choice([1, 2, Fraction(1, 2)])
        corners = [tuple(Fraction(rng.randint(0, 8), rng.choice([1, 2]))
                         for _ in range(d)) for _ in range(m)]
        assert klee_union_volume(corners, side) == \
            klee_union_volume_ie(corners, side)


def test_klee_big_coordinates():
    corners = [(10 ** 7, 10 ** 7), (10 ** 7 + 1, 10 ** 7 + 1)]
    assert klee_union_volume(corners, 10 ** 6) == \
        klee_union_volume_ie(corners, 10 ** 6)


# ---------------- halfspace system ----------------

def test_halfspace_basic():
    hs = HalfspaceSystem([(1, 1), (3, 3)])
    hs.insert((1, 0), Fraction(5, 2), "lt")   # x < 2.5
    assert hs.min_count() == 0
    assert hs.depth_oracle() == [1, 0]
    hs.insert((0, 1), 0, "gt")                # y > 0
    assert hs.depth_oracle() == [2, 1]
    assert hs.min_count() == 1
    hs.delete((1, 0), Fraction(5, 2), "lt")
    assert hs.min_count() == 1
    assert hs.size() == 1


def test_halfspace_sense_aliases():
    hs = HalfspaceSystem([(2,)])
    hs.insert((1,), 2, "ge")
    hs.insert((1,), 2, ">=")
    assert hs.size() == 2
    assert hs.min_count() == 2
    hs.delete((1,), 2, "ge")
    assert hs.min_count() == 1
    with pytest.raises(ValueError):
        hs.insert((1,), 2, "weird")


def test_halfspace_delete_absent():
    hs = HalfspaceSystem([(0, 0)])
    with pytest.raises(ValueError):
        hs.delete((1, 0), 0, "lt")


def test_halfspace_empty_points():
    hs = HalfspaceSystem([])
    hs.insert((1, 0), 1, "le")
    with pytest.raises(ValueError):
        hs.min_count()


def test_halfspace_scaledint_offsets():
    hs = HalfspaceSystem([(1,), (2,)])
    hs.insert((1,), ScaledInt(3, 2), "lt")    # x < 1.5
    assert hs.depth_oracle() == [1, 0]


@pytest.mark.parametrize("seed", range(6))
def test_halfspace_random_vs_oracle(seed):
    rng = random.Random(seed)
    pts = [tuple(rng.randint(-3, 3) for _ in range(2))
           for _ in range(rng.randint(1, 7))]
    hs = HalfspaceSystem(pts)
    live = []
    for _ in range(40):
        if live and rng.random() < 0.4:
            trip = live.pop(rng.randrange(len(live)))
            hs.delete(*trip)
        else:
            trip = (tuple(rng.randint(-2, 2) for _ in range(2)),
                    Fraction(rng.randint(-6, 6), rng.choice([1, 2])),
                    rng.choice(["lt", "le", "gt", "ge"]))
            hs.insert(*trip)
            live.append(trip)
        depths = hs.depth_oracle()
        assert hs.min_count() == min(depths)
        assert [hs._counts[i] for i in range(len(pts))] == depths
