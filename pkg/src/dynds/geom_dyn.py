"""Semi-online geometric maintenance: skyline counting, Klee volumes, halfspaces.

The engine here handles deletions whose time of death is announced at
insertion.  Work is split into windows of b operations; elements surviving
the whole window are preprocessed into a static core and the rest live in a
small buffer that queries scan against the core.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sortedcontainers import SortedList

from .core_geom import (
    Box,
    Interval,
    RangeTree,
    ScaledInt,
    VisitCounter,
    orthant_union_decompose,
)

__all__ = [
    "skyline_oracle",
    "maximal_flags",
    "maximal3d_flags",
    "SemiOnlineEngine",
    "Skyline3DBlock",
    "klee_union_volume",
    "klee_union_volume_ie",
    "HalfspaceSystem",
]


# ---------------- skyline oracles ----------------

def maximal_flags(points: Sequence[tuple]) -> List[bool]:
    """Quadratic scan; occurrence i is maximal iff no other occurrence
    dominates it coordinatewise (equal duplicates kill each other)."""
    n = len(points)
    out = []
    for i in range(n):
        p = points[i]
        ok = True
        for j in range(n):
            if j != i and all(a <= b for a, b in zip(p, points[j])):
                ok = False
                break
        out.append(ok)
    return out


def skyline_oracle(points: Sequence[tuple]) -> int:
    return sum(maximal_flags(points))


def maximal3d_flags(points: Sequence[tuple]) -> List[bool]:
    """Sweep version of maximal_flags for 3D, O(n log n)."""
    n = len(points)
    order = sorted(range(n), key=lambda i: -points[i][2])
    flags = [False] * n
    # staircase over (x, y): xs ascending, ys strictly descending
    xs: List = []
    ys: List = []
    from bisect import bisect_left, insort

    def dominated(x, y) -> bool:
        # some staircase point has x' >= x and y' >= y
        i = bisect_left(xs, x)
        return i < len(xs) and ys[i] >= y

    def push(x, y):
        i = bisect_left(xs, x)
        if i < len(xs) and ys[i] >= y:
            return
        # drop points with x' <= x and y' <= y
        j = i
        while j > 0 and ys[j - 1] <= y:
            j -= 1
        del xs[j:i], ys[j:i]
        xs.insert(j, x)
        ys.insert(j, y)

    i = 0
    while i < n:
        j = i
        z = points[order[i]][2]
        while j < n and points[order[j]][2] == z:
            j += 1
        group = order[i:j]
        coords = Counter((points[g][0], points[g][1]) for g in group)
        # within the group a distinct (x, y) survives iff it beats every
        # strictly larger x and is the unique max y at its own x
        per_x: Dict = {}
        for (x, y), c in coords.items():
            per_x.setdefault(x, []).append(y)
        surv = set()
        best_y = None
        for x in sorted(per_x, reverse=True):
            ymax = max(per_x[x])
            if (best_y is None or ymax > best_y) and coords[(x, ymax)] == 1:
                surv.add((x, ymax))
            if best_y is None or ymax > best_y:
                best_y = ymax
        for g in group:
            x, y = points[g][0], points[g][1]
            flags[g] = (x, y) in surv and not dominated(x, y)
        for (x, y) in coords:
            push(x, y)
        i = j
    return flags


# ---------------- semi-online engine ----------------

class _Rec:
    __slots__ = ("elem", "death")

    def __init__(self, elem, death):
        self.elem = elem
        self.death = death


class SemiOnlineEngine:
    """Windowed core/buffer driver for deletion-time-announced dynamics.

    problem must expose alpha, beta, preprocess(core_elems) -> state and
    query(state, buffer_elems).  Every call to insert, delete or query is
    one operation; deletions name no element, they remove whichever element
    declared the current operation index as its death.
    """

    def __init__(self, problem, capacity: int, initial: Sequence = (),
                 block_size: Optional[int] = None):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.problem = problem
        self.capacity = capacity
        if block_size is None:
            expo = problem.beta / (1.0 + problem.alpha)
            block_size = max(1, round(capacity ** expo))
        if block_size < 1:
            raise ValueError("block size must be >= 1")
        self.b = block_size
        self.op_index = 0
        self._window_end = 0
        self._death_map: Dict[int, _Rec] = {}
        self._live: List[_Rec] = [_Rec(e, math.inf) for e in initial]
        self._buffer: List[_Rec] = []
        self._state = None
        self.rebuilds = 0

    # elements currently stored, for oracle comparison
    def live_elements(self) -> list:
        return [r.elem for r in self._live]

    def _begin_op(self) -> None:
        self.op_index += 1
        if self.op_index > self._window_end:
            self._window_end = self.op_index + self.b - 1
            core, buf = [], []
            for r in self._live:
                (core if r.death > self._window_end else buf).append(r)
            self._buffer = buf
            self._state = self.problem.preprocess([r.elem for r in core])
            self.rebuilds += 1
        assert len(self._buffer) <= 2 * self.b

    def insert(self, elem, death=math.inf) -> None:
        self._begin_op()
        if death != math.inf:
            if not isinstance(death, int) or death <= self.op_index:
                raise ValueError(
                    f"death index {death!r} must be an int past op {self.op_index}")
            if death in self._death_map:
                raise ValueError(f"death index {death} already taken")
        rec = _Rec(elem, death)
        self._live.append(rec)
        self._buffer.append(rec)
        if death != math.inf:
            self._death_map[death] = rec

    def delete(self) -> None:
        self._begin_op()
        rec = self._death_map.pop(self.op_index, None)
        if rec is None:
            raise ValueError(f"no element dies at op {self.op_index}")
        self._live.remove(rec)
        self._buffer.remove(rec)

    def query(self):
        self._begin_op()
        return self.problem.query(self._state, [r.elem for r in self._buffer])


class Skyline3DBlock:
    """Skyline (maximal point) counting block for the semi-online engine."""

    alpha = 1.0
    beta = 1.0

    def __init__(self, counter: Optional[VisitCounter] = None):
        self.counter = counter if counter is not None else VisitCounter()

    def _tree(self, pts: Sequence[tuple]) -> RangeTree:
        t = RangeTree(3, [(p, 1) for p in pts], mode="count",
                      counter=self.counter)
        for k in range(len(pts)):
            t.toggle(k, True)
        return t

    def preprocess(self, core: Sequence[tuple]):
        flags = maximal3d_flags(core)
        s0 = [p for p, f in zip(core, flags) if f]
        return (len(s0), self._tree(s0), self._tree(core))

    def query(self, state, buffer: Sequence[tuple]) -> int:
        n0, s0_tree, s_tree = state
        bt = self._tree(buffer)
        live = 0
        for p in buffer:
            up = Box([Interval.at_least(c) for c in p])
            if s_tree.count(up) == 0 and bt.count(up) == 1:
                live += 1
        killed = 0
        for box in orthant_union_decompose(list(buffer)):
            killed += s0_tree.count(box)
        return live + n0 - killed


# ---------------- Klee volume oracles ----------------

def _frac(v) -> Fraction:
    if isinstance(v, ScaledInt):
        return v.value
    return Fraction(v)


def klee_union_volume(corners: Sequence[tuple], side) -> Fraction:
    """Exact union volume of equal-side cubes given by their largest corners.

    Compressed-grid sweep: per-axis boundaries, boolean coverage grid,
    integer cell volumes.  Guards the grid size at 1e8 cells.
    """
    if not corners:
        return Fraction(0)
    d = len(corners[0])
    s = _frac(side)
    if s <= 0:
        raise ValueError("side must be positive")
    los = [[_frac(c[i]) - s for c in corners] for i in range(d)]
    his = [[_frac(c[i]) for c in corners] for i in range(d)]
    denom = 1
    for i in range(d):
        for v in los[i] + his[i]:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
    bounds = []
    for i in range(d):
        vs = sorted({int(v * denom) for v in los[i] + his[i]})
        bounds.append(vs)
    cells = 1
    for vs in bounds:
        cells *= max(1, len(vs) - 1)
    if cells > 10 ** 8:
        raise ValueError("compressed grid too large")
    grid = np.zeros([max(1, len(vs) - 1) for vs in bounds], dtype=bool)
    from bisect import bisect_left
    for c in corners:
        sl = []
        for i in range(d):
            lo = int((_frac(c[i]) - s) * denom)
            hi = int(_frac(c[i]) * denom)
            sl.append(slice(bisect_left(bounds[i], lo),
                            bisect_left(bounds[i], hi)))
        grid[tuple(sl)] = True
    lens = [np.diff(np.array(vs, dtype=object)) for vs in bounds]
    big = max(int(l.max()) for l in lens if len(l))
    if big ** d * cells < 10 ** 17:
        lens = [l.astype(np.int64) for l in lens]
    vol = grid
    for i, l in enumerate(lens):
        shape = [1] * d
        shape[i] = len(l)
        vol = vol * l.reshape(shape)
    raw = int(vol.sum()) if vol.dtype != object else sum(vol.flatten().tolist())
    return Fraction(raw, denom ** d)


def klee_union_volume_ie(corners: Sequence[tuple], side) -> Fraction:
    """Inclusion-exclusion union volume; exponential in the cube count."""
    from itertools import combinations
    if not corners:
        return Fraction(0)
    d = len(corners[0])
    s = _frac(side)
    total = Fraction(0)
    m = len(corners)
    for r in range(1, m + 1):
        for sub in combinations(range(m), r):
            v = Fraction(1)
            for i in range(d):
                lo = max(_frac(corners[j][i]) - s for j in sub)
                hi = min(_frac(corners[j][i]) for j in sub)
                if hi <= lo:
                    v = Fraction(0)
                    break
                v *= hi - lo
            total += v if r % 2 == 1 else -v
    return total


# ---------------- halfspace depth over a fixed point set ----------------

_SENSES = {"lt": "lt", "<": "lt", "le": "le", "<=": "le",
           "gt": "gt", ">": "gt", "ge": "ge", ">=": "ge"}


class HalfspaceSystem:
    """Dynamic halfspace multiset over a fixed finite point set.

    Tracks, for every point, how many current halfspaces contain it; the
    minimum of those counts is maintained in a sorted multiset.
    """

    def __init__(self, points: Sequence[tuple],
                 counter: Optional[VisitCounter] = None):
        self.points = [tuple(p) for p in points]
        self.counter = counter if counter is not None else VisitCounter()
        self._counts = [0] * len(self.points)
        self._multiset = SortedList(self._counts)
        self._halfspaces: Counter = Counter()

    @staticmethod
    def _key(normal, offset, sense):
        s = _SENSES.get(sense)
        if s is None:
            raise ValueError(f"bad sense {sense!r}")
        off = offset.value if isinstance(offset, ScaledInt) else Fraction(offset)
        return (tuple(int(a) for a in normal), off, s)

    def _contains(self, key, p) -> bool:
        normal, off, sense = key
        v = sum(a * c for a, c in zip(normal, p))
        if sense == "lt":
            return v < off
        if sense == "le":
            return v <= off
        if sense == "gt":
            return v > off
        return v >= off

    def _apply(self, key, delta: int) -> None:
        for i, p in enumerate(self.points):
            self.counter.add(1)
            if self._contains(key, p):
                self._multiset.remove(self._counts[i])
                self._counts[i] += delta
                self._multiset.add(self._counts[i])

    def insert(self, normal, offset, sense) -> None:
        key = self._key(normal, offset, sense)
        self._halfspaces[key] += 1
        self._apply(key, +1)

    def delete(self, normal, offset, sense) -> None:
        key = self._key(normal, offset, sense)
        if self._halfspaces[key] <= 0:
            raise ValueError("delete of absent halfspace")
        self._halfspaces[key] -= 1
        if self._halfspaces[key] == 0:
            del self._halfspaces[key]
        self._apply(key, -1)

    def size(self) -> int:
        return sum(self._halfspaces.values())

    def min_count(self) -> int:
        if not self.points:
            raise ValueError("no points")
        return self._multiset[0]

    def depth_oracle(self) -> List[int]:
        out = []
        for p in self.points:
            c = 0
            for key, mult in self._halfspaces.items():
                if self._contains(key, p):
                    c += mult
            out.append(c)
        return out
