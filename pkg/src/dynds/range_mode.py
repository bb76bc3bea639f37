"""Dynamic range mode over labeled points, plus scan oracles and a sequence view.

The structure keeps a count tree per label and a global max tree holding, for
every light label (at most B live occurrences), one entry per axis-aligned box
spanned by that label's coordinate values, valued by the label's count in the
box.  A query takes the best heavy label by direct counting and the best light
entry via a dominance query on the box-boundary coordinates.
"""

from __future__ import annotations

import os
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .core_geom import Box, Interval, RangeTree, VisitCounter, _norm_coord

__all__ = [
    "mode_oracle",
    "batch_dmode_oracle",
    "sequence_mode_oracle",
    "sequence_minority_oracle",
    "DynRangeModeDS",
    "SequenceAdapter",
]


def _debug_on() -> bool:
    return os.environ.get("DYNDS_DEBUG_ASSERT") == "1"


# ---------------- oracles ----------------

def mode_oracle(points, box: Box) -> Optional[Tuple[object, int]]:
    """Mode of the labels of the points inside box, by linear scan.

    points: iterable of (coords, label) occurrences (multiset).  Returns
    (label, frequency) with ties to the smallest label, or None when empty.
    """
    freq = Counter()
    for coords, label in points:
        if box.contains(coords):
            freq[label] += 1
    if not freq:
        return None
    best = min(freq, key=lambda c: (-freq[c], c))
    return best, freq[best]


def batch_dmode_oracle(points, boxes) -> List[Optional[Tuple[object, int]]]:
    return [mode_oracle(points, b) for b in boxes]


def sequence_mode_oracle(values: Sequence, l: int, r: int) -> Tuple[object, int]:
    """Mode of values[l..r], 1-based inclusive, ties to the smallest value."""
    if not 1 <= l <= r <= len(values):
        raise ValueError(f"bad range [{l}, {r}] for length {len(values)}")
    freq = Counter(values[l - 1:r])
    best = min(freq, key=lambda v: (-freq[v], v))
    return best, freq[best]


def sequence_minority_oracle(values: Sequence, l: int, r: int) -> Tuple[object, int]:
    """Least frequent value present in values[l..r], ties to the smallest."""
    if not 1 <= l <= r <= len(values):
        raise ValueError(f"bad range [{l}, {r}] for length {len(values)}")
    freq = Counter(values[l - 1:r])
    best = min(freq, key=lambda v: (freq[v], v))
    return best, freq[best]


# ---------------- dynamic structure ----------------

def _label_lt(a, b) -> bool:
    try:
        return a < b
    except TypeError:
        return repr(a) < repr(b)


class _TieRank:
    """Wraps a label so that larger order means smaller label.

    Stored as the second component of max-tree values: the lexicographic
    max then lands on the smallest label among equal counts, matching the
    oracle tie rule.  Unlike label types fall back to repr order.
    """

    __slots__ = ("label",)

    def __init__(self, label):
        self.label = label

    def __eq__(self, other):
        return self.label == other.label

    def __lt__(self, other):
        return _label_lt(other.label, self.label)

    def __repr__(self):
        return f"_TieRank({self.label!r})"


class DynRangeModeDS:
    """Dynamic d-dimensional range mode over a labeled point multiset."""

    def __init__(self, d: int, n_cap: int, B_override: Optional[int] = None,
                 counter: Optional[VisitCounter] = None):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if n_cap < 1:
            raise ValueError("capacity must be >= 1")
        if B_override is not None and B_override < 1:
            raise ValueError("B override must be >= 1")
        self.d = d
        self.n_cap = n_cap
        self.B = B_override if B_override is not None \
            else max(1, round(n_cap ** (1.0 / (2 * d + 1))))
        self.counter = counter if counter is not None else VisitCounter()
        self.n_live = 0
        self._occ: Dict[object, Counter] = {}          # label -> coords multiset
        self._total: Counter = Counter()               # label -> live count
        self._label_trees: Dict[object, RangeTree] = {}
        self._tkeys: Dict[object, Dict[tuple, int]] = {}  # label -> (coords, copy) -> key
        self.heavy: set = set()
        self._tp = RangeTree(2 * d, mode="max", counter=self.counter)
        self._tp_keys: Dict[tuple, int] = {}           # (label, boxcoords, count) -> key
        self._tp_label: Dict[int, object] = {}
        self._label_box_keys: Dict[object, List[int]] = {}

    # ---------------- updates ----------------

    def _norm(self, coords) -> tuple:
        nc = tuple(_norm_coord(c) for c in coords)
        if len(nc) != self.d:
            raise ValueError("point dimension mismatch")
        return nc

    def _insert_raw(self, nc: tuple, label) -> None:
        if self.n_live >= self.n_cap:
            raise ValueError(f"capacity {self.n_cap} exceeded")
        occ = self._occ.setdefault(label, Counter())
        tree = self._label_trees.get(label)
        if tree is None:
            tree = self._label_trees[label] = RangeTree(
                self.d, mode="count", counter=self.counter)
            self._tkeys[label] = {}
        tkeys = self._tkeys[label]
        occ[nc] += 1
        copy = occ[nc]
        ek = tkeys.get((nc, copy))
        if ek is None:
            (ek,) = tree.extend([(nc, 1)])
            tkeys[(nc, copy)] = ek
        tree.toggle(ek, True)
        self._total[label] += 1
        self.n_live += 1

    def update(self, coords, label, insert: bool) -> None:
        nc = self._norm(coords)
        if insert:
            self._insert_raw(nc, label)
        else:
            occ = self._occ.setdefault(label, Counter())
            if occ[nc] <= 0:
                raise ValueError(f"delete of absent point {coords} label {label!r}")
            copy = occ[nc]
            self._label_trees[label].toggle(self._tkeys[label][(nc, copy)], False)
            occ[nc] -= 1
            if occ[nc] == 0:
                del occ[nc]
            self._total[label] -= 1
            self.n_live -= 1
        self._refresh_label(label)
        if _debug_on():
            self._debug_check()

    def bulk_insert(self, points) -> None:
        """Batch insert regenerating each touched label's boxes only once."""
        touched: Dict[object, None] = {}
        for coords, label in points:
            self._insert_raw(self._norm(coords), label)
            touched.setdefault(label)
        for label in touched:
            self._refresh_label(label)
        if _debug_on():
            self._debug_check()

    def _refresh_label(self, label) -> None:
        """Regenerate the label's light boxes, or clear them when heavy."""
        old = self._label_box_keys.get(label, [])
        for k in old:
            self._tp.toggle(k, False)
        total = self._total[label]
        if total > self.B:
            self.heavy.add(label)
            self._label_box_keys[label] = []
            return
        self.heavy.discard(label)
        occ = self._occ.get(label)
        new_keys: List[int] = []
        if occ:
            axis_vals = [sorted({c[i] for c in occ}) for i in range(self.d)]
            ranges = [[(lo, hi) for li, lo in enumerate(vals) for hi in vals[li:]]
                      for vals in axis_vals]
            missing = []
            for combo in product(*ranges):
                cnt = 0
                for c, m in occ.items():
                    if all(lo <= c[i] <= hi for i, (lo, hi) in enumerate(combo)):
                        cnt += m
                if cnt == 0:
                    continue
                boxcoords = tuple(lo for lo, _ in combo) + tuple(hi for _, hi in combo)
                ek = self._tp_keys.get((label, boxcoords, cnt))
                if ek is None:
                    missing.append((boxcoords, cnt))
                else:
                    new_keys.append(ek)
            if missing:
                keys = self._tp.extend(
                    [(bc, (cnt, _TieRank(label))) for bc, cnt in missing])
                for (bc, cnt), ek in zip(missing, keys):
                    self._tp_keys[(label, bc, cnt)] = ek
                    self._tp_label[ek] = label
                new_keys.extend(keys)
        for k in new_keys:
            self._tp.toggle(k, True)
        self._label_box_keys[label] = new_keys

    # ---------------- queries ----------------

    def query(self, box: Box) -> Optional[Tuple[object, int]]:
        if box.dim != self.d:
            raise ValueError("query box dimension mismatch")
        best: Optional[Tuple[object, int]] = None
        try:
            heavy = sorted(self.heavy)
        except TypeError:
            heavy = sorted(self.heavy, key=repr)
        for label in heavy:
            cnt = self._label_trees[label].count(box)
            if cnt > 0 and (best is None or cnt > best[1]):
                best = (label, cnt)
        ivs = []
        for iv in box.intervals:
            ivs.append(Interval(iv.lo, None, lo_closed=iv.lo_closed))
        for iv in box.intervals:
            ivs.append(Interval(None, iv.hi, hi_closed=iv.hi_closed))
        hit = self._tp.max_entry(Box(ivs))
        if hit is not None:
            (cnt, _), key = hit
            label = self._tp_label[key]
            if cnt > 0 and (best is None or cnt > best[1]
                            or (cnt == best[1] and _label_lt(label, best[0]))):
                best = (label, cnt)
        return best

    # ---------------- maintenance ----------------

    def remap_axis_values(self, mappings: Sequence[dict]) -> None:
        """Order-preserving coordinate relabel, one mapping per axis."""
        if len(mappings) != self.d:
            raise ValueError("need one mapping per axis")

        def remap(nc):
            return tuple(mappings[i][c] for i, c in enumerate(nc))

        self._occ = {lab: Counter({remap(c): m for c, m in occ.items()})
                     for lab, occ in self._occ.items()}
        self._tkeys = {lab: {(remap(c), copy): k for (c, copy), k in tk.items()}
                       for lab, tk in self._tkeys.items()}
        d = self.d
        self._tp_keys = {
            (lab, remap(bc[:d]) + remap(bc[d:]), cnt): k
            for (lab, bc, cnt), k in self._tp_keys.items()}
        for tree in self._label_trees.values():
            for ax in range(d):
                tree.replace_axis_values(ax, mappings[ax])
        for ax in range(d):
            self._tp.replace_axis_values(ax, mappings[ax])
            self._tp.replace_axis_values(d + ax, mappings[ax])

    def _debug_check(self) -> None:
        for label, total in self._total.items():
            occ = self._occ.get(label, Counter())
            assert total == sum(occ.values())
            assert (label in self.heavy) == (total > self.B)
            active = self._label_box_keys.get(label, [])
            if label in self.heavy:
                assert active == []
            else:
                assert len(active) <= (self.B * (self.B + 1) // 2) ** self.d
        assert self.n_live == sum(self._total.values()) <= self.n_cap


# ---------------- sequence view ----------------

class SequenceAdapter:
    """Dynamic sequence with 1-based positional inserts and range mode queries.

    Positions map to dyadic rational keys: each insert takes the midpoint of
    its neighbors, using fixed virtual boundary keys past either end (so
    repeated inserts at an end keep halving toward the boundary).  When a key
    denominator exponent exceeds 64 the keys are re-spaced to integers and
    the backing structure is relabeled in place.
    """

    REBUILD_EXP = 64

    def __init__(self, n_cap: int, B_override: Optional[int] = None,
                 counter: Optional[VisitCounter] = None):
        self.ds = DynRangeModeDS(1, n_cap, B_override=B_override, counter=counter)
        self.keys: List[Fraction] = []
        self.values: List[object] = []
        self._all_keys: set = set()
        self._lo_bound = Fraction(0)
        self._hi_bound = Fraction(2)
        self.rebuilds = 0

    @classmethod
    def from_values(cls, values: Sequence, n_cap: Optional[int] = None,
                    B_override: Optional[int] = None,
                    counter: Optional[VisitCounter] = None) -> "SequenceAdapter":
        """Bulk build with integer keys 1..len (no denominator growth)."""
        seq = cls(n_cap if n_cap is not None else max(1, len(values)),
                  B_override=B_override, counter=counter)
        for i, v in enumerate(values, start=1):
            key = Fraction(i)
            seq.keys.append(key)
            seq.values.append(v)
            seq._all_keys.add(key)
        seq.ds.bulk_insert(((k,), v) for k, v in zip(seq.keys, seq.values))
        seq._hi_bound = Fraction(len(values) + 1)
        return seq

    def __len__(self):
        return len(self.values)

    def insert(self, pos: int, value) -> None:
        n = len(self.values)
        if not 1 <= pos <= n + 1:
            raise ValueError(f"insert position {pos} out of range 1..{n + 1}")
        left = self.keys[pos - 2] if pos >= 2 else self._lo_bound
        right = self.keys[pos - 1] if pos <= n else self._hi_bound
        key = (left + right) / 2
        self.keys.insert(pos - 1, key)
        self.values.insert(pos - 1, value)
        self._all_keys.add(key)
        self.ds.update((key,), value, insert=True)
        if key.denominator.bit_length() - 1 > self.REBUILD_EXP:
            self._rebuild()

    def delete(self, pos: int) -> None:
        n = len(self.values)
        if not 1 <= pos <= n:
            raise ValueError(f"delete position {pos} out of range 1..{n}")
        key = self.keys.pop(pos - 1)
        value = self.values.pop(pos - 1)
        self.ds.update((key,), value, insert=False)

    def query(self, l: int, r: int) -> Tuple[object, int]:
        if not 1 <= l <= r <= len(self.values):
            raise ValueError(f"bad range [{l}, {r}] for length {len(self.values)}")
        got = self.ds.query(Box.closed((self.keys[l - 1],), (self.keys[r - 1],)))
        assert got is not None
        return got

    def _rebuild(self) -> None:
        """Re-space live keys to integers via an order-preserving relabel."""
        self.rebuilds += 1
        live = set(self.keys)
        mapping: Dict[Fraction, Fraction] = {}
        run: List[Fraction] = []
        nxt = 1

        def flush(base):
            t = len(run)
            for s, k in enumerate(run, start=1):
                mapping[k] = base + Fraction(s, t + 1)
            run.clear()

        for k in sorted(self._all_keys):
            if k in live:
                flush(Fraction(nxt - 1))
                mapping[k] = Fraction(nxt)
                nxt += 1
            else:
                run.append(k)
        flush(Fraction(nxt - 1))
        self.ds.remap_axis_values([mapping])
        self.keys = [mapping[k] for k in self.keys]
        self._all_keys = set(mapping.values())
        self._lo_bound = Fraction(0)
        self._hi_bound = Fraction(nxt)

    def max_denominator_exp(self) -> int:
        return max((k.denominator.bit_length() - 1 for k in self.keys), default=0)
