"""Per-endpoint level occupancy records ("supporting line segments").

For an endpoint ``t`` a record tracks which levels are held by intervals
containing ``t``.  Its height is the smallest level nobody at ``t`` holds.
Every record tracks a gap-free prefix ``{0, ..., ceiling - 1}`` of levels,
split into ``occupied`` and ``vacant``; marking a level above the ceiling pads
the skipped levels into ``vacant``.

Two backends share the same surface:

* :class:`ArraySls` (incremental runs): a growable occupancy byte-array plus an
  intrusive, ascending free-slot list whose head is the height.  Heights are
  O(1); marks are amortised O(1).  Levels never vacate, so ``unmark`` raises.
* :class:`TreeSls` (fully dynamic runs): two sorted sets, occupied and vacant.
  Every operation is O(log w) for w tracked levels.
"""

from __future__ import annotations

import enum

from sortedcontainers import SortedList

from .errors import ModeViolation, NotMarked

_NIL = -1


class SlsMode(str, enum.Enum):
    INCREMENTAL = "incremental"
    DYNAMIC = "dynamic"


class ArraySls:
    __slots__ = ("coord", "refcount", "_bits", "_next", "_prev", "_head", "_tail", "_ceiling")

    mode = SlsMode.INCREMENTAL

    def __init__(self, coord: int, capacity: int = 4):
        self.coord = coord
        self.refcount = 0
        capacity = max(capacity, 1)
        self._bits = bytearray(capacity)
        # handle arrays of the free-slot list; only meaningful for vacant slots
        self._next = [_NIL] * capacity
        self._prev = [_NIL] * capacity
        self._head = _NIL
        self._tail = _NIL
        self._ceiling = 0

    def height(self) -> int:
        return self._head if self._head != _NIL else self._ceiling

    @property
    def ceiling(self) -> int:
        return self._ceiling

    def _grow(self, need: int) -> None:
        cap = len(self._bits)
        if need <= cap:
            return
        while cap < need:
            cap *= 2
        extra = cap - len(self._bits)
        self._bits.extend(bytes(extra))
        self._next.extend([_NIL] * extra)
        self._prev.extend([_NIL] * extra)

    def _append_free(self, q: int) -> None:
        self._prev[q] = self._tail
        self._next[q] = _NIL
        if self._tail == _NIL:
            self._head = q
        else:
            self._next[self._tail] = q
        self._tail = q

    def _unlink(self, q: int) -> None:
        p, n = self._prev[q], self._next[q]
        if p == _NIL:
            self._head = n
        else:
            self._next[p] = n
        if n == _NIL:
            self._tail = p
        else:
            self._prev[n] = p

    def mark(self, level: int) -> None:
        if level < self._ceiling:
            if self._bits[level]:
                return
            self._unlink(level)
            self._bits[level] = 1
            return
        self._grow(level + 1)
        for q in range(self._ceiling, level):
            self._append_free(q)
        self._bits[level] = 1
        self._ceiling = level + 1

    def unmark(self, level: int) -> None:
        raise ModeViolation("levels never vacate in an incremental record")

    def is_marked(self, level: int) -> bool:
        return level < self._ceiling and bool(self._bits[level])

    def occupied(self) -> set[int]:
        return {q for q in range(self._ceiling) if self._bits[q]}

    def vacant(self) -> list[int]:
        out = []
        q = self._head
        while q != _NIL:
            out.append(q)
            q = self._next[q]
        return out

    def __repr__(self):
        return f"ArraySls(coord={self.coord}, occupied={sorted(self.occupied())}, height={self.height()})"


class TreeSls:
    __slots__ = ("coord", "refcount", "_occupied", "_vacant", "_ceiling")

    mode = SlsMode.DYNAMIC

    def __init__(self, coord: int):
        self.coord = coord
        self.refcount = 0
        self._occupied = SortedList()
        self._vacant = SortedList()
        self._ceiling = 0

    def height(self) -> int:
        if self._vacant:
            return self._vacant[0]
        if self._occupied:
            return self._occupied[-1] + 1
        return 0

    @property
    def ceiling(self) -> int:
        return self._ceiling

    def mark(self, level: int) -> None:
        if level in self._occupied:
            return
        if level >= self._ceiling:
            self._vacant.update(range(self._ceiling, level))
            self._ceiling = level + 1
        else:
            self._vacant.remove(level)
        self._occupied.add(level)

    def unmark(self, level: int) -> None:
        if level not in self._occupied:
            raise NotMarked(f"level {level} not occupied at {self.coord}")
        self._occupied.remove(level)
        self._vacant.add(level)

    def is_marked(self, level: int) -> bool:
        return level in self._occupied

    def occupied(self) -> set[int]:
        return set(self._occupied)

    def vacant(self) -> list[int]:
        return list(self._vacant)

    def __repr__(self):
        return f"TreeSls(coord={self.coord}, occupied={list(self._occupied)}, height={self.height()})"


def sls_build(levels_present, coord: int, mode: SlsMode = SlsMode.DYNAMIC):
    """Fresh record for ``coord`` given the levels of intervals stabbing it.

    ``occupied`` becomes exactly ``levels_present`` and ``vacant`` the levels
    below its maximum that are missing.  ``refcount`` starts at 0; the caller
    owns it.
    """
    levels = sorted(set(levels_present))
    if levels and levels[0] < 0:
        raise ValueError("levels are non-negative")
    if SlsMode(mode) is SlsMode.INCREMENTAL:
        rec = ArraySls(coord, capacity=_pow2_at_least(levels[-1] + 1 if levels else 1))
        for level in levels:
            rec.mark(level)
        return rec
    rec = TreeSls(coord)
    if levels:
        present = set(levels)
        rec._occupied.update(levels)
        rec._vacant.update(q for q in range(levels[-1]) if q not in present)
        rec._ceiling = levels[-1] + 1
    return rec


def _pow2_at_least(n: int) -> int:
    cap = 1
    while cap < n:
        cap *= 2
    return cap
