"""Dynamic interval coloring with at most ``3 * omega - 2`` colors.

A color is a ``(level, offset)`` pair.  The level of a new interval is the
largest endpoint height found inside it, where the height at endpoint ``t`` is
the smallest level not held by any interval containing ``t``.  Offsets in
``{1, 2, 3}`` then separate the (at most two) same-level neighbours.

Deletions lower the levels of intervals that lost their height witness.  The
only candidates are intervals overlapping the deleted one at a strictly higher
level; they are revisited in ``(level, insertion time)`` order.

State kept by :class:`Engine`:

``live``
    every live interval
``endpoints``
    degenerate ``[t, t]`` entries for each endpoint coordinate of a live
    interval, backed by a per-coordinate occupancy record in ``records``
``levels``
    one :class:`IntervalIndex` per non-empty level
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Optional

from .errors import DuplicateId, InvalidInterval, ModeViolation
from .interval_index import Color, Interval, IntervalIndex
from .sls import SlsMode, sls_build

log = logging.getLogger(__name__)

OFFSETS = (1, 2, 3)


class Recolor(NamedTuple):
    id: int
    old: Color
    new: Color


@dataclass
class EngineStats:
    inserts: int = 0
    deletes: int = 0
    recolored: int = 0
    dirty_seen: int = 0
    endpoint_visits: int = 0
    records_built: int = 0
    records_evicted: int = 0
    # offsets beyond 3 handed out because three same-level neighbours
    # already held 1, 2 and 3 (Property P broken); see _free_offset
    offset_overflows: int = 0


class Engine:
    """Single-writer coloring state machine.

    ``mode`` is fixed at construction: ``incremental`` uses array-backed
    endpoint records and rejects deletes, ``dynamic`` uses sorted-set records
    and supports both operations.
    """

    def __init__(self, mode: SlsMode | str = SlsMode.DYNAMIC):
        self.mode = SlsMode(mode)
        self.live = IntervalIndex()
        self.endpoints = IntervalIndex()
        self.records: dict = {}
        self.levels: dict[int, IntervalIndex] = {}
        self.clock = 0
        self.stats = EngineStats()
        # ids of the last delete's dirty queue, in processing order
        self.last_dirty: list[int] = []
        # called as hook(engine, dirty_ids) once the dirty queue is known,
        # before any interval in it is re-levelled
        self.dirty_hook: Optional[Callable] = None

    def __len__(self) -> int:
        return len(self.live)

    def __contains__(self, ident) -> bool:
        return ident in self.live

    def intervals(self) -> Iterator[Interval]:
        return iter(self.live)

    def color_of(self, ident) -> Color:
        return self.live.get(ident).color

    def record(self, t: int):
        return self.records[t]

    def colors_in_use(self) -> set[Color]:
        return {iv.color for iv in self.live}

    def omega_hint(self) -> int:
        """Number of occupied levels; a lower bound on the clique number."""
        return max(self.levels) + 1 if self.levels else 0

    # -- insertion -------------------------------------------------------

    def insert(self, ident: int, lo: int, hi: int) -> Color:
        if lo > hi:
            raise InvalidInterval(f"interval [{lo}, {hi}] has lo > hi")
        if ident in self.live:
            raise DuplicateId(ident)
        self.clock += 1
        iv = Interval(ident, lo, hi, inserted_at=self.clock)

        # Records for new endpoints are built before iv joins the live set:
        # iv has no level yet and must not contribute to them.
        for t in {lo, hi}:
            self._attach_endpoint(t)
        self.live.insert(iv)

        recs = self._records_within(lo, hi)
        level = max((r.height() for r in recs), default=0)
        for r in recs:
            r.mark(level)

        iv.level = level
        iv.offset = self._free_offset(iv, level)
        self._level_index(level).insert(iv)
        self.stats.inserts += 1
        return iv.color

    def _attach_endpoint(self, t: int) -> None:
        rec = self.records.get(t)
        if rec is None:
            present = {j.level for j in self.live.stab(t)}
            rec = sls_build(present, t, self.mode)
            self.records[t] = rec
            self.endpoints.insert(Interval(t, t, t))
            self.stats.records_built += 1
        rec.refcount += 1

    def _detach_endpoint(self, t: int) -> None:
        rec = self.records[t]
        rec.refcount -= 1
        if rec.refcount == 0:
            del self.records[t]
            self.endpoints.delete(t)
            self.stats.records_evicted += 1

    def _records_within(self, lo: int, hi: int) -> list:
        found = self.endpoints.intersection(lo, hi)
        self.stats.endpoint_visits += len(found)
        records = self.records
        return [records[e.lo] for e in found]

    def _level_index(self, level: int) -> IntervalIndex:
        tree = self.levels.get(level)
        if tree is None:
            tree = self.levels[level] = IntervalIndex()
        return tree

    def _free_offset(self, iv: Interval, level: int) -> int:
        tree = self.levels.get(level)
        if tree is None:
            return 1
        used = {j.offset for j in tree.intersection(iv.lo, iv.hi) if j is not iv}
        for off in OFFSETS:
            if off not in used:
                return off
        # Only reachable once Property P has already failed at this level.
        # Keep the coloring proper with the next free offset and let the
        # checkers report the broken bound rather than aborting mid-update.
        off = len(OFFSETS) + 1
        while off in used:
            off += 1
        self.stats.offset_overflows += 1
        log.warning("interval %s has %d same-level neighbours at level %d; offset %d",
                    iv.id, len(used), level, off)
        return off

    # -- deletion --------------------------------------------------------

    def delete(self, ident: int) -> list[Recolor]:
        """Remove ``ident`` and return every interval whose color changed."""
        if self.mode is not SlsMode.DYNAMIC:
            raise ModeViolation("delete requires a dynamic engine")
        iv = self.live.get(ident)
        self.clock += 1
        lo, hi, gone = iv.lo, iv.hi, iv.level

        tree = self.levels[gone]
        tree.delete(ident)
        self.live.delete(ident)

        for rec in self._records_within(lo, hi):
            if not tree.any_stabs(rec.coord):
                rec.unmark(gone)
        if not tree:
            del self.levels[gone]
        for t in {lo, hi}:
            self._detach_endpoint(t)

        dirty = [j for j in self.live.intersection(lo, hi) if j.level > gone]
        dirty.sort(key=lambda j: (j.level, j.inserted_at))
        self.last_dirty = [j.id for j in dirty]
        self.stats.dirty_seen += len(dirty)
        if self.dirty_hook is not None:
            self.dirty_hook(self, list(self.last_dirty))

        changed = []
        for j in dirty:
            recs = self._records_within(j.lo, j.hi)
            h = max((r.height() for r in recs), default=0)
            if h >= j.level:
                continue
            before = j.color
            prev = j.level
            ptree = self.levels[prev]
            ptree.delete(j.id)
            for r in recs:
                if not ptree.any_stabs(r.coord):
                    r.unmark(prev)
                r.mark(h)
            if not ptree:
                del self.levels[prev]
            j.level = h
            j.offset = self._free_offset(j, h)
            self._level_index(h).insert(j)
            changed.append(Recolor(j.id, before, j.color))

        self.stats.deletes += 1
        self.stats.recolored += len(changed)
        if changed:
            log.debug("delete %s recolored %d of %d dirty", ident, len(changed), len(dirty))
        return changed
