"""Vectorised whole-state checks for long replays.

The brute-force checkers in :mod:`dyncolor.oracles` are quadratic and only
practical on small states.  :func:`audit_arrays` verifies the same four
properties (proper coloring, level structure, height witnesses, color bound)
in ``O(n log n + n * levels)`` numpy work so that a replay can be audited after
every single update.  It shares no code with the engine.

:class:`ShadowState` keeps the auditor's own copy of the live intervals,
updated from the trace and the engine's reported recolorings.  Comparing it
against the engine (``diff``) catches any color change the engine failed to
report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .oracles import Violation

CLAUSES = ("proper", "property_p", "invariant_c", "color_bound")


@dataclass
class AuditResult:
    omega: int
    colors_used: int
    violations: dict = field(default_factory=lambda: {c: [] for c in CLAUSES})

    @property
    def bound(self) -> int:
        return max(3 * self.omega - 2, 0)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def failed(self) -> list[str]:
        return [c for c in CLAUSES if self.violations[c]]


def audit_arrays(lo, hi, level, offset, ids=None, focus=None) -> AuditResult:
    """Check all four clauses on the given state.

    ``focus`` (a boolean mask) limits the per-interval clauses -- same-level
    degree and Invariant C -- to the selected intervals; pairwise clauses are
    always checked in full.  It exists for windowed audits, where intervals
    near the window edge have neighbours outside it.
    """
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    level = np.asarray(level, dtype=np.int64)
    offset = np.asarray(offset, dtype=np.int64)
    n = lo.size
    ids = np.arange(n) if ids is None else np.asarray(ids)
    if n == 0:
        return AuditResult(0, 0)

    # rank-compress coordinates; every rank is some interval's endpoint
    coords, inv = np.unique(np.concatenate([lo, hi]), return_inverse=True)
    lo_r, hi_r = inv[:n], inv[n:]
    m = coords.size

    # offsets are normally 1..3, but a broken state may carry larger ones
    code = level * (int(offset.max()) + 1) + offset
    res = AuditResult(_omega(lo_r, hi_r), int(np.unique(code).size))

    if res.colors_used > res.bound:
        res.violations["color_bound"].append(
            Violation("color_bound", (), f"{res.colors_used} colors > 3*{res.omega}-2")
        )

    # proper: within one color class sorted by lo, any overlap shows up
    # between neighbours in that order
    order = np.lexsort((lo_r, code))
    c, l, h = code[order], lo_r[order], hi_r[order]
    bad = np.flatnonzero((c[1:] == c[:-1]) & (l[1:] <= h[:-1]))
    for k in bad:
        res.violations["proper"].append(
            Violation("proper", (ids[order[k]].item(), ids[order[k + 1]].item()))
        )

    focus = np.ones(n, dtype=bool) if focus is None else np.asarray(focus, dtype=bool)
    _property_p(res, lo_r, hi_r, level, ids, m, focus)
    _invariant_c(res, lo_r, hi_r, level, ids, m, focus)
    return res


def _omega(lo_r, hi_r) -> int:
    ev = np.sort(np.concatenate([lo_r * 2, hi_r * 2 + 1]))
    depth = np.cumsum(np.where(ev % 2 == 0, 1, -1))
    return int(depth.max())


def _property_p(res, lo_r, hi_r, level, ids, m, focus):
    out = res.violations["property_p"]
    span = m + 1
    order = np.lexsort((lo_r, level))
    lv, l, h = level[order], lo_r[order], hi_r[order]
    zero = np.flatnonzero((lv[1:] == 0) & (lv[:-1] == 0) & (l[1:] <= h[:-1]))
    for k in zero:
        out.append(Violation("level0_independent", (ids[order[k]].item(), ids[order[k + 1]].item())))

    lo_key = level * span + lo_r
    hi_key = level * span + hi_r
    base = level * span
    sorted_lo = np.sort(lo_key)
    sorted_hi = np.sort(hi_key)
    starts_before_end = np.searchsorted(sorted_lo, base + hi_r, "right") - np.searchsorted(sorted_lo, base, "left")
    ends_before_start = np.searchsorted(sorted_hi, base + lo_r, "left") - np.searchsorted(sorted_hi, base, "left")
    degree = starts_before_end - ends_before_start - 1
    for k in np.flatnonzero((level > 0) & (degree > 2) & focus):
        out.append(Violation("degree", (ids[k].item(),), f"{int(degree[k])} neighbours at level {int(level[k])}"))

    # sorted by (level, lo, -hi): an interval is contained in an earlier
    # same-level one iff the running max of hi before it reaches its hi
    order = np.lexsort((-hi_r, lo_r, level))
    val = hi_key[order]
    prev = np.concatenate([[-1], np.maximum.accumulate(val)[:-1]])
    for k in np.flatnonzero((prev >= val) & (level[order] > 0)):
        out.append(Violation("containment", (ids[order[k]].item(),), f"level {int(level[order[k]])}"))


def _invariant_c(res, lo_r, hi_r, level, ids, m, focus):
    top = int(level.max())
    height = np.full(m, top + 1, dtype=np.int64)
    open_ = np.ones(m, dtype=bool)
    for k in range(top + 1):
        sel = level == k
        diff = np.bincount(lo_r[sel], minlength=m + 1) - np.bincount(hi_r[sel] + 1, minlength=m + 1)
        covered = np.cumsum(diff)[:m] > 0
        gap = open_ & ~covered
        height[gap] = k
        open_ &= covered
        if not open_.any():
            break

    best = _range_max(height, lo_r, hi_r)
    for k in np.flatnonzero((best < level) & focus):
        res.violations["invariant_c"].append(
            Violation("invariant_c", (ids[k].item(),), f"level {int(level[k])} > max height {int(best[k])}")
        )


def _range_max(values, lo, hi):
    """max(values[lo[i]:hi[i]+1]) for every i, via a sparse table."""
    table = [values]
    width = 1
    while width * 2 <= values.size:
        prev = table[-1]
        table.append(np.maximum(prev[:-width], prev[width:]))
        width *= 2
    length = hi - lo + 1
    k = np.floor(np.log2(length)).astype(np.int64)
    out = np.empty(lo.size, dtype=values.dtype)
    for j in np.unique(k):
        sel = k == j
        row = table[j]
        out[sel] = np.maximum(row[lo[sel]], row[hi[sel] - (1 << j) + 1])
    return out


def audit_intervals(intervals) -> AuditResult:
    ivs = list(intervals)
    return audit_arrays(
        [iv.lo for iv in ivs],
        [iv.hi for iv in ivs],
        [iv.level for iv in ivs],
        [iv.offset for iv in ivs],
        [iv.id for iv in ivs],
    )


class ShadowState:
    """Slot-array copy of the live intervals and their colors.

    Besides the full :meth:`audit`, :meth:`audit_local` re-checks only the
    neighbourhood of an update.  It relies on geometry alone: heights change
    only at points inside the inserted, deleted or recolored spans, so
    new violations can only involve intervals meeting those spans.  It
    therefore detects every violation that an update introduces into a
    previously clean state; periodic full audits cover the rest.
    """

    def __init__(self, capacity: int = 64):
        self._slot: dict[int, int] = {}
        self._free: list[int] = []
        self.lo = np.zeros(capacity, dtype=np.int64)
        self.hi = np.zeros(capacity, dtype=np.int64)
        self.level = np.zeros(capacity, dtype=np.int64)
        self.offset = np.zeros(capacity, dtype=np.int64)
        self.ids = np.zeros(capacity, dtype=np.int64)
        self.alive = np.zeros(capacity, dtype=bool)
        self._used = 0
        self._colors: dict[tuple, int] = {}

    def __len__(self):
        return len(self._slot)

    def _grow(self):
        cap = self.lo.size * 2
        for name in ("lo", "hi", "level", "offset", "ids", "alive"):
            old = getattr(self, name)
            new = np.zeros(cap, dtype=old.dtype)
            new[: old.size] = old
            setattr(self, name, new)

    def insert(self, ident, lo, hi, color):
        if self._free:
            s = self._free.pop()
        else:
            if self._used == self.lo.size:
                self._grow()
            s = self._used
            self._used += 1
        self._slot[ident] = s
        self.lo[s], self.hi[s], self.ids[s] = lo, hi, ident
        self.level[s], self.offset[s] = color
        self.alive[s] = True
        self._count(color, 1)

    def delete(self, ident):
        s = self._slot.pop(ident)
        self.alive[s] = False
        self._free.append(s)
        self._count(self.color(ident, s), -1)

    def recolor(self, ident, color):
        s = self._slot[ident]
        self._count(self.color(ident, s), -1)
        self.level[s], self.offset[s] = color
        self._count(color, 1)

    def _count(self, color, delta):
        key = (int(color[0]), int(color[1]))
        left = self._colors.get(key, 0) + delta
        if left:
            self._colors[key] = left
        else:
            del self._colors[key]

    @property
    def colors_used(self) -> int:
        return len(self._colors)

    def span(self, ident) -> tuple[int, int]:
        s = self._slot[ident]
        return int(self.lo[s]), int(self.hi[s])

    def color(self, ident, slot=None):
        s = self._slot[ident] if slot is None else slot
        return int(self.level[s]), int(self.offset[s])

    def audit(self) -> AuditResult:
        idx = np.flatnonzero(self.alive[: self._used])
        return audit_arrays(self.lo[idx], self.hi[idx], self.level[idx], self.offset[idx], self.ids[idx])

    def audit_local(self, spans) -> AuditResult:
        """Audit the neighbourhood of ``spans`` (the ``(lo, hi)`` of every
        inserted, deleted or recolored interval of one update).

        The color bound is always evaluated globally.
        """
        n = self._used
        lo, hi, alive = self.lo[:n], self.hi[:n], self.alive[:n]
        near = np.zeros(n, dtype=bool)
        for a, b in spans:
            near |= (lo <= b) & (hi >= a)
        near &= alive
        if not near.any():
            res = AuditResult(0, self.colors_used)
        else:
            # widen to everything meeting the hull of the touched intervals so
            # that each touched interval sees all of its neighbours
            a = min(int(lo[near].min()), min(x for x, _ in spans))
            b = max(int(hi[near].max()), max(y for _, y in spans))
            idx = np.flatnonzero(alive & (lo <= b) & (hi >= a))
            res = audit_arrays(lo[idx], hi[idx], self.level[idx], self.offset[idx],
                               self.ids[idx], focus=near[idx])
        res.violations["color_bound"] = []
        res.colors_used = self.colors_used
        if res.colors_used > res.bound:
            # the window's clique only bounds the true one from below
            res.omega = self.omega()
            if res.colors_used > res.bound:
                res.violations["color_bound"].append(
                    Violation("color_bound", (), f"{res.colors_used} colors > 3*{res.omega}-2")
                )
        return res

    def omega(self) -> int:
        idx = np.flatnonzero(self.alive[: self._used])
        if idx.size == 0:
            return 0
        _, inv = np.unique(np.concatenate([self.lo[idx], self.hi[idx]]), return_inverse=True)
        return _omega(inv[: idx.size], inv[idx.size:])

    def diff(self, engine) -> list[Violation]:
        """Disagreements between this copy and the engine's live intervals."""
        out = []
        seen = 0
        for iv in engine.intervals():
            seen += 1
            s = self._slot.get(iv.id)
            if s is None:
                out.append(Violation("shadow", (iv.id,), "unknown to shadow"))
                continue
            mine = (int(self.lo[s]), int(self.hi[s]), int(self.level[s]), int(self.offset[s]))
            theirs = (iv.lo, iv.hi, iv.level, iv.offset)
            if mine != theirs:
                out.append(Violation("shadow", (iv.id,), f"shadow {mine} != engine {theirs}"))
        if seen != len(self._slot):
            out.append(Violation("shadow", (), f"engine has {seen} intervals, shadow {len(self._slot)}"))
        return out
