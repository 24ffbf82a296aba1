"""Brute-force ground truth for the coloring engine.

Nothing here imports the engine's algorithms: every function works from plain
interval geometry and colors, and favours obviousness over speed (most checks
are quadratic).  Intervals may be given as objects with ``lo``/``hi`` (plus
``id``/``level``/``offset`` for the color checks) or, where only geometry is
needed, as ``(lo, hi)`` pairs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .interval_index import Color


@dataclass(frozen=True)
class Violation:
    clause: str
    ids: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.clause}: ids={list(self.ids)} {self.detail}".rstrip()


def _bounds(iv):
    if hasattr(iv, "lo"):
        return iv.lo, iv.hi
    lo, hi = iv
    return lo, hi


def _overlap(a, b) -> bool:
    return max(a[0], b[0]) <= min(a[1], b[1])


def omega(intervals) -> int:
    """Clique number of the closed-interval graph, by sweeping endpoints."""
    events = []
    for iv in intervals:
        lo, hi = _bounds(iv)
        events.append((lo, 0))
        events.append((hi, 1))
    # opens sort before closes at equal coordinates: touching intervals meet
    events.sort()
    best = cur = 0
    for _, kind in events:
        if kind == 0:
            cur += 1
            best = max(best, cur)
        else:
            cur -= 1
    return best


def omega_by_stabbing(intervals) -> int:
    """Clique number as the deepest stabbing count over endpoint coordinates."""
    spans = [_bounds(iv) for iv in intervals]
    points = {p for span in spans for p in span}
    return max((sum(lo <= t <= hi for lo, hi in spans) for t in points), default=0)


def kt_colors(history) -> list[Color]:
    """Colors assigned by the direct level/offset rule to ``history`` in order.

    The level of the i-th interval is the smallest ``r`` such that its earlier
    neighbours with level at most ``r`` have clique number at most ``r``; the
    offset is the smallest of 1, 2, 3 unused by earlier same-level neighbours.
    """
    spans = [_bounds(iv) for iv in history]
    colors: list[Color] = []
    for i, cur in enumerate(spans):
        nbrs = [j for j in range(i) if _overlap(spans[j], cur)]
        r = 0
        while omega(spans[j] for j in nbrs if colors[j].level <= r) > r:
            r += 1
        used = {colors[j].offset for j in nbrs if colors[j].level == r}
        free = [o for o in (1, 2, 3) if o not in used]
        if not free:
            raise RuntimeError(f"no free offset for interval #{i + 1} at level {r}")
        colors.append(Color(r, free[0]))
    return colors


def kt_rule_levels(history, levels) -> list[int]:
    """The direct level rule evaluated against *given* earlier levels.

    Entry ``i`` is the smallest ``r`` such that the earlier neighbours of
    interval ``i`` whose level in ``levels`` is at most ``r`` have clique
    number at most ``r``.  With ``levels = [c.level for c in kt_colors(h)]``
    this reproduces the direct rule; with an engine's own levels it gives the
    bound that an engine level can be compared against one step at a time.
    """
    spans = [_bounds(iv) for iv in history]
    out = []
    for i, cur in enumerate(spans):
        nbrs = [j for j in range(i) if _overlap(spans[j], cur)]
        r = 0
        while omega(spans[j] for j in nbrs if levels[j] <= r) > r:
            r += 1
        out.append(r)
    return out


def kt_level(history, i: int) -> int:
    """Level of the ``i``-th interval of ``history`` (counted from 1)."""
    if not 1 <= i <= len(history):
        raise IndexError(i)
    return kt_colors(list(history)[:i])[i - 1].level


def kt_offset(history, i: int) -> int:
    if not 1 <= i <= len(history):
        raise IndexError(i)
    return kt_colors(list(history)[:i])[i - 1].offset


def _intersecting_pairs(ivs):
    ordered = sorted(ivs, key=lambda iv: (iv.lo, iv.hi))
    for a in range(len(ordered)):
        x = ordered[a]
        for b in range(a + 1, len(ordered)):
            y = ordered[b]
            if y.lo > x.hi:
                break
            yield x, y


def check_proper(intervals) -> list[Violation]:
    out = []
    for x, y in _intersecting_pairs(list(intervals)):
        if (x.level, x.offset) == (y.level, y.offset):
            out.append(Violation("proper", (x.id, y.id), f"share color {(x.level, x.offset)}"))
    return out


def check_property_p(intervals) -> list[Violation]:
    ivs = list(intervals)
    out = []
    by_level: dict[int, list] = {}
    for iv in ivs:
        by_level.setdefault(iv.level, []).append(iv)
    for level, group in sorted(by_level.items()):
        degree = {iv.id: 0 for iv in group}
        for x, y in _intersecting_pairs(group):
            if level == 0:
                out.append(Violation("level0_independent", (x.id, y.id)))
                continue
            degree[x.id] += 1
            degree[y.id] += 1
            if (x.lo <= y.lo and y.hi <= x.hi) or (y.lo <= x.lo and x.hi <= y.hi):
                out.append(Violation("containment", (x.id, y.id), f"level {level}"))
        for ident, deg in degree.items():
            if deg > 2:
                out.append(Violation("degree", (ident,), f"{deg} neighbours at level {level}"))
    return out


def check_color_bound(intervals) -> list[Violation]:
    ivs = list(intervals)
    used = len({(iv.level, iv.offset) for iv in ivs})
    w = omega(ivs)
    if used > max(3 * w - 2, 0):
        return [Violation("color_bound", (), f"{used} colors > 3*{w}-2")]
    return []


def endpoint_heights(intervals) -> dict[int, int]:
    """Height at every endpoint: the smallest level absent among intervals containing it."""
    ivs = list(intervals)
    heights = {}
    for t in sorted({p for iv in ivs for p in (iv.lo, iv.hi)}):
        present = {iv.level for iv in ivs if iv.lo <= t <= iv.hi}
        h = 0
        while h in present:
            h += 1
        heights[t] = h
    return heights


def check_invariant_c(state) -> list[Violation]:
    """Every interval must contain an endpoint whose height reaches its level.

    ``state`` is an engine (anything with ``intervals()``) or an iterable of
    intervals.
    """
    ivs = list(state.intervals()) if hasattr(state, "intervals") else list(state)
    heights = endpoint_heights(ivs)
    coords = sorted(heights)
    out = []
    for iv in ivs:
        a = bisect.bisect_left(coords, iv.lo)
        b = bisect.bisect_right(coords, iv.hi)
        best = max((heights[t] for t in coords[a:b]), default=0)
        if best < iv.level:
            out.append(Violation("invariant_c", (iv.id,), f"level {iv.level} > max height {best}"))
    return out


def check_sls_records(engine) -> list[Violation]:
    """The engine's endpoint records must mirror the live intervals exactly."""
    ivs = list(engine.intervals())
    expected = {p for iv in ivs for p in (iv.lo, iv.hi)}
    out = []
    have = set(engine.records)
    for t in sorted(expected ^ have):
        out.append(Violation("endpoint_set", (t,), "missing" if t in expected else "stale"))
    refs: dict[int, int] = {}
    for iv in ivs:
        for p in {iv.lo, iv.hi}:
            refs[p] = refs.get(p, 0) + 1
    heights = endpoint_heights(ivs)
    for t in sorted(expected & have):
        rec = engine.records[t]
        present = {iv.level for iv in ivs if iv.lo <= t <= iv.hi}
        if rec.occupied() != present:
            out.append(Violation("sls_levels", (t,), f"{sorted(rec.occupied())} != {sorted(present)}"))
        if rec.height() != heights[t]:
            out.append(Violation("sls_height", (t,), f"{rec.height()} != {heights[t]}"))
        if rec.refcount != refs[t]:
            out.append(Violation("sls_refcount", (t,), f"{rec.refcount} != {refs[t]}"))
    return out


def check_all(state) -> dict[str, list[Violation]]:
    ivs = list(state.intervals()) if hasattr(state, "intervals") else list(state)
    return {
        "proper": check_proper(ivs),
        "property_p": check_property_p(ivs),
        "invariant_c": check_invariant_c(ivs),
        "color_bound": check_color_bound(ivs),
    }


def check_level_domination(history, levels, reference: str = "direct") -> list[Violation]:
    """Each engine level must not exceed the direct rule's level (insert-only runs).

    ``history`` lists the inserted intervals in arrival order; ``levels`` holds
    the engine level each one received at insertion.  ``reference="direct"``
    compares against an independent run of the direct rule (its own earlier
    levels); ``reference="own"`` evaluates the rule over the engine's earlier
    levels instead.  Ids in the violations are 1-based arrival positions.
    """
    if reference == "direct":
        ref = [c.level for c in kt_colors(history)]
    elif reference == "own":
        ref = kt_rule_levels(history, levels)
    else:
        raise ValueError(f"unknown reference {reference!r}")
    out = []
    for i, (mine, bound) in enumerate(zip(levels, ref)):
        if mine > bound:
            out.append(Violation("level_domination", (i + 1,), f"level {mine} > {reference} rule {bound}"))
    return out
