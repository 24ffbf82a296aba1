"""Trace replay, verification and timing."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import oracles
from .audit import ShadowState, audit_intervals
from .engine import Engine
from .errors import CheckFailed, ModeViolation
from .sls import SlsMode
from .trace import has_deletes, validate_trace

log = logging.getLogger(__name__)

CHECK_LEVELS = ("none", "final", "every_update")
CHECK_NAMES = ("proper", "property_p", "invariant_c", "color_bound", "level_domination")
PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

# An every_update run audits the neighbourhood of each update and, every
# SYNC_EVERY updates, audits the whole state and compares its shadow copy
# against the engine.  The final state always gets both.
SYNC_EVERY = 64


def _zero_timing():
    return {"p50": 0, "p90": 0, "p99": 0, "max": 0}


@dataclass
class Report:
    updates: int = 0
    final_n: int = 0
    omega: int = 0
    colors_used: int = 0
    bound: int = 0
    max_level: Optional[int] = None
    per_update_ns: dict = field(default_factory=_zero_timing)
    checks: dict = field(default_factory=lambda: {c: SKIPPED for c in CHECK_NAMES})
    seed: Optional[int] = None
    mode: str = SlsMode.DYNAMIC.value
    violations: list = field(default_factory=list)
    # bench only
    repeat: Optional[int] = None
    mean_ns: Optional[float] = None
    insert_mean_ns: Optional[float] = None
    delete_mean_ns: Optional[float] = None

    @property
    def failed(self) -> bool:
        return FAIL in self.checks.values()

    def to_dict(self) -> dict:
        doc = asdict(self)
        if self.repeat is None:
            for key in ("repeat", "mean_ns", "insert_mean_ns", "delete_mean_ns"):
                doc.pop(key)
        return doc

    def timing_free(self) -> dict:
        doc = self.to_dict()
        for key in ("per_update_ns", "mean_ns", "insert_mean_ns", "delete_mean_ns"):
            doc.pop(key, None)
        return doc


def percentiles(samples) -> dict:
    if len(samples) == 0:
        return _zero_timing()
    arr = np.asarray(samples, dtype=np.int64)
    p50, p90, p99 = np.percentile(arr, [50, 90, 99])
    return {"p50": int(p50), "p90": int(p90), "p99": int(p99), "max": int(arr.max())}


def _prepare(trace, mode) -> SlsMode:
    mode = SlsMode(mode)
    validate_trace(trace)
    if mode is SlsMode.INCREMENTAL and has_deletes(trace):
        raise ModeViolation("incremental mode cannot replay a trace with deletes")
    return mode


def _summarise(report: Report, engine: Engine) -> None:
    ivs = list(engine.intervals())
    report.final_n = len(ivs)
    report.omega = oracles.omega(ivs)
    report.colors_used = len({iv.color for iv in ivs})
    report.bound = max(3 * report.omega - 2, 0)
    report.max_level = max((iv.level for iv in ivs), default=None)


def run(trace, mode=SlsMode.DYNAMIC, check_level: str = "final", seed=None,
        kt_limit: int = 2000, raise_on_fail: bool = False) -> Report:
    """Replay ``trace`` and verify the coloring at the requested checkpoints.

    ``final`` audits the end state only; ``every_update`` audits the state
    after each update.  Level domination against the direct rule is checked
    for delete-free traces of at most ``kt_limit`` inserts and skipped
    otherwise.
    """
    if check_level not in CHECK_LEVELS:
        raise ValueError(f"check_level must be one of {CHECK_LEVELS}")
    mode = _prepare(trace, mode)
    engine = Engine(mode)
    report = Report(updates=len(trace), seed=seed, mode=mode.value)
    every = check_level == "every_update"
    shadow = ShadowState() if every else None
    failed: set[str] = set()
    samples = []
    levels_at_insert = []
    clock = time.perf_counter_ns

    def note(clause, violations, where):
        if violations:
            failed.add(clause)
            for v in violations[:5]:
                report.violations.append(f"{where}: {v}")

    for step, ev in enumerate(trace, 1):
        if ev.op == "insert":
            t0 = clock()
            color = engine.insert(ev.id, ev.lo, ev.hi)
            samples.append(clock() - t0)
            levels_at_insert.append(color.level)
            if every:
                shadow.insert(ev.id, ev.lo, ev.hi, color)
                touched = [(ev.lo, ev.hi)]
        else:
            t0 = clock()
            changed = engine.delete(ev.id)
            samples.append(clock() - t0)
            if every:
                touched = [shadow.span(ev.id)]
                shadow.delete(ev.id)
                for rc in changed:
                    shadow.recolor(rc.id, rc.new)
                    touched.append(shadow.span(rc.id))
        if every:
            full = step % SYNC_EVERY == 0
            res = shadow.audit() if full else shadow.audit_local(touched)
            for clause in res.failed():
                note(clause, res.violations[clause], f"update {step}")
            if full:
                note("proper", shadow.diff(engine), f"update {step}")

    report.per_update_ns = percentiles(samples)
    _summarise(report, engine)

    if check_level != "none":
        final = audit_intervals(engine.intervals())
        for clause in final.failed():
            note(clause, final.violations[clause], "final")
        note("invariant_c", oracles.check_sls_records(engine) if len(engine) <= kt_limit else [], "final")
        if every:
            note("proper", shadow.diff(engine), "final")
        report.checks = {c: (FAIL if c in failed else PASS) for c in CHECK_NAMES}
        inserts = [(ev.lo, ev.hi) for ev in trace if ev.op == "insert"]
        if has_deletes(trace) or len(inserts) > kt_limit:
            report.checks["level_domination"] = SKIPPED
        else:
            dom = oracles.check_level_domination(inserts, levels_at_insert)
            note("level_domination", dom, "final")
            report.checks["level_domination"] = FAIL if dom else PASS

    if report.failed:
        log.warning("checks failed: %s", [c for c, v in report.checks.items() if v == FAIL])
        if raise_on_fail:
            raise CheckFailed("coloring checks failed", report.violations)
    return report


def _timed_replay(trace, mode):
    engine = Engine(mode)
    clock = time.perf_counter_ns
    ins, dels = [], []
    for ev in trace:
        if ev.op == "insert":
            t0 = clock()
            engine.insert(ev.id, ev.lo, ev.hi)
            ins.append(clock() - t0)
        else:
            t0 = clock()
            engine.delete(ev.id)
            dels.append(clock() - t0)
    return ins, dels


def bench(trace, mode=SlsMode.DYNAMIC, repeat: int = 5, jobs: int = 1, seed=None) -> Report:
    """Time ``repeat`` replays (after one untimed warm-up) with checks off."""
    if repeat < 1:
        raise ValueError("repeat must be at least 1")
    mode = _prepare(trace, mode)
    report = Report(updates=len(trace), seed=seed, mode=mode.value, repeat=repeat)
    _timed_replay(trace, mode)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_timed_replay, [trace] * repeat, [mode] * repeat))
    else:
        runs = [_timed_replay(trace, mode) for _ in range(repeat)]
    ins = [x for r in runs for x in r[0]]
    dels = [x for r in runs for x in r[1]]
    both = ins + dels
    report.per_update_ns = percentiles(both)
    report.mean_ns = float(np.mean(both)) if both else 0.0
    report.insert_mean_ns = float(np.mean(ins)) if ins else 0.0
    report.delete_mean_ns = float(np.mean(dels)) if dels else 0.0

    engine = Engine(mode)
    for ev in trace:
        if ev.op == "insert":
            engine.insert(ev.id, ev.lo, ev.hi)
        else:
            engine.delete(ev.id)
    _summarise(report, engine)
    return report
