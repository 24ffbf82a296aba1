"""Update traces: generation and the JSON Lines wire format.

One event per line, keys in fixed order::

    {"op":"insert","id":7,"l":-3,"r":12}
    {"op":"delete","id":7}
"""

from __future__ import annotations

import io
import json
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BadParams, TraceInvalid

KINDS = ("uniform", "nested", "mixed")


@dataclass(frozen=True)
class UpdateEvent:
    op: str
    id: int
    lo: Optional[int] = None
    hi: Optional[int] = None

    @classmethod
    def insert(cls, ident, lo, hi):
        return cls("insert", ident, lo, hi)

    @classmethod
    def delete(cls, ident):
        return cls("delete", ident)

    def to_json(self) -> str:
        if self.op == "insert":
            doc = {"op": "insert", "id": self.id, "l": self.lo, "r": self.hi}
        else:
            doc = {"op": "delete", "id": self.id}
        return json.dumps(doc, separators=(",", ":"))


_INSERT_KEYS = {"op", "id", "l", "r"}
_DELETE_KEYS = {"op", "id"}


def _int_field(doc, key, lineno):
    val = doc[key]
    if type(val) is not int:
        raise TraceInvalid(f"field {key!r} must be an integer", lineno)
    if not -(2**63) <= val < 2**63:
        raise TraceInvalid(f"field {key!r} out of signed 64-bit range", lineno)
    return val


def parse_event(line: str, lineno: Optional[int] = None) -> UpdateEvent:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceInvalid(f"not JSON ({exc.msg})", lineno) from None
    if not isinstance(doc, dict):
        raise TraceInvalid("event must be a JSON object", lineno)
    op = doc.get("op")
    expected = {"insert": _INSERT_KEYS, "delete": _DELETE_KEYS}.get(op)
    if expected is None:
        raise TraceInvalid(f"unknown op {op!r}", lineno)
    if set(doc) != expected:
        extra = sorted(set(doc) - expected)
        missing = sorted(expected - set(doc))
        raise TraceInvalid(f"bad keys for {op}: unexpected {extra}, missing {missing}", lineno)
    ident = _int_field(doc, "id", lineno)
    if op == "delete":
        return UpdateEvent.delete(ident)
    lo, hi = _int_field(doc, "l", lineno), _int_field(doc, "r", lineno)
    if lo > hi:
        raise TraceInvalid(f"interval [{lo}, {hi}] has l > r", lineno)
    return UpdateEvent.insert(ident, lo, hi)


def parse_trace(text_or_file) -> list[UpdateEvent]:
    stream = io.StringIO(text_or_file) if isinstance(text_or_file, str) else text_or_file
    events = []
    for lineno, line in enumerate(stream, 1):
        if not line.strip():
            continue
        events.append(parse_event(line, lineno))
    return events


def serialize_trace(events: Iterable[UpdateEvent]) -> str:
    return "".join(ev.to_json() + "\n" for ev in events)


def read_trace(path) -> list[UpdateEvent]:
    with open(path, encoding="utf-8") as fh:
        return parse_trace(fh)


def write_trace(path, events) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_trace(events))


def validate_trace(events) -> None:
    """Insert ids must be unique; deletes must name a live id."""
    live = set()
    seen = set()
    for pos, ev in enumerate(events, 1):
        if ev.op == "insert":
            if ev.id in seen:
                raise TraceInvalid(f"id {ev.id} inserted twice", pos)
            seen.add(ev.id)
            live.add(ev.id)
        else:
            if ev.id not in live:
                raise TraceInvalid(f"delete of non-live id {ev.id}", pos)
            live.remove(ev.id)


def has_deletes(events) -> bool:
    return any(ev.op == "delete" for ev in events)


def gen(kind: str, n: int, delete_prob: float = 0.0, coord_max: int = 10**6,
        seed: int = 0, max_len: Optional[int] = None, teardown: bool = False) -> list[UpdateEvent]:
    """Generate a valid trace of ``n`` updates, deterministic per ``seed``.

    ``uniform``: ``n`` inserts with left ends uniform on ``[0, coord_max]`` and
    lengths uniform on ``[0, max_len]``.
    ``nested``: ``n`` inserts ``[0, x]`` with ``x`` uniform on ``[0, coord_max]``;
    all of them share the point 0.
    ``mixed``: ``n`` updates; each is a delete of a uniformly chosen live
    interval with probability ``delete_prob`` (when one exists), otherwise an
    insert drawn as for ``uniform``.

    ``teardown`` appends deletes of every interval still live, oldest first.
    """
    if kind not in KINDS:
        raise BadParams(f"unknown kind {kind!r}; expected one of {KINDS}")
    if n < 0 or coord_max < 0:
        raise BadParams("n and coord_max must be non-negative")
    if not 0.0 <= delete_prob <= 1.0:
        raise BadParams("delete_prob must lie in [0, 1]")
    if kind != "mixed" and delete_prob != 0.0:
        raise BadParams(f"{kind} traces are insert-only; use kind=mixed for deletes")
    if max_len is None:
        max_len = max(1, coord_max // 100)
    if max_len < 0:
        raise BadParams("max_len must be non-negative")

    rng = random.Random(seed)
    events: list[UpdateEvent] = []
    live: list[int] = []
    next_id = 1
    for _ in range(n):
        if kind == "mixed" and live and rng.random() < delete_prob:
            k = rng.randrange(len(live))
            live[k], live[-1] = live[-1], live[k]
            events.append(UpdateEvent.delete(live.pop()))
            continue
        if kind == "nested":
            lo, hi = 0, rng.randint(0, coord_max)
        else:
            lo = rng.randint(0, coord_max)
            hi = lo + rng.randint(0, max_len)
        events.append(UpdateEvent.insert(next_id, lo, hi))
        live.append(next_id)
        next_id += 1
    if teardown:
        for ident in sorted(live):
            events.append(UpdateEvent.delete(ident))
    return events
