"""Dynamic interval coloring with at most ``3 * omega - 2`` colors.

Public surface:

* :class:`Engine` -- insert/delete intervals, read back ``(level, offset)`` colors
* :class:`IntervalIndex` -- augmented balanced tree with overlap queries
* :mod:`dyncolor.oracles` -- brute-force reference checkers
* :mod:`dyncolor.omv` -- consecutive-ones boolean matrix-vector products
* :mod:`dyncolor.harness` / :mod:`dyncolor.trace` -- trace replay and benchmarks
"""

from .engine import Engine, EngineStats, Recolor
from .errors import (
    BadParams,
    CheckFailed,
    DicError,
    DimensionMismatch,
    DuplicateId,
    FormatError,
    InvalidInterval,
    InvalidQuery,
    ModeViolation,
    NotConsecutiveOnes,
    NotMarked,
    TraceInvalid,
    UnknownId,
)
from .interval_index import Color, Interval, IntervalIndex
from .sls import ArraySls, SlsMode, TreeSls, sls_build

__all__ = [
    "ArraySls", "BadParams", "CheckFailed", "Color", "DicError", "DimensionMismatch",
    "DuplicateId", "Engine", "EngineStats", "FormatError", "Interval", "IntervalIndex",
    "InvalidInterval", "InvalidQuery", "ModeViolation", "NotConsecutiveOnes", "NotMarked",
    "Recolor", "SlsMode", "TraceInvalid", "TreeSls", "UnknownId", "sls_build",
]
__version__ = "0.1.0"
