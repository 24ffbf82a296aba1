"""Online boolean matrix-vector products for consecutive-ones instances.

When every matrix row and every query vector has its 1s in one contiguous
block, row ``i`` of ``M @ v`` (AND/OR semiring) is 1 exactly when the column
span of row ``i`` meets the span of ``v``.  Building an interval index over the
row spans once lets each product be answered by a single overlap query,
``O(n)`` per vector instead of ``O(n^2)``.

Column indices are 0-based.  All-zero rows and vectors have no span and
contribute 0 everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import DimensionMismatch, FormatError, NotConsecutiveOnes
from .interval_index import Interval, IntervalIndex

Span = Optional[tuple[int, int]]


def ones_span(bits, row: Optional[int] = None) -> Span:
    """``(first, last)`` index of the 1s in ``bits``, or None if there are none."""
    arr = np.asarray(bits)
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return None
    first, last = int(nz[0]), int(nz[-1])
    if last - first + 1 != nz.size:
        where = "vector" if row is None else f"row {row}"
        raise NotConsecutiveOnes(f"{where} has non-contiguous 1s", row=row)
    return first, last


@dataclass(frozen=True)
class C1Matrix:
    n: int
    rows: tuple

    @classmethod
    def from_dense(cls, dense) -> "C1Matrix":
        arr = np.asarray(dense)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
        return cls(arr.shape[0], tuple(ones_span(r, i) for i, r in enumerate(arr)))


@dataclass(frozen=True)
class C1Vector:
    n: int
    span: Span

    @classmethod
    def from_dense(cls, bits) -> "C1Vector":
        arr = np.asarray(bits)
        if arr.ndim != 1:
            raise DimensionMismatch(f"expected a vector, got shape {arr.shape}")
        return cls(arr.size, ones_span(arr))


@dataclass
class C1Index:
    n: int
    rows: IntervalIndex


def preprocess(m) -> C1Index:
    if not isinstance(m, C1Matrix):
        m = C1Matrix.from_dense(m)
    index = IntervalIndex()
    for i, span in enumerate(m.rows):
        if span is not None:
            index.insert(Interval(i, span[0], span[1]))
    return C1Index(m.n, index)


def multiply(idx: C1Index, v) -> np.ndarray:
    if not isinstance(v, C1Vector):
        v = C1Vector.from_dense(v)
    if v.n != idx.n:
        raise DimensionMismatch(f"vector length {v.n} != matrix size {idx.n}")
    out = np.zeros(idx.n, dtype=bool)
    if v.span is not None:
        hits = idx.rows.intersection(*v.span)
        out[[iv.id for iv in hits]] = True
    return out


def naive_multiply(m, v) -> np.ndarray:
    """Dense boolean product: ``out[i] = OR_j (m[i][j] AND v[j])``."""
    mat = np.asarray(m, dtype=bool)
    vec = np.asarray(v, dtype=bool)
    if mat.ndim != 2 or vec.ndim != 1 or mat.shape[1] != vec.size:
        raise DimensionMismatch(f"cannot multiply {mat.shape} by {vec.shape}")
    return (mat & vec).any(axis=1)


def _bits(line: str, n: int, what: str) -> np.ndarray:
    line = line.strip()
    if len(line) != n or set(line) - {"0", "1"}:
        raise FormatError(f"{what}: expected {n} characters from {{0,1}}")
    return np.frombuffer(line.encode("ascii"), dtype=np.uint8) - ord("0")


def parse_matrix(lines: Iterable[str]) -> np.ndarray:
    it = iter(lines)
    try:
        n = int(next(it).strip())
    except (StopIteration, ValueError):
        raise FormatError("matrix file must start with the dimension n") from None
    if n < 0:
        raise FormatError("dimension must be non-negative")
    rows = [_bits(line, n, f"matrix row {i}") for i, line in zip(range(n), it)]
    if len(rows) != n:
        raise FormatError(f"expected {n} matrix rows, found {len(rows)}")
    if any(line.strip() for line in it):
        raise FormatError("trailing data after matrix rows")
    return np.array(rows, dtype=np.uint8).reshape(n, n)


def iter_vectors(lines: Iterable[str], n: int) -> Iterator[np.ndarray]:
    for k, line in enumerate(lines):
        if not line.strip():
            continue
        yield _bits(line, n, f"vector {k}")


def format_bits(out) -> str:
    return "".join("1" if b else "0" for b in out)


def answer_online(matrix: np.ndarray, vectors: Iterable, naive: bool = False) -> Iterator[np.ndarray]:
    """Yield each product before the next vector is pulled from ``vectors``."""
    if naive:
        for v in vectors:
            yield naive_multiply(matrix, v)
        return
    idx = preprocess(matrix)
    for v in vectors:
        yield multiply(idx, v)
