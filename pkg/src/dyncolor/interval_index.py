"""Ordered multiset of closed integer intervals with stabbing/overlap queries.

The index is an AVL tree keyed by ``(lo, hi, id)`` where every node also
carries the largest ``hi`` found in its subtree.  That augmentation lets an
overlap query prune any subtree that ends before the query starts, so a query
costs ``O(log n + k)`` node visits in practice for ``k`` reported intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .errors import DuplicateId, InvalidInterval, InvalidQuery, UnknownId


class Color(NamedTuple):
    level: int
    offset: int


@dataclass(eq=False)
class Interval:
    """A live closed interval ``[lo, hi]`` and the color it currently holds.

    Instances compare by identity; two intervals with equal geometry but
    different ids are distinct members of an index.
    """

    id: int
    lo: int
    hi: int
    level: int = 0
    offset: int = 1
    inserted_at: int = 0

    @property
    def color(self) -> Color:
        return Color(self.level, self.offset)

    def intersects(self, lo: int, hi: int) -> bool:
        return max(self.lo, lo) <= min(self.hi, hi)


class _Node:
    __slots__ = ("key", "iv", "left", "right", "height", "max_hi")

    def __init__(self, iv: Interval):
        self.key = (iv.lo, iv.hi, iv.id)
        self.iv = iv
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.height = 1
        self.max_hi = iv.hi


def _h(node):
    return node.height if node is not None else 0


def _fix(node: _Node) -> None:
    left, right = node.left, node.right
    lh = left.height if left is not None else 0
    rh = right.height if right is not None else 0
    node.height = (lh if lh > rh else rh) + 1
    m = node.iv.hi
    if left is not None and left.max_hi > m:
        m = left.max_hi
    if right is not None and right.max_hi > m:
        m = right.max_hi
    node.max_hi = m


def _rot_right(y: _Node) -> _Node:
    x = y.left
    y.left = x.right
    x.right = y
    _fix(y)
    _fix(x)
    return x


def _rot_left(x: _Node) -> _Node:
    y = x.right
    x.right = y.left
    y.left = x
    _fix(x)
    _fix(y)
    return y


def _balance(node: _Node) -> _Node:
    _fix(node)
    bal = _h(node.left) - _h(node.right)
    if bal > 1:
        if _h(node.left.left) < _h(node.left.right):
            node.left = _rot_left(node.left)
        return _rot_right(node)
    if bal < -1:
        if _h(node.right.right) < _h(node.right.left):
            node.right = _rot_right(node.right)
        return _rot_left(node)
    return node


def _insert(root: Optional[_Node], new: _Node) -> _Node:
    """Insert ``new`` below ``root`` and return the new root.

    Walks back up the search path only while subtree heights or ``max_hi``
    values actually change.
    """
    if root is None:
        return new
    path = []
    node = root
    key = new.key
    while node is not None:
        path.append(node)
        node = node.left if key < node.key else node.right
    if key < path[-1].key:
        path[-1].left = new
    else:
        path[-1].right = new
    for i in range(len(path) - 1, -1, -1):
        node = path[i]
        old_height, old_max = node.height, node.max_hi
        top = _balance(node)
        if top is not node:
            if i == 0:
                root = top
            elif path[i - 1].left is node:
                path[i - 1].left = top
            else:
                path[i - 1].right = top
        if top.height == old_height and top.max_hi == old_max:
            break
    return root


def _pop_min(node: _Node):
    """Detach the leftmost node; returns (new subtree root, detached node)."""
    if node.left is None:
        return node.right, node
    node.left, smallest = _pop_min(node.left)
    return _balance(node), smallest


def _remove(node: Optional[_Node], key) -> Optional[_Node]:
    if node is None:
        raise KeyError(key)
    if key < node.key:
        node.left = _remove(node.left, key)
    elif key > node.key:
        node.right = _remove(node.right, key)
    else:
        if node.left is None:
            return node.right
        if node.right is None:
            return node.left
        rest, succ = _pop_min(node.right)
        succ.left = node.left
        succ.right = rest
        node = succ
    return _balance(node)


class IntervalIndex:
    """Multiset of :class:`Interval` objects with logarithmic updates.

    ``intersection(a, b)`` returns every stored interval sharing at least one
    point with ``[a, b]``; touching endpoints count as intersecting.  Results
    are in ``(lo, hi, id)`` order.
    """

    def __init__(self, intervals=()):
        self._root: Optional[_Node] = None
        self._by_id: dict[int, Interval] = {}
        for iv in intervals:
            self.insert(iv)

    def __len__(self) -> int:
        return len(self._by_id)

    def __bool__(self) -> bool:
        return bool(self._by_id)

    def __contains__(self, ident) -> bool:
        return ident in self._by_id

    def __iter__(self) -> Iterator[Interval]:
        stack = []
        node = self._root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node.iv
            node = node.right

    def get(self, ident) -> Interval:
        try:
            return self._by_id[ident]
        except KeyError:
            raise UnknownId(ident) from None

    @property
    def height(self) -> int:
        return _h(self._root)

    def insert(self, iv: Interval) -> None:
        if iv.id in self._by_id:
            raise DuplicateId(iv.id)
        if iv.lo > iv.hi:
            raise InvalidInterval(f"lo {iv.lo} > hi {iv.hi}")
        self._root = _insert(self._root, _Node(iv))
        self._by_id[iv.id] = iv

    def delete(self, ident) -> Interval:
        iv = self._by_id.pop(ident, None)
        if iv is None:
            raise UnknownId(ident)
        self._root = _remove(self._root, (iv.lo, iv.hi, iv.id))
        return iv

    def intersection(self, a: int, b: int) -> list[Interval]:
        if a > b:
            raise InvalidQuery(f"query start {a} > end {b}")
        out: list[Interval] = []
        if self._root is not None:
            _collect(self._root, a, b, out)
        return out

    def stab(self, t: int) -> list[Interval]:
        return self.intersection(t, t)

    def any_stabs(self, t: int) -> bool:
        """True when at least one stored interval contains ``t``."""
        return _any_in(self._root, t)


def _collect(node: _Node, a: int, b: int, out: list) -> None:
    left = node.left
    if left is not None and left.max_hi >= a:
        _collect(left, a, b, out)
    iv = node.iv
    if iv.lo > b:
        return
    if iv.hi >= a:
        out.append(iv)
    right = node.right
    if right is not None and right.max_hi >= a:
        _collect(right, a, b, out)


def _any_in(node: Optional[_Node], t: int) -> bool:
    if node is None or node.max_hi < t:
        return False
    if _any_in(node.left, t):
        return True
    iv = node.iv
    if iv.lo > t:
        return False
    if iv.hi >= t:
        return True
    return _any_in(node.right, t)
