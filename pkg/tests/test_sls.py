import random

import pytest
from hypothesis import given, settings, strategies as st

from dyncolor import ArraySls, ModeViolation, NotMarked, SlsMode, TreeSls, sls_build

BACKENDS = [SlsMode.INCREMENTAL, SlsMode.DYNAMIC]


def scan_height(occupied):
    y = 0
    while y in occupied:
        y += 1
    return y


def assert_prefix(rec):
    """occupied and vacant partition {0..ceiling-1}."""
    occ, vac = rec.occupied(), set(rec.vacant())
    assert not occ & vac
    assert occ | vac == set(range(rec.ceiling))


@pytest.mark.parametrize("mode", BACKENDS)
@pytest.mark.parametrize("levels, height", [(set(), 0), ({0, 1}, 2), ({1}, 0), ({0, 2}, 1), ({0, 1, 2}, 3)])
def test_build_examples(mode, levels, height):
    rec = sls_build(levels, coord=4, mode=mode)
    assert rec.height() == height
    assert rec.occupied() == levels
    assert set(rec.vacant()) == set(range(max(levels, default=-1))) - levels
    assert rec.refcount == 0 and rec.coord == 4


@pytest.mark.parametrize("mode", BACKENDS)
def test_mark_padding_and_idempotence(mode):
    rec = sls_build(set(), 0, mode)
    rec.mark(0)
    assert rec.height() == 1
    rec.mark(3)
    assert sorted(rec.vacant()) == [1, 2] and rec.height() == 1
    rec.mark(3)
    assert rec.occupied() == {0, 3}
    assert_prefix(rec)


def test_unmark_examples():
    rec = sls_build({0, 1}, 0, SlsMode.DYNAMIC)
    rec.unmark(0)
    assert rec.height() == 0
    rec = sls_build({0, 1, 2}, 0, SlsMode.DYNAMIC)
    rec.unmark(1)
    assert rec.height() == 1
    rec.mark(1)
    assert rec.height() == 3


def test_unmark_errors():
    with pytest.raises(ModeViolation):
        sls_build({0}, 0, SlsMode.INCREMENTAL).unmark(0)
    with pytest.raises(NotMarked):
        sls_build({0}, 0, SlsMode.DYNAMIC).unmark(1)


def test_array_backend_grows_by_doubling():
    rec = ArraySls(0)
    for level in range(0, 100, 7):
        rec.mark(level)
    assert rec.height() == 1
    assert_prefix(rec)


def test_height_oracle_randomized():
    rng = random.Random(7)
    rec, occupied = TreeSls(0), set()
    for _ in range(100_000):
        level = rng.randrange(24)
        if level in occupied and rng.random() < 0.5:
            rec.unmark(level)
            occupied.discard(level)
        else:
            rec.mark(level)
            occupied.add(level)
        assert rec.height() == scan_height(occupied)
    assert_prefix(rec)


@given(st.lists(st.integers(0, 40), max_size=80))
@settings(max_examples=200, deadline=None)
def test_backends_agree_on_mark_only(levels):
    a, t = ArraySls(0), TreeSls(0)
    for level in levels:
        a.mark(level)
        t.mark(level)
        assert a.height() == t.height() == scan_height(a.occupied())
        assert a.occupied() == t.occupied()
    assert_prefix(a)
    assert_prefix(t)


@given(st.lists(st.tuples(st.booleans(), st.integers(0, 12)), max_size=100))
@settings(max_examples=200, deadline=None)
def test_dynamic_prefix_has_no_gaps(script):
    rec = TreeSls(0)
    for mark, level in script:
        if mark:
            rec.mark(level)
        elif rec.is_marked(level):
            rec.unmark(level)
        assert_prefix(rec)
        assert rec.height() == scan_height(rec.occupied())
