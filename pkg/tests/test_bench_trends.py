"""Cost-trend measurements from the benchmark harness (trends, not absolutes)."""

import pytest

from dyncolor import harness
from dyncolor.trace import gen

pytestmark = pytest.mark.slow


def test_uniform_insert_cost_is_near_logarithmic():
    # constant density: coordinates scale with n, lengths stay bounded
    means = {}
    for n in (2**14, 2**15):
        trace = gen("uniform", n, 0, 64 * n, seed=1, max_len=64)
        means[n] = harness.bench(trace, "incremental", repeat=1).insert_mean_ns
    ratio = means[2**15] / means[2**14]
    print(f"per-insert mean ratio 2^15 / 2^14: {ratio:.2f}")
    assert ratio < 2.0


def test_nested_delete_cost_grows_superlinearly():
    # every nested interval meets every other, so each delete revisits up to
    # n others, each over up to n endpoints
    means = {}
    for n in (2**5, 2**6):
        trace = gen("nested", n, 0, 10**6, seed=1, teardown=True)
        means[n] = harness.bench(trace, "dynamic", repeat=1).delete_mean_ns
    ratio = means[2**6] / means[2**5]
    print(f"per-delete mean ratio 2^6 / 2^5: {ratio:.2f}")
    assert ratio > 2.0
