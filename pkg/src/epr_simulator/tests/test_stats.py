# SPDX-License-Identifier: Apache-2.0

# pylint: skip-file

import hashlib
import math

import numpy as np
from pytest import approx, raises

from errors import InvalidStreamSpecError, ValidationError, ZeroTrialsError
from stats import (
    CorrelationEstimate,
    JointCounts,
    StreamSpec,
    binomial_tolerance,
    correlation_from_counts,
    derive_stream,
    wilson_interval,
    z_test,
)


def test_stream_key_derivation():
    digest = hashlib.sha256(b"sha256-philox4x64|42|sweep/quantum/0|3").digest()
    assert StreamSpec(42, "sweep/quantum/0", 3).key() == int.from_bytes(
        digest[:16], "big",
    )


def test_derive_stream_is_reproducible():
    first = derive_stream(StreamSpec(42, "label", 0)).random(16)
    second = derive_stream(StreamSpec(42, "label", 0)).random(16)
    assert np.array_equal(first, second)


def test_derive_stream_separates_labels_and_indices():
    base = derive_stream(StreamSpec(42, "label", 0)).random(16)
    other_label = derive_stream(StreamSpec(42, "other", 0)).random(16)
    other_index = derive_stream(StreamSpec(42, "label", 1)).random(16)
    other_seed = derive_stream(StreamSpec(43, "label", 0)).random(16)
    assert not np.array_equal(base, other_label)
    assert not np.array_equal(base, other_index)
    assert not np.array_equal(base, other_seed)


def test_stream_keys_do_not_collide_over_a_million_indices():
    trials = 1_000_000
    keys = {
        StreamSpec(20240101, "consecutive", index).key()
        for index in range(trials)
    }
    assert len(keys) == trials


def test_derive_stream_uniform_mean():
    draws = 1_000_000
    values = derive_stream(StreamSpec(20240101, "tests/uniform")).random(draws)
    assert abs(values.mean() - 0.5) < 5 * math.sqrt(1 / 12 / draws)


def test_stream_spec_validation():
    with raises(InvalidStreamSpecError):
        StreamSpec(-1, "label")
    with raises(InvalidStreamSpecError):
        StreamSpec(2 ** 64, "label")
    with raises(InvalidStreamSpecError):
        StreamSpec(1, "label", -1)
    assert StreamSpec(2 ** 64 - 1, "label").stream_id == ("label", 0)


def test_correlation_from_counts():
    estimate = correlation_from_counts(250, 250, 250, 250, exact=0.0)
    assert estimate.estimate == 0.0
    assert estimate.trials == 1000
    assert estimate.stderr == approx(math.sqrt(1 / 1000))
    assert estimate.deviation() == 0.0


def test_correlation_from_counts_is_invariant_under_outcome_swap():
    for n_pp, n_pm, n_mp, n_mm in [(7, 3, 11, 2), (0, 5, 0, 9), (40, 1, 1, 0)]:
        original = correlation_from_counts(n_pp, n_pm, n_mp, n_mm)
        swapped = correlation_from_counts(n_mm, n_mp, n_pm, n_pp)
        assert swapped.estimate == original.estimate
        assert swapped.stderr == original.stderr


def test_correlation_from_counts_perfect_anticorrelation():
    estimate = correlation_from_counts(0, 10, 10, 0)
    assert estimate.estimate == -1.0
    assert estimate.stderr == 0.0
    assert estimate.deviation() is None


def test_correlation_from_counts_rejects_empty_samples():
    with raises(ZeroTrialsError):
        correlation_from_counts(0, 0, 0, 0)
    with raises(ValidationError):
        correlation_from_counts(-1, 2, 0, 0)
    with raises(ZeroTrialsError):
        CorrelationEstimate(0.0, 0)


def test_z_test():
    centered = CorrelationEstimate(0.0, 10_000)
    assert z_test(centered, 0.0) == approx(1.0)
    two_sigma = CorrelationEstimate(0.02, 10_000)
    assert z_test(two_sigma, 0.0) == approx(0.0455, abs=1e-3)
    local = CorrelationEstimate(-0.5, 1_000_000)
    assert z_test(local, 0.0) < 1e-6


def test_z_test_with_zero_stderr():
    certain = CorrelationEstimate(-1.0, 100)
    assert z_test(certain, -1.0) == 1.0
    assert z_test(certain, 0.0) == 0.0
    assert certain.z_score(0.0) == -math.inf


def test_wilson_interval_edges():
    lower, upper = wilson_interval(0, 10)
    assert lower == 0.0 and 0.0 < upper < 1.0
    lower, upper = wilson_interval(10, 10)
    assert upper == 1.0 and 0.0 < lower < 1.0


def test_wilson_interval_contains_the_proportion():
    lower, upper = wilson_interval(50, 100)
    assert lower < 0.5 < upper
    assert 0.5 - lower == approx(upper - 0.5)
    assert upper - lower == approx(0.19, abs=0.01)


def test_wilson_interval_validation():
    with raises(ZeroTrialsError):
        wilson_interval(0, 0)
    with raises(ValidationError):
        wilson_interval(11, 10)
    with raises(ValidationError):
        wilson_interval(5, 10, confidence=1.5)


def test_binomial_tolerance():
    assert binomial_tolerance(0.5, 10_000) == approx(0.025)
    assert binomial_tolerance(0.0, 10_000) == 0.0
    with raises(ZeroTrialsError):
        binomial_tolerance(0.5, 0)


def test_joint_counts_from_outcomes():
    alice = np.array([1, 1, -1, -1, 1], dtype=np.int8)
    bob = np.array([1, -1, 1, -1, -1], dtype=np.int8)
    counts = JointCounts.from_outcomes(alice, bob)
    assert counts == JointCounts(1, 2, 1, 1)
    assert counts.total == 5
    assert counts.alice_plus == 3
    assert counts.alice_minus == 2
    assert counts.bob_plus == 2
    assert counts.opposite == 3
    assert counts.sum_of_products == int(np.sum(alice.astype(int) * bob))


def test_joint_counts_merge_and_frequencies():
    merged = sum([JointCounts(1, 2, 3, 4), JointCounts(4, 3, 2, 1)], JointCounts())
    assert merged == JointCounts(5, 5, 5, 5)
    assert merged.frequencies().cells() == approx((0.25, 0.25, 0.25, 0.25))
    assert merged.correlation(exact=0.0).estimate == 0.0
    with raises(ZeroTrialsError):
        JointCounts().frequencies()
