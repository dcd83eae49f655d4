#!/usr/bin/python
# -*- coding: utf-8 -*-

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from pybsq.accumulate import (BSQ, KMEANS, AccumulatorState, BatchSummary,
                              BsqAccumulator, KMeansAccumulator,
                              get_accumulator, get_variant, merge_bsq,
                              merge_kmeans, new_state, reset,
                              summarize_batch_bsq, summarize_batch_kmeans)
from pybsq.distance import pairwise_distances
from pybsq.selection import build_mask, mask_distances, one_hot

from . import oracles


@pytest.fixture(scope='module')
def frozen():
    """Dataset of 1000 points with frozen centroids."""
    rng = np.random.default_rng(42)
    data = rng.normal(size=(1000, 3))
    centroids = rng.normal(size=(6, 3))
    return data, centroids


def random_partition(rng, n):
    order = rng.permutation(n)
    bounds = [0]
    while bounds[-1] < n:
        bounds.append(min(n, bounds[-1] + int(rng.integers(1, n + 1))))
    return [order[a:b] for a, b in zip(bounds[:-1], bounds[1:])]


def accumulate(variant, data, centroids, parts):
    accumulator = get_accumulator(variant, len(centroids), data.shape[1])
    for part in parts:
        batch = data[part]
        distances = pairwise_distances(batch, centroids)
        mask = build_mask(distances)
        accumulator(batch, mask, mask_distances(distances, mask))
    return accumulator.state


@pytest.mark.parametrize('variant,expected', [
    ('kmeans', KMEANS),
    ('K-Means', KMEANS),
    ('bsq', BSQ),
    ('bounding-sphere', BSQ),
])
def test_get_variant(variant, expected):
    assert get_variant(variant) == expected


def test_get_variant_unknown():
    with pytest.raises(NotImplementedError):
        get_variant('median')


@pytest.mark.parametrize('variant,cls', [
    ('kmeans', KMeansAccumulator),
    ('bsq', BsqAccumulator),
])
def test_get_accumulator(variant, cls):
    accumulator = get_accumulator(variant, 3, 2)
    assert isinstance(accumulator, cls)
    assert accumulator.variant == variant
    assert accumulator.state.targets.shape == (3, 2)
    assert not np.any(accumulator.state.active)


def test_summarize_kmeans_example():
    summary = summarize_batch_kmeans([[0, 0], [2, 0], [10, 10]],
                                     one_hot([0, 0, 1], 2))
    assert_allclose(summary.batch_targets, [[1, 0], [10, 10]])
    assert_array_equal(summary.batch_weights, [2, 1])


def test_summarize_kmeans_empty():
    summary = summarize_batch_kmeans([[0, 0], [2, 0]], one_hot([0, 0], 3))
    assert_array_equal(summary.batch_weights, [2, 0, 0])
    assert_array_equal(summary.batch_targets[1:], 0)


def test_summarize_kmeans_oracle():
    rng = np.random.default_rng(1)
    batch = rng.normal(size=(64, 4))
    indices = rng.integers(0, 5, size=64)
    summary = summarize_batch_kmeans(batch, one_hot(indices, 5))
    means, counts = oracles.group_means(batch, indices, 5)
    assert_allclose(summary.batch_targets, means, rtol=0, atol=1e-12)
    assert_array_equal(summary.batch_weights, counts)


def test_summarize_bsq_example():
    batch = np.arange(8.).reshape(4, 2)
    masked = np.zeros((4, 2))
    masked[:, 0] = [0, 3, 0, 5]
    summary = summarize_batch_bsq(batch, masked)
    assert_array_equal(summary.batch_weights, [5, 0])
    assert_array_equal(summary.batch_targets[0], batch[3])
    assert_array_equal(summary.batch_targets[1], 0)


def test_summarize_bsq_tie():
    batch = np.arange(6.).reshape(3, 2)
    masked = np.array([[2.], [2.], [1.]])
    summary = summarize_batch_bsq(batch, masked)
    assert_array_equal(summary.batch_targets[0], batch[0])


def test_summarize_bsq_oracle():
    rng = np.random.default_rng(3)
    batch = rng.normal(size=(50, 3))
    distances = pairwise_distances(batch, rng.normal(size=(4, 3)))
    masked = mask_distances(distances, build_mask(distances))
    summary = summarize_batch_bsq(batch, masked)
    targets, weights = oracles.farthest_scan(batch, masked)
    assert_array_equal(summary.batch_targets, targets)
    assert_array_equal(summary.batch_weights, weights)


def test_merge_kmeans_example():
    state = AccumulatorState(np.array([[1., 1.]]), np.array([2.]))
    state = merge_kmeans(state, BatchSummary(np.array([[4., 4.]]),
                                             np.array([1.])))
    assert_allclose(state.targets, [[2, 2]])
    assert_array_equal(state.weights, [3])


def test_merge_kmeans_zero_weight():
    state = AccumulatorState(np.array([[1., 1.]]), np.array([2.]))
    merged = merge_kmeans(state, BatchSummary(np.array([[9., 9.]]),
                                              np.array([0.])))
    assert_array_equal(merged.targets, state.targets)
    assert_array_equal(merged.weights, state.weights)


def test_merge_bsq_example():
    state = AccumulatorState(np.array([[1., 0.]]), np.array([3.]), BSQ)
    state = merge_bsq(state, BatchSummary(np.array([[0., 2.]]),
                                          np.array([5.])))
    assert_array_equal(state.targets, [[0, 2]])
    assert_array_equal(state.weights, [5])


def test_merge_bsq_equal_keeps_incumbent():
    state = AccumulatorState(np.array([[1., 0.]]), np.array([3.]), BSQ)
    merged = merge_bsq(state, BatchSummary(np.array([[0., 2.]]),
                                           np.array([3.])))
    assert_array_equal(merged.targets, [[1, 0]])


def test_merge_variant_mismatch():
    with pytest.raises(ValueError):
        merge_bsq(new_state(2, 2, KMEANS),
                  BatchSummary(np.zeros((2, 2)), np.zeros(2)))


def test_reset():
    state = AccumulatorState(np.ones((3, 2)), np.array([1., 0., 4.]), BSQ)
    once = reset(state)
    assert_array_equal(once.weights, 0)
    twice = reset(once)
    assert_array_equal(twice.weights, once.weights)
    assert_array_equal(twice.targets, once.targets)

    summary = BatchSummary(np.array([[5., 5.], [0., 0.], [7., 7.]]),
                           np.array([2., 0., 1.]))
    merged = merge_bsq(once, summary)
    assert_array_equal(merged.weights, summary.batch_weights)
    assert_array_equal(merged.targets[merged.active],
                       summary.batch_targets[summary.batch_weights > 0])


def test_sequential_merges_pooled_mean():
    rng = np.random.default_rng(8)
    state = new_state(4, 2)
    all_points = []
    all_indices = []
    for _ in range(6):
        batch = rng.normal(size=(int(rng.integers(1, 30)), 2))
        indices = rng.integers(0, 4, size=len(batch))
        state = merge_kmeans(state,
                             summarize_batch_kmeans(batch,
                                                    one_hot(indices, 4)))
        all_points.append(batch)
        all_indices.append(indices)

    means, counts = oracles.group_means(
        np.vstack(all_points), np.concatenate(all_indices), 4)
    assert_allclose(state.targets[counts > 0], means[counts > 0], rtol=0,
                    atol=1e-9)
    assert_array_equal(state.weights, counts)


def test_kmeans_partition_equivalence(frozen):
    data, centroids = frozen
    whole = accumulate(KMEANS, data, centroids, [np.arange(len(data))])
    rng = np.random.default_rng(0)
    for _ in range(50):
        state = accumulate(KMEANS, data, centroids,
                           random_partition(rng, len(data)))
        assert_allclose(state.targets, whole.targets, rtol=0, atol=1e-9)
        assert_array_equal(state.weights, whole.weights)
        assert state.weights.sum() == len(data)


def test_bsq_partition_equivalence(frozen):
    data, centroids = frozen
    distances = pairwise_distances(data, centroids)
    targets, weights = oracles.farthest_scan(
        data, mask_distances(distances, build_mask(distances)))
    rng = np.random.default_rng(1)
    for _ in range(50):
        state = accumulate(BSQ, data, centroids,
                           random_partition(rng, len(data)))
        assert_array_equal(state.targets, targets)
        assert_array_equal(state.weights, weights)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=8))
def test_bsq_weights_non_decreasing(sizes):
    rng = np.random.default_rng(len(sizes))
    centroids = rng.normal(size=(3, 2))
    accumulator = BsqAccumulator(3, 2)
    previous = accumulator.state.weights.copy()
    for size in sizes:
        batch = rng.normal(size=(size, 2))
        distances = pairwise_distances(batch, centroids)
        mask = build_mask(distances)
        accumulator(batch, mask, mask_distances(distances, mask))
        assert np.all(accumulator.state.weights >= previous)
        previous = accumulator.state.weights.copy()
    assert accumulator.batches == len(sizes)
    accumulator.reset()
    assert accumulator.batches == 0
    assert not np.any(accumulator.state.active)
