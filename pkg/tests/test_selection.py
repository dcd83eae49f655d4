#!/usr/bin/python
# -*- coding: utf-8 -*-

import numpy as np
from numpy.testing import assert_array_equal
import pytest

from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pybsq.distance import pairwise_distances
from pybsq.selection import (Mask, assignments, build_mask, mask_distances,
                             nearest_centroids, one_hot)

from . import oracles

distance_matrices = arrays(
    np.float64,
    st.tuples(st.integers(1, 30), st.integers(1, 8)),
    # A small set of values to provoke ties
    elements=st.sampled_from([0., 0.5, 1., 2., 3.]))


@pytest.mark.parametrize('distances,expected', [
    ([[0, 1], [5, 4.2426]], [[1, 0], [0, 1]]),
    ([[3, 3, 3]], [[1, 0, 0]]),
    ([[2, 1, 1]], [[0, 1, 0]]),
])
def test_build_mask(distances, expected):
    assert_array_equal(np.asarray(build_mask(distances)), expected)


def test_build_mask_oracle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        distances = rng.integers(0, 4, size=(40, 8)).astype(float)
        mask = build_mask(distances)
        expected = [oracles.argmin_scan(row) for row in distances]
        assert_array_equal(assignments(mask), expected)


@given(distance_matrices)
def test_mask_invariants(distances):
    mask = build_mask(distances)
    dense = np.asarray(mask)
    assert_array_equal(dense.sum(axis=1), 1)
    chosen = distances[np.arange(len(distances)), assignments(mask)]
    assert_array_equal(chosen, distances.min(axis=1))
    # Deterministic
    assert_array_equal(np.asarray(build_mask(distances)), dense)


def test_mask_dense_shape():
    mask = build_mask(np.ones((5, 3)))
    assert mask.shape == (5, 3)
    assert len(mask) == 5
    assert_array_equal(mask.counts(), [5, 0, 0])
    assert_array_equal(mask.to_dense(), np.asarray(mask))


def test_mask_distances_example():
    assert_array_equal(mask_distances([[2, 7]], [[1, 0]]), [[2, 0]])


def test_mask_distances_row_minima():
    rng = np.random.default_rng(5)
    distances = rng.uniform(size=(30, 5))
    masked = mask_distances(distances, build_mask(distances))
    assert_array_equal(masked.sum(axis=1), distances.min(axis=1))
    assert np.all(np.count_nonzero(masked, axis=1) <= 1)


def test_mask_distances_shape_mismatch():
    with pytest.raises(ValueError, match='shape'):
        mask_distances(np.ones((3, 2)), np.eye(3))


@pytest.mark.parametrize('mask,expected', [
    ([[1, 0], [0, 1]], [0, 1]),
    ([[0, 0, 1]], [2]),
])
def test_assignments(mask, expected):
    assert_array_equal(assignments(mask), expected)


def test_assignments_invalid():
    with pytest.raises(ValueError, match='one-hot'):
        assignments([[1, 1], [0, 1]])
    with pytest.raises(ValueError, match='one-hot'):
        assignments([[0, 0]])


def test_one_hot_inverse():
    rng = np.random.default_rng(2)
    for _ in range(20):
        k = int(rng.integers(1, 9))
        dense = one_hot(rng.integers(0, k, size=25), k)
        assert_array_equal(one_hot(assignments(dense), k), dense)
        assert_array_equal(one_hot(assignments(Mask(assignments(dense), k)),
                                   k), dense)


def test_one_hot_out_of_range():
    with pytest.raises(ValueError):
        one_hot([0, 3], 3)


@pytest.mark.parametrize('block_size', [1, 7, 4096])
def test_nearest_centroids(block_size):
    rng = np.random.default_rng(9)
    data = rng.normal(size=(100, 3))
    centroids = rng.normal(size=(6, 3))
    indices, min_dists = nearest_centroids(data, centroids,
                                           block_size=block_size)
    dists = pairwise_distances(data, centroids)
    assert_array_equal(indices, dists.argmin(axis=1))
    assert_array_equal(min_dists, dists.min(axis=1))
