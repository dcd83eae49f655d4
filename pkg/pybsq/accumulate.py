#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Cross-batch accumulation.

Between two parameter updates a target tensor `T` of shape (k, d) and a
weight vector `W` of shape (k) are maintained. For k-Means `T` is the running
mean of the points assigned to each quantum and `W` the number of points in
that mean. For BSQ `T` is the farthest assigned point found so far and `W`
its distance to the quantum centroid.
"""

import dataclasses

import numpy as np

from .selection import Mask, assignments

KMEANS = 'kmeans'
BSQ = 'bsq'

VARIANTS = [KMEANS, BSQ]


def get_variant(variant):
    """Return the variant naming used in this package.

    Parameters
    ----------
    variant : str
        Variant synonym.

    Returns
    -------
    variant : str
        Either 'kmeans' or 'bsq'.

    """
    variant = variant.lower()
    if variant in ['kmeans', 'k-means', 'k_means', 'lloyd']:
        return KMEANS
    elif variant in ['bsq', 'bounding-sphere', 'bounding_sphere']:
        return BSQ
    else:
        raise NotImplementedError('No recognized variant for: %s' % variant)


@dataclasses.dataclass
class AccumulatorState:
    """Targets and weights accumulated since the last update.

    A quantum whose weight is zero is inactive: its target is kept but not
    used.
    """

    targets: np.ndarray
    weights: np.ndarray
    variant: str = KMEANS

    @property
    def active(self):
        """Boolean vector of quanta with a nonzero weight."""
        return self.weights > 0

    def copy(self):
        return AccumulatorState(self.targets.copy(), self.weights.copy(),
                                self.variant)


@dataclasses.dataclass
class BatchSummary:
    """Targets (`T'`) and weights (`W'`) of a single batch."""

    batch_targets: np.ndarray
    batch_weights: np.ndarray


def new_state(n_quanta, dims, variant=KMEANS, dtype=float):
    """Empty accumulator: zero targets and zero weights."""
    return AccumulatorState(
        np.zeros((n_quanta, dims), dtype=dtype),
        np.zeros(n_quanta, dtype=float), get_variant(variant))


def _mask_indices(mask):
    if isinstance(mask, Mask):
        return mask.indices, mask.n_quanta
    dense = np.asarray(mask)
    return assignments(dense), dense.shape[1]


def summarize_batch_kmeans(batch, mask):
    """Per-quantum mean and count of the points of a batch.

    Parameters
    ----------
    batch : array_like
        Points of shape (n, d).
    mask : :class:`~.selection.Mask` or array_like
        Mask built from the distances of this batch.

    Returns
    -------
    :class:`BatchSummary`
        Means (zero vector for empty quanta) and counts.

    """
    batch = np.asarray(batch)
    indices, n_quanta = _mask_indices(mask)
    if indices.size != batch.shape[0]:
        raise ValueError('mask has %d rows but the batch has %d' %
                         (indices.size, batch.shape[0]))

    counts = np.bincount(indices, minlength=n_quanta)
    sums = np.zeros((n_quanta, batch.shape[1]), dtype=float)
    # Unbuffered and in row order
    np.add.at(sums, indices, batch)

    means = np.zeros_like(sums)
    filled = counts > 0
    means[filled] = sums[filled] / counts[filled, np.newaxis]
    return BatchSummary(means.astype(batch.dtype, copy=False),
                        counts.astype(float))


def summarize_batch_bsq(batch, masked):
    """Farthest assigned point of each quantum within a batch.

    Parameters
    ----------
    batch : array_like
        Points of shape (n, d).
    masked : array_like
        Masked distances of this batch, shape (n, k).

    Returns
    -------
    :class:`BatchSummary`
        Rows of `batch` with the largest masked distance in each column and
        those distances. Ties go to the lowest row index. Quanta without an
        assigned point (all-zero column) get a zero weight and a zero target.

    """
    batch = np.asarray(batch)
    masked = np.asarray(masked)
    if masked.ndim != 2 or masked.shape[0] != batch.shape[0]:
        raise ValueError('masked distances have shape %s but the batch has '
                         '%d rows' % (masked.shape, batch.shape[0]))

    # argmax returns the first occurrence of the maximum
    rows = np.argmax(masked, axis=0)
    weights = masked[rows, np.arange(masked.shape[1])].astype(float)
    targets = np.where((weights > 0)[:, np.newaxis], batch[rows], 0)
    return BatchSummary(targets.astype(batch.dtype, copy=False), weights)


def _check_variant(state, variant):
    if state.variant != variant:
        raise ValueError('expected a %s accumulator, got: %s' %
                         (variant, state.variant))


def merge_kmeans(state, summary):
    r"""Merge a batch summary into a k-Means accumulator.

    Each active row is re-weighted incrementally:

    .. math::
        T_i = \frac{W_i T_i + W'_i T'_i}{W_i + W'_i}, \quad W = W + W'

    Parameters
    ----------
    state : :class:`AccumulatorState`
        Current k-Means accumulator.
    summary : :class:`BatchSummary`
        Output of :func:`summarize_batch_kmeans`.

    Returns
    -------
    :class:`AccumulatorState`
        Updated accumulator. `state` is not modified.

    """
    _check_variant(state, KMEANS)
    weights = state.weights
    batch_weights = summary.batch_weights
    targets = state.targets.copy()

    # Inactive rows take the batch mean as it is
    fresh = (weights == 0) & (batch_weights > 0)
    targets[fresh] = summary.batch_targets[fresh]

    both = (weights > 0) & (batch_weights > 0)
    total = weights[both] + batch_weights[both]
    targets[both] = (
        (weights[both, np.newaxis] * state.targets[both] +
         batch_weights[both, np.newaxis] * summary.batch_targets[both]) /
        total[:, np.newaxis])

    return AccumulatorState(targets, weights + batch_weights, KMEANS)


def merge_bsq(state, summary):
    """Merge a batch summary into a BSQ accumulator.

    A target is overwritten only if the batch found a strictly farther
    point; on equal distances the stored target is kept.

    Parameters
    ----------
    state : :class:`AccumulatorState`
        Current BSQ accumulator.
    summary : :class:`BatchSummary`
        Output of :func:`summarize_batch_bsq`.

    Returns
    -------
    :class:`AccumulatorState`
        Updated accumulator. `state` is not modified.

    """
    _check_variant(state, BSQ)
    farther = summary.batch_weights > state.weights
    targets = state.targets.copy()
    weights = state.weights.copy()
    targets[farther] = summary.batch_targets[farther]
    weights[farther] = summary.batch_weights[farther]
    return AccumulatorState(targets, weights, BSQ)


def reset(state):
    """Zero all weights; the targets are kept but inactive."""
    return AccumulatorState(state.targets.copy(),
                            np.zeros_like(state.weights), state.variant)


class Accumulator(object):
    """Base class of the accumulators used by the trainer.

    Holds an :class:`AccumulatorState` and applies summarize and merge for
    every batch.

    Parameters
    ----------
    n_quanta : int
        Number of quanta, `k`.
    dims : int
        Number of dimensions, `d`.
    dtype : str, optional
        Floating point type of the targets.

    """

    VARIANT = ''

    def __init__(self, n_quanta, dims, dtype=float):
        """Initialize the class."""
        super().__init__()
        self.state = new_state(n_quanta, dims, self.VARIANT, dtype)
        self.batches = 0

    @property
    def variant(self):
        """Variant of the accumulator."""
        return self.VARIANT

    def __call__(self, batch, mask, masked):
        """Accumulate a batch.

        Parameters
        ----------
        batch : array_like
            Points of shape (n, d).
        mask : :class:`~.selection.Mask`
            Mask of the batch.
        masked : array_like
            Masked distances of the batch.

        Returns
        -------
        :class:`BatchSummary`
            Summary of the batch that was merged.

        """
        summary = self.summarize(batch, mask, masked)
        self.state = self.merge(summary)
        self.batches += 1
        return summary

    def summarize(self, batch, mask, masked):
        raise NotImplementedError

    def merge(self, summary):
        raise NotImplementedError

    def reset(self):
        """Start a new accumulation period."""
        self.state = reset(self.state)
        self.batches = 0


class KMeansAccumulator(Accumulator):
    """Running mean of the assigned points."""

    VARIANT = KMEANS

    def summarize(self, batch, mask, masked):
        return summarize_batch_kmeans(batch, mask)

    def merge(self, summary):
        return merge_kmeans(self.state, summary)


class BsqAccumulator(Accumulator):
    """Farthest assigned point."""

    VARIANT = BSQ

    def summarize(self, batch, mask, masked):
        return summarize_batch_bsq(batch, masked)

    def merge(self, summary):
        return merge_bsq(self.state, summary)


def get_accumulator(variant, n_quanta, dims, dtype=float):
    """Select an accumulator based on a string.

    Parameters
    ----------
    variant : str
        Name of the variant, see :func:`get_variant`.
    n_quanta : int
        Number of quanta.
    dims : int
        Number of dimensions.
    dtype : str, optional
        Floating point type of the targets.

    Returns
    -------
    :class:`Accumulator`

    """
    variant = get_variant(variant)
    for accumulator in [KMeansAccumulator, BsqAccumulator]:
        if accumulator.VARIANT == variant:
            return accumulator(n_quanta, dims, dtype)
