#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Distance selection layer.

Each point only contributes through the distance to its closest centroid.
Instead of reducing the distance matrix to the row-wise minima, the other
entries are masked with zeros so the column of every retained distance (the
quantum it belongs to) is preserved.
"""

import numpy as np

from .distance import DEFAULT_NORM, pairwise_distances

DEFAULT_BLOCK_SIZE = 4096


def one_hot(indices, n_quanta):
    """One-hot matrix from a vector of column indices.

    Parameters
    ----------
    indices : array_like
        Column index of each row, values in [0, `n_quanta`).
    n_quanta : int
        Number of columns, `k`.

    Returns
    -------
    :class:`numpy.ndarray`
        Binary matrix of shape (n, k).

    """
    indices = np.asarray(indices, dtype=np.int64)
    if np.any(indices < 0) or np.any(indices >= n_quanta):
        raise ValueError('indices must be in [0, %d)' % n_quanta)
    dense = np.zeros((indices.size, n_quanta), dtype=np.int8)
    dense[np.arange(indices.size), indices] = 1
    return dense


class Mask(object):
    """Row-wise minimum mask.

    Stored as the column index of the single one in each row; the dense
    one-hot matrix is available through :func:`numpy.asarray` or
    :meth:`to_dense`.

    Parameters
    ----------
    indices : array_like
        Column index of the minimum of each row.
    n_quanta : int
        Number of columns of the mask, `k`.

    """

    def __init__(self, indices, n_quanta):
        """Initialize the mask."""
        self._indices = np.asarray(indices, dtype=np.int64)
        self._n_quanta = int(n_quanta)

    @property
    def indices(self):
        """Column of the one in each row."""
        return self._indices

    @property
    def n_quanta(self):
        """Number of quanta (columns)."""
        return self._n_quanta

    @property
    def shape(self):
        """Shape of the dense mask, (n, k)."""
        return (self._indices.size, self._n_quanta)

    def counts(self):
        """Column sums of the mask: number of points per quantum."""
        return np.bincount(self._indices, minlength=self._n_quanta)

    def to_dense(self):
        """Dense one-hot matrix of shape (n, k)."""
        return one_hot(self._indices, self._n_quanta)

    def __array__(self, dtype=None, copy=None):
        dense = self.to_dense()
        return dense if dtype is None else dense.astype(dtype)

    def __len__(self):
        return self._indices.size

    def __repr__(self):
        return 'Mask(n=%d, k=%d)' % self.shape


def _check_distances(distances):
    distances = np.asarray(distances)
    if distances.ndim != 2 or 0 in distances.shape:
        raise ValueError('distances must be a non-empty (n, k) matrix')
    if not np.all(np.isfinite(distances)):
        raise ValueError('distances must only contain finite values')
    return distances


def build_mask(distances):
    """Mask the row-wise minima of a distance matrix.

    Ties are broken towards the lowest column index.

    Parameters
    ----------
    distances : array_like
        Distance matrix of shape (n, k).

    Returns
    -------
    :class:`Mask`
        One-hot mask with the one of row `i` at the column of its minimum.

    """
    distances = _check_distances(distances)
    # argmin returns the first occurrence of the minimum
    return Mask(np.argmin(distances, axis=1), distances.shape[1])


def mask_distances(distances, mask):
    """Zero all distances except the row-wise minima.

    Parameters
    ----------
    distances : array_like
        Distance matrix of shape (n, k).
    mask : :class:`Mask` or array_like
        One-hot mask of the same shape.

    Returns
    -------
    :class:`numpy.ndarray`
        Masked distances, D * M.

    """
    distances = _check_distances(distances)
    dense = np.asarray(mask)
    if dense.shape != distances.shape:
        raise ValueError('mask shape %s does not match distances shape %s' %
                         (dense.shape, distances.shape))
    return distances * dense.astype(distances.dtype)


def assignments(mask):
    """Quantum index of every row of a mask.

    Parameters
    ----------
    mask : :class:`Mask` or array_like
        One-hot mask of shape (n, k).

    Returns
    -------
    :class:`numpy.ndarray`
        Integer vector of length n.

    """
    if isinstance(mask, Mask):
        return mask.indices.copy()

    dense = np.asarray(mask)
    if dense.ndim != 2 or np.any(dense.sum(axis=1) != 1):
        raise ValueError('mask must be one-hot in every row')
    return np.argmax(dense, axis=1).astype(np.int64)


def nearest_centroids(data, centroids, norm=DEFAULT_NORM,
                      block_size=DEFAULT_BLOCK_SIZE):
    """Assign every point of a dataset to its closest centroid.

    The dataset is processed in blocks of rows to bound the size of the
    distance matrix.

    Parameters
    ----------
    data : array_like
        Points of shape (n, d).
    centroids : array_like
        Centroids of shape (k, d).
    norm : float, optional
        Order of the p-norm.
    block_size : int, optional
        Number of rows per block.

    Returns
    -------
    indices : :class:`numpy.ndarray`
        Quantum index of each point.
    min_distances : :class:`numpy.ndarray`
        Distance of each point to its assigned centroid.

    """
    data = np.asarray(data)
    n = data.shape[0]
    indices = np.empty(n, dtype=np.int64)
    min_distances = np.empty(n, dtype=float)
    for start in range(0, n, block_size):
        stop = min(start + block_size, n)
        distances = pairwise_distances(data[start:stop], centroids, norm)
        mask = build_mask(distances)
        indices[start:stop] = mask.indices
        min_distances[start:stop] = mask_distances(distances, mask).sum(axis=1)
    return indices, min_distances
