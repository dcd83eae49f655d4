#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Distance calculation layer.

Set-to-set p-norm distances between a batch of points and the quantum
centroids. The kernels are compiled with numba; the sum over the dimensions of
each point pair is always accumulated sequentially so the result does not
depend on how the rows are split across threads.
"""

import numba
import numpy as np

DEFAULT_NORM = 2.
DEFAULT_DTYPE = 'float64'

_DTYPES = ['float64', 'float32']


def check_norm(norm):
    """Validate the order of the p-norm.

    Parameters
    ----------
    norm : float
        Order of the norm, `p`.

    Returns
    -------
    float
        The validated order.

    Raises
    ------
    ValueError
        If `norm` is not finite or smaller than one.

    """
    norm = float(norm)
    if not np.isfinite(norm) or norm < 1:
        raise ValueError('p-norm order must be finite and >= 1, got: %r' %
                         norm)
    return norm


def check_dtype(dtype):
    """Return the numpy float type for `dtype` ('float64' or 'float32')."""
    dtype = np.dtype(dtype or DEFAULT_DTYPE)
    if dtype.name not in _DTYPES:
        raise ValueError('dtype must be one of %s, got: %s' %
                         (_DTYPES, dtype.name))
    return dtype


def check_points(points, dtype=None, name='points'):
    """Validate a point matrix.

    Parameters
    ----------
    points : array_like
        Matrix of shape (n, d).
    dtype : str, optional
        Floating point type of the returned array. If `None`, 'float64' is
        used.
    name : str, optional
        Name used in error messages.

    Returns
    -------
    :class:`numpy.ndarray`
        C-contiguous float array of shape (n, d).

    Raises
    ------
    ValueError
        If the matrix is not two-dimensional, is empty, or contains values
        that are not finite.

    """
    points = np.ascontiguousarray(points, dtype=check_dtype(dtype))
    if points.ndim != 2:
        raise ValueError('%s must be a matrix of shape (n, d), got %d '
                         'dimension(s)' % (name, points.ndim))
    if points.shape[0] < 1 or points.shape[1] < 1:
        raise ValueError('%s must have at least one row and one column, got '
                         'shape %s' % (name, points.shape))
    if not np.all(np.isfinite(points)):
        raise ValueError('%s must only contain finite values' % name)
    return points


def check_centroids(centroids, dims, dtype=None):
    """Validate centroids against the dimension count of a dataset."""
    centroids = check_points(centroids, dtype, name='centroids')
    if centroids.shape[1] != dims:
        raise ValueError('centroids have %d dimensions but the points have %d'
                         % (centroids.shape[1], dims))
    return centroids


@numba.njit()
def _minkowski(a, b, p):
    """p-norm of the difference of two vectors written in numba."""
    total = 0.
    if p == 2.:
        for m in range(a.shape[0]):
            diff = a[m] - b[m]
            total += diff * diff
        return np.sqrt(total)
    elif p == 1.:
        for m in range(a.shape[0]):
            total += abs(a[m] - b[m])
        return total

    # Scaled by the largest difference, every term is in [0, 1]
    scale = 0.
    for m in range(a.shape[0]):
        scale = max(scale, abs(a[m] - b[m]))
    if scale == 0.:
        return 0.
    for m in range(a.shape[0]):
        total += (abs(a[m] - b[m]) / scale) ** p
    return scale * total ** (1. / p)


@numba.njit(parallel=True)
def _pairwise(batch, centroids, p):
    n = batch.shape[0]
    k = centroids.shape[0]
    out = np.empty((n, k))
    # Rows are independent, each entry is reduced sequentially.
    for i in numba.prange(n):
        for j in range(k):
            out[i, j] = _minkowski(batch[i], centroids[j], p)
    return out


def distance_point_to_centroid(point, centroid, norm=DEFAULT_NORM):
    """Distance between a single point and a single centroid.

    Parameters
    ----------
    point : array_like
        Vector of length `d`.
    centroid : array_like
        Vector of length `d`.
    norm : float, optional
        Order of the p-norm. Default is 2 (Euclidean).

    Returns
    -------
    float
        p-norm of ``point - centroid``.

    Raises
    ------
    ValueError
        If the vectors differ in length or are not finite.

    """
    point = np.ascontiguousarray(point, dtype=float).ravel()
    centroid = np.ascontiguousarray(centroid, dtype=float).ravel()
    if point.shape != centroid.shape:
        raise ValueError('vectors differ in length: %d != %d' %
                         (point.size, centroid.size))
    if not (np.all(np.isfinite(point)) and np.all(np.isfinite(centroid))):
        raise ValueError('vectors must only contain finite values')
    return float(_minkowski(point, centroid, check_norm(norm)))


def pairwise_distances(batch, centroids, norm=DEFAULT_NORM):
    r"""Distances between every point of a batch and every centroid.

    .. math::
        D_{ij} = \left(\sum_m |B_{im} - Q_{jm}|^p\right)^{1/p}

    Parameters
    ----------
    batch : array_like
        Points of shape (n, d).
    centroids : array_like
        Quantum centroids of shape (k, d).
    norm : float, optional
        Order of the p-norm. Default is 2 (Euclidean).

    Returns
    -------
    :class:`numpy.ndarray`
        Distance matrix of shape (n, k) with the floating point type of
        `batch`.

    """
    batch = np.asarray(batch)
    dtype = batch.dtype if batch.dtype.name in _DTYPES else None
    batch = check_points(batch, dtype, name='batch')
    centroids = check_centroids(centroids, batch.shape[1], batch.dtype)
    distances = _pairwise(batch, centroids, check_norm(norm))
    return distances.astype(batch.dtype, copy=False)
