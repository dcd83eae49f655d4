#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Slow reference implementations used to check the package."""

import itertools

import numpy as np

from scipy.spatial import ConvexHull, QhullError


def distances_loop(batch, centroids, p):
    """Scalar double loop over points and centroids."""
    n, k = len(batch), len(centroids)
    out = np.zeros((n, k))
    for i in range(n):
        for j in range(k):
            total = np.sum(np.abs(batch[i] - centroids[j]) ** p)
            out[i, j] = total ** (1. / p)
    return out


def argmin_scan(row):
    """Index of the first minimum found by a linear scan."""
    best = 0
    for j, value in enumerate(row):
        if value < row[best]:
            best = j
    return best


def group_means(data, indices, k):
    """Per-quantum mean and count computed with a loop."""
    means = np.zeros((k, data.shape[1]))
    counts = np.zeros(k)
    for i in range(k):
        members = [x for x, j in zip(data, indices) if j == i]
        counts[i] = len(members)
        if members:
            means[i] = np.mean(members, axis=0)
    return means, counts


def farthest_scan(data, masked):
    """Farthest assigned point per column, first row on ties."""
    n, k = masked.shape
    targets = np.zeros((k, data.shape[1]))
    weights = np.zeros(k)
    for j in range(k):
        for i in range(n):
            if masked[i, j] > weights[j]:
                weights[j] = masked[i, j]
                targets[j] = data[i]
    return targets, weights


def _circumball(support):
    origin = support[0]
    edges = support[1:] - origin
    if not len(edges):
        return origin, 0.
    gram = edges @ edges.T
    if np.linalg.matrix_rank(gram, tol=1e-10) < len(edges):
        return None
    coefs = np.linalg.solve(2 * gram, np.diag(gram))
    center = origin + coefs @ edges
    return center, np.linalg.norm(support[0] - center)


def _hull_vertices(points):
    """Rows that can support the ball, the convex hull vertices if any."""
    if points.shape[1] < 2 or len(points) <= points.shape[1] + 1:
        return points
    try:
        return points[ConvexHull(points).vertices]
    except QhullError:
        # Flat sets have no full-dimensional hull
        return points


def brute_force_ball(points):
    """Smallest ball over every support subset of at most d + 1 points."""
    points = np.asarray(points, dtype=float)
    unique = _hull_vertices(np.unique(points, axis=0))
    d = points.shape[1]
    best = None
    for size in range(1, min(len(unique), d + 1) + 1):
        for subset in itertools.combinations(range(len(unique)), size):
            ball = _circumball(unique[list(subset)])
            if ball is None:
                continue
            center, radius = ball
            if best is not None and radius >= best[1]:
                continue
            dists = np.linalg.norm(points - center, axis=1)
            if np.all(dists <= radius * (1 + 1e-9) + 1e-12):
                best = (center, radius)
    return best


def central_difference(func, x, step=1e-6):
    """Gradient of a scalar function by central finite differences."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for i in range(x.size):
        offset = np.zeros_like(x)
        offset[i] = step
        grad[i] = (func(x + offset) - func(x - offset)) / (2 * step)
    return grad
