#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Minimal enclosing ball.

The exact ball is computed with Welzl's algorithm (:cite:`welzl91`) in its
move-to-front form (:cite:`gartner99`). In higher dimensions the core-set
iteration of Bădoiu & Clarkson (:cite:`badoiu03`) is used instead.
"""

import dataclasses
import logging

import numba
import numpy as np

from scipy.linalg import lstsq

from .distance import check_points

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-3
MAX_EXACT_DIM = 8

# Relative tolerance of the rank test on the circumsphere system
_RANK_COND = 1e-12
# Relative slack on squared distances before a point counts as outside
_EXCESS_TOL = 1e-12


@dataclasses.dataclass
class Ball:
    """Ball defined by a center and a radius."""

    center: np.ndarray
    radius: float

    def contains(self, points, rtol=1e-9):
        """Check if all points are inside the ball (within `rtol`)."""
        points = np.atleast_2d(points)
        dists = np.sqrt(np.sum((points - self.center) ** 2, axis=1))
        return bool(np.all(dists <= self.radius + rtol * (1 + self.radius)))


def circumsphere(support):
    """Smallest ball with all support points on its surface.

    The center is searched within the affine hull of the support points.

    Parameters
    ----------
    support : array_like
        Points of shape (s, d) with s <= d + 1.

    Returns
    -------
    :class:`Ball` or None
        The ball, or `None` if the support points are affinely dependent.

    """
    support = np.atleast_2d(np.asarray(support, dtype=float))
    origin = support[0]
    if len(support) == 1:
        return Ball(origin.copy(), 0.)

    edges = support[1:] - origin
    gram = edges @ edges.T
    coefs, _, rank, _ = lstsq(2 * gram, np.diag(gram), cond=_RANK_COND)
    if rank < len(edges):
        return None

    offset = coefs @ edges
    center = origin + offset
    radius = np.sqrt(np.max(np.sum((support - center) ** 2, axis=1)))
    return Ball(center, float(radius))


def _welzl(points, order, end, support, dims):
    """Move-to-front recursion over ``points[order[:end]]``.

    `order` is modified in place. The recursion depth is bounded by the size
    of the support set.
    """
    if support:
        ball = circumsphere(points[support])
    else:
        ball = None

    if len(support) == dims + 1:
        return ball

    i = 0
    while i < end:
        if ball is None:
            i_out = i
        else:
            sq_dists = np.sum((points[order[i:end]] - ball.center) ** 2,
                              axis=1)
            sq_radius = ball.radius ** 2
            outside = np.flatnonzero(
                sq_dists > sq_radius + _EXCESS_TOL * (1 + sq_radius))
            if not outside.size:
                break
            i_out = i + outside[0]

        index = order[i_out]
        candidate = support + [index]
        if circumsphere(points[candidate]) is not None:
            ball = _welzl(points, order, i_out, candidate, dims)
            # Move to front
            order[1:i_out + 1] = order[:i_out].copy()
            order[0] = index
        i = i_out + 1

    return ball


def _welzl_ball(points, seed):
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(points))
    ball = _welzl(points, order, len(points), [], points.shape[1])
    return Ball(ball.center, ball.radius)


@numba.njit()
def _coreset(points, epsilon, max_rounds):
    """Bădoiu-Clarkson iteration written in numba.

    The center is kept as a convex combination of the points. Its weighted
    variance is a lower bound of the squared minimal radius, so the loop can
    stop as soon as the farthest point is within (1 + epsilon) of it.
    """
    m, d = points.shape
    center = points[0].copy()
    weights = np.zeros(m)
    weights[0] = 1.

    best_center = center.copy()
    best_sq_radius = np.inf
    for it in range(1, max_rounds + 1):
        far = 0
        far_sq = -1.
        lower = 0.
        for j in range(m):
            sq = 0.
            for c in range(d):
                diff = points[j, c] - center[c]
                sq += diff * diff
            if sq > far_sq:
                far = j
                far_sq = sq
            lower += weights[j] * sq

        if far_sq < best_sq_radius:
            best_sq_radius = far_sq
            best_center[:] = center
        if far_sq <= (1. + epsilon) ** 2 * lower:
            break

        step = 1. / (it + 1.)
        for c in range(d):
            center[c] += step * (points[far, c] - center[c])
        for j in range(m):
            weights[j] *= 1. - step
        weights[far] += step

    return best_center, np.sqrt(best_sq_radius)


def _coreset_ball(points, epsilon):
    max_rounds = int(np.ceil(1. / epsilon ** 2))
    center, radius = _coreset(points, epsilon, max_rounds)
    return Ball(center, float(radius))


def min_enclosing_ball(points, method='auto', epsilon=DEFAULT_EPSILON, seed=0,
                       max_exact_dim=MAX_EXACT_DIM):
    """Minimal enclosing ball of a point set (Euclidean metric).

    Parameters
    ----------
    points : array_like
        Points of shape (n, d), n >= 1.
    method : str, optional
        'welzl' for the exact algorithm, 'coreset' for the approximation, or
        'auto' (default) to use 'welzl' up to `max_exact_dim` dimensions.
    epsilon : float, optional
        Relative radius accuracy of the core-set approximation.
    seed : int, optional
        Seed of the random point order of Welzl's algorithm.
    max_exact_dim : int, optional
        Largest dimension count solved exactly by 'auto'.

    Returns
    -------
    :class:`Ball`
        Smallest ball containing all points.

    Raises
    ------
    ValueError
        If `points` is empty or not finite.

    """
    points = check_points(points)
    if method == 'auto':
        method = 'welzl' if points.shape[1] <= max_exact_dim else 'coreset'

    if method == 'welzl':
        return _welzl_ball(points, seed)
    elif method == 'coreset':
        logger.debug('Core-set ball of %d points in %d dimensions',
                     *points.shape)
        return _coreset_ball(points, epsilon)
    else:
        raise NotImplementedError('No ball method for: %s' % method)
