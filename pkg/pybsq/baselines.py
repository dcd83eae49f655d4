#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Expectation-maximization baselines.

Lloyd's algorithm (:cite:`lloyd82`) moves every centroid to the mean of its
assigned points. The original bounding sphere quantization moves it to the
center of the minimal enclosing ball of its assigned points instead.
"""

import dataclasses
import logging
import time

import numpy as np

from .accumulate import summarize_batch_kmeans
from .distance import DEFAULT_DTYPE, DEFAULT_NORM, check_dtype, check_norm
from .distance import check_points
from .meb import DEFAULT_EPSILON, min_enclosing_ball
from .selection import Mask, nearest_centroids
from .trainer import (DEFAULT_INIT, get_init_method, make_report,
                      revive_dead_quanta, starting_centroids)

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 100
DEFAULT_TOL = 1e-6


@dataclasses.dataclass
class EMConfig:
    """Configuration of :func:`lloyd_fit` and :func:`bsq_em_fit`.

    Parameters
    ----------
    k : int
        Number of quanta.
    norm : float, optional
        Order of the p-norm used for the assignment. :func:`bsq_em_fit`
        requires 2.
    max_iterations : int, optional
        Hard limit on the number of iterations.
    tol : float, optional
        Relative change of the mean squared distance below which Lloyd's
        algorithm stops.
    seed : int, optional
        Seed of the initialization.
    init : str, optional
        Initialization method, see :func:`~.trainer.init_centroids`.
    revive_dead : bool, optional
        Revive quanta that were not assigned a point.
    epsilon : float, optional
        Accuracy of the approximate enclosing ball in high dimensions.
    dtype : str, optional
        'float64' or 'float32'.

    """

    k: int
    norm: float = DEFAULT_NORM
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tol: float = DEFAULT_TOL
    seed: int = 0
    init: str = DEFAULT_INIT
    revive_dead: bool = True
    epsilon: float = DEFAULT_EPSILON
    dtype: str = DEFAULT_DTYPE

    def __post_init__(self):
        self.norm = check_norm(self.norm)
        self.init = get_init_method(self.init)
        self.dtype = check_dtype(self.dtype).name
        if self.k < 1:
            raise ValueError('k must be >= 1, got: %d' % self.k)
        if self.max_iterations < 1:
            raise ValueError('max_iterations must be >= 1, got: %d' %
                             self.max_iterations)
        if not self.tol >= 0:
            raise ValueError('tol must be >= 0, got: %r' % self.tol)


def _prepare(data, config, initial_centroids):
    data = check_points(data, config.dtype, name='data')
    if config.k > data.shape[0]:
        raise ValueError('k (%d) must not exceed the number of points (%d)' %
                         (config.k, data.shape[0]))
    return data, starting_centroids(data, config, initial_centroids)


def _revive(data, centroids, counts, config):
    dead = counts == 0
    if config.revive_dead and np.any(dead):
        logger.debug('Reviving %d empty quanta', dead.sum())
        centroids = revive_dead_quanta(data, centroids, dead, config.norm)
    return centroids


def lloyd_fit(data, config, initial_centroids=None):
    """Fit k-Means with Lloyd's algorithm.

    Parameters
    ----------
    data : array_like
        Points of shape (n, d).
    config : :class:`EMConfig`
        Configuration.
    initial_centroids : array_like, optional
        Starting centroids of shape (k, d).

    Returns
    -------
    :class:`~.trainer.FitReport`
        `loss_per_update` holds the mean squared distance after every
        iteration.

    """
    start = time.perf_counter()
    data, centroids = _prepare(data, config, initial_centroids)
    k = config.k

    indices, min_dists = nearest_centroids(data, centroids, config.norm)
    loss = float(np.mean(min_dists ** 2))

    losses = []
    epoch_losses = []
    epoch_max_distances = []
    converged = False
    for iteration in range(1, config.max_iterations + 1):
        summary = summarize_batch_kmeans(data, Mask(indices, k))
        filled = summary.batch_weights > 0
        centroids = centroids.copy()
        centroids[filled] = summary.batch_targets[filled]
        centroids = _revive(data, centroids, summary.batch_weights, config)

        indices, min_dists = nearest_centroids(data, centroids, config.norm)
        new_loss = float(np.mean(min_dists ** 2))
        losses.append(new_loss)
        epoch_losses.append(float(min_dists.mean()))
        epoch_max_distances.append(float(min_dists.max()))
        logger.debug('Lloyd iteration %d: mean squared distance %.6g',
                     iteration, new_loss)

        if abs(loss - new_loss) <= config.tol * max(loss, np.finfo(float).eps):
            converged = True
            break
        loss = new_loss

    if converged:
        logger.info('Lloyd converged after %d iterations', iteration)
    else:
        logger.info('Lloyd stopped after %d iterations without converging',
                    iteration)

    report = make_report(
        'lloyd',
        data,
        centroids,
        config.norm,
        loss_per_update=losses,
        epoch_losses=epoch_losses,
        epoch_max_distances=epoch_max_distances,
        updates_performed=iteration,
        iterations=iteration,
        converged=converged)
    report.wall_time_seconds = time.perf_counter() - start
    return report


def bsq_em_fit(data, config, initial_centroids=None, callback=None):
    """Fit bounding sphere quantization by expectation-maximization.

    The maximization step moves every centroid to the center of the minimal
    enclosing ball of its assigned points. The iteration stops when no point
    changes its quantum.

    Parameters
    ----------
    data : array_like
        Points of shape (n, d).
    config : :class:`EMConfig`
        Configuration, `norm` must be 2.
    initial_centroids : array_like, optional
        Starting centroids of shape (k, d).
    callback : callable, optional
        Called after every maximization step with the keywords `iteration`,
        `centroids`, `assignments` (the assignment the step used) and `balls`
        (a :class:`~.meb.Ball` per quantum, `None` if empty).

    Returns
    -------
    :class:`~.trainer.FitReport`
        `loss_per_update` holds the largest point distance after every
        iteration. `converged` is `False` if `max_iterations` was reached
        while the assignment still changed.

    Raises
    ------
    ValueError
        If the norm is not Euclidean.

    """
    if config.norm != 2:
        raise ValueError('BSQ-EM requires the Euclidean norm (p = 2), got: '
                         'p = %g' % config.norm)

    start = time.perf_counter()
    data, centroids = _prepare(data, config, initial_centroids)
    k = config.k

    indices, _ = nearest_centroids(data, centroids, config.norm)

    losses = []
    epoch_losses = []
    epoch_max_distances = []
    converged = False
    for iteration in range(1, config.max_iterations + 1):
        centroids = centroids.copy()
        balls = []
        for i in range(k):
            members = data[indices == i]
            if len(members):
                ball = min_enclosing_ball(members, epsilon=config.epsilon,
                                          seed=config.seed)
                centroids[i] = ball.center
            else:
                ball = None
            balls.append(ball)

        counts = np.bincount(indices, minlength=k)
        centroids = _revive(data, centroids, counts, config)
        if callback is not None:
            callback(iteration=iteration, centroids=centroids,
                     assignments=indices, balls=balls)

        new_indices, min_dists = nearest_centroids(data, centroids,
                                                   config.norm)
        losses.append(float(min_dists.max()))
        epoch_losses.append(float(min_dists.mean()))
        epoch_max_distances.append(float(min_dists.max()))
        logger.debug('BSQ-EM iteration %d: max distance %.6g', iteration,
                     losses[-1])

        if np.array_equal(new_indices, indices):
            converged = True
            break
        indices = new_indices

    if converged:
        logger.info('BSQ-EM converged after %d iterations', iteration)
    else:
        logger.info('BSQ-EM did not converge within %d iterations',
                    config.max_iterations)

    report = make_report(
        'bsq-em',
        data,
        centroids,
        config.norm,
        loss_per_update=losses,
        epoch_losses=epoch_losses,
        epoch_max_distances=epoch_max_distances,
        updates_performed=iteration,
        iterations=iteration,
        converged=converged)
    report.wall_time_seconds = time.perf_counter() - start
    return report
