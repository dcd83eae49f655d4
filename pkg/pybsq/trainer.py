#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Gradient descent training of k-Means and BSQ quantizers.

Every epoch the dataset is shuffled and split into batches. Each batch goes
through the distance layer, the selection layer and the accumulator. After a
number of batches set by the `r` schedule the accumulated targets are
propagated through the distance layer and the centroids take a gradient step
towards them; then the accumulator is reset.
"""

import dataclasses
import logging
import math
import time
import typing

import numpy as np

from .accumulate import KMEANS, get_accumulator, get_variant
from .data import make_rng
from .distance import (DEFAULT_NORM, DEFAULT_DTYPE, check_centroids,
                       check_dtype, check_norm, check_points,
                       pairwise_distances)
from .selection import build_mask, mask_distances, nearest_centroids

logger = logging.getLogger(__name__)

DEFAULT_EPOCHS = 100
DEFAULT_BATCH_SIZE = 512
DEFAULT_LR_INITIAL = 0.1
DEFAULT_LR_FINAL = 0.001
DEFAULT_R_SCHEDULE = 'linear'
DEFAULT_INIT = 'random'

RANDOM_POINTS = 'random'
KMEANS_PP = 'kmeans++'

R_SCHEDULES = ['linear', 'none', 'epoch']

# Stream of the shuffling generator, separate from initialization
_SHUFFLE_STREAM = 1


def get_init_method(method):
    """Return the initialization naming used in this package.

    Parameters
    ----------
    method : str
        Initialization synonym.

    Returns
    -------
    method : str
        Either 'random' or 'kmeans++'.

    """
    method = method.lower()
    if method in ['random', 'random_points', 'random-points', 'points']:
        return RANDOM_POINTS
    elif method in ['kmeans++', 'k-means++', 'kmeans_pp', 'kmeanspp', 'pp']:
        return KMEANS_PP
    else:
        raise NotImplementedError('No recognized initialization for: %s' %
                                  method)


def get_r_schedule(schedule):
    """Normalize an r schedule descriptor.

    Parameters
    ----------
    schedule : str or int
        'linear', 'none' (update every batch), 'epoch' (update once per
        epoch), or a fixed integer r.

    Returns
    -------
    str or int
        Canonical descriptor.

    """
    if isinstance(schedule, (int, np.integer)):
        if schedule < 1:
            raise ValueError('A fixed r must be >= 1, got: %d' % schedule)
        return int(schedule)

    schedule = str(schedule).lower()
    if schedule.isdigit():
        return get_r_schedule(int(schedule))
    elif schedule in R_SCHEDULES:
        return schedule
    else:
        raise NotImplementedError('No recognized r schedule for: %s' %
                                  schedule)


def r_schedule_value(epoch, total_epochs, n_batches,
                     schedule=DEFAULT_R_SCHEDULE):
    r"""Update frequency parameter `r` of an epoch.

    Updates happen every :math:`\lceil n_{batches} / r \rceil` batches, so
    :math:`r = n_{batches}` updates after every batch (no accumulation) and
    :math:`r = 1` updates once per epoch.

    The 'linear' schedule descends from :math:`n_{batches}` at the first
    epoch to 1 at epoch :math:`\lfloor E/2 \rfloor`:

    .. math::
        r(e) = \max\left(1, \mathrm{round}\left(n_{batches}
        \left(1 - \frac{e}{\lfloor E/2 \rfloor}\right)\right)\right)

    Parameters
    ----------
    epoch : int
        Current epoch, 0-based.
    total_epochs : int
        Number of epochs, `E`.
    n_batches : int
        Number of batches per epoch.
    schedule : str or int, optional
        Schedule descriptor, see :func:`get_r_schedule`.

    Returns
    -------
    int
        r, between 1 and `n_batches`.

    """
    if not 0 <= epoch < total_epochs:
        raise ValueError('epoch must be in [0, %d), got: %d' %
                         (total_epochs, epoch))

    schedule = get_r_schedule(schedule)
    if schedule == 'none':
        return n_batches
    elif schedule == 'epoch':
        return 1
    elif schedule == 'linear':
        half = total_epochs // 2
        if half == 0:
            return n_batches
        # Rounded half up
        value = math.floor(n_batches * (1. - epoch / half) + 0.5)
        return int(min(n_batches, max(1, value)))
    else:
        return int(min(n_batches, schedule))


def lr_schedule_value(epoch, total_epochs, lr_initial=DEFAULT_LR_INITIAL,
                      lr_final=DEFAULT_LR_FINAL):
    r"""Learning rate of an epoch.

    Geometric interpolation between the initial and final rates:

    .. math::
        \eta(e) = \eta_0 (\eta_f / \eta_0)^{e / (E - 1)}

    Parameters
    ----------
    epoch : int
        Current epoch, 0-based.
    total_epochs : int
        Number of epochs, `E`. With a single epoch `lr_initial` is used.
    lr_initial : float, optional
        Learning rate of the first epoch.
    lr_final : float, optional
        Learning rate of the last epoch.

    Returns
    -------
    float
        Learning rate.

    """
    if total_epochs == 1:
        return float(lr_initial)
    return float(lr_initial *
                 (lr_final / lr_initial) ** (epoch / (total_epochs - 1)))


def init_centroids(data, k, method=DEFAULT_INIT, seed=0, norm=DEFAULT_NORM):
    """Initial centroids.

    Parameters
    ----------
    data : array_like
        Points of shape (n, d).
    k : int
        Number of quanta, k <= n.
    method : str, optional
        'random' samples k distinct rows without replacement; 'kmeans++'
        uses the distance-weighted seeding of :cite:`arthur07`.
    seed : int, optional
        Seed of the random generator.
    norm : float, optional
        Order of the p-norm used by 'kmeans++'.

    Returns
    -------
    :class:`numpy.ndarray`
        Centroids of shape (k, d).

    """
    data = np.asarray(data)
    n = data.shape[0]
    if not 1 <= k <= n:
        raise ValueError('k (%d) must be >= 1 and not exceed the number of '
                         'points (%d)' % (k, n))

    rng = make_rng(seed)
    method = get_init_method(method)
    if method == RANDOM_POINTS:
        return data[rng.choice(n, size=k, replace=False)].copy()

    chosen = [int(rng.integers(n))]
    sq_dists = pairwise_distances(data, data[chosen], norm)[:, 0] ** 2
    for _ in range(1, k):
        sq_dists[chosen] = 0.
        total = sq_dists.sum()
        if total > 0:
            index = int(rng.choice(n, p=sq_dists / total))
        else:
            # Only duplicates of the chosen points are left
            remaining = np.setdiff1d(np.arange(n), chosen)
            index = int(rng.choice(remaining))
        chosen.append(index)
        sq_dists = np.minimum(
            sq_dists, pairwise_distances(data, data[[index]], norm)[:, 0] ** 2)
    return data[chosen].copy()


def _row_norms(diffs, norm):
    # Scaled by the largest magnitude of each row, as in the distance kernel
    scale = np.abs(diffs).max(axis=1, initial=0.)
    safe = np.where(scale > 0, scale, 1.)
    return scale * np.linalg.norm(diffs / safe[:, np.newaxis], ord=norm,
                                  axis=1)


def _gradients(diffs, norm):
    """Gradient of the p-norm of each row with respect to the row."""
    dists = _row_norms(diffs, norm)
    grads = np.zeros_like(diffs, dtype=float)
    moving = dists > 0
    ratios = diffs[moving] / dists[moving, np.newaxis]
    if norm == 2:
        grads[moving] = ratios
    else:
        grads[moving] = np.sign(ratios) * np.abs(ratios) ** (norm - 1)
    return grads


def distance_gradient(centroid, target, norm=DEFAULT_NORM):
    """Gradient of the distance to a target with respect to the centroid.

    Parameters
    ----------
    centroid : array_like
        Vector of length d.
    target : array_like
        Vector of length d.
    norm : float, optional
        Order of the p-norm.

    Returns
    -------
    :class:`numpy.ndarray`
        Gradient of ``||centroid - target||_p``. The zero vector is used as
        the subgradient where centroid and target coincide.

    """
    diff = (np.asarray(centroid, dtype=float) -
            np.asarray(target, dtype=float)).reshape(1, -1)
    return _gradients(diff, check_norm(norm))[0]


def update_loss(centroids, state, norm=DEFAULT_NORM):
    """Sum of the distances between active centroids and their targets."""
    active = state.active
    diffs = np.asarray(centroids)[active] - state.targets[active]
    diffs = diffs.astype(float)
    return float(_row_norms(diffs, norm).sum())


def update_step(centroids, state, lr, norm=DEFAULT_NORM, clamp_step=True):
    """Gradient step of the centroids towards the accumulated targets.

    Parameters
    ----------
    centroids : array_like
        Centroids of shape (k, d).
    state : :class:`~.accumulate.AccumulatorState`
        Accumulated targets; quanta with a zero weight are not moved.
    lr : float
        Learning rate, > 0.
    norm : float, optional
        Order of the p-norm.
    clamp_step : bool, optional
        Prevent a centroid from moving past its target. For p = 2 the step
        length is ``min(lr, distance)``; otherwise every coordinate stops at
        the target coordinate.

    Returns
    -------
    :class:`numpy.ndarray`
        Updated centroids.

    """
    if not lr > 0:
        raise ValueError('learning rate must be > 0, got: %r' % lr)

    centroids = np.array(centroids, copy=True)
    active = state.active
    if not np.any(active):
        return centroids

    current = centroids[active].astype(float)
    targets = state.targets[active].astype(float)
    diffs = current - targets
    steps = -lr * _gradients(diffs, norm)

    moved = current + steps
    if clamp_step:
        if norm == 2:
            reached = _row_norms(diffs, norm) <= lr
            moved[reached] = targets[reached]
        else:
            reached = np.abs(steps) >= np.abs(diffs)
            moved[reached] = targets[reached]

    centroids[active] = moved
    return centroids


def revive_dead_quanta(data, centroids, dead, norm=DEFAULT_NORM):
    """Move quanta without assigned points onto far away points.

    Dead quanta are revived in ascending order; each is placed on the point
    currently farthest from its closest centroid (lowest index on ties).

    Parameters
    ----------
    data : array_like
        Points of shape (n, d).
    centroids : array_like
        Centroids of shape (k, d).
    dead : array_like
        Boolean vector of the quanta to revive.
    norm : float, optional
        Order of the p-norm.

    Returns
    -------
    :class:`numpy.ndarray`
        Updated centroids.

    """
    centroids = np.array(centroids, copy=True)
    dead = np.flatnonzero(dead)
    if not dead.size:
        return centroids

    _, min_dists = nearest_centroids(data, centroids, norm)
    for i in dead:
        j = int(np.argmax(min_dists))
        centroids[i] = data[j]
        min_dists = np.minimum(
            min_dists, pairwise_distances(data, data[[j]], norm)[:, 0])
    return centroids


@dataclasses.dataclass
class TrainConfig:
    """Configuration of :func:`fit`.

    Parameters
    ----------
    k : int
        Number of quanta.
    variant : str, optional
        'kmeans' or 'bsq'.
    norm : float, optional
        Order of the p-norm.
    epochs : int, optional
        Number of epochs.
    batch_size : int or None, optional
        Points per batch. `None` puts the whole dataset in a single batch.
    lr_initial, lr_final : float, optional
        Learning rates of the first and last epoch.
    r_schedule : str or int, optional
        Update frequency schedule, see :func:`r_schedule_value`.
    seed : int, optional
        Seed of the initialization and of the shuffling.
    init : str, optional
        Initialization method, see :func:`init_centroids`.
    clamp_step : bool, optional
        Clamp the gradient steps at the targets, see :func:`update_step`.
    revive_dead : bool, optional
        Revive quanta that were not assigned a point for an entire epoch.
    dtype : str, optional
        'float64' or 'float32'.

    """

    k: int
    variant: str = KMEANS
    norm: float = DEFAULT_NORM
    epochs: int = DEFAULT_EPOCHS
    batch_size: typing.Optional[int] = DEFAULT_BATCH_SIZE
    lr_initial: float = DEFAULT_LR_INITIAL
    lr_final: float = DEFAULT_LR_FINAL
    r_schedule: typing.Union[str, int] = DEFAULT_R_SCHEDULE
    seed: int = 0
    init: str = DEFAULT_INIT
    clamp_step: bool = True
    revive_dead: bool = True
    dtype: str = DEFAULT_DTYPE

    def __post_init__(self):
        self.variant = get_variant(self.variant)
        self.norm = check_norm(self.norm)
        self.r_schedule = get_r_schedule(self.r_schedule)
        self.init = get_init_method(self.init)
        self.dtype = check_dtype(self.dtype).name
        if self.k < 1:
            raise ValueError('k must be >= 1, got: %d' % self.k)
        if self.epochs < 1:
            raise ValueError('epochs must be >= 1, got: %d' % self.epochs)
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError('batch_size must be >= 1, got: %d' %
                             self.batch_size)
        if not 0 < self.lr_final <= self.lr_initial:
            raise ValueError('learning rates must satisfy 0 < lr_final <= '
                             'lr_initial, got: %r, %r' %
                             (self.lr_final, self.lr_initial))


@dataclasses.dataclass
class FitReport:
    """Result of fitting a quantizer.

    Attributes
    ----------
    algorithm : str
        Name of the algorithm.
    centroids : :class:`numpy.ndarray`
        Final centroids of shape (k, d).
    loss_per_update : List[float]
        Loss of every update. For gradient descent the sum of the distances
        between centroids and targets; for Lloyd's algorithm the mean squared
        distance; for BSQ-EM the max distance.
    epoch_losses : List[float]
        Mean distance of the points to their assigned centroid seen during
        each epoch (iteration for EM).
    quantization_error : float
        Mean distance of the points to their assigned final centroid.
    max_distance : float
        Largest distance of a point to its assigned final centroid.
    radii : :class:`numpy.ndarray`
        Largest assigned distance of each quantum, zero if empty.
    counts : :class:`numpy.ndarray`
        Number of points assigned to each quantum.
    assignments : :class:`numpy.ndarray`
        Quantum of every point.
    wall_time_seconds : float
        Duration of the fit.
    updates_performed : int
        Number of centroid updates.
    iterations : int
        Epochs (gradient descent) or EM iterations.
    converged : bool
        Whether an EM fit met its stopping rule; always `True` for gradient
        descent.
    epoch_max_distances : List[float]
        Largest point distance seen during each epoch.

    """

    algorithm: str
    centroids: np.ndarray
    loss_per_update: list
    epoch_losses: list
    quantization_error: float
    max_distance: float
    radii: np.ndarray
    counts: np.ndarray
    assignments: np.ndarray
    wall_time_seconds: float = 0.
    updates_performed: int = 0
    iterations: int = 0
    converged: bool = True
    epoch_max_distances: list = dataclasses.field(default_factory=list)

    def to_dict(self, assignments=False):
        """Plain dictionary of the report for JSON serialization."""
        fields = dict(
            algorithm=self.algorithm,
            k=int(self.centroids.shape[0]),
            d=int(self.centroids.shape[1]),
            n=int(self.assignments.size),
            centroids=self.centroids.tolist(),
            quantization_error=self.quantization_error,
            max_distance=self.max_distance,
            radii=self.radii.tolist(),
            counts=self.counts.tolist(),
            loss_per_update=[float(v) for v in self.loss_per_update],
            epoch_losses=[float(v) for v in self.epoch_losses],
            epoch_max_distances=[float(v) for v in self.epoch_max_distances],
            wall_time_seconds=self.wall_time_seconds,
            updates_performed=self.updates_performed,
            iterations=self.iterations,
            converged=self.converged,
        )
        if assignments:
            fields['assignments'] = self.assignments.tolist()
        return fields


def make_report(algorithm, data, centroids, norm=DEFAULT_NORM, **kwds):
    """Evaluate the final centroids on the whole dataset.

    Parameters
    ----------
    algorithm : str
        Name of the algorithm.
    data : array_like
        Points of shape (n, d).
    centroids : array_like
        Final centroids.
    norm : float, optional
        Order of the p-norm.
    kwds : dict
        Further :class:`FitReport` fields.

    Returns
    -------
    :class:`FitReport`

    """
    indices, min_dists = nearest_centroids(data, centroids, norm)
    k = len(centroids)
    radii = np.zeros(k)
    np.maximum.at(radii, indices, min_dists)
    return FitReport(
        algorithm=algorithm,
        centroids=centroids,
        quantization_error=float(min_dists.mean()),
        max_distance=float(min_dists.max()),
        radii=radii,
        counts=np.bincount(indices, minlength=k),
        assignments=indices,
        **kwds)


def starting_centroids(data, config, initial_centroids):
    """Validated explicit centroids, or the configured initialization."""
    if initial_centroids is None:
        return init_centroids(data, config.k, config.init, config.seed,
                              config.norm)

    centroids = check_centroids(initial_centroids, data.shape[1], data.dtype)
    if centroids.shape[0] != config.k:
        raise ValueError('expected %d initial centroids, got %d' %
                         (config.k, centroids.shape[0]))
    return centroids.copy()


def fit(data, config, initial_centroids=None, callback=None):
    """Fit a quantizer by accumulated gradient descent.

    Parameters
    ----------
    data : array_like
        Points of shape (n, d).
    config : :class:`TrainConfig`
        Training configuration.
    initial_centroids : array_like, optional
        Starting centroids of shape (k, d). If `None`, they are selected with
        :func:`init_centroids`.
    callback : callable, optional
        Called after every batch with the keywords `epoch`, `batch`,
        `centroids` (the centroids the batch was measured against), and
        `updated` (whether an update follows the batch).

    Returns
    -------
    :class:`FitReport`

    Raises
    ------
    ValueError
        If k exceeds the number of points or the data is not finite.

    """
    start = time.perf_counter()

    data = check_points(data, config.dtype, name='data')
    n, d = data.shape
    if config.k > n:
        raise ValueError('k (%d) must not exceed the number of points (%d)' %
                         (config.k, n))

    centroids = starting_centroids(data, config, initial_centroids)
    rng = make_rng((config.seed, _SHUFFLE_STREAM))

    batch_size = n if config.batch_size is None else min(config.batch_size, n)
    n_batches = int(math.ceil(n / batch_size))
    accumulator = get_accumulator(config.variant, config.k, d, data.dtype)

    loss_per_update = []
    epoch_losses = []
    epoch_max_distances = []
    updates = 0
    for epoch in range(config.epochs):
        lr = lr_schedule_value(epoch, config.epochs, config.lr_initial,
                               config.lr_final)
        r = r_schedule_value(epoch, config.epochs, n_batches,
                             config.r_schedule)
        interval = int(math.ceil(n_batches / r))

        order = rng.permutation(n)
        counts = np.zeros(config.k, dtype=np.int64)
        total_distance = 0.
        max_distance = 0.
        for batch_index in range(n_batches):
            batch = data[order[batch_index * batch_size:
                               (batch_index + 1) * batch_size]]
            distances = pairwise_distances(batch, centroids, config.norm)
            mask = build_mask(distances)
            masked = mask_distances(distances, mask)
            accumulator(batch, mask, masked)

            counts += mask.counts()
            total_distance += float(masked.sum())
            max_distance = max(max_distance, float(masked.max()))

            # The last batch of an epoch always flushes the accumulator
            updated = ((batch_index + 1) % interval == 0 or
                       batch_index == n_batches - 1)
            if callback is not None:
                callback(epoch=epoch, batch=batch_index, centroids=centroids,
                         updated=updated)
            if updated:
                loss_per_update.append(
                    update_loss(centroids, accumulator.state, config.norm))
                centroids = update_step(centroids, accumulator.state, lr,
                                        config.norm, config.clamp_step)
                accumulator.reset()
                updates += 1

        epoch_losses.append(total_distance / n)
        epoch_max_distances.append(max_distance)

        dead = counts == 0
        if config.revive_dead and np.any(dead):
            logger.debug('Epoch %d: reviving %d dead quanta', epoch,
                         dead.sum())
            centroids = revive_dead_quanta(data, centroids, dead, config.norm)

        logger.debug('Epoch %d: lr=%.3g, r=%d, loss=%.6g', epoch, lr, r,
                     epoch_losses[-1])

    report = make_report(
        'sgd-' + config.variant,
        data,
        centroids,
        config.norm,
        loss_per_update=loss_per_update,
        epoch_losses=epoch_losses,
        epoch_max_distances=epoch_max_distances,
        updates_performed=updates,
        iterations=config.epochs)
    report.wall_time_seconds = time.perf_counter() - start
    logger.info('Fitted %s (k=%d, n=%d, d=%d) in %.2f s: error=%.6g, '
                'max distance=%.6g', report.algorithm, config.k, n, d,
                report.wall_time_seconds, report.quantization_error,
                report.max_distance)
    return report
