#!/usr/bin/python
# -*- coding: utf-8 -*-

"""Tools for reading/writing of files and performing operations."""

import dataclasses
import json
import logging
import pathlib

import numpy as np
import pyexcel

from . import bench
from .baselines import EMConfig, bsq_em_fit, lloyd_fit
from .data import (SyntheticSpec, generate, read_dataset, save_bin, save_csv,
                   write_dataset)
from .distance import DEFAULT_NORM, check_centroids
from .selection import nearest_centroids
from .trainer import TrainConfig, fit

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 'pybsq.fit-report'
PLOT_SCHEMA = 'pybsq.plot-export'
SCHEMA_VERSION = 1

# Grid points per axis used to sample the cell boundaries
BOUNDARY_RESOLUTION = 200


def read_centroids(fpath, dims=None):
    """Read centroids from a dataset file.

    Parameters
    ----------
    fpath : str or `pathlib.Path`
        Filename of the centroid file (CSV or binary).
    dims : int, optional
        Expected number of dimensions.

    Returns
    -------
    :class:`numpy.ndarray`
        Centroids of shape (k, d).

    """
    centroids = read_dataset(fpath)
    if dims is not None:
        centroids = check_centroids(centroids, dims)
    return centroids


def write_assignments(fpath, assignments):
    """Write the quantum index of every point, one per row."""
    fpath = pathlib.Path(fpath)
    fpath.parent.mkdir(parents=True, exist_ok=True)
    rows = [[int(i)] for i in assignments]
    pyexcel.save_as(array=rows, dest_file_name=str(fpath))


def read_assignments(fpath):
    """Read a file written by :func:`write_assignments`."""
    rows = pyexcel.get_array(file_name=str(fpath))
    return np.array([int(row[0]) for row in rows if len(row)], dtype=np.int64)


def _write_json(fpath, obj):
    fpath = pathlib.Path(fpath)
    fpath.parent.mkdir(parents=True, exist_ok=True)
    with fpath.open('w') as fp:
        json.dump(obj, fp, indent=2)
        fp.write('\n')


def make_fit_report(report, config):
    """JSON document of a fit.

    Parameters
    ----------
    report : :class:`~.trainer.FitReport`
        Result of the fit.
    config : :class:`~.trainer.TrainConfig` or :class:`~.baselines.EMConfig`
        Configuration of the fit.

    Returns
    -------
    dict

    """
    doc = {
        'schema': REPORT_SCHEMA,
        'schema_version': SCHEMA_VERSION,
        'config': dataclasses.asdict(config),
    }
    doc.update(report.to_dict())
    return doc


def sample_boundaries(centroids, bounds, norm=DEFAULT_NORM,
                      resolution=BOUNDARY_RESOLUTION):
    """Sample the boundaries between the cells of 2-D centroids.

    A regular grid covering `bounds` is assigned to the nearest centroids. The
    midpoint of every pair of neighboring grid points with different quanta is
    a boundary sample.

    Parameters
    ----------
    centroids : array_like
        Centroids of shape (k, 2).
    bounds : array_like
        Lower and upper corner of the sampled box, shape (2, 2).
    norm : float, optional
        Order of the p-norm.
    resolution : int, optional
        Grid points per axis.

    Returns
    -------
    List[dict]
        One entry per pair of adjacent quanta with the keys 'quanta' (sorted
        pair of indices) and 'points' (list of [x, y] samples).

    """
    (x_min, y_min), (x_max, y_max) = np.asarray(bounds, dtype=float)
    xs = np.linspace(x_min, x_max, resolution)
    ys = np.linspace(y_min, y_max, resolution)
    grid_x, grid_y = np.meshgrid(xs, ys)
    grid = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    labels, _ = nearest_centroids(grid, centroids, norm)
    labels = labels.reshape(grid_x.shape)

    segments = {}
    for axis in [0, 1]:
        if axis == 0:
            a, b = labels[:-1, :], labels[1:, :]
            mid_x = grid_x[:-1, :]
            mid_y = (grid_y[:-1, :] + grid_y[1:, :]) / 2
        else:
            a, b = labels[:, :-1], labels[:, 1:]
            mid_x = (grid_x[:, :-1] + grid_x[:, 1:]) / 2
            mid_y = grid_y[:, :-1]
        changed = a != b
        for i, j, x, y in zip(a[changed], b[changed], mid_x[changed],
                              mid_y[changed]):
            key = (int(min(i, j)), int(max(i, j)))
            segments.setdefault(key, []).append([float(x), float(y)])

    return [{'quanta': list(key), 'points': segments[key]}
            for key in sorted(segments)]


def make_plot_export(data, centroids, norm=DEFAULT_NORM):
    """Points, assignments, centroids and radii of a quantization.

    Parameters
    ----------
    data : array_like
        Points of shape (n, d).
    centroids : array_like
        Centroids of shape (k, d).
    norm : float, optional
        Order of the p-norm.

    Returns
    -------
    dict
        Plot export document. The cell boundaries are only sampled for
        two-dimensional data; otherwise 'boundaries' is `None`.

    """
    data = np.asarray(data)
    centroids = check_centroids(centroids, data.shape[1])
    k = len(centroids)
    indices, min_dists = nearest_centroids(data, centroids, norm)
    radii = np.zeros(k)
    np.maximum.at(radii, indices, min_dists)

    if data.shape[1] == 2:
        both = np.vstack([data, centroids])
        boundaries = sample_boundaries(
            centroids, [both.min(axis=0), both.max(axis=0)], norm)
    else:
        logger.warning('Cell boundaries are only sampled for 2-D data, got '
                       '%d dimensions', data.shape[1])
        boundaries = None

    return {
        'schema': PLOT_SCHEMA,
        'schema_version': SCHEMA_VERSION,
        'p': norm,
        'points': data.tolist(),
        'assignments': indices.tolist(),
        'centroids': centroids.tolist(),
        'radii': radii.tolist(),
        'counts': np.bincount(indices, minlength=k).tolist(),
        'boundaries': boundaries,
    }


def read_plot_export(fpath):
    """Read a plot export file.

    Parameters
    ----------
    fpath : str or `pathlib.Path`
        Filename of the export.

    Returns
    -------
    dict
        The document with 'points', 'centroids' and 'radii' as float arrays and
        'assignments' and 'counts' as integer arrays.

    """
    with pathlib.Path(fpath).open() as fp:
        doc = json.load(fp)
    if doc.get('schema') != PLOT_SCHEMA:
        raise ValueError('Not a plot export: %s' % fpath)
    for key in ['points', 'centroids', 'radii']:
        doc[key] = np.array(doc[key], dtype=float)
    for key in ['assignments', 'counts']:
        doc[key] = np.array(doc[key], dtype=np.int64)
    return doc


def operation_gen(dest, n, d, distribution='gaussian', seed=0, fmt=None,
                  **kwds):
    """Generate a synthetic dataset and save it.

    Parameters
    ----------
    dest : str or `pathlib.Path`
        Output file.
    n, d : int
        Number of points and dimensions.
    distribution : str, optional
        See :class:`~.data.SyntheticSpec`.
    seed : int, optional
        Seed of the random generator.
    fmt : str, optional
        'csv' or 'bin'. If `None`, the format follows the file extension.
    kwds : dict
        Further :class:`~.data.SyntheticSpec` fields.

    Returns
    -------
    :class:`numpy.ndarray`
        The generated points.

    """
    data = generate(
        SyntheticSpec(n=n, d=d, distribution=distribution, seed=seed, **kwds))
    if fmt is None:
        write_dataset(dest, data)
    elif fmt == 'bin':
        save_bin(data, dest)
    elif fmt == 'csv':
        save_csv(data, dest)
    else:
        raise NotImplementedError('No recognized dataset format for: %s' % fmt)
    logger.info('Wrote %d x %d %s points to %s', n, d, distribution, dest)
    return data


def make_config(algorithm, k, norm=DEFAULT_NORM, epochs=None,
                batch_size=None, lr=None, lr_final=None, seed=0,
                init='random', max_iterations=None, tol=None,
                r_schedule=None, dtype=None):
    """Configuration of an algorithm from command line values.

    `None` values keep the defaults. A `batch_size` of 0 selects the
    non-batched mode of the SGD algorithms.
    """
    algorithm = bench.get_algorithm(algorithm)
    kwds = dict(k=k, norm=norm, seed=seed, init=init)
    if dtype is not None:
        kwds['dtype'] = dtype

    if algorithm in [bench.LLOYD, bench.BSQ_EM]:
        optional = dict(max_iterations=max_iterations or epochs, tol=tol)
        kwds.update({key: value for key, value in optional.items()
                     if value is not None})
        return EMConfig(**kwds)

    kwds['variant'] = 'bsq' if 'bsq' in algorithm else 'kmeans'
    if algorithm in [bench.SGD_KMEANS_FULL, bench.SGD_BSQ_FULL]:
        batch_size = 0
    optional = dict(epochs=epochs, lr_initial=lr, lr_final=lr_final,
                    r_schedule=r_schedule)
    kwds.update({key: value for key, value in optional.items()
                     if value is not None})
    if batch_size is not None:
        kwds['batch_size'] = batch_size or None
    return TrainConfig(**kwds)


def operation_fit(src, algorithm, k, out_centroids=None, out_assignments=None,
                  report=None, init_from=None, **kwds):
    """Fit a quantizer to a dataset file.

    Parameters
    ----------
    src : str or `pathlib.Path`
        Dataset file.
    algorithm : str
        Name of the algorithm, see :func:`~.bench.get_fitter`.
    k : int
        Number of quanta.
    out_centroids : str or `pathlib.Path`, optional
        Save the final centroids to this file.
    out_assignments : str or `pathlib.Path`, optional
        Save the quantum of every point to this file.
    report : str or `pathlib.Path`, optional
        Save the JSON report to this file.
    init_from : str or `pathlib.Path`, optional
        Read the initial centroids from this file.
    kwds : dict
        Configuration values, see :func:`make_config`.

    Returns
    -------
    dict
        The JSON report.

    """
    data = read_dataset(src)
    if k > data.shape[0]:
        raise ValueError('k (%d) must not exceed the number of points (%d)' %
                         (k, data.shape[0]))

    config = make_config(algorithm, k, **kwds)
    initial = None
    if init_from is not None:
        initial = read_centroids(init_from, data.shape[1])

    algorithm = bench.get_algorithm(algorithm)
    if algorithm == bench.LLOYD:
        result = lloyd_fit(data, config, initial)
    elif algorithm == bench.BSQ_EM:
        result = bsq_em_fit(data, config, initial)
    else:
        result = fit(data, config, initial)
        result.algorithm = algorithm

    if out_centroids is not None:
        write_dataset(out_centroids, result.centroids)
    if out_assignments is not None:
        write_assignments(out_assignments, result.assignments)

    doc = make_fit_report(result, config)
    if report is not None:
        _write_json(report, doc)
    return doc


def operation_bench(grid='desk', dest=None, fmt=bench.MARKDOWN, **kwds):
    """Run a benchmark grid.

    Parameters
    ----------
    grid : str, optional
        Grid name, JSON file, or inline description, see
        :func:`~.bench.parse_grid`.
    dest : str or `pathlib.Path`, optional
        Save the raw timings to this file.
    fmt : str, optional
        Format of the returned table, 'markdown' or 'csv'.
    kwds : dict
        Further :class:`~.bench.BenchGrid` fields.

    Returns
    -------
    str
        Rendered runtime table.

    """
    result = bench.run_grid(bench.parse_grid(grid, **kwds))
    if dest is not None:
        bench.write_results(result, dest)
    return bench.render_table(result, fmt)


def operation_export_plot(src, centroids, dest, norm=DEFAULT_NORM):
    """Export the data needed to draw a quantization.

    Parameters
    ----------
    src : str or `pathlib.Path`
        Dataset file.
    centroids : str or `pathlib.Path`
        Centroid file.
    dest : str or `pathlib.Path`
        Save the JSON export to this file.
    norm : float, optional
        Order of the p-norm.

    Returns
    -------
    dict
        The export document.

    """
    data = read_dataset(src)
    doc = make_plot_export(data, read_centroids(centroids, data.shape[1]),
                           norm)
    _write_json(dest, doc)
    return doc
