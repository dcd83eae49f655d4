#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Runtime benchmark over a grid of quantum counts and data sizes.

Every cell of the grid fits one algorithm to a seeded Gaussian dataset of
`n` points in `d` dimensions. Only the fit is timed; the data is generated
beforehand and each cell starts with a short warm-up fit that is discarded.
"""

import dataclasses
import functools
import json
import logging
import pathlib
import time
import typing

import numpy as np
import pyexcel

from .baselines import EMConfig, bsq_em_fit, lloyd_fit
from .data import SyntheticSpec, generate
from .distance import DEFAULT_NORM
from .trainer import DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS, TrainConfig, fit

logger = logging.getLogger(__name__)

SGD_KMEANS = 'sgd-kmeans'
SGD_BSQ = 'sgd-bsq'
SGD_KMEANS_FULL = 'sgd-kmeans-full'
SGD_BSQ_FULL = 'sgd-bsq-full'
LLOYD = 'lloyd'
BSQ_EM = 'bsq-em'

ALGORITHMS = [
    SGD_KMEANS, SGD_BSQ, SGD_KMEANS_FULL, SGD_BSQ_FULL, LLOYD, BSQ_EM
]
DEFAULT_ALGORITHMS = [SGD_KMEANS, SGD_BSQ, LLOYD, BSQ_EM]
DEFAULT_REPEATS = 3

# Named grids
GRIDS = {
    'desk': dict(k_values=[32, 512], n_values=[1000, 10000],
                 d_values=[10, 100]),
    'full': dict(k_values=[32, 512], n_values=[1000, 10000, 100000],
                 d_values=[10, 100, 1000]),
}

# Cell value of skipped cells
DASH = '−'

MARKDOWN = 'markdown'
CSV = 'csv'

RESULT_COLUMNS = ['algorithm', 'k', 'n', 'd', 'repeat', 'seconds',
                  'quantization_error', 'max_distance', 'skipped']


def _fit_sgd(variant, full, data, k, epochs, batch_size, seed, norm,
             initial_centroids=None):
    config = TrainConfig(
        k=k,
        variant=variant,
        norm=norm,
        epochs=epochs,
        batch_size=None if full else batch_size,
        seed=seed)
    return fit(data, config, initial_centroids)


def _fit_em(func, data, k, epochs, batch_size, seed, norm,
            initial_centroids=None):
    config = EMConfig(k=k, norm=norm, max_iterations=epochs, seed=seed)
    return func(data, config, initial_centroids)


def get_fitter(algorithm):
    """Select a fitting function based on a string.

    Parameters
    ----------
    algorithm : str
        One of 'sgd-kmeans', 'sgd-bsq', 'sgd-kmeans-full', 'sgd-bsq-full',
        'lloyd', or 'bsq-em'. The '-full' variants put the whole dataset in
        a single batch.

    Returns
    -------
    callable
        Function with the signature ``fitter(data, k, epochs, batch_size,
        seed, norm, initial_centroids=None)`` returning a
        :class:`~.trainer.FitReport`. For the EM algorithms `epochs` bounds
        the number of iterations and `batch_size` is ignored.

    """
    name = get_algorithm(algorithm)
    if name in [SGD_KMEANS, SGD_KMEANS_FULL]:
        return functools.partial(_fit_sgd, 'kmeans', name == SGD_KMEANS_FULL)
    elif name in [SGD_BSQ, SGD_BSQ_FULL]:
        return functools.partial(_fit_sgd, 'bsq', name == SGD_BSQ_FULL)
    elif name == LLOYD:
        return functools.partial(_fit_em, lloyd_fit)
    else:
        return functools.partial(_fit_em, bsq_em_fit)


def get_algorithm(algorithm):
    """Return the algorithm naming used in this package."""
    name = algorithm.lower().replace('_', '-')
    synonyms = {
        'kmeans': SGD_KMEANS,
        'bsq': SGD_BSQ,
        'kmeans-full': SGD_KMEANS_FULL,
        'bsq-full': SGD_BSQ_FULL,
        'kmeans-em': LLOYD,
        'bsqem': BSQ_EM,
    }
    name = synonyms.get(name, name)
    if name not in ALGORITHMS:
        raise NotImplementedError('No recognized algorithm for: %s' %
                                  algorithm)
    return name


def _as_list(values):
    if isinstance(values, (int, str)):
        values = [values]
    return sorted(int(v) for v in values)


@dataclasses.dataclass
class BenchGrid:
    """Benchmark grid.

    Parameters
    ----------
    k_values, n_values, d_values : List[int]
        Quantum counts, point counts and dimension counts.
    algorithms : List[str], optional
        Algorithm names, see :func:`get_fitter`.
    epochs : int, optional
        Epochs of the SGD fits and iteration limit of the EM fits.
    batch_size : int, optional
        Batch size of the SGD fits.
    repeats : int, optional
        Timed fits per cell.
    seed : int, optional
        Seed of the datasets and of the fits.
    norm : float, optional
        Order of the p-norm.

    """

    k_values: typing.List[int]
    n_values: typing.List[int]
    d_values: typing.List[int]
    algorithms: typing.List[str] = dataclasses.field(
        default_factory=lambda: list(DEFAULT_ALGORITHMS))
    epochs: int = DEFAULT_EPOCHS
    batch_size: int = DEFAULT_BATCH_SIZE
    repeats: int = DEFAULT_REPEATS
    seed: int = 0
    norm: float = DEFAULT_NORM

    def __post_init__(self):
        self.k_values = _as_list(self.k_values)
        self.n_values = _as_list(self.n_values)
        self.d_values = _as_list(self.d_values)
        self.algorithms = [get_algorithm(a) for a in self.algorithms]
        for name in ['k_values', 'n_values', 'd_values', 'algorithms']:
            if not getattr(self, name):
                raise ValueError('%s must not be empty' % name)
        for name in ['repeats', 'epochs', 'batch_size']:
            if getattr(self, name) < 1:
                raise ValueError('%s must be >= 1, got: %d' %
                                 (name, getattr(self, name)))

    def cells(self):
        """Cells as (algorithm, k, n, d) tuples, sorted by k, n, d."""
        return [(a, k, n, d)
                for k in self.k_values
                for n in self.n_values
                for d in self.d_values
                for a in self.algorithms]


@dataclasses.dataclass
class CellResult:
    """Timings and final objectives of one grid cell."""

    algorithm: str
    k: int
    n: int
    d: int
    seconds: typing.List[float] = dataclasses.field(default_factory=list)
    quantization_error: float = float('nan')
    max_distance: float = float('nan')
    skipped: bool = False
    reason: str = ''

    @property
    def min_seconds(self):
        return float(np.min(self.seconds))

    @property
    def median_seconds(self):
        return float(np.median(self.seconds))

    @property
    def max_seconds(self):
        return float(np.max(self.seconds))


@dataclasses.dataclass
class BenchResult:
    """Results of a benchmark grid."""

    grid: BenchGrid
    cells: typing.List[CellResult]

    def get(self, algorithm, k, n, d):
        """Result of a single cell."""
        for cell in self.cells:
            if (cell.algorithm, cell.k, cell.n, cell.d) == (algorithm, k, n,
                                                           d):
                return cell
        raise KeyError((algorithm, k, n, d))


def run_cell(grid, algorithm, k, n, d, data):
    """Time the fits of a single cell."""
    cell = CellResult(algorithm, k, n, d)
    if k > n:
        cell.skipped = True
        cell.reason = 'k (%d) exceeds n (%d)' % (k, n)
        logger.warning('Skipping %s k=%d n=%d d=%d: %s', algorithm, k, n, d,
                       cell.reason)
        return cell

    fitter = get_fitter(algorithm)
    # Warm-up: compile kernels and touch the memory once
    fitter(data, k, 1, grid.batch_size, grid.seed, grid.norm)

    for _ in range(grid.repeats):
        start = time.perf_counter()
        report = fitter(data, k, grid.epochs, grid.batch_size, grid.seed,
                        grid.norm)
        cell.seconds.append(time.perf_counter() - start)

    cell.quantization_error = report.quantization_error
    cell.max_distance = report.max_distance
    logger.info('%s k=%d n=%d d=%d: median %.3f s', algorithm, k, n, d,
                cell.median_seconds)
    return cell


def run_grid(grid):
    """Run every cell of a benchmark grid sequentially.

    Parameters
    ----------
    grid : :class:`BenchGrid`
        Benchmark grid.

    Returns
    -------
    :class:`BenchResult`
        One :class:`CellResult` per (algorithm, k, n, d); cells with k > n
        are flagged as skipped.

    """
    datasets = {}
    cells = []
    for algorithm, k, n, d in grid.cells():
        if (n, d) not in datasets:
            datasets[(n, d)] = generate(SyntheticSpec(n, d, seed=grid.seed))
        cells.append(run_cell(grid, algorithm, k, n, d, datasets[(n, d)]))
    return BenchResult(grid, cells)


def table_rows(result):
    """Rows of the runtime table: one per (k, n, d), one column per algorithm.

    Median seconds are formatted with two decimals; skipped cells hold a
    dash.
    """
    algorithms = result.grid.algorithms
    rows = [['k', 'n', 'd'] + algorithms]
    keys = sorted({(c.k, c.n, c.d) for c in result.cells})
    for k, n, d in keys:
        row = [k, n, d]
        for algorithm in algorithms:
            cell = result.get(algorithm, k, n, d)
            row.append(DASH if cell.skipped else
                       '%.2f' % cell.median_seconds)
        rows.append(row)
    return rows


def render_table(result, fmt=MARKDOWN):
    """Render the runtime table.

    Parameters
    ----------
    result : :class:`BenchResult`
        Benchmark results.
    fmt : str, optional
        'markdown' or 'csv'.

    Returns
    -------
    str
        Table text.

    """
    rows = table_rows(result)
    fmt = fmt.lower()
    if fmt == CSV:
        return pyexcel.get_sheet(array=rows).csv
    elif fmt in [MARKDOWN, 'md']:
        cells = [[str(v) for v in row] for row in rows]
        widths = [max(len(row[i]) for row in cells)
                  for i in range(len(cells[0]))]

        def _line(row):
            return '| ' + ' | '.join(
                v.rjust(w) for v, w in zip(row, widths)) + ' |'

        lines = [_line(cells[0])]
        lines.append('|' + '|'.join('-' * (w + 1) + ':' for w in widths) + '|')
        lines.extend(_line(row) for row in cells[1:])
        return '\n'.join(lines) + '\n'
    else:
        raise NotImplementedError('No recognized table format for: %s' % fmt)


def write_results(result, fpath):
    """Save every timed fit, one row per (cell, repeat).

    Parameters
    ----------
    result : :class:`BenchResult`
        Benchmark results.
    fpath : str or `pathlib.Path`
        Save the results to this file (CSV unless pyexcel recognizes another
        extension).

    """
    rows = [RESULT_COLUMNS]
    for cell in result.cells:
        if cell.skipped:
            rows.append([cell.algorithm, cell.k, cell.n, cell.d, '', '', '',
                         '', 1])
            continue
        for repeat, seconds in enumerate(cell.seconds):
            rows.append([cell.algorithm, cell.k, cell.n, cell.d, repeat,
                         seconds, cell.quantization_error, cell.max_distance,
                         0])

    fpath = pathlib.Path(fpath)
    fpath.parent.mkdir(parents=True, exist_ok=True)
    pyexcel.save_as(array=rows, dest_file_name=str(fpath))


def _parse_values(text):
    return [int(float(v)) for v in text.split(',') if v.strip()]


def parse_grid(text, **kwds):
    """Build a grid from a name, a JSON file, or an inline description.

    Parameters
    ----------
    text : str
        'desk' or 'full'; the path of a JSON file with the keys of
        :class:`BenchGrid`; or an inline description such as
        ``k=32,512;n=1000,10000;d=10,100``.
    kwds : dict
        Further :class:`BenchGrid` fields. `None` values are ignored.

    Returns
    -------
    :class:`BenchGrid`

    """
    kwds = {key: value for key, value in kwds.items() if value is not None}
    if text in GRIDS:
        fields = dict(GRIDS[text])
    elif text.endswith('.json'):
        with pathlib.Path(text).open() as fp:
            fields = json.load(fp)
    else:
        keys = {'k': 'k_values', 'n': 'n_values', 'd': 'd_values'}
        fields = {}
        for part in text.split(';'):
            if not part.strip():
                continue
            key, sep, values = part.partition('=')
            key = key.strip()
            if not sep or key not in keys:
                raise ValueError('Invalid grid item %r, expected k=..., n=... '
                                 'or d=...' % part)
            fields[keys[key]] = _parse_values(values)
        missing = set(keys.values()) - set(fields)
        if missing:
            raise ValueError('Grid is missing: %s' %
                             ', '.join(sorted(missing)))

    fields.update(kwds)
    return BenchGrid(**fields)
