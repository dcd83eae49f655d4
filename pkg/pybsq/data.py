#!/usr/bin/python
# -*- coding: utf-8 -*-
"""Synthetic datasets and dataset files.

Random numbers come from the counter-based Philox generator of numpy, and
normal deviates are produced with the Box-Muller transform, so a dataset only
depends on its :class:`SyntheticSpec`.

Datasets are stored either as CSV (read and written with pyexcel) or in a
small binary format, see :doc:`formats`.
"""

import collections
import dataclasses
import pathlib

import numpy as np
import pyexcel

from .distance import check_points

GAUSSIAN = 'gaussian'
UNIFORM = 'uniform'
MIXTURE = 'mixture'

DISTRIBUTIONS = [GAUSSIAN, UNIFORM, MIXTURE]

BINARY_MAGIC = b'PBSQ'
BINARY_VERSION = 1
BINARY_HEADER = np.dtype([
    ('magic', 'S4'),
    ('version', '<u2'),
    ('reserved', '<u2'),
    ('n', '<u8'),
    ('d', '<u8'),
])

CSV_FORMAT = '%.17g'


class DatasetFormatError(ValueError):
    """Dataset file that cannot be parsed.

    Parameters
    ----------
    message : str
        Description of the problem.
    row : int, optional
        Data row index (0-based, header excluded).
    column : int, optional
        Column index (0-based).

    """

    def __init__(self, message, row=None, column=None):
        location = []
        if row is not None:
            location.append('row %d' % row)
        if column is not None:
            location.append('column %d' % column)
        if location:
            message = '%s (%s)' % (message, ', '.join(location))
        super().__init__(message)
        self.row = row
        self.column = column


def make_rng(seed):
    """Random generator used throughout the package.

    Parameters
    ----------
    seed : int or sequence of int
        Seed of the Philox bit generator.

    Returns
    -------
    :class:`numpy.random.Generator`

    """
    return np.random.Generator(np.random.Philox(seed))


def box_muller(rng, size):
    """Standard normal deviates by the Box-Muller transform.

    Parameters
    ----------
    rng : :class:`numpy.random.Generator`
        Source of the uniform deviates.
    size : int
        Number of deviates.

    Returns
    -------
    :class:`numpy.ndarray`
        Normal deviates with zero mean and unit standard deviation.

    """
    pairs = (size + 1) // 2
    # 1 - U lies in (0, 1] so the logarithm is finite
    radius = np.sqrt(-2. * np.log(1. - rng.random(pairs)))
    angle = 2. * np.pi * rng.random(pairs)
    values = np.empty(2 * pairs)
    values[0::2] = radius * np.cos(angle)
    values[1::2] = radius * np.sin(angle)
    return values[:size]


def get_distribution(distribution):
    """Return the distribution naming used in this package.

    Parameters
    ----------
    distribution : str
        Distribution synonym.

    Returns
    -------
    distribution : str
        One of 'gaussian', 'uniform', or 'mixture'.

    """
    distribution = distribution.lower()
    if distribution in ['gaussian', 'normal', 'gauss']:
        return GAUSSIAN
    elif distribution in ['uniform', 'uniform_cube', 'uniform-cube', 'cube']:
        return UNIFORM
    elif distribution in ['mixture', 'gaussian_mixture', 'gaussian-mixture',
                          'gmm']:
        return MIXTURE
    else:
        raise NotImplementedError('No recognized distribution for: %s' %
                                  distribution)


@dataclasses.dataclass
class SyntheticSpec:
    """Description of a synthetic dataset.

    Parameters
    ----------
    n : int
        Number of points.
    d : int
        Number of dimensions.
    distribution : str, optional
        'gaussian' (mean 0, standard deviation `std`), 'uniform' (unit cube
        [0, 1)), or 'mixture' (`components` Gaussian blobs).
    seed : int, optional
        Seed of the random generator.
    std : float, optional
        Standard deviation of the Gaussian and of each mixture component.
    components : int, optional
        Number of mixture components.
    spread : float, optional
        Mixture centers are drawn uniformly from [-spread, spread)^d.
    separation : float, optional
        Minimum distance between two mixture centers in units of `std`.

    """

    n: int
    d: int
    distribution: str = GAUSSIAN
    seed: int = 0
    std: float = 1.
    components: int = 4
    spread: float = 10.
    separation: float = 6.

    def __post_init__(self):
        self.distribution = get_distribution(self.distribution)
        if self.n < 1 or self.d < 1:
            raise ValueError('n and d must be >= 1, got n=%d, d=%d' %
                             (self.n, self.d))
        if not self.std > 0:
            raise ValueError('std must be > 0, got: %r' % self.std)
        if self.components < 1:
            raise ValueError('components must be >= 1, got: %d' %
                             self.components)


def _mixture_centers(rng, spec, max_attempts=1000):
    """Draw component centers that are at least `separation` std apart."""
    min_dist = spec.separation * spec.std
    for _ in range(max_attempts):
        centers = rng.uniform(-spec.spread, spec.spread,
                              (spec.components, spec.d))
        diffs = centers[:, np.newaxis] - centers[np.newaxis]
        dists = np.sqrt(np.sum(diffs ** 2, axis=-1))
        dists[np.diag_indices(spec.components)] = np.inf
        if np.all(dists >= min_dist):
            return centers
    raise ValueError('Could not place %d centers %g apart within spread %g' %
                     (spec.components, min_dist, spec.spread))


def generate(spec):
    """Generate a synthetic dataset.

    Parameters
    ----------
    spec : :class:`SyntheticSpec`
        Dataset description.

    Returns
    -------
    :class:`numpy.ndarray`
        Points of shape (n, d).

    """
    rng = make_rng(spec.seed)
    size = spec.n * spec.d

    if spec.distribution == GAUSSIAN:
        data = spec.std * box_muller(rng, size).reshape(spec.n, spec.d)
    elif spec.distribution == UNIFORM:
        data = rng.random(size).reshape(spec.n, spec.d)
    elif spec.distribution == MIXTURE:
        centers = _mixture_centers(rng, spec)
        labels = rng.integers(0, spec.components, spec.n)
        data = (centers[labels] +
                spec.std * box_muller(rng, size).reshape(spec.n, spec.d))
    else:
        raise NotImplementedError

    return data


def _parse_rows(rows):
    """Convert raw CSV cells into a float matrix."""
    # Trailing empty cells are padding, not values
    rows = [list(row) for row in rows]
    for row in rows:
        while row and row[-1] == '':
            row.pop()
    rows = [row for row in rows if row]
    if not rows:
        raise DatasetFormatError('File contains no data')

    def _is_number(cell):
        try:
            float(cell)
        except (TypeError, ValueError):
            return False
        return True

    # A header row has a non-numeric cell and no missing cells
    first = rows[0]
    if '' not in first and not all(_is_number(cell) for cell in first):
        rows = rows[1:]
    if not rows:
        raise DatasetFormatError('File contains a header but no data')

    # The most common row length sets the width, the first row breaks ties
    lengths = collections.Counter(len(row) for row in rows)
    width = max(lengths, key=lambda length: (lengths[length],
                                             length == len(rows[0])))
    data = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DatasetFormatError(
                'Expected %d values, found %d' % (width, len(row)), row=i)
        for j, cell in enumerate(row):
            if cell == '':
                raise DatasetFormatError('Missing value', row=i, column=j)
            try:
                data[i, j] = float(cell)
            except (TypeError, ValueError):
                raise DatasetFormatError('Non-numeric value %r' % (cell, ),
                                         row=i, column=j)
    return data


def load_csv(fpath):
    """Read a dataset from a CSV file.

    Parameters
    ----------
    fpath : str or `pathlib.Path`
        Filename of the input file. Other formats supported by pyexcel
        (e.g., xlsx) are read as well if the plugin is installed.

    Returns
    -------
    :class:`numpy.ndarray`
        Points of shape (n, d).

    Raises
    ------
    DatasetFormatError
        For ragged rows, missing values or non-numeric cells.

    """
    rows = pyexcel.get_array(
        file_name=str(fpath),
        auto_detect_int=False,
        auto_detect_float=False,
        auto_detect_datetime=False)
    data = _parse_rows(rows)
    if not np.all(np.isfinite(data)):
        row, column = np.argwhere(~np.isfinite(data))[0]
        raise DatasetFormatError('Non-finite value', row=row, column=column)
    return data


def save_csv(data, fpath, header=None):
    """Write a dataset to a CSV file with 17 significant digits.

    Parameters
    ----------
    data : array_like
        Matrix of shape (n, d).
    fpath : str or `pathlib.Path`
        Save the dataset to this file. The directory is created if needed.
    header : List[str], optional
        Column labels written as the first row.

    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    rows = [[CSV_FORMAT % v for v in row] for row in data]
    if header:
        rows.insert(0, list(header))

    fpath = pathlib.Path(fpath)
    fpath.parent.mkdir(parents=True, exist_ok=True)
    pyexcel.save_as(array=rows, dest_file_name=str(fpath))


def is_binary(fpath):
    """Whether a file starts with the binary dataset magic bytes."""
    with pathlib.Path(fpath).open('rb') as fp:
        return fp.read(len(BINARY_MAGIC)) == BINARY_MAGIC


def load_bin(fpath):
    """Read a dataset from the binary format."""
    fpath = pathlib.Path(fpath)
    with fpath.open('rb') as fp:
        header = np.fromfile(fp, dtype=BINARY_HEADER, count=1)
        if header.size != 1 or header['magic'][0] != BINARY_MAGIC:
            raise DatasetFormatError('Not a pyBSQ binary dataset: %s' % fpath)
        if header['version'][0] != BINARY_VERSION:
            raise DatasetFormatError('Unsupported binary version: %d' %
                                     header['version'][0])
        n, d = int(header['n'][0]), int(header['d'][0])
        values = np.fromfile(fp, dtype='<f8', count=n * d)
    if values.size != n * d:
        raise DatasetFormatError('Truncated binary dataset: expected %d '
                                 'values, found %d' % (n * d, values.size))
    return values.reshape(n, d).astype(float)


def save_bin(data, fpath):
    """Write a dataset in the binary format."""
    data = np.atleast_2d(np.asarray(data, dtype='<f8'))
    header = np.zeros(1, dtype=BINARY_HEADER)
    header['magic'] = BINARY_MAGIC
    header['version'] = BINARY_VERSION
    header['n'], header['d'] = data.shape

    fpath = pathlib.Path(fpath)
    fpath.parent.mkdir(parents=True, exist_ok=True)
    with fpath.open('wb') as fp:
        header.tofile(fp)
        np.ascontiguousarray(data).tofile(fp)


def read_dataset(fpath):
    """Read a dataset, selecting the format from the file contents.

    Parameters
    ----------
    fpath : str or `pathlib.Path`
        Files starting with the binary magic bytes or ending in '.bin' use
        the binary format, everything else is read with :func:`load_csv`.

    Returns
    -------
    :class:`numpy.ndarray`
        Validated points of shape (n, d).

    """
    fpath = pathlib.Path(fpath)
    if fpath.suffix == '.bin' or is_binary(fpath):
        data = load_bin(fpath)
    else:
        data = load_csv(fpath)
    return check_points(data, name=fpath.name)


def write_dataset(fpath, data):
    """Write a dataset, selecting the format from the file extension."""
    fpath = pathlib.Path(fpath)
    if fpath.suffix == '.bin':
        save_bin(data, fpath)
    else:
        save_csv(data, fpath)
