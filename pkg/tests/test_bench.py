#!/usr/bin/python
# -*- coding: utf-8 -*-

import json

import numpy as np
import pyexcel
import pytest

from pybsq import bench


@pytest.fixture(scope='module')
def small_result():
    grid = bench.BenchGrid([2, 50], [40], [2], algorithms=['sgd-kmeans',
                                                           'lloyd'],
                           epochs=3, batch_size=16, repeats=3)
    return bench.run_grid(grid)


@pytest.mark.parametrize('name,expected', [
    ('sgd-kmeans', 'sgd-kmeans'),
    ('SGD_BSQ', 'sgd-bsq'),
    ('bsq-full', 'sgd-bsq-full'),
    ('lloyd', 'lloyd'),
    ('bsq-em', 'bsq-em'),
])
def test_get_algorithm(name, expected):
    assert bench.get_algorithm(name) == expected


def test_get_algorithm_unknown():
    with pytest.raises(NotImplementedError):
        bench.get_fitter('scipy')


@pytest.mark.parametrize('algorithm', bench.ALGORITHMS)
def test_get_fitter(algorithm):
    data = np.random.default_rng(0).normal(size=(60, 2))
    report = bench.get_fitter(algorithm)(data, 3, 2, 16, 0, 2.)
    assert report.centroids.shape == (3, 2)
    assert report.algorithm.startswith(algorithm.replace('-full', ''))


def test_grid_invalid():
    with pytest.raises(ValueError):
        bench.BenchGrid([], [10], [2])
    with pytest.raises(ValueError):
        bench.BenchGrid([2], [10], [2], repeats=0)


def test_run_grid(small_result):
    cell = small_result.get('sgd-kmeans', 2, 40, 2)
    assert not cell.skipped
    assert len(cell.seconds) == 3
    assert 0 < cell.min_seconds <= cell.median_seconds <= cell.max_seconds
    assert cell.quantization_error > 0


def test_run_grid_skips(small_result):
    cell = small_result.get('lloyd', 50, 40, 2)
    assert cell.skipped
    assert 'exceeds' in cell.reason
    assert not cell.seconds


def test_render_markdown(small_result):
    text = bench.render_table(small_result, 'markdown')
    lines = text.strip().splitlines()
    # Header, separator and one row per (k, n, d)
    assert len(lines) == 4
    assert 'sgd-kmeans' in lines[0] and 'lloyd' in lines[0]
    assert bench.DASH in lines[3]
    assert bench.DASH not in lines[2]


def test_render_csv(small_result):
    text = bench.render_table(small_result, 'csv')
    rows = pyexcel.get_array(file_content=text, file_type='csv')
    assert rows[0] == ['k', 'n', 'd', 'sgd-kmeans', 'lloyd']
    assert rows[1][:3] == [2, 40, 2]
    cell = small_result.get('lloyd', 2, 40, 2)
    assert float(rows[1][4]) == float('%.2f' % cell.median_seconds)
    assert rows[2][3] == bench.DASH


def test_render_unknown(small_result):
    with pytest.raises(NotImplementedError):
        bench.render_table(small_result, 'latex')


def test_write_results(small_result, tmp_path):
    fpath = tmp_path / 'results.csv'
    bench.write_results(small_result, fpath)
    rows = pyexcel.get_array(file_name=str(fpath))
    assert rows[0] == bench.RESULT_COLUMNS
    # 2 algorithms x 3 repeats, 2 skipped cells
    assert len(rows) == 1 + 6 + 2
    assert sum(row[-1] for row in rows[1:]) == 2


def test_single_repeat():
    grid = bench.BenchGrid([2], [30], [2], algorithms=['sgd-bsq'], epochs=2,
                           repeats=1)
    cell = bench.run_grid(grid).cells[0]
    assert cell.min_seconds == cell.median_seconds == cell.max_seconds


@pytest.mark.parametrize('text,expected', [
    ('k=32,512;n=1000,10000;d=10,100',
     ([32, 512], [1000, 10000], [10, 100])),
    ('d=3;k=4;n=1e3', ([4], [1000], [3])),
    ('desk', ([32, 512], [1000, 10000], [10, 100])),
    ('full', ([32, 512], [1000, 10000, 100000], [10, 100, 1000])),
])
def test_parse_grid(text, expected):
    grid = bench.parse_grid(text)
    assert (grid.k_values, grid.n_values, grid.d_values) == expected
    assert grid.algorithms == bench.DEFAULT_ALGORITHMS


def test_parse_grid_overrides(tmp_path):
    fpath = tmp_path / 'grid.json'
    fpath.write_text(json.dumps(
        dict(k_values=[8], n_values=[100], d_values=[2], repeats=5)))
    grid = bench.parse_grid(str(fpath), repeats=None, epochs=7,
                            algorithms=['lloyd'])
    assert grid.repeats == 5
    assert grid.epochs == 7
    assert grid.algorithms == ['lloyd']


@pytest.mark.parametrize('text', ['k=2;n=10', 'x=1;k=2;n=3;d=4', 'k2'])
def test_parse_grid_invalid(text):
    with pytest.raises(ValueError):
        bench.parse_grid(text)


@pytest.mark.slow
def test_desk_grid_scaling():
    grid = bench.parse_grid('desk')
    result = bench.run_grid(grid)
    for algorithm in [bench.SGD_KMEANS, bench.SGD_BSQ]:
        for axis in ['k', 'n', 'd']:
            for cell in result.cells:
                if cell.algorithm != algorithm or cell.skipped:
                    continue
                key = dict(k=cell.k, n=cell.n, d=cell.d)
                values = getattr(grid, axis + '_values')
                index = values.index(key[axis])
                if index + 1 == len(values):
                    continue
                key[axis] = values[index + 1]
                larger = result.get(algorithm, key['k'], key['n'], key['d'])
                assert (larger.median_seconds >=
                        0.9 * cell.median_seconds)
