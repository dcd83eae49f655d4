#!/usr/bin/python
# -*- coding: utf-8 -*-

import json

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest

from pybsq import tools
from pybsq.baselines import EMConfig
from pybsq.data import read_dataset, write_dataset
from pybsq.trainer import TrainConfig

from . import make_relpath


@pytest.fixture
def uniform_csv(tmp_path):
    fpath = tmp_path / 'uniform.csv'
    tools.operation_gen(fpath, 400, 2, 'uniform', seed=7)
    return fpath


def test_operation_gen_formats(tmp_path):
    csv = tools.operation_gen(tmp_path / 'a.csv', 20, 3, seed=1)
    binary = tools.operation_gen(tmp_path / 'a.dat', 20, 3, seed=1,
                                 fmt='bin')
    assert_array_equal(csv, binary)
    assert (tmp_path / 'a.dat').read_bytes()[:4] == b'PBSQ'
    assert_array_equal(read_dataset(tmp_path / 'a.csv'), csv)


def test_operation_gen_unknown_format(tmp_path):
    with pytest.raises(NotImplementedError):
        tools.operation_gen(tmp_path / 'a.csv', 5, 2, fmt='parquet')


@pytest.mark.parametrize('algorithm,cls', [
    ('sgd-kmeans', TrainConfig),
    ('sgd-bsq-full', TrainConfig),
    ('lloyd', EMConfig),
    ('bsq-em', EMConfig),
])
def test_make_config(algorithm, cls):
    config = tools.make_config(algorithm, 3, epochs=5)
    assert isinstance(config, cls)
    if cls is EMConfig:
        assert config.max_iterations == 5
    else:
        assert config.epochs == 5


def test_make_config_batch_size():
    assert tools.make_config('sgd-kmeans', 3, batch_size=0).batch_size is None
    assert tools.make_config('sgd-kmeans', 3, batch_size=64).batch_size == 64
    assert tools.make_config('sgd-bsq-full', 3,
                             batch_size=64).batch_size is None
    assert tools.make_config('sgd-bsq', 3).variant == 'bsq'


def test_operation_fit_lloyd(tmp_path):
    init = tmp_path / 'init.csv'
    write_dataset(init, [[0.], [9.]])
    doc = tools.operation_fit(
        make_relpath('data', 'line4.csv'),
        'lloyd',
        2,
        out_centroids=tmp_path / 'centroids.csv',
        out_assignments=tmp_path / 'assignments.csv',
        report=tmp_path / 'report.json',
        init_from=init)

    centroids = read_dataset(tmp_path / 'centroids.csv')
    assert_allclose(np.sort(centroids[:, 0]), [0.5, 8.5])
    assert_array_equal(
        tools.read_assignments(tmp_path / 'assignments.csv'), [0, 0, 1, 1])

    with (tmp_path / 'report.json').open() as fp:
        saved = json.load(fp)
    assert saved == json.loads(json.dumps(doc))
    assert saved['schema'] == tools.REPORT_SCHEMA
    assert saved['schema_version'] == 1
    assert saved['algorithm'] == 'lloyd'
    assert (saved['n'], saved['k'], saved['d']) == (4, 2, 1)
    assert saved['config']['k'] == 2
    assert saved['converged']


def test_operation_fit_k_too_large():
    with pytest.raises(ValueError, match='must not exceed'):
        tools.operation_fit(make_relpath('data', 'line4.csv'), 'sgd-kmeans', 5)


@pytest.mark.parametrize('algorithm', ['sgd-kmeans', 'sgd-bsq-full',
                                       'bsq-em'])
def test_operation_fit_report(uniform_csv, algorithm):
    doc = tools.operation_fit(uniform_csv, algorithm, 4, epochs=3, seed=2)
    assert doc['algorithm'] == algorithm
    assert len(doc['centroids']) == 4
    assert sum(doc['counts']) == 400
    assert doc['max_distance'] == pytest.approx(max(doc['radii']))
    json.dumps(doc)


def test_sample_boundaries():
    centroids = np.array([[-1., 0.], [1., 0.]])
    boundaries = tools.sample_boundaries(centroids, [[-2, -2], [2, 2]],
                                         resolution=41)
    assert len(boundaries) == 1
    assert boundaries[0]['quanta'] == [0, 1]
    points = np.array(boundaries[0]['points'])
    assert_allclose(points[:, 0], 0, atol=0.1)


def test_plot_export_round_trip(uniform_csv, tmp_path):
    centroids = tmp_path / 'centroids.csv'
    tools.operation_fit(uniform_csv, 'sgd-kmeans', 5, epochs=5,
                        out_centroids=centroids)
    dest = tmp_path / 'plot.json'
    doc = tools.operation_export_plot(uniform_csv, centroids, dest)
    loaded = tools.read_plot_export(dest)

    assert_array_equal(loaded['assignments'], doc['assignments'])
    assert loaded['assignments'].min() >= 0
    assert loaded['assignments'].max() < 5
    assert loaded['boundaries']
    assert loaded['schema'] == tools.PLOT_SCHEMA


def test_plot_export_empty_quantum():
    data = np.array([[0., 0.], [1., 0.]])
    centroids = np.array([[0., 0.], [50., 50.]])
    doc = tools.make_plot_export(data, centroids)
    assert doc['radii'] == [1., 0.]
    assert doc['counts'] == [2, 0]


def test_plot_export_high_dim(caplog):
    data = np.random.default_rng(0).normal(size=(20, 3))
    doc = tools.make_plot_export(data, data[:2])
    assert doc['boundaries'] is None
    assert 'only sampled for 2-D' in caplog.text


def test_plot_export_bsq_smaller_radius(uniform_csv, tmp_path):
    radii = {}
    for algorithm in ['sgd-kmeans', 'sgd-bsq']:
        centroids = tmp_path / (algorithm + '.csv')
        tools.operation_fit(uniform_csv, algorithm, 8, seed=1,
                            out_centroids=centroids)
        dest = tmp_path / (algorithm + '.json')
        radii[algorithm] = tools.operation_export_plot(
            uniform_csv, centroids, dest)['radii']
    assert max(radii['sgd-bsq']) <= max(radii['sgd-kmeans'])


def test_read_plot_export_wrong_schema(tmp_path):
    fpath = tmp_path / 'other.json'
    fpath.write_text('{"schema": "pybsq.fit-report"}')
    with pytest.raises(ValueError):
        tools.read_plot_export(fpath)
