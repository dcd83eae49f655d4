#!/usr/bin/python
# -*- coding: utf-8 -*-
"""The command line interface for calling pyBSQ.

See :doc:`usage` for more details.
"""

import argparse
import json
import logging
import sys

from . import __version__
from .bench import ALGORITHMS, DEFAULT_REPEATS
from .data import DISTRIBUTIONS
from .distance import DEFAULT_NORM
from .trainer import DEFAULT_INIT, DEFAULT_R_SCHEDULE
from .tools import (operation_bench, operation_export_plot, operation_fit,
                    operation_gen)


def positive_int(text):
    """Argument type of counts that must be at least one."""
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError('must be >= 1, got: %s' % text)
    return value


def non_negative_int(text):
    """Argument type of counts where zero has a meaning."""
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError('must be >= 0, got: %s' % text)
    return value


parser = argparse.ArgumentParser(
    prog='pybsq',
    description='''Fit k-Means and bounding sphere quantizers by accumulated
    gradient descent or by expectation-maximization.''')
parser.add_argument(
    '--version',
    action='version',
    version='%(prog)s version ' + str(__version__))
parser.add_argument(
    '-v',
    '--verbose',
    action='count',
    default=0,
    help='''Log progress; given twice also log every epoch.''')
subparsers = parser.add_subparsers(dest='operation', metavar='operation')
subparsers.required = True

parser_gen = subparsers.add_parser(
    'gen', help='Generate a synthetic dataset.')
parser_gen.add_argument('--n', type=positive_int, required=True,
                        help='Number of points.')
parser_gen.add_argument('--d', type=positive_int, required=True,
                        help='Number of dimensions.')
parser_gen.add_argument(
    '--dist',
    default='gaussian',
    choices=DISTRIBUTIONS,
    help='''Distribution of the points: [gaussian] zero mean and unit
    standard deviation, [uniform] unit cube, [mixture] separated Gaussian
    blobs. Default: %(default)s.''')
parser_gen.add_argument(
    '--components',
    type=positive_int,
    default=4,
    help='Components of the mixture. Default: %(default)s.')
parser_gen.add_argument('--seed', type=int, default=0,
                        help='Seed of the random generator.')
parser_gen.add_argument('--out', required=True, help='Output file.')
parser_gen.add_argument(
    '--format',
    choices=['csv', 'bin'],
    default=None,
    help='''Output format. By default '.bin' files are binary and all other
    files are CSV.''')

parser_fit = subparsers.add_parser('fit', help='Fit a quantizer.')
parser_fit.add_argument('--algo', required=True, choices=ALGORITHMS,
                        help='Fitting algorithm.')
parser_fit.add_argument('--k', type=positive_int, required=True,
                        help='Number of quanta.')
parser_fit.add_argument('--p', type=float, default=DEFAULT_NORM,
                        help='Order of the p-norm. Default: %(default)s.')
parser_fit.add_argument('--epochs', type=positive_int, default=None,
                        help='Number of epochs (SGD) or iterations (EM).')
parser_fit.add_argument(
    '--batch-size',
    type=non_negative_int,
    default=None,
    help='Points per batch; 0 puts the dataset in a single batch.')
parser_fit.add_argument('--lr', type=float, default=None,
                        help='Learning rate of the first epoch.')
parser_fit.add_argument('--lr-final', type=float, default=None,
                        help='Learning rate of the last epoch.')
parser_fit.add_argument(
    '--r-schedule',
    default=None,
    help='''Update frequency: [linear] from every batch to once per epoch,
    [none] every batch, [epoch] once per epoch, or an integer r. Default:
    %s.''' % DEFAULT_R_SCHEDULE)
parser_fit.add_argument('--max-iterations', type=positive_int, default=None,
                        help='Iteration limit of the EM algorithms.')
parser_fit.add_argument('--tol', type=float, default=None,
                        help="Relative tolerance of Lloyd's algorithm.")
parser_fit.add_argument('--seed', type=int, default=0,
                        help='Seed of the initialization and shuffling.')
parser_fit.add_argument('--init', default=DEFAULT_INIT,
                        choices=['random', 'kmeans++'],
                        help='Initialization. Default: %(default)s.')
parser_fit.add_argument('--init-from', default=None,
                        help='File with the initial centroids.')
parser_fit.add_argument('--dtype', default=None,
                        choices=['float64', 'float32'],
                        help='Floating point type of the SGD computation.')
parser_fit.add_argument('--in', dest='src', required=True,
                        help='Dataset file.')
parser_fit.add_argument('--out-centroids', default=None,
                        help='Save the centroids to this file.')
parser_fit.add_argument('--out-assignments', default=None,
                        help='Save the quantum of every point to this file.')
parser_fit.add_argument(
    '--report',
    default=None,
    help='Save the JSON report to this file instead of printing it.')

parser_bench = subparsers.add_parser('bench', help='Run a benchmark grid.')
parser_bench.add_argument(
    '--grid',
    default='desk',
    help='''Grid: [desk] or [full], a JSON file, or an inline description
    like "k=32,512;n=1000,10000;d=10,100". Default: %(default)s.''')
parser_bench.add_argument(
    '--algos',
    default=None,
    help='Comma separated algorithms. Default: sgd-kmeans, sgd-bsq, lloyd, '
    'bsq-em.')
parser_bench.add_argument(
    '--repeats',
    type=positive_int,
    default=None,
    help='Timed fits per cell. Default: %d.' % DEFAULT_REPEATS)
parser_bench.add_argument('--epochs', type=positive_int, default=None,
                          help='Epochs of every fit.')
parser_bench.add_argument('--batch-size', type=positive_int, default=None,
                          help='Batch size of the SGD fits.')
parser_bench.add_argument('--seed', type=int, default=None,
                          help='Seed of the datasets and fits.')
parser_bench.add_argument('--out', default=None,
                          help='Save the raw timings to this CSV file.')
parser_bench.add_argument('--table-format', default='markdown',
                          choices=['markdown', 'csv'],
                          help='Format of the table. Default: %(default)s.')

parser_export = subparsers.add_parser(
    'export-plot', help='Export points, centroids and radii for plotting.')
parser_export.add_argument('--in', dest='src', required=True,
                           help='Dataset file.')
parser_export.add_argument('--centroids', required=True,
                           help='Centroid file.')
parser_export.add_argument('--p', type=float, default=DEFAULT_NORM,
                           help='Order of the p-norm. Default: %(default)s.')
parser_export.add_argument('--out', required=True, help='Output JSON file.')


def _configure_logging(verbose):
    if verbose > 1:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s')


def main(argv=None):
    """Perform the command line operations."""
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        if args.operation == 'gen':
            operation_gen(args.out, args.n, args.d, args.dist, args.seed,
                          args.format, components=args.components)
        elif args.operation == 'fit':
            doc = operation_fit(
                args.src,
                args.algo,
                args.k,
                out_centroids=args.out_centroids,
                out_assignments=args.out_assignments,
                report=args.report,
                init_from=args.init_from,
                norm=args.p,
                epochs=args.epochs,
                batch_size=args.batch_size,
                lr=args.lr,
                lr_final=args.lr_final,
                seed=args.seed,
                init=args.init,
                max_iterations=args.max_iterations,
                tol=args.tol,
                r_schedule=args.r_schedule,
                dtype=args.dtype)
            if args.report is None:
                json.dump(doc, sys.stdout, indent=2)
                sys.stdout.write('\n')
        elif args.operation == 'bench':
            algorithms = None
            if args.algos:
                algorithms = [a.strip() for a in args.algos.split(',')]
            table = operation_bench(
                args.grid,
                args.out,
                args.table_format,
                algorithms=algorithms,
                repeats=args.repeats,
                epochs=args.epochs,
                batch_size=args.batch_size,
                seed=args.seed)
            sys.stdout.write(table)
        elif args.operation == 'export-plot':
            operation_export_plot(args.src, args.centroids, args.out, args.p)
        else:
            raise NotImplementedError
    except (ValueError, NotImplementedError) as error:
        parser.exit(1, 'pybsq: error: %s\n' % error)

    return 0
