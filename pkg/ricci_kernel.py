"""
Command line front end of the curvature graph kernel pipeline:

    generate -> curvature -> hist -> kernel -> classify

Every stage reads and writes plain files, so the pipeline can also be run
one stage at a time. All the randomness is derived from --seed.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, asdict

import numpy as np

from graphs.generators import GENERATORS
from graphs.graph import (read_collection, read_edge_list, write_edge_list, read_manifest_rows,
                          write_manifest_rows)
from ml.kernels import gram_matrix
from ml.model_selection import cross_validate
from ricci.curvature import (all_curvatures, sampled_curvatures, read_curvature_csv, format_curvature_csv,
                             CSV_HEADER)
from ricci.histograms import Histogram, histogram_1d, histogram_2d, curvature_histograms
from ricci.sampling import SamplingPlan, sample_size
from ricci.transport import TransportError
from utils import stream_seed, resolve_workers

__version__ = '0.1.0'

logger = logging.getLogger('ricci_kernel')

# label of each generative model in a generated manifest
MODEL_LABELS = {'er': 0, 'ba': 1, 'ws': 2}

MANIFEST = 'labels.csv'


@dataclass
class RunConfig:
    alpha: float = 0.5
    bins: int = 20
    feature_dims: int = 2
    sigma: object = 'auto'
    epsilon: float = None
    delta: float = None
    constant_c: float = 1.
    seed: int = 0
    folds: int = 10
    k_neighbors: int = 1
    worker_count: object = 'auto'
    solver: str = 'simplex'

    def validate(self):
        if not 0 <= self.alpha <= 1:
            raise ValueError('alpha must be in [0, 1]')
        if not self.bins >= 1:
            raise ValueError('bins must be >= 1')
        if self.feature_dims not in (1, 2):
            raise ValueError('dims must be 1 or 2')
        if self.sigma != 'auto' and not self.sigma > 0:
            raise ValueError('sigma must be > 0 or auto')
        if (self.epsilon is None) != (self.delta is None):
            raise ValueError('--epsilon and --delta must be given together')
        if self.sampling:
            sample_size(self.epsilon, self.delta, self.constant_c)
            if self.feature_dims != 1:
                raise ValueError('sampled curvatures only support --dims 1 '
                                 '(pair histograms need the curvature of every edge)')
        elif not self.constant_c > 0:
            raise ValueError('constant_c must be > 0')
        if not self.seed >= 0:
            raise ValueError('seed must be >= 0')
        if not self.folds >= 2:
            raise ValueError('folds must be >= 2')
        if not self.k_neighbors >= 1:
            raise ValueError('neighbors must be >= 1')
        resolve_workers(self.worker_count)
        return self

    @property
    def sampling(self):
        return self.epsilon is not None

    @property
    def plan(self):
        return SamplingPlan(self.epsilon, self.delta, self.constant_c) if self.sampling else None

    @property
    def n_jobs(self):
        return resolve_workers(self.worker_count)

    def to_json(self):
        return json.dumps(asdict(self), indent=2)


class UsageErrorParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, '{}: error: {}\n'.format(self.prog, message))


def _sigma(value):
    return value if value == 'auto' else float(value)


def _workers(value):
    return value if value == 'auto' else int(value)


def _emit(text, path=None):
    if path in (None, '-'):
        sys.stdout.write(text)
    else:
        with open(path, 'w', newline='\n') as stream:
            stream.write(text)


def _is_curvature_csv(path):
    with open(path) as stream:
        return stream.readline().strip() == CSV_HEADER


def _curvature_map(g, config, index=0):
    if config.sampling:
        return sampled_curvatures(g, config.alpha, config.plan, stream_seed(config.seed, 'sampling', index),
                                  config.solver, config.n_jobs)
    return all_curvatures(g, config.alpha, config.solver, config.n_jobs)


def _histograms(collection, config):
    seeds = [stream_seed(config.seed, 'sampling', i) for i in range(len(collection))]
    logger.info('computing %dD curvature histograms of %d graphs', config.feature_dims, len(collection))
    return curvature_histograms(collection.graphs, config.alpha, config.bins, config.feature_dims,
                                config.plan, seeds, config.solver, config.n_jobs)


def _gram(hs, names, config):
    gm = gram_matrix(hs, config.sigma, names,
                     {'dims': config.feature_dims, 'bins': config.bins, 'alpha': config.alpha})
    logger.info('sigma = %.12g (%s)', gm.sigma, 'median heuristic' if config.sigma == 'auto' else 'given')
    return gm


def cmd_generate(config, args):
    """Write args.count graphs of a generative model plus their labels manifest;
    the manifest of the output directory is merged, not overwritten."""
    generate = GENERATORS[args.model]
    if args.model == 'er':
        params = (args.nodes, args.p)
    elif args.model == 'ba':
        params = (args.nodes, args.attach)
    else:
        params = (args.nodes, args.ring_degree, args.beta)
    if not args.count >= 0:
        raise ValueError('count must be >= 0')
    os.makedirs(args.out_dir, exist_ok=True)
    manifest = os.path.join(args.out_dir, MANIFEST)
    rows = read_manifest_rows(manifest) if os.path.isfile(manifest) else []
    label = MODEL_LABELS[args.model]
    new = []
    for i in range(args.count):
        g = generate(*params, seed=stream_seed(config.seed, 'generation', label, i), weighted=args.weighted)
        path = '{}_{:04d}.txt'.format(args.model, i)
        write_edge_list(g, os.path.join(args.out_dir, path))
        new.append((path, label, '{}:{}'.format(args.model, i)))
    paths = {path for path, _, _ in new}
    write_manifest_rows([row for row in rows if row[0] not in paths] + new, manifest)
    logger.info('wrote %d %s graphs to %s', args.count, args.model, args.out_dir)


def cmd_curvature(config, args):
    """Curvature CSV of an edge-list file: every edge, or a uniform sample."""
    g = read_edge_list(args.input)
    _emit(format_curvature_csv(_curvature_map(g, config)), args.out)


def cmd_hist(config, args):
    """Histogram JSON of an edge-list file or of a curvature CSV."""
    if _is_curvature_csv(args.input):
        cm = read_curvature_csv(args.input)
        g = cm.graph
        if config.feature_dims == 2 and not cm.full:
            raise ValueError('{} holds sampled curvatures, pair histograms need every edge: '
                             'rerun curvature without --epsilon/--delta or use --dims 1'.format(args.input))
    else:
        g = read_edge_list(args.input)
        cm = _curvature_map(g, config)
    h = histogram_1d(cm, config.bins) if config.feature_dims == 1 else histogram_2d(g, cm, config.bins)
    _emit(h.to_json() + '\n', args.out)
    if args.plot_matrix:
        _emit(h.matrix_dump(), args.plot_matrix)


def _read_histograms(paths):
    hs = []
    for path in paths:
        with open(path) as stream:
            hs.append(Histogram.from_json(stream.read()))
    return hs


def cmd_kernel(config, args):
    """Gram CSV of a collection (or of histogram JSON files)."""
    if args.histograms:
        hs = _read_histograms(args.histograms)
        names = [os.path.splitext(os.path.basename(path))[0] for path in args.histograms]
    elif args.collection:
        collection = read_collection(args.collection)
        if not len(collection):
            raise ValueError('the collection is empty')
        hs, names = _histograms(collection, config), collection.names
    else:
        raise ValueError('give a collection or --histograms')
    _emit(_gram(hs, names, config).to_csv(), args.out)


def cmd_classify(config, args):
    """Cross-validated k-NN accuracy of the kernel on a labelled collection."""
    collection = read_collection(args.collection)
    collection.check_classifiable()
    labels = collection.labels
    if args.permute_labels:
        labels = np.random.default_rng(stream_seed(config.seed, 'permutation')).permutation(labels)
        logger.info('labels permuted at random (control run)')
    gm = _gram(_histograms(collection, config), collection.names, config)
    report = cross_validate(gm, labels, config.folds, config.k_neighbors, stream_seed(config.seed, 'cv'),
                            config.n_jobs)
    _emit(report.to_json() + '\n', args.out)


def cmd_sample_size(config, args):
    """Number of edges sampled for the given error bound and failure probability."""
    if not config.sampling:
        raise ValueError('--epsilon and --delta are required')
    _emit('{}\n'.format(config.plan.sample_count), args.out)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='master seed of every random stream')
    common.add_argument('--workers', type=_workers, default='auto', help='joblib workers, or auto')
    common.add_argument('--config-dump', action='store_true', default=argparse.SUPPRESS, help='print the resolved configuration and exit')
    common.add_argument('-v', '--verbose', action='store_true', help='debug diagnostics')

    pipeline = argparse.ArgumentParser(add_help=False)
    pipeline.add_argument('--alpha', type=float, default=0.5, help='idleness of the neighbourhood measures')
    pipeline.add_argument('--bins', type=int, default=20, help='histogram bins per axis')
    pipeline.add_argument('--dims', type=int, choices=(1, 2), default=None,
                          help='1: edge curvatures, 2: pairs of neighbouring edges (default 2, 1 when sampling)')
    pipeline.add_argument('--sigma', type=_sigma, default='auto', help='RBF bandwidth, or auto (median heuristic)')
    pipeline.add_argument('--epsilon', type=float, default=None, help='sampling error bound')
    pipeline.add_argument('--delta', type=float, default=None, help='sampling failure probability')
    pipeline.add_argument('--constant-c', type=float, default=1., help='constant of the sample size bound')
    pipeline.add_argument('--folds', type=int, default=10, help='cross-validation folds')
    pipeline.add_argument('--neighbors', type=int, default=1, help='k of the k-NN classifier')
    pipeline.add_argument('--solver', choices=('simplex', 'highs', 'pot'), default='simplex',
                          help='exact transportation solver')
    pipeline.add_argument('--out', default='-', help='output file (default stdout)')

    parser = UsageErrorParser(prog='ricci_kernel', description=__doc__.strip().splitlines()[0])
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('--config-dump', action='store_true', help='print the default configuration and exit')
    commands = parser.add_subparsers(dest='command', parser_class=UsageErrorParser)

    generate = commands.add_parser('generate', parents=[common], help=cmd_generate.__doc__)
    generate.add_argument('model', choices=sorted(GENERATORS))
    generate.add_argument('--nodes', type=int, required=True)
    generate.add_argument('--p', type=float, default=0.1, help='er: edge probability')
    generate.add_argument('--attach', type=int, default=2, help='ba: edges attached per new node')
    generate.add_argument('--ring-degree', type=int, default=4, help='ws: ring lattice degree')
    generate.add_argument('--beta', type=float, default=0.1, help='ws: rewiring probability')
    generate.add_argument('--count', type=int, default=1)
    generate.add_argument('--weighted', action='store_true', help='edge lengths drawn from (0.5, 1.5]')
    generate.add_argument('--out-dir', required=True)
    generate.set_defaults(func=cmd_generate)

    curvature = commands.add_parser('curvature', parents=[common, pipeline], help=cmd_curvature.__doc__)
    curvature.add_argument('input', help='edge-list file')
    curvature.set_defaults(func=cmd_curvature)

    hist = commands.add_parser('hist', parents=[common, pipeline], help=cmd_hist.__doc__)
    hist.add_argument('input', help='edge-list file or curvature CSV')
    hist.add_argument('--plot-matrix', default=None, help='gnuplot matrix dump of a 2D histogram')
    hist.set_defaults(func=cmd_hist)

    kernel = commands.add_parser('kernel', parents=[common, pipeline], help=cmd_kernel.__doc__)
    kernel.add_argument('collection', nargs='?', help='labels manifest or TU dataset prefix')
    kernel.add_argument('--histograms', nargs='+', default=None, help='histogram JSON files')
    kernel.set_defaults(func=cmd_kernel)

    classify = commands.add_parser('classify', parents=[common, pipeline], help=cmd_classify.__doc__)
    classify.add_argument('collection', help='labels manifest or TU dataset prefix')
    classify.add_argument('--permute-labels', action='store_true', help='control run on shuffled labels')
    classify.set_defaults(func=cmd_classify)

    size = commands.add_parser('sample-size', parents=[common, pipeline], help=cmd_sample_size.__doc__)
    size.set_defaults(func=cmd_sample_size)
    return parser


def run_config(args):
    """The RunConfig of parsed arguments; dims defaults to 1 when sampling."""
    sampling = getattr(args, 'epsilon', None) is not None or getattr(args, 'delta', None) is not None
    dims = getattr(args, 'dims', None)
    config = RunConfig(alpha=getattr(args, 'alpha', 0.5),
                       bins=getattr(args, 'bins', 20),
                       feature_dims=dims if dims is not None else (1 if sampling else 2),
                       sigma=getattr(args, 'sigma', 'auto'),
                       epsilon=getattr(args, 'epsilon', None),
                       delta=getattr(args, 'delta', None),
                       constant_c=getattr(args, 'constant_c', 1.),
                       seed=getattr(args, 'seed', 0),
                       folds=getattr(args, 'folds', 10),
                       k_neighbors=getattr(args, 'neighbors', 1),
                       worker_count=getattr(args, 'workers', 'auto'),
                       solver=getattr(args, 'solver', 'simplex'))
    return config.validate()


def main(argv=None):
    """Run the command line; returns the exit status: 0 success, 1 usage error,
    2 data or format error, 3 internal invariant violation."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        try:
            config = run_config(args)
        except ValueError as e:
            parser.error(str(e))
    except SystemExit as e:
        return e.code or 0
    if getattr(args, 'config_dump', False):
        print(config.to_json())
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s', force=True)
    try:
        args.func(config, args)
    except (TransportError, AssertionError) as e:
        logger.error('internal error: %s', e)
        return 3
    except (ValueError, OSError) as e:
        logger.error('%s', e)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
