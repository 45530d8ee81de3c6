import json
import logging
import numbers

import numpy as np
from joblib import Parallel, delayed
from scipy.sparse import csr_matrix

from ricci.curvature import all_curvatures, sampled_curvatures

logger = logging.getLogger(__name__)

RANGE = (-1., 1.)


class Histogram:
    """
    Normalized curvature distribution over [-1, 1]: B bins for the
    distribution of the edges (dims=1), B x B bins for the distribution of
    the pairs of neighbouring edges (dims=2), weights stored row-major.
    """

    def __init__(self, dims, bins, weights, total_samples, clamped=0):
        if dims not in (1, 2):
            raise ValueError('dims must be 1 or 2')
        _check_bins(bins)
        self.dims = dims
        self.bins = bins
        self.weights = np.asarray(weights, dtype=float)
        if self.weights.shape != (bins ** dims,):
            raise ValueError('weights must be a vector of length {}'.format(bins ** dims))
        if (self.weights < 0).any():
            raise ValueError('weights must be >= 0')
        if total_samples > 0 and abs(self.weights.sum() - 1.) > 1e-9:
            raise ValueError('weights must sum to 1')
        self.total_samples = int(total_samples)
        self.clamped = int(clamped)
        self.range = RANGE

    @property
    def shape(self):
        return self.dims, self.bins, self.range

    @property
    def matrix(self):
        if self.dims != 2:
            raise ValueError('only a 2D histogram is a matrix')
        return self.weights.reshape(self.bins, self.bins)

    def to_dict(self):
        return {'dims': self.dims,
                'bins': self.bins,
                'range': list(self.range),
                'weights': self.weights.tolist(),
                'total_samples': self.total_samples,
                'clamped': self.clamped}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        try:
            if tuple(d['range']) != RANGE:
                raise ValueError('unsupported histogram range {}'.format(d['range']))
            return cls(d['dims'], d['bins'], d['weights'], d['total_samples'], d.get('clamped', 0))
        except (KeyError, TypeError) as e:
            raise ValueError('malformed histogram: {}'.format(e)) from None

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def matrix_dump(self):
        """The 2D weights as a gnuplot matrix: one row per line, space-separated."""
        return ''.join(' '.join('{:.12g}'.format(w) for w in row) + '\n' for row in self.matrix)

    def __eq__(self, other):
        return (isinstance(other, Histogram) and self.shape == other.shape
                and np.array_equal(self.weights, other.weights)
                and self.total_samples == other.total_samples and self.clamped == other.clamped)

    def __repr__(self):
        return 'Histogram(dims={}, bins={}, total_samples={})'.format(self.dims, self.bins, self.total_samples)


def _check_bins(bins):
    if not isinstance(bins, numbers.Integral) or isinstance(bins, bool):
        raise ValueError('bins is not an integer')
    if not bins >= 1:
        raise ValueError('bins must be >= 1')


def _bin_index(kappa, bins):
    """Bin floor((kappa + 1) / 2 * B) of each curvature, out-of-range values
    clamped into the end bins; returns the indices and the clamp count."""
    kappa = np.asarray(kappa, dtype=float)
    idx = np.floor((kappa + 1.) / 2. * bins).astype(int)
    clamped = int(np.count_nonzero((kappa < RANGE[0]) | (kappa > RANGE[1])))
    return np.clip(idx, 0, bins - 1), clamped


def histogram_1d(cm, bins=20):
    """
    Normalized histogram of the curvatures of a (possibly sampled) map.

    >>> from graphs.graph import Graph
    >>> histogram_1d(all_curvatures(Graph(3, [(0, 1), (1, 2), (0, 2)])), 4).weights
    array([0., 0., 0., 1.])
    """
    _check_bins(bins)
    if not len(cm):
        raise ValueError('the curvature map is empty')
    idx, clamped = _bin_index(cm.kappa, bins)
    if clamped:
        logger.info('%d curvatures outside [-1, 1] clamped into the end bins', clamped)
    counts = np.bincount(idx, minlength=bins)
    return Histogram(1, bins, counts / counts.sum(), len(cm), clamped)


def histogram_2d(g, cm, bins=20):
    """
    Normalized histogram of the curvature pairs (k(e), k(e')) over the
    ordered pairs of distinct edges sharing an endpoint.

    With N the node x bin incidence counts, the pairs meeting at a node fill
    the cell (a, b) n_a * n_b times, minus the self pairs on the diagonal:
    M = N^T N - diag(colsum(N)).
    """
    _check_bins(bins)
    if not cm.full:
        raise ValueError('the pair distribution needs the curvature of every edge; '
                         'compute the full map or use dims=1 with sampling')
    if g.edge_count != len(cm) or any(not g.has_edge(u, v) for u, v in cm.edges):
        raise ValueError('the curvature map does not belong to this graph')
    idx, clamped = _bin_index(cm.kappa, bins)
    ends = np.array(cm.edges, dtype=int).reshape(-1, 2)
    N = csr_matrix((np.ones(2 * len(idx)), (ends.T.ravel(), np.tile(idx, 2))), shape=(g.node_count, bins))
    M = (N.T @ N).toarray() - np.diag(np.asarray(N.sum(axis=0)).ravel())
    total = M.sum()
    if not total > 0:
        raise ValueError('the graph has no adjacent edge pairs')
    if clamped:
        logger.info('%d curvatures outside [-1, 1] clamped into the end bins', clamped)
    return Histogram(2, bins, (M / total).ravel(), int(total), clamped)


def curvature_histogram(g, alpha=0.5, bins=20, dims=2, plan=None, seed=0, solver='simplex', n_jobs=1):
    """Curvature distribution of a graph: the full map, or a sampled one when a
    SamplingPlan is given (1D only)."""
    if plan is not None:
        if dims != 1:
            raise ValueError('sampled curvatures only support dims=1')
        return histogram_1d(sampled_curvatures(g, alpha, plan, seed, solver, n_jobs), bins)
    cm = all_curvatures(g, alpha, solver, n_jobs)
    return histogram_1d(cm, bins) if dims == 1 else histogram_2d(g, cm, bins)


def curvature_histograms(graphs, alpha=0.5, bins=20, dims=2, plan=None, seeds=None, solver='simplex', n_jobs=1):
    """
    Curvature distributions of a collection of graphs, one joblib task per graph.
    :param seeds: (list of integers, optional): the sampling seed of each graph,
                  used only with a plan; defaults to the graph index.
    """
    graphs = list(graphs)
    if seeds is None:
        seeds = range(len(graphs))
    seeds = list(seeds)
    if len(seeds) != len(graphs):
        raise ValueError('one seed per graph is needed')
    return Parallel(n_jobs=n_jobs)(delayed(curvature_histogram)(g, alpha, bins, dims, plan, seed, solver)
                                   for g, seed in zip(graphs, seeds))
