import io
import logging

import numpy as np
from joblib import Parallel, delayed, effective_n_jobs

from graphs.graph import Graph, GraphFormatError
from graphs.shortest_paths import truncated_distances
from ricci.sampling import sample_edges
from ricci.transport import neighborhood_measure, emd

logger = logging.getLogger(__name__)


class CurvatureMap:
    """Curvature of all (or of a uniform sample of) the edges of a graph,
    ordered canonically by edge."""

    def __init__(self, graph, edges, kappa, sampled=False, seed=None):
        self.graph = graph
        order = sorted(range(len(edges)), key=lambda i: (min(edges[i]), max(edges[i])))
        self.edges = [(min(edges[i]), max(edges[i])) for i in order]
        self.kappa = np.asarray(kappa, dtype=float)[order] if len(order) else np.zeros(0)
        if len(set(self.edges)) != len(self.edges):
            raise ValueError('an edge appears more than once')
        if len(self.edges) != self.kappa.size:
            raise ValueError('edges and kappa have unequal lengths')
        self.sampled = bool(sampled)
        self.seed = seed
        self.coverage = len(self.edges) / graph.edge_count if graph.edge_count else 0.
        if not self.sampled and len(self.edges) != graph.edge_count:
            raise ValueError('a map that is not sampled must cover every edge')

    @property
    def full(self):
        return not self.sampled and self.coverage == 1.

    def as_dict(self):
        return dict(zip(self.edges, self.kappa.tolist()))

    def __len__(self):
        return len(self.edges)

    def __eq__(self, other):
        return (isinstance(other, CurvatureMap) and self.edges == other.edges
                and np.array_equal(self.kappa, other.kappa) and self.sampled == other.sampled
                and self.seed == other.seed)

    def __repr__(self):
        return 'CurvatureMap(entries={}, coverage={:.4g}, sampled={})'.format(
            len(self.edges), self.coverage, self.sampled)


def _snap(kappa):
    # rounded to 12 decimals and 12 significant digits, so that a CSV dump
    # reads back bit-identical and solver round-off never moves a histogram bin
    return float('{:.12g}'.format(round(kappa, 12))) + 0.


def transport_distance(g, e, alpha=0.5, solver='simplex'):
    """
    Earth mover distance W(u, v) between the lazy measures of the endpoints of
    the edge e. Every support node of u lies within the longest edge incident to
    u, likewise for v, so no needed distance exceeds the sum of those two lengths
    and d(u, v); the search is truncated there (3 hops on unweighted graphs).
    """
    u, v = e
    length = g.length(u, v)
    mu = neighborhood_measure(g, u, alpha)
    mv = neighborhood_measure(g, v, alpha)
    cap = max(w for _, w in g.adjacency[u]) + length + max(w for _, w in g.adjacency[v])
    return emd(mu, mv, truncated_distances(g, mu.support, mv.support, cap), solver=solver).cost


def edge_curvature(g, e, alpha=0.5, solver='simplex'):
    """
    Ollivier-Ricci curvature 1 - W(u, v) / d(u, v) of the edge e = (u, v),
    rounded to 12 decimals and 12 significant digits.
    """
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError('({}, {}) is not an edge'.format(u, v))
    return _snap(1. - transport_distance(g, e, alpha, solver) / g.length(u, v))


def _curvature_chunk(g, edges, alpha, solver):
    return [edge_curvature(g, e, alpha, solver) for e in edges]


def _curvatures(g, edges, alpha, solver, n_jobs):
    n_jobs = effective_n_jobs(n_jobs)
    if n_jobs == 1 or len(edges) < 2 * n_jobs:
        return _curvature_chunk(g, edges, alpha, solver)
    # one task per worker, so that the graph is shipped once per worker;
    # chunks come back in submission order
    chunks = np.array_split(np.arange(len(edges)), n_jobs)
    results = Parallel(n_jobs=n_jobs)(delayed(_curvature_chunk)(g, [edges[i] for i in chunk], alpha, solver)
                                      for chunk in chunks)
    return [kappa for chunk in results for kappa in chunk]


def all_curvatures(g, alpha=0.5, solver='simplex', n_jobs=1):
    """
    Curvature of every edge of g.
    :param n_jobs: (integer scalar, optional, default value 1): number of joblib
                   workers; the result does not depend on it.
    """
    if not g.edge_count:
        raise ValueError('the graph has no edges')
    edges = g.edges
    return CurvatureMap(g, edges, _curvatures(g, edges, alpha, solver, n_jobs))


def sampled_curvatures(g, alpha, plan, seed=0, solver='simplex', n_jobs=1):
    """
    Curvature of min(plan.sample_count, |E|) edges of g drawn uniformly without
    replacement; the cost depends on the sample size, not on the graph size.
    """
    if not g.edge_count:
        raise ValueError('the graph has no edges')
    if plan.sample_count < g.edge_count:
        edge_list = g.edge_list
        edges = [edge_list[i][:2] for i in sample_edges(g.edge_count, plan, seed)]
    else:
        edges = g.edges
    logger.debug('sampling %d of %d edges (seed %s)', len(edges), g.edge_count, seed)
    return CurvatureMap(g, edges, _curvatures(g, edges, alpha, solver, n_jobs), sampled=True, seed=seed)


CSV_HEADER = 'u,v,kappa'


def format_curvature_csv(cm):
    """CSV dump of a curvature map: the u,v,kappa header, one row per edge with
    12 significant digits, and a trailing comment recording the sampling."""
    lines = [CSV_HEADER]
    lines += ['{},{},{:.12g}'.format(u, v, k) for (u, v), k in zip(cm.edges, cm.kappa)]
    lines.append('# sampled={:d} edges={} nodes={} seed={}'.format(
        cm.sampled, cm.graph.edge_count, cm.graph.node_count, cm.seed if cm.seed is not None else ''))
    return '\n'.join(lines) + '\n'


def parse_curvature_csv(stream):
    """
    Read back a curvature map written by format_curvature_csv. The graph of a
    full map is rebuilt from its rows (unit lengths); that of a sampled map only
    knows the sampled edges, hence only 1D histograms can be taken of it.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    lines = [line.strip() for line in stream]
    if not lines or lines[0] != CSV_HEADER:
        raise GraphFormatError('curvature CSV must start with the header {}'.format(CSV_HEADER), 1)
    edges, kappa, meta = [], [], {}
    for number, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line.startswith('#'):
            meta.update(token.split('=', 1) for token in line[1:].split() if '=' in token)
            continue
        try:
            u, v, k = line.split(',')
            edges.append((int(u), int(v)))
            kappa.append(float(k))
        except ValueError:
            raise GraphFormatError('expected u,v,kappa, got {!r}'.format(line), number) from None
    try:
        sampled = bool(int(meta.get('sampled', '0')))
        nodes = int(meta.get('nodes', 1 + max((max(e) for e in edges), default=-1)))
        seed = int(meta['seed']) if meta.get('seed') else None
    except ValueError:
        raise GraphFormatError('malformed sampling comment') from None
    graph = Graph(nodes, edges)
    if sampled:
        cm = CurvatureMap(graph, edges, kappa, sampled=True, seed=seed)
        cm.coverage = len(edges) / int(meta.get('edges', len(edges)))
        return cm
    return CurvatureMap(graph, edges, kappa, seed=seed)


def write_curvature_csv(cm, path):
    with open(path, 'w', newline='\n') as stream:
        stream.write(format_curvature_csv(cm))


def read_curvature_csv(path):
    with open(path) as stream:
        return parse_curvature_csv(stream)
