import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import floyd_warshall


class DistanceTable:
    """Shortest-path lengths between every source and every target."""

    def __init__(self, sources, targets, dist):
        self.sources = tuple(int(x) for x in sources)
        self.targets = tuple(int(y) for y in targets)
        self.dist = np.asarray(dist, dtype=float)
        if self.dist.shape != (len(self.sources), len(self.targets)):
            raise ValueError('dist must be a |sources| x |targets| matrix')

    def submatrix(self, sources, targets):
        """Distances restricted (and reordered) to the given nodes."""
        row = {x: i for i, x in enumerate(self.sources)}
        col = {y: j for j, y in enumerate(self.targets)}
        try:
            return self.dist[np.ix_([row[x] for x in sources], [col[y] for y in targets])]
        except KeyError as e:
            raise ValueError('node {} is not covered by the distance table'.format(e.args[0])) from None


def _check_nodes(g, nodes):
    for x in nodes:
        if not 0 <= x < g.node_count:
            raise ValueError('node {} out of range'.format(x))


def truncated_distances(g, sources, targets, radius_cap=np.inf):
    """
    Exact shortest-path lengths from every source to every target, exploring the
    graph only within radius_cap of each source: a breadth-first search on unit
    lengths, Dijkstra otherwise. A target not reached within radius_cap gets the
    distance radius_cap.
    :param g:          the graph.
    :param sources:    list of source nodes.
    :param targets:    list of target nodes.
    :param radius_cap: (real scalar, optional, default value inf): must be at least the
                       largest distance actually needed, otherwise the table is truncated.
    :return:           a DistanceTable.
    """
    if not radius_cap > 0:
        raise ValueError('radius_cap must be > 0')
    _check_nodes(g, sources)
    _check_nodes(g, targets)
    G = g.nx_view
    cutoff = None if np.isinf(radius_cap) else radius_cap
    dist = np.full((len(sources), len(targets)), float(radius_cap))
    for i, source in enumerate(sources):
        if g.weighted:
            found = nx.single_source_dijkstra_path_length(G, source, cutoff=cutoff, weight='length')
        else:
            found = nx.single_source_shortest_path_length(
                G, source, cutoff=None if cutoff is None else int(np.floor(cutoff)))
        for j, target in enumerate(targets):
            if target in found:
                dist[i, j] = min(found[target], radius_cap)
    return DistanceTable(sources, targets, dist)


def all_pairs_distances(g):
    """Exhaustive all-pairs shortest paths (inf between components)."""
    n = g.node_count
    if not g.edge_count:
        dist = np.full((n, n), np.inf)
        np.fill_diagonal(dist, 0.)
        return dist
    u, v, w = (np.array(column) for column in zip(*g.edge_list))
    adjacency = csr_matrix((np.r_[w, w], (np.r_[u, v], np.r_[v, u])), shape=(n, n))
    return floyd_warshall(adjacency, directed=False)
