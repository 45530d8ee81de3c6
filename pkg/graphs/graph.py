import csv
import io
import math
import os

import numpy as np


class GraphFormatError(ValueError):
    """Malformed graph input; line is the 1-based line number, if known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__('line {}: {}'.format(line, message) if line is not None else message)


class Graph:
    """Immutable undirected simple graph over the dense node IDs 0..node_count-1,
    every edge carrying a strictly positive length (1.0 if unweighted)."""

    __slots__ = ('_node_count', '_adjacency', '_edge_list', '_edge_index', '_weighted', '_nx_view')

    def __init__(self, node_count, edges):
        """

        :param node_count: (integer scalar): the number of nodes.
        :param edges:      iterable of (u, v) or (u, v, length) tuples, in any orientation.
        """
        if not isinstance(node_count, (int, np.integer)) or node_count < 0:
            raise ValueError('node_count must be a non-negative integer')
        node_count = int(node_count)
        adjacency = [[] for _ in range(node_count)]
        edge_index = {}
        edge_list = []
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            length = float(edge[2]) if len(edge) > 2 else 1.
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError('edge ({}, {}) has a node out of range'.format(u, v))
            if u == v:
                raise ValueError('self-loop at node {}'.format(u))
            if not (length > 0 and math.isfinite(length)):
                raise ValueError('edge ({}, {}) has non-positive length {}'.format(u, v, length))
            if u > v:
                u, v = v, u
            if (u, v) in edge_index:
                raise ValueError('duplicate edge ({}, {})'.format(u, v))
            edge_index[(u, v)] = None
            edge_list.append((u, v, length))
            adjacency[u].append((v, length))
            adjacency[v].append((u, length))
        edge_list.sort()
        self._node_count = node_count
        self._edge_list = tuple(edge_list)
        self._edge_index = {(u, v): i for i, (u, v, _) in enumerate(edge_list)}
        self._adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        self._weighted = any(length != 1. for _, _, length in edge_list)
        self._nx_view = None

    @classmethod
    def from_networkx(cls, G, weight=None):
        """Relabel the nodes of a networkx graph to 0..n-1 in sorted order."""
        nodes = sorted(G.nodes())
        index = {x: i for i, x in enumerate(nodes)}
        if weight is None:
            return cls(len(nodes), ((index[u], index[v]) for u, v in G.edges()))
        return cls(len(nodes), ((index[u], index[v], d.get(weight, 1.)) for u, v, d in G.edges(data=True)))

    def to_networkx(self):
        import networkx as nx

        G = nx.Graph()
        G.add_nodes_from(range(self._node_count))
        G.add_weighted_edges_from(self._edge_list, weight='length')
        return G

    @property
    def nx_view(self):
        """networkx copy of the graph, built on first use and shared afterwards;
        edge lengths are stored under 'length'."""
        if self._nx_view is None:
            self._nx_view = self.to_networkx()
        return self._nx_view

    @property
    def node_count(self):
        return self._node_count

    @property
    def edge_count(self):
        return len(self._edge_list)

    @property
    def edge_list(self):
        """Canonical (u, v, length) tuples with u < v, sorted."""
        return self._edge_list

    @property
    def edges(self):
        return [(u, v) for u, v, _ in self._edge_list]

    @property
    def adjacency(self):
        return self._adjacency

    @property
    def weighted(self):
        return self._weighted

    def neighbors(self, x):
        return [y for y, _ in self._adjacency[x]]

    def degree(self, x):
        return len(self._adjacency[x])

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in self._edge_index

    def edge_id(self, u, v):
        """Position of the edge in the canonical edge list."""
        try:
            return self._edge_index[(min(u, v), max(u, v))]
        except KeyError:
            raise ValueError('({}, {}) is not an edge'.format(u, v)) from None

    def length(self, u, v):
        return self._edge_list[self.edge_id(u, v)][2]

    def subgraph(self, nodes):
        """Induced subgraph over nodes, relabelled in increasing ID order.
        :return: the subgraph and the old -> new node ID mapping.
        """
        nodes = sorted(set(nodes))
        index = {x: i for i, x in enumerate(nodes)}
        edges = [(index[u], index[v], w) for u, v, w in self._edge_list if u in index and v in index]
        return Graph(len(nodes), edges), index

    def relabel(self, permutation):
        """Isomorphic copy where node x becomes permutation[x]."""
        permutation = np.asarray(permutation)
        if sorted(permutation.tolist()) != list(range(self._node_count)):
            raise ValueError('permutation is not a permutation of the node IDs')
        return Graph(self._node_count, ((permutation[u], permutation[v], w) for u, v, w in self._edge_list))

    def __eq__(self, other):
        return (isinstance(other, Graph) and self._node_count == other._node_count
                and self._edge_list == other._edge_list)

    def __hash__(self):
        return hash((self._node_count, self._edge_list))

    def __repr__(self):
        return 'Graph(node_count={}, edge_count={})'.format(self._node_count, self.edge_count)


class GraphCollection:

    def __init__(self, graphs, labels, names=None):
        self.graphs = list(graphs)
        self.labels = np.asarray(labels, dtype=int)
        if names is None:
            names = ['G:{}'.format(i + 1) for i in range(len(self.graphs))]
        self.names = [str(name) for name in names]
        if not len(self.graphs) == self.labels.size == len(self.names):
            raise ValueError('graphs, labels and names have unequal lengths')
        if not all(isinstance(g, Graph) for g in self.graphs):
            raise TypeError('a collection holds Graph objects only')

    @classmethod
    def concatenate(cls, collections):
        collections = list(collections)
        return cls([g for c in collections for g in c.graphs],
                   np.concatenate([c.labels for c in collections]) if collections else [],
                   [name for c in collections for name in c.names])

    @property
    def classes(self):
        return np.unique(self.labels)

    def check_classifiable(self):
        if self.classes.size < 2:
            raise ValueError('classification needs at least 2 distinct labels, got {}'.format(self.classes.size))

    def __len__(self):
        return len(self.graphs)

    def __getitem__(self, i):
        return self.graphs[i]

    def __iter__(self):
        return iter(self.graphs)


def _lines(stream):
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    for number, line in enumerate(stream, start=1):
        yield number, line.strip()


def parse_edge_list(stream):
    """Parse "u v" or "u v w" lines ('#' starts a comment line) into a Graph.
    Node IDs are remapped to 0..n-1 by order of first appearance. A comment of
    the form "# nodes=N" pads the graph with isolated nodes up to N nodes.
    :param stream: a string or a text stream.
    """
    index, edges, seen, declared = {}, [], set(), 0
    for number, line in _lines(stream):
        if not line:
            continue
        if line.startswith('#'):
            for token in line[1:].split():
                if token.startswith('nodes='):
                    try:
                        declared = int(token[len('nodes='):])
                    except ValueError:
                        raise GraphFormatError('bad node count {}'.format(token), number) from None
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise GraphFormatError('expected "u v" or "u v w", got {!r}'.format(line), number)
        try:
            u, v = int(tokens[0]), int(tokens[1])
            w = float(tokens[2]) if len(tokens) == 3 else 1.
        except ValueError:
            raise GraphFormatError('malformed edge {!r}'.format(line), number) from None
        if u == v:
            raise GraphFormatError('self-loop at node {}'.format(u), number)
        if not (w > 0 and math.isfinite(w)):
            raise GraphFormatError('non-positive weight {}'.format(tokens[2]), number)
        for x in (u, v):
            if x not in index:
                index[x] = len(index)
        key = (min(index[u], index[v]), max(index[u], index[v]))
        if key in seen:
            raise GraphFormatError('duplicate edge ({}, {})'.format(u, v), number)
        seen.add(key)
        edges.append((index[u], index[v], w))
    return Graph(max(len(index), declared), edges)


def format_edge_list(g):
    """Edge-list text of g; lengths are printed only for weighted graphs, with
    enough digits to parse back to the same floats."""
    lines = ['# nodes={} edges={}'.format(g.node_count, g.edge_count)]
    if g.weighted:
        lines += ['{} {} {!r}'.format(u, v, w) for u, v, w in g.edge_list]
    else:
        lines += ['{} {}'.format(u, v) for u, v, _ in g.edge_list]
    return '\n'.join(lines) + '\n'


def read_edge_list(path):
    with open(path) as stream:
        return parse_edge_list(stream)


def write_edge_list(g, path):
    with open(path, 'w', newline='\n') as stream:
        stream.write(format_edge_list(g))


def _integers(stream, what):
    values = []
    for number, line in _lines(stream):
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError:
            raise GraphFormatError('malformed {} {!r}'.format(what, line), number) from None
    return values


def parse_tu_collection(adjacency_file, indicator_file, labels_file, prefix='TU'):
    """Parse a TU benchmark dataset (the <DS>_A.txt, <DS>_graph_indicator.txt and
    <DS>_graph_labels.txt files) into a GraphCollection. Both directions of an
    edge are listed in the adjacency file and collapse to one undirected edge.
    """
    indicator = _integers(indicator_file, 'graph indicator')
    labels = _integers(labels_file, 'graph label')
    n_graphs = max(indicator, default=0)
    if len(labels) != n_graphs:
        raise GraphFormatError('label count mismatch: {} labels for {} graphs'.format(len(labels), n_graphs))
    if n_graphs and min(indicator) < 1:
        raise GraphFormatError('graph IDs must be 1-based')

    # local (per graph) node IDs follow the order of the indicator file
    local, sizes = [], [0] * n_graphs
    for graph_id in indicator:
        local.append(sizes[graph_id - 1])
        sizes[graph_id - 1] += 1

    edges = [set() for _ in range(n_graphs)]
    for number, line in _lines(adjacency_file):
        if not line:
            continue
        tokens = line.split(',')
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except (ValueError, IndexError):
            raise GraphFormatError('malformed node pair {!r}'.format(line), number) from None
        if len(tokens) != 2:
            raise GraphFormatError('malformed node pair {!r}'.format(line), number)
        for x in (i, j):
            if not 1 <= x <= len(indicator):
                raise GraphFormatError('node {} without graph assignment'.format(x), number)
        if indicator[i - 1] != indicator[j - 1]:
            raise GraphFormatError('cross-graph edge ({}, {}) between graphs {} and {}'.format(
                i, j, indicator[i - 1], indicator[j - 1]), number)
        if i == j:
            raise GraphFormatError('self-loop at node {}'.format(i), number)
        u, v = local[i - 1], local[j - 1]
        edges[indicator[i - 1] - 1].add((min(u, v), max(u, v)))

    graphs = [Graph(sizes[k], sorted(edges[k])) for k in range(n_graphs)]
    return GraphCollection(graphs, labels, ['{}:{}'.format(prefix, k + 1) for k in range(n_graphs)])


def read_tu_collection(prefix):
    """Read the TU dataset whose files are <prefix>_A.txt, ...; extra node and
    edge label files, if any, are ignored."""
    name = os.path.basename(prefix)
    with open(prefix + '_A.txt') as adjacency, \
            open(prefix + '_graph_indicator.txt') as indicator, \
            open(prefix + '_graph_labels.txt') as labels:
        return parse_tu_collection(adjacency, indicator, labels, prefix=name)


MANIFEST_HEADER = ['path', 'label', 'name']


def read_manifest_rows(path):
    with open(path, newline='') as stream:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header != MANIFEST_HEADER:
            raise GraphFormatError('manifest header must be {}'.format(','.join(MANIFEST_HEADER)), 1)
        rows = []
        for number, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise GraphFormatError('expected path,label,name', number)
            try:
                rows.append((row[0], int(row[1]), row[2]))
            except ValueError:
                raise GraphFormatError('malformed label {!r}'.format(row[1]), number) from None
    return rows


def write_manifest_rows(rows, path):
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(MANIFEST_HEADER)
        writer.writerows(rows)


def read_manifest(path):
    """Collection of edge-list files listed in a path,label,name manifest;
    paths are relative to the manifest's directory."""
    root = os.path.dirname(os.path.abspath(path))
    rows = read_manifest_rows(path)
    return GraphCollection([read_edge_list(os.path.join(root, p)) for p, _, _ in rows],
                           [label for _, label, _ in rows], [name for _, _, name in rows])


def read_collection(path):
    """A manifest CSV file or a TU dataset prefix."""
    if os.path.isfile(path):
        return read_manifest(path)
    if os.path.isfile(path + '_A.txt'):
        return read_tu_collection(path)
    raise ValueError('{} is neither a manifest nor a TU dataset prefix'.format(path))
