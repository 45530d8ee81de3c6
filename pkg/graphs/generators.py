import networkx as nx
import numpy as np

from graphs.graph import Graph


def _check_nodes(n, low=1):
    if not isinstance(n, (int, np.integer)):
        raise ValueError('n is not an integer scalar')
    if n < low:
        raise ValueError('n must be >= {}'.format(low))


def _check_probability(p, name):
    if not np.isscalar(p) or not np.isreal(p):
        raise ValueError('{} is not a real scalar'.format(name))
    if not 0 <= p <= 1:
        raise ValueError('{} must be in [0, 1]'.format(name))


def _from_networkx(G, seed, weighted):
    """Unit lengths, or lengths drawn uniformly from (0.5, 1.5] when weighted."""
    if weighted:
        lengths = 1.5 - np.random.default_rng([seed, 1]).random(G.number_of_edges())
        for (u, v), length in zip(sorted((min(e), max(e)) for e in G.edges()), lengths):
            G.edges[u, v]['length'] = float(length)
        return Graph.from_networkx(G, weight='length')
    return Graph.from_networkx(G)


def generate_er(n, p, seed=0, weighted=False):
    """Erdos-Renyi G(n, p): every pair of nodes is an edge independently with probability p."""
    _check_nodes(n)
    _check_probability(p, 'p')
    return _from_networkx(nx.gnp_random_graph(n, p, seed=seed), seed, weighted)


def generate_ba(n, m_attach, seed=0, weighted=False):
    """Barabasi-Albert preferential attachment grown from a clique of m_attach + 1
    nodes, each new node attaching m_attach edges, which leaves exactly
    m_attach * (n - m_attach - 1) + (m_attach + 1) * m_attach / 2 edges."""
    if not isinstance(m_attach, (int, np.integer)):
        raise ValueError('m_attach is not an integer scalar')
    if m_attach < 1:
        raise ValueError('m_attach must be >= 1')
    _check_nodes(n, m_attach + 1)
    return _from_networkx(nx.barabasi_albert_graph(n, m_attach, seed=seed,
                                                   initial_graph=nx.complete_graph(m_attach + 1)),
                          seed, weighted)


def generate_ws(n, k, beta, seed=0, weighted=False):
    """Watts-Strogatz small world: a ring lattice where every node meets its k nearest
    neighbours, each lattice edge being rewired with probability beta."""
    _check_nodes(n)
    if not isinstance(k, (int, np.integer)):
        raise ValueError('k is not an integer scalar')
    if k < 0 or k % 2:
        raise ValueError('k must be a non-negative even integer')
    if not k < n:
        raise ValueError('k must be < n')
    _check_probability(beta, 'beta')
    return _from_networkx(nx.watts_strogatz_graph(n, k, beta, seed=seed), seed, weighted)


GENERATORS = {'er': generate_er, 'ba': generate_ba, 'ws': generate_ws}
