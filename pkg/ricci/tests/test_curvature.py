import time

import networkx as nx
import numpy as np
import pytest

from graphs.generators import generate_er, generate_ba, generate_ws
from graphs.graph import Graph, GraphFormatError
from graphs.shortest_paths import all_pairs_distances
from ricci.curvature import (CurvatureMap, edge_curvature, transport_distance, all_curvatures,
                             sampled_curvatures, format_curvature_csv, parse_curvature_csv,
                             write_curvature_csv, read_curvature_csv)
from ricci.sampling import SamplingPlan, sample_edges, cdf_deviation
from ricci.transport import neighborhood_measure, emd_bruteforce

triangle = Graph(3, [(0, 1), (1, 2), (0, 2)])
path = Graph(4, [(0, 1), (1, 2), (2, 3)])
# u = 0 and v = 1 each carry two pendant nodes
dumbbell = Graph(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
star = Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


def oracle_curvature(g, e, alpha=0.5):
    u, v = e
    mu, mv = neighborhood_measure(g, u, alpha), neighborhood_measure(g, v, alpha)
    D = all_pairs_distances(g)
    return 1. - emd_bruteforce(mu, mv, D[np.ix_(mu.support, mv.support)]) / g.length(u, v)


def random_corpus(count, max_nodes, seed=0):
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(10, max_nodes + 1))
        model = i % 3
        if model == 0:
            yield generate_er(n, float(rng.uniform(0.05, 0.3)), seed=i)
        elif model == 1:
            yield generate_ba(n, int(rng.integers(1, 5)), seed=i)
        else:
            yield generate_ws(n, 4, float(rng.uniform(0., 0.5)), seed=i)


def test_fixtures():
    assert np.isclose(edge_curvature(triangle, (0, 1)), 0.75, rtol=0., atol=1e-9)
    assert np.isclose(edge_curvature(path, (1, 2)), 0., rtol=0., atol=1e-9)
    assert np.isclose(edge_curvature(dumbbell, (0, 1)), -1. / 3., rtol=0., atol=1e-9)
    assert np.isclose(transport_distance(dumbbell, (0, 1)), 4. / 3.)
    for g, e in ((triangle, (0, 1)), (path, (1, 2)), (dumbbell, (0, 1))):
        assert np.isclose(edge_curvature(g, e), oracle_curvature(g, e), rtol=0., atol=1e-9)
    with pytest.raises(ValueError):
        edge_curvature(path, (0, 2))


def test_all_curvatures():
    cm = all_curvatures(triangle)
    assert cm.edges == [(0, 1), (0, 2), (1, 2)]
    assert np.allclose(cm.kappa, 0.75)
    assert cm.coverage == 1. and not cm.sampled and cm.full
    two_triangles = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert np.allclose(all_curvatures(two_triangles).kappa, 0.75)
    for e, kappa in all_curvatures(star).as_dict().items():
        assert np.isclose(kappa, oracle_curvature(star, e), rtol=0., atol=1e-9)
    with pytest.raises(ValueError):
        all_curvatures(Graph(3, []))


def test_parallel_result_is_identical():
    g = generate_ba(80, 3, seed=5)
    assert all_curvatures(g, n_jobs=2) == all_curvatures(g)


def test_weighted_edges_normalize_by_length():
    g = Graph(3, [(0, 1, 2.), (1, 2, 2.), (0, 2, 2.)])
    assert np.isclose(edge_curvature(g, (0, 1)), 0.75)
    h = generate_er(25, 0.15, seed=1, weighted=True)
    small_supports = [e for e in h.edges if max(h.degree(x) for x in e) <= 5]
    assert small_supports
    for e in small_supports[:10]:
        assert np.isclose(edge_curvature(h, e), oracle_curvature(h, e), rtol=0., atol=1e-9)


def test_curvature_is_rounded():
    g = generate_ws(40, 4, 0.3, seed=2, weighted=True)
    for e in g.edges:
        k = edge_curvature(g, e)
        assert k == round(k, 12) and k == float('{:.12g}'.format(k))
        assert np.isclose(k, 1. - transport_distance(g, e) / g.length(*e), rtol=0., atol=1e-12)


def test_agrees_with_oracle_on_small_graphs():
    # every graph with at most 6 nodes, up to isomorphism
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() > 6 or not G.number_of_edges():
            continue
        g = Graph.from_networkx(G)
        cm = all_curvatures(g)
        for e, kappa in cm.as_dict().items():
            assert np.isclose(kappa, oracle_curvature(g, e), rtol=0., atol=1e-9)


@pytest.mark.slow
def test_agrees_with_oracle_on_seven_nodes():
    # the exhaustive oracle takes supports of at most 6 nodes; larger ones are
    # checked against linear programming
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() != 7 or not G.number_of_edges():
            continue
        g = Graph.from_networkx(G)
        for e, kappa in all_curvatures(g).as_dict().items():
            if max(g.degree(x) for x in e) < 6:
                assert np.isclose(kappa, oracle_curvature(g, e), rtol=0., atol=1e-9)
            else:
                assert np.isclose(kappa, edge_curvature(g, e, solver='highs'), rtol=0., atol=1e-7)


def test_range_and_transport_bound():
    for g in random_corpus(30, 80):
        if not g.edge_count:
            continue
        cm = all_curvatures(g)
        assert (cm.kappa >= -1.).all() and (cm.kappa <= 1.).all()
        for e in g.edges[:20]:
            assert transport_distance(g, e) <= 2. + 1e-9


@pytest.mark.slow
def test_range_on_full_corpus():
    for g in random_corpus(200, 300, seed=1):
        if g.edge_count:
            cm = all_curvatures(g, n_jobs=-1)
            assert (cm.kappa >= -1.).all() and (cm.kappa <= 1.).all()
            assert (1. - cm.kappa <= 2. + 1e-9).all()


def test_locality():
    rng = np.random.default_rng(0)
    for g in random_corpus(50, 60, seed=2):
        if not g.edge_count:
            continue
        u, v = g.edges[int(rng.integers(g.edge_count))]
        D = all_pairs_distances(g)
        ball = [x for x in range(g.node_count) if min(D[u, x], D[v, x]) <= 2]
        h, index = g.subgraph(ball)
        assert edge_curvature(h, (index[u], index[v])) == edge_curvature(g, (u, v))


def test_dense_graphs_are_more_curved_than_trees():
    er = all_curvatures(generate_er(63, 0.5, seed=0))
    tree = all_curvatures(Graph.from_networkx(nx.balanced_tree(2, 5)))
    assert er.kappa.mean() > tree.kappa.mean()


def test_sampled_curvatures():
    g = generate_ba(300, 3, seed=1)
    full = all_curvatures(g).as_dict()
    plan = SamplingPlan(0.3, 0.3)
    cm = sampled_curvatures(g, 0.5, plan, seed=4)
    assert cm.sampled and len(cm) == plan.sample_count
    assert cm.coverage == plan.sample_count / g.edge_count
    for e, kappa in cm.as_dict().items():
        assert full[e] == kappa
    assert sampled_curvatures(g, 0.5, plan, seed=4) == cm


def test_sampled_curvatures_boundaries():
    exhaustive = sampled_curvatures(triangle, 0.5, SamplingPlan(0.1, 0.1), seed=0)
    assert exhaustive.as_dict() == all_curvatures(triangle).as_dict()
    single = sampled_curvatures(path, 0.5, SamplingPlan(0.5, 0.5, constant_c=0.1), seed=3)
    assert len(single) == 1 and path.has_edge(*single.edges[0])


class UnlistableGraph(Graph):
    """A graph whose full edge list must not be built."""

    @property
    def edges(self):
        raise AssertionError('the full edge list was built')


def test_sampling_reads_only_the_sampled_edges():
    g = UnlistableGraph(5000, [(i, i + 1) for i in range(4999)])
    plan = SamplingPlan(0.5, 0.5)
    cm = sampled_curvatures(g, 0.5, plan, seed=2)
    assert len(cm) == plan.sample_count
    assert all(g.has_edge(*e) for e in cm.edges)
    plain = Graph(5000, [(i, i + 1) for i in range(4999)])
    assert list(cm.kappa) == [edge_curvature(plain, e) for e in cm.edges]


def test_curvature_csv_round_trip(tmp_path):
    g = generate_ws(40, 4, 0.2, seed=3)
    cm = all_curvatures(g)
    text = format_curvature_csv(cm)
    assert text.startswith('u,v,kappa\n')
    back = parse_curvature_csv(text)
    assert back.edges == cm.edges and np.array_equal(back.kappa, cm.kappa) and back.full
    sampled = sampled_curvatures(g, 0.5, SamplingPlan(0.5, 0.5), seed=9)
    write_curvature_csv(sampled, str(tmp_path / 'k.csv'))
    back = read_curvature_csv(str(tmp_path / 'k.csv'))
    assert back.sampled and not back.full and back.seed == 9
    assert np.isclose(back.coverage, sampled.coverage)
    with pytest.raises(GraphFormatError):
        parse_curvature_csv('u,v\n0,1\n')
    with pytest.raises(GraphFormatError):
        parse_curvature_csv('u,v,kappa\n0,1,x\n')


def test_curvature_map_validation():
    with pytest.raises(ValueError):
        CurvatureMap(path, [(0, 1), (1, 0)], [0., 0.], sampled=True)
    with pytest.raises(ValueError):
        CurvatureMap(path, [(0, 1)], [0.])


@pytest.mark.slow
def test_sampling_bound_on_a_large_graph():
    g = generate_ba(20010, 5, seed=0)
    assert g.edge_count >= 10 ** 5
    full = all_curvatures(g, n_jobs=-1)
    plan = SamplingPlan(0.05, 0.1)
    good = sum(cdf_deviation(full.kappa[sample_edges(g.edge_count, plan, seed)], full.kappa) <= 0.05
               for seed in range(100))
    assert good >= 90
    assert len(sampled_curvatures(g, 0.5, plan, seed=0)) == plan.sample_count


@pytest.mark.slow
def test_sampling_time_does_not_depend_on_graph_size():
    plan = SamplingPlan(0.05, 0.1)

    def sampling_time(g):
        times = []
        for seed in range(3):
            start = time.perf_counter()
            sampled_curvatures(g, 0.5, plan, seed=seed)
            times.append(time.perf_counter() - start)
        return np.median(times)

    small, large = generate_ba(20010, 5, seed=0), generate_ba(80010, 5, seed=0)
    for g in (small, large):
        # warm-up: builds the networkx view shared by the searches
        sampled_curvatures(g, 0.5, SamplingPlan(0.5, 0.5))
    assert sampling_time(large) / sampling_time(small) < 1.5


if __name__ == "__main__":
    pytest.main()
