import csv
import json
import os

import numpy as np
import pytest

from graphs.generators import generate_ba, generate_er
from graphs.graph import Graph, write_edge_list, read_manifest_rows, write_manifest_rows
from ricci_kernel import main, RunConfig


def read(path):
    with open(path) as stream:
        return stream.read()


def gram_values(text):
    rows = list(csv.reader(text.splitlines()))
    return rows[0][1:], np.array([[float(k) for k in row[1:]] for row in rows[1:]])


@pytest.fixture
def triangle_file(tmp_path):
    path = str(tmp_path / 'triangle.txt')
    write_edge_list(Graph(3, [(0, 1), (1, 2), (0, 2)]), path)
    return path


def test_generate_empty_graphs(tmp_path):
    out = str(tmp_path / 'er')
    assert main(['generate', 'er', '--nodes', '5', '--p', '0', '--count', '2', '--out-dir', out]) == 0
    rows = read_manifest_rows(os.path.join(out, 'labels.csv'))
    assert [(label, name) for _, label, name in rows] == [(0, 'er:0'), (0, 'er:1')]
    for path, _, _ in rows:
        assert read(os.path.join(out, path)) == '# nodes=5 edges=0\n'


def test_generate_merges_manifests(tmp_path):
    out = str(tmp_path / 'mixed')
    assert main(['generate', 'er', '--nodes', '20', '--p', '0.2', '--count', '3', '--out-dir', out]) == 0
    assert main(['generate', 'ba', '--nodes', '20', '--attach', '2', '--count', '3', '--out-dir', out]) == 0
    assert main(['generate', 'ba', '--nodes', '20', '--attach', '2', '--count', '3', '--out-dir', out]) == 0
    rows = read_manifest_rows(os.path.join(out, 'labels.csv'))
    assert len(rows) == 6 and sorted({label for _, label, _ in rows}) == [0, 1]


def test_generate_is_reproducible(tmp_path):
    outputs = []
    for run in ('a', 'b'):
        out = str(tmp_path / run)
        assert main(['generate', 'ba', '--nodes', '100', '--attach', '2', '--count', '50', '--seed', '7',
                     '--out-dir', out]) == 0
        outputs.append({name: read(os.path.join(out, name)) for name in sorted(os.listdir(out))})
    assert outputs[0] == outputs[1] and len(outputs[0]) == 51


def test_curvature(triangle_file, capsys):
    assert main(['curvature', triangle_file]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[:4] == ['u,v,kappa', '0,1,0.75', '0,2,0.75', '1,2,0.75']
    assert lines[4].startswith('# sampled=0')


def test_sampled_curvature(tmp_path, capsys):
    path = str(tmp_path / 'cycle.txt')
    write_edge_list(Graph(1000, [(i, (i + 1) % 1000) for i in range(1000)]), path)
    assert main(['curvature', path, '--epsilon', '0.5', '--delta', '0.5']) == 0
    rows = [line for line in capsys.readouterr().out.splitlines() if not line.startswith('#')]
    assert len(rows) == 1 + 6


@pytest.mark.parametrize('flags', [['--epsilon', '0.5'],
                                   ['--delta', '0.5'],
                                   ['--epsilon', '0.5', '--delta', '0.5', '--dims', '2'],
                                   ['--epsilon', '1.5', '--delta', '0.5'],
                                   ['--alpha', '2'],
                                   ['--bins', '0']])
def test_usage_errors(triangle_file, flags):
    assert main(['curvature', triangle_file] + flags) == 1


def test_data_errors(tmp_path):
    bad = str(tmp_path / 'bad.txt')
    with open(bad, 'w') as stream:
        stream.write('0 1\n1 1\n')
    assert main(['curvature', bad]) == 2
    assert main(['curvature', str(tmp_path / 'missing.txt')]) == 2


def test_hist(triangle_file, tmp_path, capsys):
    assert main(['hist', triangle_file, '--dims', '1', '--bins', '4']) == 0
    assert json.loads(capsys.readouterr().out)['weights'] == [0, 0, 0, 1]
    dump = str(tmp_path / 'matrix.txt')
    assert main(['hist', triangle_file, '--bins', '4', '--plot-matrix', dump]) == 0
    weights = json.loads(capsys.readouterr().out)['weights']
    assert np.count_nonzero(weights) == 1 and weights[15] == 1
    assert read(dump).splitlines()[3] == '0 0 0 1'


def test_hist_from_curvature_csv(tmp_path, capsys):
    g = generate_ba(200, 3, seed=0)
    graph = str(tmp_path / 'ba.txt')
    write_edge_list(g, graph)
    kappa = str(tmp_path / 'ba.csv')
    assert main(['curvature', graph, '--out', kappa]) == 0
    assert main(['hist', graph, '--bins', '10']) == 0
    fused = capsys.readouterr().out
    assert main(['hist', kappa, '--bins', '10']) == 0
    assert capsys.readouterr().out == fused

    sampled = str(tmp_path / 'sampled.csv')
    assert main(['curvature', graph, '--epsilon', '0.5', '--delta', '0.5', '--out', sampled]) == 0
    assert main(['hist', sampled, '--dims', '2']) == 2
    assert main(['hist', sampled, '--dims', '1']) == 0


def make_collection(tmp_path, graphs, labels):
    rows = []
    for i, (g, label) in enumerate(zip(graphs, labels)):
        write_edge_list(g, str(tmp_path / 'g{}.txt'.format(i)))
        rows.append(('g{}.txt'.format(i), label, 'g{}'.format(i)))
    manifest = str(tmp_path / 'labels.csv')
    write_manifest_rows(rows, manifest)
    return manifest


def test_kernel(tmp_path, capsys):
    same = make_collection(tmp_path, [generate_er(30, 0.2, seed=1)] * 4, [0, 0, 1, 1])
    assert main(['kernel', same, '--bins', '5']) == 0
    names, K = gram_values(capsys.readouterr().out)
    assert names == ['g0', 'g1', 'g2', 'g3'] and np.array_equal(K, np.ones((4, 4)))

    single = tmp_path / 'single'
    single.mkdir()
    manifest = make_collection(single, [generate_er(30, 0.2, seed=1)], [0])
    assert main(['kernel', manifest]) == 0
    assert gram_values(capsys.readouterr().out)[1].tolist() == [[1.]]


def test_file_pipeline_matches_fused_pipeline(tmp_path, capsys):
    graphs = [generate_er(40, 0.15, seed=i) for i in range(3)] + [generate_ba(40, 2, seed=i) for i in range(3)]
    manifest = make_collection(tmp_path, graphs, [0, 0, 0, 1, 1, 1])
    assert main(['kernel', manifest, '--bins', '8']) == 0
    fused = gram_values(capsys.readouterr().out)[1]

    histograms = []
    for i in range(6):
        kappa, hist = str(tmp_path / 'k{}.csv'.format(i)), str(tmp_path / 'h{}.json'.format(i))
        assert main(['curvature', str(tmp_path / 'g{}.txt'.format(i)), '--out', kappa]) == 0
        assert main(['hist', kappa, '--bins', '8', '--out', hist]) == 0
        histograms.append(hist)
    assert main(['kernel', '--histograms'] + histograms) == 0
    names, K = gram_values(capsys.readouterr().out)
    assert names == ['h{}'.format(i) for i in range(6)]
    assert np.array_equal(K, fused)


def test_classify(tmp_path, capsys):
    graphs = [generate_er(40, 0.3, seed=i) for i in range(6)] + [Graph(40, [(i, i + 1) for i in range(39)])] * 6
    manifest = make_collection(tmp_path, graphs, [0] * 6 + [1] * 6)
    assert main(['classify', manifest, '--folds', '3', '--bins', '10']) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['folds'] == 3 and report['mean_accuracy'] == 1.
    assert main(['classify', manifest, '--folds', '3', '--bins', '10', '--permute-labels']) == 0
    assert main(['classify', manifest, '--folds', '3', '--bins', '10']) == 0
    assert json.loads(capsys.readouterr().out.splitlines()[-1]) == report

    one_class = tmp_path / 'one'
    one_class.mkdir()
    assert main(['classify', make_collection(one_class, graphs[:4], [0] * 4)]) == 2


def test_commands_are_deterministic(tmp_path):
    graphs = [generate_er(30, 0.2, seed=i) for i in range(4)] + [generate_ba(30, 2, seed=i) for i in range(4)]
    manifest = make_collection(tmp_path, graphs, [0] * 4 + [1] * 4)
    graph = str(tmp_path / 'g0.txt')
    runs = [['curvature', graph],
            ['curvature', graph, '--epsilon', '0.5', '--delta', '0.5', '--seed', '3'],
            ['hist', graph, '--bins', '6'],
            ['hist', graph, '--dims', '1', '--epsilon', '0.5', '--delta', '0.5', '--seed', '3'],
            ['kernel', manifest, '--bins', '6'],
            ['classify', manifest, '--bins', '6', '--folds', '4', '--seed', '5'],
            ['classify', manifest, '--bins', '6', '--folds', '4', '--seed', '5', '--permute-labels']]
    for i, argv in enumerate(runs):
        outputs = []
        for attempt in range(2):
            out = str(tmp_path / 'out_{}_{}'.format(i, attempt))
            assert main(argv + ['--out', out, '--workers', str(attempt + 1)]) == 0
            outputs.append(read(out))
        assert outputs[0] == outputs[1]


def test_sample_size(capsys):
    assert main(['sample-size', '--epsilon', '0.1', '--delta', '0.1']) == 0
    assert capsys.readouterr().out == '461\n'
    assert main(['sample-size']) == 2


def test_config_dump_and_version(capsys):
    assert main(['--config-dump']) == 0
    assert json.loads(capsys.readouterr().out) == json.loads(RunConfig().to_json())
    assert main(['classify', 'x', '--bins', '7', '--epsilon', '0.2', '--delta', '0.1', '--config-dump']) == 0
    config = json.loads(capsys.readouterr().out)
    assert config['bins'] == 7 and config['feature_dims'] == 1
    assert main(['--version']) == 0
    assert main([]) == 1


if __name__ == "__main__":
    pytest.main()
