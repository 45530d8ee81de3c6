import json

import numpy as np
import pytest

from graphs.generators import generate_ba, generate_er
from ml.kernels import gram_matrix
from ml.metrics import majority_baseline
from ml.model_selection import CvReport, stratified_folds, cross_validate
from ricci.histograms import Histogram, curvature_histograms
from utils import has_tu_dataset, tu_prefix, load_tu


def collection(rng, per_class=20, bins=10, spread=0.01):
    hs, labels = [], []
    for label, center in enumerate(np.eye(bins)[[0, bins - 1]]):
        for _ in range(per_class):
            w = center + spread * rng.random(bins)
            hs.append(Histogram(1, bins, w / w.sum(), 1))
            labels.append(label)
    return gram_matrix(hs), np.array(labels)


def test_stratified_folds():
    labels = np.repeat([0, 1], 10)
    folds = stratified_folds(labels, 5, seed=0)
    assert len(folds) == 5
    assert np.array_equal(np.sort(np.concatenate(folds)), np.arange(20))
    assert all(np.bincount(labels[test]).tolist() == [2, 2] for test in folds)
    assert [len(test) for test in stratified_folds(np.array([0, 0, 0, 1, 1, 1]), 6)] == [1] * 6
    with pytest.raises(ValueError):
        stratified_folds(labels, 11)
    with pytest.raises(ValueError):
        stratified_folds(labels, 1)
    with pytest.raises(ValueError):
        stratified_folds(np.array([0, 0, 0, 0, 1]), 2)


def test_separable_collection():
    gm, labels = collection(np.random.default_rng(0))
    report = cross_validate(gm, labels, folds=10)
    assert report.mean_accuracy == 1.
    assert len(report.per_fold_accuracy) == report.folds == 10


def test_leave_one_out():
    gm, labels = collection(np.random.default_rng(1), per_class=3)
    report = cross_validate(gm, labels, folds=6)
    assert report.folds == 6 and report.mean_accuracy == 1.


def test_shuffled_labels_are_chance():
    rng = np.random.default_rng(2)
    W = rng.random((40, 10))
    gm = gram_matrix([Histogram(1, 10, w / w.sum(), 1) for w in W])
    labels = np.repeat([0, 1], 20)
    accuracies = [cross_validate(gm, rng.permutation(labels), seed=seed).mean_accuracy for seed in range(10)]
    assert abs(np.mean(accuracies) - 0.5) <= 0.15


def test_determinism_and_report():
    gm, labels = collection(np.random.default_rng(3), spread=2.)
    report = cross_validate(gm, labels, folds=4, k=3, seed=7, n_jobs=2)
    assert report == cross_validate(gm, labels, folds=4, k=3, seed=7)
    assert np.isclose(report.mean_accuracy, np.mean(report.per_fold_accuracy), rtol=0., atol=1e-12)
    d = json.loads(report.to_json())
    assert list(d) == ['folds', 'k', 'seed', 'per_fold_accuracy', 'mean_accuracy']
    assert d['k'] == 3 and d['seed'] == 7
    with pytest.raises(ValueError):
        CvReport(2, 1, 0, [1.])


def test_errors():
    gm, labels = collection(np.random.default_rng(4), per_class=5)
    with pytest.raises(ValueError):
        cross_validate(gm, np.zeros(10, dtype=int))
    with pytest.raises(ValueError):
        cross_validate(gm, labels, folds=6)
    # as many folds as samples is leave-one-out, whatever the class sizes
    assert cross_validate(gm, labels, folds=10).folds == 10
    with pytest.raises(ValueError):
        cross_validate(gm, labels[:5])


@pytest.mark.slow
def test_generative_models_are_told_apart():
    graphs = [generate_er(200, 0.05, seed=i) for i in range(20)] + [generate_ba(200, 5, seed=i) for i in range(20)]
    labels = np.repeat([0, 1], 20)
    gm = gram_matrix(curvature_histograms(graphs, bins=20, dims=2, n_jobs=-1))
    gm.check(psd=True)
    assert cross_validate(gm, labels, folds=10).mean_accuracy >= 0.9
    rng = np.random.default_rng(0)
    control = [cross_validate(gm, rng.permutation(labels), folds=10, seed=seed).mean_accuracy for seed in range(10)]
    assert abs(np.mean(control) - 0.5) <= 0.15


@pytest.mark.slow
def test_mutag_beats_the_majority_baseline():
    if not has_tu_dataset(tu_prefix('MUTAG')):
        pytest.skip('MUTAG dataset not available')
    mutag = load_tu('MUTAG')
    gm = gram_matrix(curvature_histograms(mutag.graphs, bins=20, dims=2, n_jobs=-1), names=mutag.names)
    gm.check(psd=True)
    assert cross_validate(gm, mutag.labels, folds=10).mean_accuracy > majority_baseline(mutag.labels)


if __name__ == "__main__":
    pytest.main()
