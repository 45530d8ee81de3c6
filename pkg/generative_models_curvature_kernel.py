import numpy as np

from graphs.generators import generate_er, generate_ba, generate_ws
from graphs.graph import GraphCollection
from ml.kernels import gram_matrix
from ml.metrics import majority_baseline
from ml.model_selection import cross_validate
from ricci.curvature import all_curvatures
from ricci.histograms import curvature_histograms, histogram_1d
from ricci.sampling import SamplingPlan, cdf_deviation
from utils import stream_seed, resolve_workers, has_tu_dataset, tu_prefix, load_tu

generators = {'er': lambda seed: generate_er(200, 0.05, seed=seed),
              'ba': lambda seed: generate_ba(200, 5, seed=seed),
              'ws': lambda seed: generate_ws(200, 10, 0.1, seed=seed)}


def generative_models_collection(models=('er', 'ba'), count=20, seed=0):
    graphs, labels, names = [], [], []
    for label, model in enumerate(models):
        for i in range(count):
            graphs.append(generators[model](stream_seed(seed, 'generation', label, i)))
            labels.append(label)
            names.append('{}:{}'.format(model, i))
    return GraphCollection(graphs, labels, names)


def classification_accuracy(collection, dims=2, bins=20, plan=None, seed=0, permute=False, n_jobs=1):
    labels = collection.labels
    if permute:
        labels = np.random.default_rng(stream_seed(seed, 'permutation')).permutation(labels)
    seeds = [stream_seed(seed, 'sampling', i) for i in range(len(collection))]
    hs = curvature_histograms(collection.graphs, bins=bins, dims=dims, plan=plan, seeds=seeds, n_jobs=n_jobs)
    gm = gram_matrix(hs, names=collection.names)
    return cross_validate(gm, labels, folds=10, seed=stream_seed(seed, 'cv')), gm


if __name__ == '__main__':
    n_jobs = resolve_workers()

    for models in (('er', 'ba'), ('er', 'ba', 'ws')):
        collection = generative_models_collection(models)
        for dims in (1, 2):
            report, gm = classification_accuracy(collection, dims=dims, n_jobs=n_jobs)
            print(' vs '.join(models) + " " + str(dims) + "D accuracy: " + str(report.mean_accuracy) +
                  " (sigma " + str(gm.sigma) + ", psd " + str(gm.is_psd()) + ")")
        report, _ = classification_accuracy(collection, permute=True, n_jobs=n_jobs)
        print(' vs '.join(models) + " permuted labels accuracy: " + str(report.mean_accuracy))
        print()

    # sampled 1D features: the cost of each graph no longer depends on its size
    collection = generative_models_collection(('er', 'ba'))
    plan = SamplingPlan(0.1, 0.1)
    report, _ = classification_accuracy(collection, dims=1, plan=plan, n_jobs=n_jobs)
    print("sampled (" + str(plan.sample_count) + " edges) 1D accuracy: " + str(report.mean_accuracy))

    g = generate_ba(5000, 5, seed=stream_seed(0, 'generation', 1, 0))
    full = all_curvatures(g, n_jobs=n_jobs)
    for eps in (0.2, 0.1, 0.05):
        plan = SamplingPlan(eps, 0.1)
        sample = np.random.default_rng(0).choice(full.kappa, size=min(plan.sample_count, g.edge_count),
                                                 replace=False)
        print("eps " + str(eps) + ": " + str(plan.sample_count) + " edges, CDF deviation " +
              str(cdf_deviation(sample, full.kappa)))
    print("full 1D histogram of a BA graph: " + str(histogram_1d(full, 10).weights))
    print()

    if has_tu_dataset(tu_prefix('MUTAG')):
        mutag = load_tu('MUTAG')
        for dims in (1, 2):
            report, _ = classification_accuracy(mutag, dims=dims, n_jobs=n_jobs)
            print("MUTAG " + str(dims) + "D accuracy: " + str(report.mean_accuracy) +
                  " (majority baseline " + str(majority_baseline(mutag.labels)) + ")")
