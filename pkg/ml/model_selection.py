import json
import logging
from dataclasses import dataclass, field, asdict

import numpy as np
from joblib import Parallel, delayed
from sklearn.model_selection import StratifiedKFold, LeaveOneOut

from ml.learning import knn_predict
from ml.metrics import accuracy_score

logger = logging.getLogger(__name__)


@dataclass
class CvReport:
    folds: int
    k: int
    seed: int
    per_fold_accuracy: list = field(default_factory=list)
    mean_accuracy: float = field(init=False)

    def __post_init__(self):
        if len(self.per_fold_accuracy) != self.folds:
            raise ValueError('one accuracy per fold is needed')
        self.per_fold_accuracy = [float(a) for a in self.per_fold_accuracy]
        self.mean_accuracy = float(np.mean(self.per_fold_accuracy))

    def to_json(self):
        return json.dumps(asdict(self))


def stratified_folds(labels, folds=10, seed=0):
    """
    Test index sets of a stratified fold assignment on a seeded shuffle; with as
    many folds as samples, the leave-one-out split.
    """
    labels = np.asarray(labels)
    n = labels.size
    if not isinstance(folds, (int, np.integer)) or isinstance(folds, bool):
        raise ValueError('folds is not an integer scalar')
    if not folds >= 2:
        raise ValueError('folds must be >= 2')
    if folds > n:
        raise ValueError('folds must be <= the number of samples ({})'.format(n))
    if folds == n:
        return [test for _, test in LeaveOneOut().split(labels)]
    classes, counts = np.unique(labels, return_counts=True)
    if counts.min() < folds:
        raise ValueError('class {} has {} members, too few for {} stratified folds'.format(
            classes[counts.argmin()], counts.min(), folds))
    cv = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    return [test for _, test in cv.split(np.zeros(n), labels)]


def _fold_accuracy(gm, labels, test, k):
    train = np.setdiff1d(np.arange(labels.size), test)
    return accuracy_score(knn_predict(gm, labels, train, test, k), labels[test])


def cross_validate(gm, labels, folds=10, k=1, seed=0, n_jobs=1):
    """
    Stratified cross-validation of the k-nearest-neighbours classifier induced
    by the Gram matrix; each fold is the test set once.
    :param gm:     the GramMatrix of the collection.
    :param labels: array of size [n_samples] holding the class labels.
    :param folds:  (integer scalar, optional, default value 10): number of folds, >= 2.
    :param k:      (integer scalar, optional, default value 1): number of neighbours.
    :param seed:   (integer scalar, optional, default value 0): seed of the fold shuffle.
    :param n_jobs: (integer scalar, optional, default value 1): joblib workers over the folds.
    :return:       a CvReport.
    """
    labels = np.asarray(labels)
    if labels.size != gm.size:
        raise ValueError('one label per graph is needed')
    if np.unique(labels).size < 2:
        raise ValueError('classification needs at least 2 distinct labels')
    tests = stratified_folds(labels, folds, seed)
    accuracies = Parallel(n_jobs=n_jobs)(delayed(_fold_accuracy)(gm, labels, test, k) for test in tests)
    for i, accuracy in enumerate(accuracies):
        logger.debug('fold %d: accuracy %.4f', i + 1, accuracy)
    report = CvReport(folds, k, seed, accuracies)
    logger.info('%d-fold cross-validation, %d-NN: mean accuracy %.4f', folds, k, report.mean_accuracy)
    return report
