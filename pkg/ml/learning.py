import numpy as np

from ml.kernels import GramMatrix


class Learner:
    def fit(self, X, y):
        raise NotImplementedError

    def predict(self, X):
        raise NotImplementedError


def kernel_distance(gm, i, j):
    """
    Distance induced by the kernel between the i-th and the j-th graph:
    sqrt(k(i, i) + k(j, j) - 2 k(i, j)).
    """
    n = gm.size
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError('index out of range for a Gram matrix of size {}'.format(n))
    K = gm.values
    return float(np.sqrt(max(0., K[i, i] + K[j, j] - 2. * K[i, j])))


def kernel_distances(gm, rows, cols):
    """Kernel-induced distances between the graphs in rows and those in cols."""
    K = gm.values
    rows, cols = np.asarray(rows, dtype=int), np.asarray(cols, dtype=int)
    d2 = K[rows, rows][:, None] + K[cols, cols][None, :] - 2. * K[np.ix_(rows, cols)]
    return np.sqrt(np.maximum(d2, 0.))


class KNearestNeighbors(Learner):
    """
    k-nearest-neighbours classifier on a precomputed Gram matrix: samples are
    the row indices of the matrix, distances those induced by the kernel.
    Neighbours are ranked by (distance, index); a tied vote goes to the label
    with the smaller summed distance, then to the smaller label.
    """

    def __init__(self, gm, k=1):
        if not isinstance(gm, GramMatrix):
            raise TypeError('gm is not a Gram matrix')
        self.gm = gm
        if not isinstance(k, (int, np.integer)):
            raise ValueError('k is not an integer scalar')
        if not k > 0:
            raise ValueError('k must be > 0')
        self.k = k
        self.train_idx, self.train_labels = None, None

    def fit(self, X, y):
        """
        :param X: array of size [n_samples] holding the row indices of the training graphs
        :param y: array of size [n_samples] holding their labels
        """
        X, y = np.asarray(X, dtype=int), np.asarray(y)
        if not X.size:
            raise ValueError('the training set is empty')
        if X.shape != y.shape:
            raise ValueError('X and y have unequal lengths')
        if self.k > X.size:
            raise ValueError('k must be <= the training set size ({})'.format(X.size))
        if ((X < 0) | (X >= self.gm.size)).any():
            raise IndexError('training index out of range')
        self.train_idx, self.train_labels = X, y
        return self

    def _vote(self, distances):
        nearest = np.lexsort((self.train_idx, distances))[:self.k]
        votes = {}
        for i in nearest:
            count, total = votes.get(self.train_labels[i], (0, 0.))
            votes[self.train_labels[i]] = count + 1, total + distances[i]
        return min(votes, key=lambda label: (-votes[label][0], votes[label][1], label))

    def predict(self, X):
        if self.train_idx is None:
            raise ValueError('the classifier is not fitted')
        X = np.asarray(X, dtype=int)
        if ((X < 0) | (X >= self.gm.size)).any():
            raise IndexError('test index out of range')
        if np.intersect1d(X, self.train_idx).size:
            raise ValueError('train and test indices must be disjoint')
        D = kernel_distances(self.gm, X, self.train_idx)
        return np.array([self._vote(d) for d in D], dtype=self.train_labels.dtype)


def knn_predict(gm, labels, train_idx, test_idx, k=1):
    """Labels predicted for test_idx by the k nearest graphs of train_idx."""
    labels = np.asarray(labels)
    train_idx = np.asarray(train_idx, dtype=int)
    return KNearestNeighbors(gm, k).fit(train_idx, labels[train_idx]).predict(test_idx)
