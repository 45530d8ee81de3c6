import logging

import numpy as np
from scipy.linalg import eigvalsh
from scipy.sparse.linalg import eigsh, ArpackNoConvergence
from scipy.spatial.distance import pdist, squareform

logger = logging.getLogger(__name__)


def _features(hs):
    hs = list(hs)
    if not hs:
        raise ValueError('no histograms given')
    shape = hs[0].shape
    for h in hs[1:]:
        if h.shape != shape:
            raise ValueError('histogram shapes differ: {} vs {}'.format(shape, h.shape))
    return np.vstack([h.weights for h in hs])


def _check_sigma(sigma):
    if not np.isscalar(sigma) or not np.isreal(sigma):
        raise ValueError('sigma is not a real scalar')
    if not sigma > 0:
        raise ValueError('sigma must be > 0')


def rbf_kernel(h1, h2, sigma=1.):
    """Gaussian radial-basis function kernel exp(-||w1 - w2||^2 / (2 sigma^2))
    between two histograms of the same shape."""
    _check_sigma(sigma)
    X = _features((h1, h2))
    return float(np.exp(-np.sum((X[0] - X[1]) ** 2) / (2. * sigma ** 2)))


def median_sigma(hs):
    """Median of the pairwise l2 distances between the histograms (mean of
    the middle two for an even count), or 1 when the median is 0."""
    X = _features(hs)
    if len(X) < 2:
        raise ValueError('the median heuristic needs at least 2 histograms')
    sigma = float(np.median(pdist(X, 'euclidean')))
    return sigma if sigma > 0 else 1.


class GramMatrix:
    """Kernel values of a collection of graphs, with the bandwidth and the
    feature provenance (dims, bins, alpha) they were computed with."""

    def __init__(self, values, sigma, names=None, descriptor=None):
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError('values must be a square matrix')
        _check_sigma(sigma)
        self.sigma = float(sigma)
        if names is None:
            names = ['G:{}'.format(i + 1) for i in range(self.size)]
        self.names = [str(name) for name in names]
        if len(self.names) != self.size:
            raise ValueError('one name per row is needed')
        self.descriptor = descriptor or {}
        self.clamped = 0

    @property
    def size(self):
        return self.values.shape[0]

    def __getitem__(self, index):
        return self.values[index]

    def min_eigenvalue(self):
        """Smallest eigenvalue: dense for small matrices, Lanczos otherwise."""
        if self.size > 500:
            try:
                return float(eigsh(self.values, k=1, which='SA', return_eigenvectors=False)[0])
            except ArpackNoConvergence:
                logger.debug('Lanczos did not converge, falling back to a dense solver')
        return float(eigvalsh(self.values, subset_by_index=[0, 0])[0])

    def is_psd(self, tol=1e-8):
        return self.min_eigenvalue() >= -tol

    def check(self, psd=False):
        """Raise AssertionError if the matrix is not a valid Gaussian Gram matrix."""
        assert np.allclose(self.values, self.values.T, rtol=0., atol=1e-12), 'not symmetric'
        assert (np.diag(self.values) == 1.).all(), 'diagonal is not 1'
        assert ((self.values > 0) & (self.values <= 1)).all(), 'entries outside (0, 1]'
        if psd:
            lam = self.min_eigenvalue()
            assert lam >= -1e-8, 'not positive semidefinite: min eigenvalue {:.3e}'.format(lam)

    def to_csv(self):
        """First row: the graph names (after an empty corner cell); then one row
        per graph, its name followed by its kernel values with 12 significant digits."""
        lines = [','.join([''] + self.names)]
        lines += [','.join([name] + ['{:.12g}'.format(k) for k in row])
                  for name, row in zip(self.names, self.values)]
        return '\n'.join(lines) + '\n'

    def write_csv(self, path):
        with open(path, 'w', newline='\n') as stream:
            stream.write(self.to_csv())

    def __repr__(self):
        return 'GramMatrix(size={}, sigma={:.6g})'.format(self.size, self.sigma)


def gram_matrix(hs, sigma='auto', names=None, descriptor=None):
    """
    Gaussian RBF Gram matrix of a collection of histograms.
    :param hs:    list of histograms of the same shape.
    :param sigma: (positive real or 'auto', optional, default value 'auto'): the
                  bandwidth; 'auto' uses the median heuristic (1 for a single graph).
    """
    X = _features(hs)
    if isinstance(sigma, str) and sigma == 'auto':
        sigma = median_sigma(hs) if len(X) > 1 else 1.
    _check_sigma(sigma)
    # condensed upper triangle, mirrored by squareform (unit diagonal)
    k = np.exp(-pdist(X, 'sqeuclidean') / (2. * sigma ** 2))
    tiny = np.finfo(float).tiny
    clamped = int(np.count_nonzero(k < tiny))
    if clamped:
        logger.warning('%d kernel values underflowed and were clamped to %g', clamped, tiny)
    K = squareform(np.maximum(k, tiny), checks=False)
    np.fill_diagonal(K, 1.)
    gm = GramMatrix(K, sigma, names, descriptor)
    gm.clamped = clamped
    return gm
