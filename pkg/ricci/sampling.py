import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import ks_2samp


def sample_size(eps, delta, constant_c=1.):
    """
    Number of uniformly sampled edges after which the empirical curvature
    distribution is within eps (sup-norm of the CDFs) of the true one with
    probability at least 1 - delta:

        ceil(c * (1/eps^2 log(1/eps) + 1/eps^2 log(1/delta)))

    :param eps:        (real scalar): the error bound, in (0, 1).
    :param delta:      (real scalar): the failure probability, in (0, 1).
    :param constant_c: (real scalar, optional, default value 1): the constant hidden in the bound, > 0.
    """
    for name, value in (('eps', eps), ('delta', delta)):
        if not np.isscalar(value) or not np.isreal(value):
            raise ValueError('{} is not a real scalar'.format(name))
        if not 0 < value < 1:
            raise ValueError('{} must be in (0, 1)'.format(name))
    if not np.isscalar(constant_c) or not constant_c > 0:
        raise ValueError('constant_c must be > 0')
    return math.ceil(constant_c * (math.log(1. / eps) + math.log(1. / delta)) / eps ** 2)


@dataclass(frozen=True)
class SamplingPlan:
    epsilon: float
    delta: float
    constant_c: float = 1.
    sample_count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'sample_count', sample_size(self.epsilon, self.delta, self.constant_c))


def sample_edges(edge_count, plan, seed=0):
    """Indices of min(plan.sample_count, edge_count) edges drawn uniformly
    without replacement, in increasing order."""
    if not edge_count > 0:
        raise ValueError('the graph has no edges')
    k = min(plan.sample_count, edge_count)
    return np.sort(np.random.default_rng(seed).choice(edge_count, size=k, replace=False))


def cdf_deviation(sample, reference):
    """Sup-norm distance between the empirical CDFs of two curvature samples."""
    return ks_2samp(np.asarray(sample, dtype=float), np.asarray(reference, dtype=float)).statistic
