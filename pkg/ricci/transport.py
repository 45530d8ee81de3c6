import numpy as np

from graphs.shortest_paths import DistanceTable
from optimization.constrained.greedy_enumeration import GreedyEnumeration
from optimization.constrained.interfaces import scipy_solve_lp, pot_solve_emd
from optimization.constrained.transportation_simplex import TransportationSimplex
from optimization.optimization_function import TransportationProblem

TOL = 1e-9
# library solvers certify to their own (looser) feasibility tolerances
SOLVER_TOL = {'simplex': TOL, 'highs': 1e-7, 'pot': 1e-7}


class TransportError(ArithmeticError):
    """A transport plan failed its optimality certificate."""


class MassDistribution:
    """A probability measure with finite support on graph nodes."""

    def __init__(self, support, mass):
        self.support = tuple(int(x) for x in support)
        self.mass = np.asarray(mass, dtype=float)
        if self.mass.shape != (len(self.support),):
            raise ValueError('support and mass have unequal lengths')
        if not self.support:
            raise ValueError('the support is empty')
        if len(set(self.support)) != len(self.support):
            raise ValueError('support nodes must be distinct')
        if not (self.mass > 0).all():
            raise ValueError('masses must be > 0')
        if abs(self.mass.sum() - 1.) > 1e-12:
            raise ValueError('masses sum to {!r}, not 1'.format(self.mass.sum()))

    def as_dict(self):
        return dict(zip(self.support, self.mass.tolist()))

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        return 'MassDistribution({})'.format(self.as_dict())


class TransportPlan:
    """Optimal flow between two measures, with the dual potentials certifying it."""

    def __init__(self, flow, cost, u=None, v=None, gap=0.):
        self.flow = [(int(i), int(j), float(q)) for i, j, q in flow]
        self.cost = float(cost)
        self.u = u
        self.v = v
        self.gap = gap

    @classmethod
    def from_matrix(cls, x, cost, u=None, v=None, gap=0.):
        return cls([(i, j, x[i, j]) for i, j in zip(*np.nonzero(x))], cost, u, v, gap)

    def matrix(self, shape):
        x = np.zeros(shape)
        for i, j, q in self.flow:
            x[i, j] = q
        return x


def neighborhood_measure(g, x, alpha=0.5):
    """
    The lazy measure of node x: mass alpha stays at x and the rest is split
    uniformly among its neighbours.
    :param g:     the graph.
    :param x:     the node.
    :param alpha: (real scalar, optional, default value 0.5): the idleness, in [0, 1].
    """
    if not np.isscalar(alpha) or not np.isreal(alpha):
        raise ValueError('alpha is not a real scalar')
    if not 0 <= alpha <= 1:
        raise ValueError('alpha must be in [0, 1]')
    deg = g.degree(x)
    if deg == 0:
        raise ValueError('node {} is isolated'.format(x))
    support, mass = [], []
    if alpha > 0:
        support.append(x)
        mass.append(alpha)
    if alpha < 1:
        support += g.neighbors(x)
        mass += [(1. - alpha) / deg] * deg
    return MassDistribution(support, mass)


def _ground_cost(mu, mv, cost):
    if isinstance(cost, DistanceTable):
        return cost.submatrix(mu.support, mv.support)
    cost = np.asarray(cost, dtype=float)
    if cost.shape != (len(mu), len(mv)):
        raise ValueError('cost must be a {} x {} matrix'.format(len(mu), len(mv)))
    return cost


def emd(mu, mv, cost, solver='simplex', verbose=False):
    """
    Earth mover distance between two measures: an exact optimal solution of the
    transportation problem between them, certified against its dual potentials.
    :param mu:      the source MassDistribution.
    :param mv:      the target MassDistribution.
    :param cost:    a DistanceTable covering mu.support x mv.support, or the
                    |mu| x |mv| ground cost matrix.
    :param solver:  (string, optional, default value 'simplex'): 'simplex' for the
                    transportation simplex, 'highs' for scipy's linprog, 'pot' for
                    the network simplex of the Python Optimal Transport library.
    :return:        a TransportPlan.
    """
    C = _ground_cost(mu, mv, cost)
    if abs(mu.mass.sum() - mv.mass.sum()) > TOL:
        raise ValueError('mass sums differ by more than {:.0e}'.format(TOL))

    if len(mu) == len(mv) == 1:
        return TransportPlan([(0, 0, 1.)], C[0, 0], C[0], np.zeros(1))

    f = TransportationProblem(mu.mass, mv.mass, C, tol=TOL)
    if solver == 'simplex':
        optimizer = TransportationSimplex(f, eps=TOL, max_iter=max(1000, 10 * C.size), verbose=verbose)
        x, cost, status = optimizer.minimize()
        u, v = optimizer.u, optimizer.v
    elif solver == 'highs':
        x, cost, status, u, v = scipy_solve_lp(f, verbose=verbose)
    elif solver == 'pot':
        x, cost, status, u, v = pot_solve_emd(f, verbose=verbose)
    else:
        raise ValueError('unknown solver {}'.format(solver))
    if status != 'optimal':
        raise TransportError('{} solver stopped with status {}'.format(solver, status))

    primal, dual, slackness, gap = f.certificate(x, u, v)
    if max(primal, dual, slackness, gap) > SOLVER_TOL[solver]:
        raise TransportError('optimality certificate failed: primal {:.2e}, dual {:.2e}, '
                             'slackness {:.2e}, gap {:.2e}'.format(primal, dual, slackness, gap))
    return TransportPlan.from_matrix(x, cost, u, v, gap)


def emd_bruteforce(mu, mv, cost, max_support=6):
    """Optimal transport cost by exhaustive enumeration of the basic feasible
    solutions; an oracle independent of the simplex, for supports <= max_support."""
    C = _ground_cost(mu, mv, cost)
    if abs(mu.mass.sum() - mv.mass.sum()) > TOL:
        raise ValueError('mass sums differ by more than {:.0e}'.format(TOL))
    f = TransportationProblem(mu.mass, mv.mass, C, tol=TOL)
    return GreedyEnumeration(f, max_support=max_support).minimize()[1]
