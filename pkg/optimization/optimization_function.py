import numpy as np


class OptimizationFunction:

    def __init__(self, n=2):
        self.n = n

    def function(self, x):
        raise NotImplementedError


class TransportationProblem(OptimizationFunction):

    def __init__(self, supply, demand, C, tol=1e-9):
        """
        Construct the (balanced) transportation linear program:

            min { sum_ij C_ij x_ij : sum_j x_ij = a_i, sum_i x_ij = b_j, x >= 0 }

        and its dual:

            max { a^T u + b^T v : u_i + v_j <= C_ij }

        :param supply: ([m x 1] real column vector): the non-negative masses a to be moved.
        :param demand: ([n x 1] real column vector): the non-negative masses b to be received.
        :param C:      ([m x n] real matrix): the non-negative ground cost of moving
                       a unit of mass from source i to target j.
        :param tol:    (real scalar, optional, default value 1e-9): the largest allowed
                       difference between the total supply and the total demand.
        """
        supply = np.asarray(supply, dtype=float).ravel()
        demand = np.asarray(demand, dtype=float).ravel()
        C = np.asarray(C, dtype=float)

        if not np.isrealobj(C):
            raise ValueError('C not a real matrix')
        if C.ndim != 2:
            raise ValueError('C is not a matrix')
        if C.shape != (supply.size, demand.size):
            raise ValueError('C shape {} does not match with supply and demand sizes'.format(C.shape))
        if not supply.size or not demand.size:
            raise ValueError('supply and demand must be non-empty')
        if (supply < 0).any() or (demand < 0).any():
            raise ValueError('masses must be >= 0')
        if not np.isfinite(C).all() or (C < 0).any():
            raise ValueError('costs must be finite and >= 0')
        if abs(supply.sum() - demand.sum()) > tol:
            raise ValueError('supply and demand masses differ by {:.3e} > {:.0e}'.format(
                abs(supply.sum() - demand.sum()), tol))

        super().__init__(C.size)
        self.supply = supply
        self.demand = demand
        self.C = C

    @property
    def shape(self):
        return self.C.shape

    def function(self, x):
        """
        The transportation cost of the flow x.
        :param x: ([m x n] real matrix): the flow from every source to every target.
        :return:  sum_ij C_ij x_ij.
        """
        return np.sum(self.C * x)

    def dual_function(self, u, v):
        """
        The dual objective, a lower bound on the optimal cost when u, v are dual feasible.
        :param u: ([m x 1] real column vector): the source potentials.
        :param v: ([n x 1] real column vector): the target potentials.
        """
        return self.supply.dot(u) + self.demand.dot(v)

    def reduced_costs(self, u, v):
        return self.C - u[:, None] - v[None, :]

    def marginal_violation(self, x):
        """Largest deviation of the row and column sums of x from supply and demand."""
        return max(np.abs(x.sum(axis=1) - self.supply).max(),
                   np.abs(x.sum(axis=0) - self.demand).max())

    def certificate(self, x, u, v):
        """
        Optimality certificate of the primal-dual pair (x, (u, v)):
        :return: the primal infeasibility (marginals and negative flows), the dual
                 infeasibility (negative reduced costs), the complementary slackness
                 violation and the primal-dual gap, all zero at an exact optimum.
        """
        d = self.reduced_costs(u, v)
        primal = max(self.marginal_violation(x), max(-x.min(), 0.))
        dual = max(-d.min(), 0.)
        slackness = np.max(np.abs(x * d))
        gap = abs(self.function(x) - self.dual_function(u, v))
        return primal, dual, slackness, gap
