import numpy as np
from scipy.optimize import linprog

from optimization.optimization_function import TransportationProblem


def scipy_solve_lp(f, verbose=False):
    """
    Solve the transportation problem f as a generic linear program with the
    HiGHS solvers behind scipy.optimize.linprog.
    :return: the flow, its cost, the status and the dual potentials u, v.
    """
    if not isinstance(f, TransportationProblem):
        raise TypeError('f is not a transportation problem')
    m, n = f.shape
    A_eq = np.vstack((np.kron(np.eye(m), np.ones((1, n))),  # row sums
                      np.kron(np.ones((1, m)), np.eye(n))))  # column sums
    # rescale the demand so that the equality system is exactly consistent
    b_eq = np.hstack((f.supply, f.demand * f.supply.sum() / f.demand.sum()))
    res = linprog(f.C.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method='highs',
                  options={'disp': verbose})
    if res.status != 0:
        return None, np.inf, 'error', None, None
    x = res.x.reshape(m, n)
    duals = res.eqlin.marginals
    return x, f.function(x), 'optimal', duals[:m], duals[m:]


def pot_solve_emd(f, max_iter=100000, verbose=False):
    """
    Solve the transportation problem f with the network simplex of the Python
    Optimal Transport library (ot.emd).
    :return: the flow, its cost, the status and the dual potentials u, v.
    """
    import ot

    if not isinstance(f, TransportationProblem):
        raise TypeError('f is not a transportation problem')
    b = f.demand * f.supply.sum() / f.demand.sum()
    x, log = ot.emd(f.supply, b, f.C, numItermax=max_iter, log=True)
    if verbose:
        print(log['warning'] or 'optimal')
    status = 'optimal' if log['result_code'] == 1 else 'stopped'
    return x, f.function(x), status, log['u'], log['v']
