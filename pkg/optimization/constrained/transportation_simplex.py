from collections import deque

import numpy as np

from optimization.optimizer import TransportationOptimizer


class TransportationSimplex(TransportationOptimizer):
    # Apply the primal Transportation Simplex Method (the MODI, or u-v, method)
    # to the balanced transportation linear program:
    #
    #  (P) min { sum_ij C_ij x_ij : sum_j x_ij = a_i, sum_i x_ij = b_j, x >= 0 }
    #
    # A basis of (P) is a set of m + n - 1 cells forming a spanning tree of
    # the complete bipartite graph between sources and targets; the starting
    # one comes from the north-west corner rule. At every iteration the dual
    # potentials u, v with u_i + v_j = C_ij on the basic cells are computed
    # along the tree, and a cell with negative reduced cost
    # C_ij - u_i - v_j enters the basis, pushing as much flow as possible
    # around the unique cycle it closes in the tree.
    #
    # - eps (real scalar, optional, default value 1e-9): the accuracy in the
    #   stopping criterion: the algorithm is stopped when every reduced cost
    #   is >= -eps, i.e., (u, v) is (approximately) dual feasible, which
    #   together with complementary slackness on the basic cells certifies x
    #
    # - max_iter (integer scalar, optional, default value 1000): the maximum
    #   number of iterations
    #
    # - rule (string, optional, default value 'dantzig'): the pricing rule.
    #   'dantzig' enters the most negative reduced cost and falls back to
    #   Bland's rule after m + n degenerate pivots in a row; 'bland' always
    #   enters the first negative reduced cost in row-major order
    #
    # Output:
    #
    # - x ([m x n] real matrix): the best flow found so far (possibly the
    #   optimal one)
    #
    # - v (real scalar): the cost of x
    #
    # - status (string): a string describing the status of the algorithm at
    #   termination, with the following possible values:
    #
    #   = 'optimal': the algorithm terminated having proven that x is an
    #     (approximately) optimal solution, i.e., the potentials u, v (left
    #     in self.u and self.v) are dual feasible
    #
    #   = 'stopped': the algorithm terminated having exhausted the maximum
    #     number of iterations: x is the best solution found so far, but not
    #     necessarily the optimal one

    def __init__(self, f, eps=1e-9, max_iter=1000, rule='dantzig', verbose=False):
        super().__init__(f, eps=eps, max_iter=max_iter, verbose=verbose)
        if rule not in ('dantzig', 'bland'):
            raise ValueError('unknown pricing rule {}'.format(rule))
        self.rule = rule
        self.basis = []

    def north_west_corner(self):
        """Initial basic feasible solution: fill the cells along the staircase
        from (0, 0) to (m - 1, n - 1), moving down when the current row is
        exhausted and right otherwise; ties move down, so that a zero flow
        basic cell keeps the staircase a spanning tree."""
        m, n = self.f.shape
        r, c = self.f.supply.copy(), self.f.demand.copy()
        x = np.zeros((m, n))
        basis = []
        i = j = 0
        while True:
            q = min(r[i], c[j])
            x[i, j] = q
            basis.append((i, j))
            r[i] -= q
            c[j] -= q
            if i == m - 1 and j == n - 1:
                break
            if j == n - 1 or (i < m - 1 and r[i] <= c[j]):
                i += 1
            else:
                j += 1
        return x, basis

    def potentials(self, basis):
        """Solve u_i + v_j = C_ij over the basic cells, with u_0 = 0."""
        m, n = self.f.shape
        rows = [[] for _ in range(m)]
        cols = [[] for _ in range(n)]
        for i, j in basis:
            rows[i].append(j)
            cols[j].append(i)
        u, v = np.full(m, np.nan), np.full(n, np.nan)
        u[0] = 0.
        queue = deque([(0, True)])  # (index, is a row)
        while queue:
            k, is_row = queue.popleft()
            if is_row:
                for j in rows[k]:
                    if np.isnan(v[j]):
                        v[j] = self.f.C[k, j] - u[k]
                        queue.append((j, False))
            else:
                for i in cols[k]:
                    if np.isnan(u[i]):
                        u[i] = self.f.C[i, k] - v[k]
                        queue.append((i, True))
        assert not (np.isnan(u).any() or np.isnan(v).any()), 'the basis is not a spanning tree'
        return u, v

    def cycle(self, basis, i, j):
        """
        The cycle closed by the entering cell (i, j) in the basis tree.
        :return: the list of cells of the cycle starting with (i, j), so that
                 the flow increases on the even positions and decreases on the odd ones.
        """
        m, n = self.f.shape
        rows = [[] for _ in range(m)]
        cols = [[] for _ in range(n)]
        for r, c in basis:
            rows[r].append(c)
            cols[c].append(r)

        # breadth first search from row i to column j; nodes are encoded as
        # ('r', index) and ('c', index)
        parent = {('r', i): None}
        queue = deque([('r', i)])
        while ('c', j) not in parent:
            kind, k = queue.popleft()
            for nxt in ([('c', c) for c in rows[k]] if kind == 'r' else [('r', r) for r in cols[k]]):
                if nxt not in parent:
                    parent[nxt] = (kind, k)
                    queue.append(nxt)

        path = []
        node = ('c', j)
        while parent[node] is not None:
            prev = parent[node]
            path.append((node[1], prev[1]) if node[0] == 'r' else (prev[1], node[1]))
            node = prev
        # path runs from column j back to row i and has an odd number of cells
        return [(i, j)] + path

    def minimize(self):
        m, n = self.f.shape
        x, basis = self.north_west_corner()
        in_basis = np.zeros((m, n), dtype=bool)
        for cell in basis:
            in_basis[cell] = True

        degenerate = 0  # consecutive degenerate pivots

        if self.verbose:
            print('iter\tcost\t\tmin d\t\tin\tout')

        while True:
            u, v = self.potentials(basis)
            d = self.f.reduced_costs(u, v)
            d[in_basis] = 0.
            d_min = d.min()

            if self.verbose:
                print('{:4d}\t{:1.4e}\t{:1.4e}\t'.format(self.iter, self.f.function(x), d_min), end='')

            if d_min >= -self.eps:
                status = 'optimal'
                break

            if self.iter >= self.max_iter:
                status = 'stopped'
                break

            if self.rule == 'bland' or degenerate > m + n:
                # that's Bland's anti-cycle rule
                enter = tuple(np.argwhere(d < -self.eps)[0])
            else:
                enter = np.unravel_index(np.argmin(d), d.shape)
            enter = (int(enter[0]), int(enter[1]))

            cycle = self.cycle(basis, *enter)
            decreasing = cycle[1::2]
            theta = min(x[cell] for cell in decreasing)
            # among the blocking cells the smallest one (row-major) leaves
            leave = min(cell for cell in decreasing if x[cell] == theta)

            for k, cell in enumerate(cycle):
                x[cell] += theta if k % 2 == 0 else -theta
            x[leave] = 0.

            basis.remove(leave)
            basis.append(enter)
            in_basis[leave] = False
            in_basis[enter] = True

            degenerate = degenerate + 1 if theta <= self.eps else 0

            if self.verbose:
                print('{}\t{}'.format(enter, leave))

            self.iter += 1

        if self.verbose:
            print()

        x = np.maximum(x, 0.)  # round-off along the cycles
        self.u, self.v, self.basis = u, v, basis
        return x, self.f.function(x), status
