import numpy as np

from optimization.optimizer import TransportationOptimizer


class GreedyEnumeration(TransportationOptimizer):
    # Solve the balanced transportation linear program:
    #
    #  (P) min { sum_ij C_ij x_ij : sum_j x_ij = a_i, sum_i x_ij = b_j, x >= 0 }
    #
    # by exhaustive enumeration of its basic feasible solutions, independently
    # of any pivoting. The support of a vertex of (P) is a forest of the
    # bipartite source/target graph, and a forest always has a leaf: a row
    # (or column) with a single support cell (i, j), whose flow is then the
    # whole residual of that line and can not exceed the residual on the
    # other one, i.e., x_ij = min(r_i, c_j). Removing the exhausted line(s)
    # leaves a vertex of the residual problem, hence every vertex is produced
    # by some sequence of greedy "fill the cell with min(r_i, c_j)" steps, and
    # every such sequence ends in a feasible point. The minimum over all the
    # sequences is therefore the optimal value. Equal residual problems are
    # solved once (memoization), which keeps small instances tractable.
    #
    # - max_support (integer scalar, optional, default value 6): the largest
    #   number of sources or targets accepted, a guard against the
    #   combinatorial blowup of the enumeration
    #
    # Output:
    #
    # - x ([m x n] real matrix): an optimal vertex
    #
    # - v (real scalar): the optimal value
    #
    # - status (string): always 'optimal'

    def __init__(self, f, max_support=6, eps=1e-12, verbose=False):
        super().__init__(f, eps=eps, max_iter=1, verbose=verbose)
        if not max_support >= 1:
            raise ValueError('max_support must be >= 1')
        if max(f.shape) > max_support:
            raise ValueError('support too large for exhaustive enumeration: {} > {}'.format(
                max(f.shape), max_support))
        self.max_support = max_support
        self.states = 0

    def _key(self, rows, cols, r, c):
        return rows, cols, tuple(round(q, 12) for q in r), tuple(round(q, 12) for q in c)

    def _best(self, rows, cols, r, c, memo):
        if not rows or not cols:
            return 0., None
        key = self._key(rows, cols, r, c)
        if key in memo:
            return memo[key]
        best = (np.inf, None)
        for pi, i in enumerate(rows):
            for pj, j in enumerate(cols):
                q = min(r[pi], c[pj])
                nr, nc = r[pi] - q, c[pj] - q
                keep_row, keep_col = nr > self.eps, nc > self.eps
                n_rows = rows if keep_row else rows[:pi] + rows[pi + 1:]
                n_cols = cols if keep_col else cols[:pj] + cols[pj + 1:]
                n_r = (r[:pi] + (nr,) + r[pi + 1:]) if keep_row else r[:pi] + r[pi + 1:]
                n_c = (c[:pj] + (nc,) + c[pj + 1:]) if keep_col else c[:pj] + c[pj + 1:]
                value = q * self.f.C[i, j] + self._best(n_rows, n_cols, n_r, n_c, memo)[0]
                if value < best[0]:
                    best = (value, (i, j, q, (n_rows, n_cols, n_r, n_c)))
        memo[key] = best
        return best

    def minimize(self):
        m, n = self.f.shape
        memo = {}
        state = (tuple(range(m)), tuple(range(n)),
                 tuple(float(q) for q in self.f.supply), tuple(float(q) for q in self.f.demand))
        v, _ = self._best(*state, memo)
        self.states = len(memo)

        # follow the optimal greedy choices to recover the flow
        x = np.zeros((m, n))
        while state[0] and state[1]:
            _, choice = memo[self._key(*state)]
            i, j, q, state = choice
            x[i, j] += q

        if self.verbose:
            print('states\tcost')
            print('{:d}\t{:1.4e}'.format(self.states, v))

        return x, v, 'optimal'
