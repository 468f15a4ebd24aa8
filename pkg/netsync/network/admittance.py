"""Frequency-parameterized nodal admittance matrix of a netlist."""
import numpy as np

from netsync.config import NUMERIC_TOL
from netsync.numerics import RationalFunction, rf_eval

ZERO = RationalFunction.constant(0.)


class SymbolicAdmittance:
    """Square grid of rational functions Y_A(s).

    Entries are shared between (m, n) and (n, m), so symmetry is structural.
    """

    def __init__(self, entries, nodes=None):
        grid = tuple(tuple(row) for row in entries)
        assert all(len(row) == len(grid) for row in grid), 'SymbolicAdmittance must be square'
        self._grid = grid
        self.nodes = tuple(nodes) if nodes is not None else tuple(range(len(grid)))

    @property
    def dim(self):
        return len(self._grid)

    @property
    def entries(self):
        return self._grid

    def __getitem__(self, index):
        m, n = index
        return self._grid[m][n]

    def row_sum(self, m):
        """Row sum function, i.e. the shunt admittance seen at node m."""
        total = ZERO
        for entry in self._grid[m]:
            if not entry.is_zero:
                total = (total + entry).cancel()
        return total

    def submatrix(self, indices):
        indices = list(indices)
        return SymbolicAdmittance(
            [[self._grid[i][j] for j in indices] for i in indices],
            nodes=[self.nodes[i] for i in indices]
        )

    def evaluate(self, s, tol=NUMERIC_TOL):
        return eval_admittance(self, s, tol)

    def __repr__(self):
        return f'SymbolicAdmittance(dim={self.dim}, nodes={list(self.nodes)})'


def assemble_admittance(net):
    """Builds Y_A(s): off-diagonal -y_mn, diagonal shunt plus incident branch admittances.

    Args:
        net (Netlist): validated netlist

    Returns:
        SymbolicAdmittance: admittance over `net.nodes` (boundary first)
    """
    index = net.index
    grid = [[ZERO] * net.dim for _ in range(net.dim)]

    for br in net.branches:
        m, n = index[br.from_node], index[br.to_node]
        y = br.admittance()
        grid[m][n] = grid[n][m] = -y
        grid[m][m] = (grid[m][m] + y).cancel()
        grid[n][n] = (grid[n][n] + y).cancel()

    for sh in net.shunts:
        m = index[sh.node]
        grid[m][m] = (grid[m][m] + sh.admittance()).cancel()

    return SymbolicAdmittance(grid, nodes=net.nodes)


def eval_admittance(y, s, tol=NUMERIC_TOL):
    """Evaluates a symbolic admittance at complex s.

    Args:
        y (SymbolicAdmittance): admittance functions
        s (complex): Laplace variable
        tol (float): pole-proximity tolerance, EvalNearPole is raised below it

    Returns:
        np.ndarray: complex dim x dim matrix
    """
    out = np.zeros((y.dim, y.dim), dtype=complex)
    for m in range(y.dim):
        for n in range(m, y.dim):
            entry = y[m, n]
            if not entry.is_zero:
                out[m, n] = out[n, m] = rf_eval(entry, s, tol)
    return out
