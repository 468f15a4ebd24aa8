"""Kron reduction: elimination of interior nodes by Schur complement."""
import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np

from netsync.config import DEFAULT_TOLERANCES
from netsync.errors import NotSymmetric, NotUniform, SingularInterior, SingularMatrix
from netsync.network import SymbolicAdmittance, series_impedance
from netsync.numerics import as_square, is_symmetric, mat_solve

logger = logging.getLogger(__name__)

GROUND = 'ground'


@dataclass(frozen=True)
class KronResult:
    """Reduced admittance over the boundary nodes.

    Args:
        Y (np.ndarray or SymbolicAdmittance): reduced admittance
        boundary (tuple): ids of the kept nodes, in matrix order
        eliminated (tuple): ids of the eliminated interior nodes
    """
    Y: object
    boundary: tuple
    eliminated: tuple


def _schur_complement(y, keep, eliminate, numeric_tol):
    keep = np.asarray(keep, dtype=int)
    eliminate = np.asarray(eliminate, dtype=int)

    y_kk = y[np.ix_(keep, keep)]
    if eliminate.size == 0:
        return y_kk.copy()

    y_ke = y[np.ix_(keep, eliminate)]
    y_ek = y[np.ix_(eliminate, keep)]
    y_ee = y[np.ix_(eliminate, eliminate)]

    try:
        x = mat_solve(y_ee, y_ek, numeric_tol)
    except SingularMatrix as e:
        raise SingularInterior(f'interior block is singular: {e}') from e

    return y_kk - y_ke @ x


def kron_reduce(y_a, n_boundary, nodes=None, tol=DEFAULT_TOLERANCES):
    """Reduces Y_A to Y = Y_NN - Y_NI Y_II^-1 Y_IN.

    Args:
        y_a (np.ndarray): symmetric admittance, boundary nodes first
        n_boundary (int): number of leading boundary indices
        nodes (sequence): node ids of `y_a` rows, dense indices when omitted
        tol (Tolerances): tolerances

    Returns:
        KronResult: reduced matrix and elimination record
    """
    y_a = as_square(y_a, 'admittance matrix')
    dim = y_a.shape[0]
    assert 0 < n_boundary <= dim, 'n_boundary must be within the matrix dimension'
    if not is_symmetric(y_a, tol.structural_tol):
        raise NotSymmetric('admittance matrix is not symmetric')

    nodes = tuple(range(dim)) if nodes is None else tuple(nodes)
    y = _schur_complement(y_a, range(n_boundary), range(n_boundary, dim), tol.numeric_tol)

    if not is_symmetric(y, tol.structural_tol):
        logger.warning('reduced admittance lost symmetry beyond tolerance (ill-conditioned interior)')

    return KronResult(Y=y, boundary=nodes[:n_boundary], eliminated=nodes[n_boundary:])


def augment(y_a):
    """Adjoins ground as a last node, restoring zero row and column sums.

    Args:
        y_a (np.ndarray): symmetric admittance

    Returns:
        np.ndarray: (dim + 1)-square augmented admittance
    """
    y_a = as_square(y_a, 'admittance matrix')
    dim = y_a.shape[0]
    shunt = y_a.sum(axis=1)

    out = np.zeros((dim + 1, dim + 1), dtype=np.result_type(y_a, float))
    out[:dim, :dim] = y_a
    out[:dim, dim] = -shunt
    out[dim, :dim] = -shunt
    out[dim, dim] = shunt.sum()
    return out


def kron_reduce_grounded(y_a, n_boundary, nodes=None, tol=DEFAULT_TOLERANCES):
    """Reduces the augmented matrix, keeping the boundary nodes and ground (last)."""
    y_hat = augment(y_a)
    dim = y_hat.shape[0] - 1
    nodes = tuple(range(dim)) if nodes is None else tuple(nodes)

    keep = list(range(n_boundary)) + [dim]
    y = _schur_complement(y_hat, keep, range(n_boundary, dim), tol.numeric_tol)
    return KronResult(Y=y, boundary=nodes[:n_boundary] + (GROUND,), eliminated=nodes[n_boundary:])


def kron_reduce_symbolic(y_sym, n_boundary):
    """Eliminates interior nodes of a symbolic admittance with rational arithmetic.

    Interior nodes are removed one at a time; every updated entry has its
    common pole-zero pairs cancelled so degrees stay at their minimal size.

    Args:
        y_sym (SymbolicAdmittance): admittance functions, boundary first
        n_boundary (int): number of boundary nodes

    Returns:
        KronResult: with `Y` a SymbolicAdmittance over the boundary nodes
    """
    grid = [list(row) for row in y_sym.entries]
    active = list(range(y_sym.dim))

    for k in reversed(range(n_boundary, y_sym.dim)):
        pivot = grid[k][k]
        if pivot.is_zero:
            raise SingularInterior(f'interior node {y_sym.nodes[k]!r} has no admittance to eliminate')
        active.remove(k)

        coupled = [i for i in active if not grid[i][k].is_zero]
        for a, i in enumerate(coupled):
            factor = (grid[i][k] / pivot).cancel()
            for j in coupled[a:]:
                entry = (grid[i][j] - factor * grid[k][j]).cancel()
                grid[i][j] = grid[j][i] = entry

    nodes = tuple(y_sym.nodes)
    reduced = SymbolicAdmittance(
        [row[:n_boundary] for row in grid[:n_boundary]], nodes=nodes[:n_boundary]
    )
    return KronResult(Y=reduced, boundary=nodes[:n_boundary], eliminated=nodes[n_boundary:])


def uniform_line_factor(branches, tol=DEFAULT_TOLERANCES):
    """Finds the common per-unit impedance of uniform branches.

    Every branch impedance must equal a_k * z_unit(s) with real a_k > 0.
    The reference z_unit is the first branch scaled so that its largest
    element coefficient is one.

    Args:
        branches (sequence): BranchSpec objects
        tol (Tolerances): tolerances

    Returns:
        tuple: (z_unit RationalFunction, np.ndarray of scales a_k)
    """
    vectors = np.array([br.elements() for br in branches], dtype=float)
    ref = vectors[0]
    k = int(np.argmax(np.abs(ref)))
    unit = ref / ref[k]

    scales = vectors[:, k]
    residual = np.abs(vectors - scales[:, None] * unit[None, :]).max(axis=1)
    bad = np.flatnonzero((residual > tol.structural_tol * np.abs(vectors).max(axis=1)) | (scales <= 0))
    if bad.size:
        br = branches[bad[0]]
        raise NotUniform(f'branch {br.from_node}-{br.to_node} is not proportional to '
                         f'branch {branches[0].from_node}-{branches[0].to_node}')

    r_u, l_u, d_u = unit
    z_unit = series_impedance(r_u, l_u, 1. / d_u if d_u > 0 else None)
    return z_unit, scales


def kron_reduce_uniform(net, tol=DEFAULT_TOLERANCES):
    """Reduces a network with uniform line characteristics.

    Y_A(s) = y_series(s) * L_A with a real weighted Laplacian L_A, so the
    reduction acts on L_A alone.

    Args:
        net (Netlist): netlist without shunts
        tol (Tolerances): tolerances

    Returns:
        tuple: (y_series RationalFunction, reduced real Laplacian)
    """
    if net.has_shunts:
        raise NotUniform('shunt elements present')

    z_unit, scales = uniform_line_factor(net.branches, tol)

    g = nx.Graph()
    g.add_nodes_from(net.nodes)
    for br, a in zip(net.branches, scales):
        g.add_edge(br.from_node, br.to_node, weight=1. / a)
    lap_a = nx.laplacian_matrix(g, nodelist=list(net.nodes), weight='weight').toarray().astype(float)

    nb = net.n_boundary
    lap = _schur_complement(lap_a, range(nb), range(nb, net.dim), tol.numeric_tol)
    lap = (lap + lap.T) / 2

    logger.debug('uniform reduction: z_unit=%r, %d branches', z_unit, len(scales))
    return z_unit.reciprocal(), lap
