"""Effective impedances and pseudo-inverses of zero-sum admittance matrices."""
import numpy as np

from netsync.config import DEFAULT_TOLERANCES
from netsync.errors import DegenerateInput, NotSymmetric, RankDeficient, SingularMatrix
from netsync.numerics import as_square, is_symmetric, mat_solve, projector
from netsync.reduction.kron import augment

# Y Y^+ must reproduce the projector at least this well
PENROSE_CHECK_TOL = 1e-6


def has_zero_row_sums(y, tol=DEFAULT_TOLERANCES):
    y = as_square(y)
    if y.size == 0:
        return True
    return np.max(np.abs(y.sum(axis=1))) <= tol.structural_tol * np.max(np.abs(y))


def pseudo_inverse_zero_sum(y, tol=DEFAULT_TOLERANCES):
    """Pseudo-inverse of a connected zero-sum admittance by a rank-one shift.

    Y^+ = (Y + 11^T/N)^-1 - 11^T/N.

    Args:
        y (np.ndarray): symmetric matrix with zero row and column sums
        tol (Tolerances): tolerances

    Returns:
        np.ndarray: Y^+ with Y Y^+ = Y^+ Y = I - 11^T/N
    """
    y = as_square(y, 'admittance matrix')
    n = y.shape[0]
    if not is_symmetric(y, tol.structural_tol):
        raise NotSymmetric('pseudo-inverse needs a symmetric matrix')
    if not has_zero_row_sums(y, tol):
        raise DegenerateInput('pseudo-inverse by rank-one shift needs zero row sums')

    shift = np.ones((n, n)) / n
    try:
        inv = mat_solve(y + shift, np.eye(n), tol.numeric_tol)
    except SingularMatrix as e:
        raise RankDeficient('more than one zero eigenvalue, the network is disconnected') from e

    y_dag = inv - shift
    if np.max(np.abs(y @ y_dag - projector(n))) > PENROSE_CHECK_TOL:
        raise RankDeficient('more than one zero eigenvalue, the network is disconnected')
    return y_dag


def generalized_inverse(y, tol=DEFAULT_TOLERANCES):
    """Pseudo-inverse for zero-sum matrices, plain inverse otherwise."""
    y = as_square(y, 'admittance matrix')
    if has_zero_row_sums(y, tol):
        return pseudo_inverse_zero_sum(y, tol)
    return mat_solve(y, np.eye(y.shape[0]), tol.numeric_tol)


def effective_impedance(y, n, m, tol=DEFAULT_TOLERANCES):
    """Voltage between nodes n and m per unit current injected at n and drawn at m.

    Args:
        y (np.ndarray): admittance matrix (zero-sum or regular)
        n (int): first node index
        m (int): second node index
        tol (Tolerances): tolerances

    Returns:
        complex: z_nm = (e_n - e_m)^T Y^+ (e_n - e_m)
    """
    if n == m:
        return 0j
    y_dag = generalized_inverse(y, tol)
    return complex(y_dag[n, n] + y_dag[m, m] - y_dag[n, m] - y_dag[m, n])


def effective_impedance_matrix(y, grounded=False, tol=DEFAULT_TOLERANCES):
    """All pairwise effective impedances.

    Args:
        y (np.ndarray): admittance matrix
        grounded (bool): compute on the augmented matrix, ground as the last node
        tol (Tolerances): tolerances

    Returns:
        np.ndarray: symmetric matrix with zero diagonal
    """
    if grounded:
        y = augment(y)
    y_dag = generalized_inverse(y, tol)

    d = np.diag(y_dag)
    z = d[:, None] + d[None, :] - y_dag - y_dag.T
    np.fill_diagonal(z, 0.)
    return z


def grounded_inverse_entry(y_dag, n, m, ref):
    """Entry (n, m) of the inverse of Y with node `ref` grounded."""
    return y_dag[n, m] - y_dag[n, ref] - y_dag[m, ref] + y_dag[ref, ref]


def ydagger_from_Z(z):
    """Recovers Y^+ from the effective-impedance matrix.

    Args:
        z (np.ndarray): symmetric effective impedances, zero diagonal

    Returns:
        np.ndarray: pseudo-inverse Y^+
    """
    z = as_square(z, 'effective impedance matrix')
    n = z.shape[0]
    rows = z.sum(axis=1)
    return -0.5 * (z - (rows[:, None] + rows[None, :]) / n + rows.sum() / n ** 2)
