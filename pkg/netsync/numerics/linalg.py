"""Dense linear algebra on small complex matrices."""
import warnings

import numpy as np
import scipy.linalg as la

from netsync.config import NUMERIC_TOL, STRUCTURAL_TOL
from netsync.errors import NotSymmetric, SingularMatrix


def as_square(a, name='matrix'):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f'{name} must be square, got shape {a.shape}')
    return a


def is_symmetric(a, tol=STRUCTURAL_TOL):
    """Checks max|a_nm - a_mn| <= tol * max|a| (plain transpose, not Hermitian)."""
    a = as_square(a)
    if a.size == 0:
        return True
    return np.max(np.abs(a - a.T)) <= tol * np.max(np.abs(a))


def is_normal(a, tol=STRUCTURAL_TOL):
    a = as_square(a)
    ah = a.conj().T
    scale = np.linalg.norm(a, 2) ** 2 if a.size else 0.
    return np.linalg.norm(a @ ah - ah @ a, 2) <= tol * max(scale, np.finfo(float).tiny)


def mat_solve(a, b, tol=NUMERIC_TOL):
    """Solves a @ x = b with a partial-pivoted LU factorization.

    Args:
        a (np.ndarray): square coefficient matrix
        b (np.ndarray): right-hand side, vector or matrix
        tol (float): pivots below `tol * max|a|` count as singular

    Returns:
        np.ndarray: solution x
    """
    a = as_square(a, 'coefficient matrix')
    b = np.asarray(b)
    if a.shape[0] == 0:
        return np.zeros(b.shape, dtype=np.result_type(a, b, float))

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', la.LinAlgWarning)
        lu, piv = la.lu_factor(a)

    pivots = np.abs(np.diag(lu))
    if not pivots.min() > tol * np.max(np.abs(a)):
        raise SingularMatrix(f'pivot {pivots.min():.3e} collapsed below {tol:.1e} relative')

    return la.lu_solve((lu, piv), b)


def sym_eig(m, tol=STRUCTURAL_TOL):
    """Eigen-decomposition of a real symmetric matrix.

    Args:
        m (np.ndarray): real symmetric matrix
        tol (float): symmetry tolerance

    Returns:
        tuple: (ascending eigenvalues, orthonormal eigenvectors as columns)
    """
    m = as_square(m)
    scale = np.max(np.abs(m)) if m.size else 0.
    if np.iscomplexobj(m):
        if np.max(np.abs(m.imag), initial=0.) > tol * scale:
            raise NotSymmetric('matrix has a non-negligible imaginary part')
        m = m.real
    if not is_symmetric(m, tol):
        raise NotSymmetric(f'max asymmetry {np.max(np.abs(m - m.T)):.3e} exceeds tolerance')

    return la.eigh((m + m.T) / 2)


def svd_max(m):
    m = np.atleast_2d(np.asarray(m))
    if m.size == 0:
        return 0.
    return float(la.svdvals(m)[0])


def projector(n):
    """Projector I - 11^T/n onto signal differences."""
    return np.eye(n) - np.ones((n, n)) / n


def complete_laplacian(n):
    """Laplacian n*I - 11^T of the unit-weight complete graph."""
    return n * np.eye(n) - np.ones((n, n))


def differential_basis(n):
    """Orthonormal basis of the subspace orthogonal to the all-ones vector."""
    return la.null_space(np.ones((1, n)))
