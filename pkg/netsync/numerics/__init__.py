from .linalg import *
from .polynomials import Polynomial, poly_arith, poly_roots
from .rational import RationalFunction, common_factor, rf_arith, rf_eval

__all__ = [
    'Polynomial', 'poly_arith', 'poly_roots',
    'RationalFunction', 'rf_arith', 'rf_eval', 'common_factor',
    'as_square', 'is_symmetric', 'is_normal', 'mat_solve', 'sym_eig', 'svd_max',
    'projector', 'complete_laplacian', 'differential_basis'
]
