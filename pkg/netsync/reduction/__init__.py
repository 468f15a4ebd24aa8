from .classify import *
from .homogeneous import homogeneous_forward, homogeneous_params
from .impedance import *
from .kron import *

__all__ = [
    'KronResult', 'kron_reduce', 'kron_reduce_grounded', 'kron_reduce_symbolic',
    'kron_reduce_uniform', 'uniform_line_factor', 'augment', 'GROUND',
    'pseudo_inverse_zero_sum', 'generalized_inverse', 'has_zero_row_sums',
    'effective_impedance', 'effective_impedance_matrix', 'grounded_inverse_entry', 'ydagger_from_Z',
    'homogeneous_params', 'homogeneous_forward',
    'NetworkClass', 'classify', 'NETWORK_KINDS', 'HOMOGENEOUS_KINDS', 'SHUNT_KINDS',
    'NO_SHUNT_UNIFORM', 'NO_SHUNT_HOMOGENEOUS', 'SHUNT_UNIFORM', 'SHUNT_HOMOGENEOUS', 'UNCLASSIFIED',
    'DEFAULT_PROBES', 'DEFAULT_PROBE_OMEGAS'
]
