from .coupling import *
from .integrate import *

__all__ = [
    'BranchBlock', 'CouplingRealization', 'CoupledSystem', 'realize_admittance', 'realize_coupling',
    'build_coupled_system', 'RESISTIVE', 'SERIES_RL', 'STATE_SPACE',
    'rhs', 'integrate', 'default_initial_state', 'terminal_voltages', 'projected_norm', 'sync_error',
    'Trajectory', 'is_synchronized', 'summarize'
]
