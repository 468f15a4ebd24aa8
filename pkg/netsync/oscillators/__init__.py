from .chua import *
from .conductance import PiecewiseLinearConductance, g_eval, slope_bound

__all__ = [
    'PiecewiseLinearConductance', 'g_eval', 'slope_bound',
    'LinearSubsystem', 'OscillatorModel', 'CHUA_DEFAULTS',
    'chua_impedance', 'chua_impedance_printed', 'IMPEDANCE_FORMS', 'chua_linear_subsystem',
    'chua_preset', 'oscillator_from_config'
]
