from .certify import *
from .gains import *
from .surface import log_grid, star_mode_transfer, xi_frequency_response, xi_surface

__all__ = [
    'PeakResult', 'lft_scalar', 'z_eq', 'hinf_scalar', 'high_frequency_limit', 'pole_stability',
    'STABLE', 'MARGINAL', 'UNSTABLE',
    'ModeGain', 'GainReport', 'certify', 'loop_impedance', 'mode_transfer',
    'mode_gain_profile', 'matrix_gain_profile', 'matrix_gain_oracle',
    'CONDITIONAL', 'INCONCLUSIVE_BOUNDARY',
    'xi_surface', 'xi_frequency_response', 'star_mode_transfer', 'log_grid'
]
