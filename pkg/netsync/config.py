"""Tolerances and run settings shared by the analysis and simulation code."""
import os
from dataclasses import dataclass

import numpy as np

from netsync.errors import ConfigError

TOLERANCE_ENV_VAR = 'NETSYNC_TOL'

STRUCTURAL_TOL = 1e-9
NUMERIC_TOL = 1e-10

INTEGRATION_METHODS = ('rk45', 'rk4')


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances.

    Args:
        structural_tol (float): relative slack for symmetry, zero-row-sum and
            classification tests
        numeric_tol (float): tolerance for solves, pole proximity and
            coefficient trimming
    """
    structural_tol: float = STRUCTURAL_TOL
    numeric_tol: float = NUMERIC_TOL

    def __post_init__(self):
        for name in ('structural_tol', 'numeric_tol'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f'{name} must be a positive number, got {value!r}')

    @classmethod
    def from_env(cls, environ=None):
        """Builds tolerances, letting `NETSYNC_TOL` override `structural_tol`."""
        environ = os.environ if environ is None else environ
        raw = environ.get(TOLERANCE_ENV_VAR)
        if raw is None or raw.strip() == '':
            return cls()
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f'{TOLERANCE_ENV_VAR}={raw!r} is not a number') from None
        return cls(structural_tol=value)


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SweepConfig:
    """Frequency sweep used to approximate sup over omega.

    Args:
        omega_min (float): lowest angular frequency, rad/s
        omega_max (float): highest angular frequency, rad/s
        points (int): number of log-spaced grid points
        refine_iters (int): maximum golden-section iterations around the grid peak
        refine_tol (float): relative tolerance of the refinement
    """
    omega_min: float = 1e-3
    omega_max: float = 1e3
    points: int = 4000
    refine_iters: int = 60
    refine_tol: float = 1e-8

    def __post_init__(self):
        if not self.omega_min > 0:
            raise ConfigError(f'omega_min must be positive, got {self.omega_min!r}')
        if not self.omega_max > self.omega_min:
            raise ConfigError('omega_max must exceed omega_min')
        if self.points < 100:
            raise ConfigError(f'points must be at least 100, got {self.points!r}')
        if self.refine_iters < 0 or not self.refine_tol > 0:
            raise ConfigError('refine_iters must be non-negative and refine_tol positive')

    def grid(self):
        return np.logspace(np.log10(self.omega_min), np.log10(self.omega_max), self.points)


@dataclass(frozen=True)
class SimulationConfig:
    """Time-domain integration settings.

    Args:
        t_end (float): final time, seconds
        method (str): 'rk45' (adaptive) or 'rk4' (fixed step)
        dt (float): step of the fixed-step method
        rtol (float): relative tolerance of the adaptive method
        atol (float): absolute tolerance of the adaptive method
        stride (float): spacing of the reported samples
        threshold (float): synchronization threshold relative to the initial error
        divergence_bound (float): largest admissible state magnitude
    """
    t_end: float = 200.
    method: str = 'rk45'
    dt: float = 1e-3
    rtol: float = 1e-6
    atol: float = 1e-9
    stride: float = 0.1
    threshold: float = 1e-2
    divergence_bound: float = 1e6

    def __post_init__(self):
        if self.method not in INTEGRATION_METHODS:
            raise ConfigError(f'unknown integration method {self.method!r}')
        for name in ('t_end', 'dt', 'rtol', 'atol', 'stride', 'threshold', 'divergence_bound'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f'{name} must be a positive number, got {value!r}')
