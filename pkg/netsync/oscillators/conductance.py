"""Odd piecewise-linear voltage-controlled conductance g(v)."""
from dataclasses import dataclass

import numpy as np

from netsync.errors import InvalidParams


@dataclass(frozen=True)
class PiecewiseLinearConductance:
    """Continuous odd characteristic with three slopes.

    Slope `slopes[0]` holds for |v| <= phi_0, `slopes[1]` for
    phi_0 < |v| <= phi_1 and `slopes[2]` beyond phi_1.

    Args:
        breakpoints (tuple): (phi_0, phi_1), volts, 0 < phi_0 < phi_1
        slopes (tuple): (sigma_0, sigma_1, sigma_2), siemens
    """
    breakpoints: tuple
    slopes: tuple

    def __post_init__(self):
        if len(self.breakpoints) != 2 or len(self.slopes) != 3:
            raise InvalidParams('expected two breakpoints and three slopes')
        phi0, phi1 = self.breakpoints
        if not 0 < phi0 < phi1:
            raise InvalidParams(f'breakpoints must satisfy 0 < phi_0 < phi_1, got {self.breakpoints}')
        if not np.all(np.isfinite(self.slopes)):
            raise InvalidParams('slopes must be finite')
        object.__setattr__(self, 'breakpoints', tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, 'slopes', tuple(float(s) for s in self.slopes))

    @property
    def slope_bound(self):
        return max(abs(s) for s in self.slopes)

    def __call__(self, v):
        return g_eval(self, v)

    def derivative(self, v):
        a = np.abs(np.asarray(v, dtype=float))
        phi0, phi1 = self.breakpoints
        s0, s1, s2 = self.slopes
        return np.where(a <= phi0, s0, np.where(a <= phi1, s1, s2))


def g_eval(g, v):
    """Current of the conductance at voltage v (scalar or array)."""
    v = np.asarray(v, dtype=float)
    a = np.abs(v)
    phi0, phi1 = g.breakpoints
    s0, s1, s2 = g.slopes

    # accumulate segment by segment, continuity holds by construction
    magnitude = (s0 * np.minimum(a, phi0)
                 + s1 * np.clip(a - phi0, 0., phi1 - phi0)
                 + s2 * np.maximum(a - phi1, 0.))
    out = np.sign(v) * magnitude
    return out[()] if out.ndim == 0 else out


def slope_bound(g):
    return g.slope_bound
