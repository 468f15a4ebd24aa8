"""Chua's circuit: linear subsystem, port impedance and presets."""
from dataclasses import dataclass, field

import numpy as np

from netsync.errors import InvalidParams
from netsync.numerics import RationalFunction
from netsync.oscillators.conductance import PiecewiseLinearConductance

CHUA_DEFAULTS = {
    'r': 10. / 7.,
    'l': 1. / 7.,
    'c_a': 1. / 9.,
    'c_b': 1.,
    'slopes': [-0.8, -0.5, 0.8],
    'breakpoints': [1., 14.],
}

STATE_LABELS = ('v_a', 'v_b', 'i_L')


@dataclass(frozen=True, eq=False)
class LinearSubsystem:
    """State-space model x' = A x + b_g i_g + b_inj i_inj, v = c x.

    Args:
        a (np.ndarray): state matrix
        b_inj (np.ndarray): input column of the current drawn by the network
        b_g (np.ndarray): input column of the source current i_g = -g(v)
        c (np.ndarray): output row selecting the terminal voltage
        labels (tuple): state names
    """
    a: np.ndarray
    b_inj: np.ndarray
    b_g: np.ndarray
    c: np.ndarray
    labels: tuple = STATE_LABELS

    @property
    def n_states(self):
        return self.a.shape[0]

    def port_impedance(self, s):
        """Terminal impedance c (sI - A)^-1 b_g at complex s (scalar or array)."""
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        eye = np.eye(self.n_states)
        out = np.array([self.c @ np.linalg.solve(sk * eye - self.a, self.b_g) for sk in s])
        return out[0] if out.size == 1 else out

    def frequency_response(self, omegas):
        return self.port_impedance(1j * np.asarray(omegas, dtype=float))


@dataclass(frozen=True, eq=False)
class OscillatorModel:
    """Linear subsystem in parallel with the nonlinear source i_g = -g(v).

    Args:
        linear (LinearSubsystem): passive linear part
        g (PiecewiseLinearConductance): nonlinear characteristic
        z_osc (RationalFunction): rational port impedance used by the certificates
        params (dict): component values the model was built from
    """
    linear: LinearSubsystem
    g: PiecewiseLinearConductance
    z_osc: RationalFunction
    params: dict = field(default_factory=dict)

    @property
    def sigma(self):
        return self.g.slope_bound


def chua_impedance(r, l, c_a, c_b):
    """Port impedance of C_a in parallel with R in series with (C_b || L).

    z_osc = (R L C_b s^2 + L s + R) / (R L C_a C_b s^3 + (L C_a + L C_b) s^2 + R C_a s + 1)
    """
    num = [r, l, r * l * c_b]
    den = [1., r * c_a, l * c_a + l * c_b, r * l * c_a * c_b]
    return RationalFunction(num, den)


def chua_impedance_printed(r, l, c_a, c_b):
    """The commonly printed form of the Chua port impedance.

    z_osc = (R L C_a C_b s^3 + L C_a s^2 + R C_a s) / (R L C_a C_b s^3 + (C_a^2 + L C_b + L C_a) s^2 + R C_a s + 1)

    It does not match the port impedance of `chua_linear_subsystem`: its
    numerator carries an extra s C_a and its s^2 denominator term mixes units.
    Certificates for the lossless reference network are stated against it.
    """
    num = [0., r * c_a, l * c_a, r * l * c_a * c_b]
    den = [1., r * c_a, c_a ** 2 + l * c_b + l * c_a, r * l * c_a * c_b]
    return RationalFunction(num, den)


IMPEDANCE_FORMS = {
    'circuit': chua_impedance,
    'printed': chua_impedance_printed,
}


def chua_linear_subsystem(r, l, c_a, c_b):
    """States (v_a, v_b, i_L):

        C_a v_a' = (v_b - v_a)/R + i_g - i_inj
        C_b v_b' = (v_a - v_b)/R - i_L
        L i_L'   = v_b
    """
    a = np.array([
        [-1. / (r * c_a), 1. / (r * c_a), 0.],
        [1. / (r * c_b), -1. / (r * c_b), -1. / c_b],
        [0., 1. / l, 0.],
    ])
    b_g = np.array([1. / c_a, 0., 0.])
    return LinearSubsystem(a=a, b_inj=-b_g, b_g=b_g, c=np.array([1., 0., 0.]))


def chua_preset(r=CHUA_DEFAULTS['r'], l=CHUA_DEFAULTS['l'], c_a=CHUA_DEFAULTS['c_a'],
                c_b=CHUA_DEFAULTS['c_b'], slopes=CHUA_DEFAULTS['slopes'],
                breakpoints=CHUA_DEFAULTS['breakpoints'], impedance='circuit'):
    """Builds a Chua oscillator model.

    The simulated dynamics always follow the circuit; `impedance` only picks
    the rational z_osc used by the certificates.

    Args:
        r (float): coupling resistor between the capacitors, ohms
        l (float): inductance, henries
        c_a (float): terminal capacitance, farads
        c_b (float): second capacitance, farads
        slopes (sequence): (sigma_0, sigma_1, sigma_2) of the nonlinear conductance, siemens
        breakpoints (sequence): (phi_0, phi_1), volts
        impedance (str): 'circuit' (derived from the components) or 'printed'

    Returns:
        OscillatorModel: model with sigma = max |slope|
    """
    values = {'r': r, 'l': l, 'c_a': c_a, 'c_b': c_b}
    for name, value in values.items():
        if not (np.isfinite(value) and value > 0):
            raise InvalidParams(f'{name} must be positive, got {value!r}')

    if impedance not in IMPEDANCE_FORMS:
        raise InvalidParams(f'unknown impedance form {impedance!r}, expected one of {sorted(IMPEDANCE_FORMS)}')

    g = PiecewiseLinearConductance(breakpoints=tuple(breakpoints), slopes=tuple(slopes))

    params = dict(values, slopes=list(g.slopes), breakpoints=list(g.breakpoints), impedance=impedance)

    return OscillatorModel(
        linear=chua_linear_subsystem(r, l, c_a, c_b),
        g=g,
        z_osc=IMPEDANCE_FORMS[impedance](r, l, c_a, c_b),
        params=params
    )


def oscillator_from_config(config):
    """Builds the oscillator named by a netlist's oscillator section.

    The 'chua' preset starts from CHUA_DEFAULTS and applies overrides; the
    'custom' preset takes every component from the params.

    Args:
        config (OscillatorConfig): preset name and params

    Returns:
        OscillatorModel: oscillator model
    """
    if config.preset == 'custom':
        missing = set(CHUA_DEFAULTS) - set(config.params)
        if missing:
            raise InvalidParams(f'custom oscillator is missing {sorted(missing)}')
        params = dict(config.params)
    else:
        params = dict(CHUA_DEFAULTS, **config.params)
    return chua_preset(impedance=config.impedance, **params)
