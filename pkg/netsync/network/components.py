"""Series R-L-C branches, shunt elements and the oscillator reference of a netlist."""
from dataclasses import dataclass, field

from netsync.errors import ValidationError
from netsync.numerics import RationalFunction

OSCILLATOR_PRESETS = ('chua', 'custom')
OSCILLATOR_IMPEDANCES = ('circuit', 'printed')


def _check_elements(r, l, c, where):
    if r < 0 or l < 0:
        raise ValidationError(f'{where}: resistance and inductance must be non-negative')
    if c is not None and not c > 0:
        raise ValidationError(f'{where}: capacitance must be positive when present')
    if r == 0 and l == 0 and c is None:
        raise ValidationError(f'{where}: element is an ideal short (r = l = 0, no capacitor)')


def series_impedance(r, l, c=None):
    """Impedance r + s*l + 1/(s*c) of a series R-L-C element.

    Args:
        r (float): resistance, ohms
        l (float): inductance, henries
        c (float): capacitance, farads, or None when there is no capacitor

    Returns:
        RationalFunction: z(s)
    """
    if c is None:
        return RationalFunction([r, l])
    # (1/c + r*s + l*s^2) / s
    return RationalFunction([1. / c, r, l], [0., 1.])


def element_vector(r, l, c=None):
    """Coefficients of z(s) on the basis (1, s, 1/s)."""
    return (float(r), float(l), 0. if c is None else 1. / c)


@dataclass(frozen=True)
class BranchSpec:
    """Series R-L-C branch between two nodes."""
    from_node: str
    to_node: str
    r: float = 0.
    l: float = 0.
    c: float = None

    def __post_init__(self):
        if self.from_node == self.to_node:
            raise ValidationError(f'branch {self.from_node}-{self.to_node} is a self loop')
        _check_elements(self.r, self.l, self.c, f'branch {self.from_node}-{self.to_node}')

    @property
    def pair(self):
        return frozenset((self.from_node, self.to_node))

    def elements(self):
        return element_vector(self.r, self.l, self.c)

    def impedance(self):
        return series_impedance(self.r, self.l, self.c)

    def admittance(self):
        return self.impedance().reciprocal()

    def to_dict(self):
        data = {'from': self.from_node, 'to': self.to_node, 'r': self.r, 'l': self.l}
        if self.c is not None:
            data['c'] = self.c
        return data


@dataclass(frozen=True)
class ShuntSpec:
    """Series R-L-C element between a node and ground."""
    node: str
    r: float = 0.
    l: float = 0.
    c: float = None

    def __post_init__(self):
        _check_elements(self.r, self.l, self.c, f'shunt at {self.node}')

    def elements(self):
        return element_vector(self.r, self.l, self.c)

    def impedance(self):
        return series_impedance(self.r, self.l, self.c)

    def admittance(self):
        return self.impedance().reciprocal()

    def to_dict(self):
        data = {'node': self.node, 'r': self.r, 'l': self.l}
        if self.c is not None:
            data['c'] = self.c
        return data


@dataclass(frozen=True)
class OscillatorConfig:
    """Oscillator preset name, parameter overrides and impedance form, as read from a netlist."""
    preset: str = 'chua'
    params: dict = field(default_factory=dict)
    impedance: str = 'circuit'

    def __post_init__(self):
        if self.preset not in OSCILLATOR_PRESETS:
            raise ValidationError(f'unknown oscillator preset {self.preset!r}')
        if self.impedance not in OSCILLATOR_IMPEDANCES:
            raise ValidationError(f'unknown impedance form {self.impedance!r}')

    def to_dict(self):
        return {'preset': self.preset, 'params': dict(self.params), 'impedance': self.impedance}
