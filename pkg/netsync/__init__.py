__version__ = '0.1.0'

from .errors import *
from .config import DEFAULT_TOLERANCES, SimulationConfig, SweepConfig, Tolerances
from .network import build_star_netlist, load_netlist, parse_netlist, serialize_netlist
from .reduction import NetworkClass, classify, kron_reduce, kron_reduce_symbolic
from .oscillators import chua_preset, oscillator_from_config
from .certificates import GainReport, certify, hinf_scalar, xi_surface
from .simulation import build_coupled_system, integrate, summarize
