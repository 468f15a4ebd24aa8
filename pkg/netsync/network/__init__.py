from .admittance import SymbolicAdmittance, assemble_admittance, eval_admittance
from .components import BranchSpec, OscillatorConfig, ShuntSpec, series_impedance
from .netlist import *

__all__ = [
    'BranchSpec', 'ShuntSpec', 'OscillatorConfig', 'series_impedance',
    'Netlist', 'validate_netlist', 'parse_netlist', 'load_netlist', 'netlist_from_dict',
    'netlist_to_dict', 'serialize_netlist', 'build_star_netlist', 'STAR_CENTER',
    'SymbolicAdmittance', 'assemble_admittance', 'eval_admittance'
]
