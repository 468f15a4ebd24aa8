"""Command-line front end: netsync <reduce|classify|certify|simulate|surface>."""
import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from netsync.config import INTEGRATION_METHODS, SimulationConfig, SweepConfig, Tolerances
from netsync.errors import ConfigError, NetSyncError, NotUniform
from netsync.network import (
    OscillatorConfig, assemble_admittance, build_star_netlist, eval_admittance, load_netlist
)
from netsync.oscillators import IMPEDANCE_FORMS, oscillator_from_config
from netsync.reduction import classify, kron_reduce, kron_reduce_symbolic, kron_reduce_uniform
from netsync.certificates import certify, log_grid, xi_frequency_response, xi_surface
from netsync.simulation import build_coupled_system, integrate, summarize

logger = logging.getLogger('netsync')

COMMANDS = ('reduce', 'classify', 'certify', 'simulate', 'surface')

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

STAR_DEFAULTS = {'n': 4, 'r_net': 0.1, 'l_net': 0.1, 'r_load': 1.}
SURFACE_DEFAULTS = {'r_min': 1e-3, 'r_max': 10., 'l_min': 1e-3, 'l_max': 10., 'grid': 20}


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs, resolved from the command line and environment."""
    command: str
    input: str = None
    output: str = None
    summary: str = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    omega: float = None
    initial: str = None
    processes: int = None
    n: int = None
    r_net: float = STAR_DEFAULTS['r_net']
    l_net: float = STAR_DEFAULTS['l_net']
    r_load: float = STAR_DEFAULTS['r_load']
    r_range: tuple = (SURFACE_DEFAULTS['r_min'], SURFACE_DEFAULTS['r_max'])
    l_range: tuple = (SURFACE_DEFAULTS['l_min'], SURFACE_DEFAULTS['l_max'])
    grid: int = SURFACE_DEFAULTS['grid']
    bode_r: float = None
    bode_l: float = None
    bode_output: str = None
    impedance: str = None

    @classmethod
    def from_args(cls, args, environ=None):
        """Builds a RunConfig from parsed arguments; invalid values raise ConfigError."""
        sweep = SweepConfig(omega_min=args.omega_min, omega_max=args.omega_max,
                            points=args.points, refine_iters=args.refine_iters)
        simulation = SimulationConfig(t_end=args.t_end, method=args.method, dt=args.dt, rtol=args.rtol,
                                      atol=args.atol, stride=args.stride, threshold=args.threshold)

        if args.n is not None and args.n < 2:
            raise ConfigError(f'--n must be at least 2, got {args.n}')
        if args.grid < 1:
            raise ConfigError(f'--grid must be positive, got {args.grid}')
        if args.omega is not None and not args.omega > 0:
            raise ConfigError(f'--omega must be positive, got {args.omega}')
        for name in ('r_min', 'r_max', 'l_min', 'l_max'):
            if not getattr(args, name) > 0:
                raise ConfigError(f'--{name.replace("_", "-")} must be positive')
        if args.r_min > args.r_max or args.l_min > args.l_max:
            raise ConfigError('surface ranges need min <= max')
        if (args.bode_r is None) != (args.bode_l is None):
            raise ConfigError('--bode-r and --bode-l go together')
        if args.bode_r is not None and args.bode_output is None:
            raise ConfigError('--bode-output is required with --bode-r/--bode-l')

        return cls(
            command=args.command,
            input=args.input,
            output=args.output,
            summary=args.summary,
            tolerances=Tolerances.from_env(environ),
            sweep=sweep,
            simulation=simulation,
            omega=args.omega,
            initial=args.initial,
            processes=args.processes,
            n=args.n,
            r_net=args.r_net,
            l_net=args.l_net,
            r_load=None if args.no_load else args.r_load,
            r_range=(args.r_min, args.r_max),
            l_range=(args.l_min, args.l_max),
            grid=args.grid,
            bode_r=args.bode_r,
            bode_l=args.bode_l,
            bode_output=args.bode_output,
            impedance=args.impedance
        )


def build_parser():
    parser = argparse.ArgumentParser('netsync', description='Synchronization analysis of circuits '
                                                            'coupled through passive networks')
    parser.add_argument('command', choices=COMMANDS, help='subcommand to run')

    parser.add_argument('--input', '-i', type=str, default=None,
                        help='netlist JSON file')
    parser.add_argument('--output', '-o', type=str, default=None,
                        help='output file, stdout when omitted')
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='debug logging')
    parser.add_argument('--quiet', '-q', action='store_true',
                        help='warnings and errors only')

    # frequency sweep
    parser.add_argument('--omega-min', type=float, default=SweepConfig.omega_min,
                        help='lowest swept angular frequency, rad/s')
    parser.add_argument('--omega-max', type=float, default=SweepConfig.omega_max,
                        help='highest swept angular frequency, rad/s')
    parser.add_argument('--points', type=int, default=SweepConfig.points,
                        help='number of log-spaced sweep points')
    parser.add_argument('--refine-iters', type=int, default=SweepConfig.refine_iters,
                        help='maximum golden-section iterations around the grid peak')
    parser.add_argument('--omega', type=float, default=None,
                        help='reduce numerically at s = j*omega instead of symbolically')
    parser.add_argument('--processes', '-p', type=int, default=None,
                        help='size of the multiprocessing Pool for mode and surface sweeps')
    parser.add_argument('--impedance', choices=sorted(IMPEDANCE_FORMS), default=None,
                        help='Chua impedance form used by the certificates, overrides the netlist')

    # simulation
    parser.add_argument('--t-end', type=float, default=SimulationConfig.t_end,
                        help='simulated time, seconds')
    parser.add_argument('--method', choices=INTEGRATION_METHODS, default=SimulationConfig.method,
                        help='integration method')
    parser.add_argument('--dt', type=float, default=SimulationConfig.dt,
                        help='step of the fixed-step method')
    parser.add_argument('--rtol', type=float, default=SimulationConfig.rtol,
                        help='relative tolerance of the adaptive method')
    parser.add_argument('--atol', type=float, default=SimulationConfig.atol,
                        help='absolute tolerance of the adaptive method')
    parser.add_argument('--stride', type=float, default=SimulationConfig.stride,
                        help='spacing of the reported samples, seconds')
    parser.add_argument('--threshold', type=float, default=SimulationConfig.threshold,
                        help='synchronization threshold relative to the initial error')
    parser.add_argument('--initial', type=str, default=None,
                        help='JSON file with the initial state (flat list or one list per circuit)')
    parser.add_argument('--summary', type=str, default=None,
                        help='summary JSON file of a simulation run or surface sweep')

    # star shortcut
    parser.add_argument('--n', type=int, default=None,
                        help='use the loaded star with N boundary nodes instead of --input')
    parser.add_argument('--r-net', type=float, default=STAR_DEFAULTS['r_net'],
                        help='star branch resistance, ohms')
    parser.add_argument('--l-net', type=float, default=STAR_DEFAULTS['l_net'],
                        help='star branch inductance, henries')
    parser.add_argument('--r-load', type=float, default=STAR_DEFAULTS['r_load'],
                        help='load resistance at the star center, ohms')
    parser.add_argument('--no-load', action='store_true',
                        help='star without the center load')

    # surface
    parser.add_argument('--r-min', type=float, default=SURFACE_DEFAULTS['r_min'])
    parser.add_argument('--r-max', type=float, default=SURFACE_DEFAULTS['r_max'])
    parser.add_argument('--l-min', type=float, default=SURFACE_DEFAULTS['l_min'])
    parser.add_argument('--l-max', type=float, default=SURFACE_DEFAULTS['l_max'])
    parser.add_argument('--grid', type=int, default=SURFACE_DEFAULTS['grid'],
                        help='number of log-spaced values per surface axis')
    parser.add_argument('--bode-r', type=float, default=None,
                        help='line resistance of the magnitude-vs-frequency export')
    parser.add_argument('--bode-l', type=float, default=None,
                        help='line inductance of the magnitude-vs-frequency export')
    parser.add_argument('--bode-output', type=str, default=None,
                        help='CSV file of the magnitude-vs-frequency export')
    return parser


def _open_output(path):
    return open(path, 'w', newline='') if path else _Stdout()


class _Stdout:
    """Context manager handing out stdout without closing it."""

    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        return False


def _json_float(x):
    if np.isnan(x):
        return 'NaN'
    if np.isinf(x):
        return 'Infinity' if x > 0 else '-Infinity'
    return format(x, '.17g')


def to_json(value, level=0):
    """JSON text of `value` with every float written to 17 significant digits."""
    pad, inner = '  ' * level, '  ' * (level + 1)
    if isinstance(value, dict):
        if not value:
            return '{}'
        items = [f'{inner}{json.dumps(str(k))}: {to_json(v, level + 1)}' for k, v in value.items()]
        return '{\n' + ',\n'.join(items) + '\n' + pad + '}'
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return '[]'
        items = [inner + to_json(v, level + 1) for v in value]
        return '[\n' + ',\n'.join(items) + '\n' + pad + ']'
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if value is None or isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _json_float(float(value))
    raise TypeError(f'cannot write {type(value).__name__} as JSON')


def write_json(data, path=None):
    with _open_output(path) as f:
        f.write(to_json(data))
        f.write('\n')


def _fmt(x):
    return format(float(x), '.17g')


def _complex_pair(z):
    return [float(z.real), float(z.imag)]


def load_network(cfg):
    """Netlist from --input, or the star shortcut when --n is given."""
    if cfg.input is not None:
        return load_netlist(cfg.input)
    if cfg.n is not None:
        logger.info('using the %d-node star, R=%g, L=%g, load=%s', cfg.n, cfg.r_net, cfg.l_net, cfg.r_load)
        return build_star_netlist(cfg.n, r_net=cfg.r_net, l_net=cfg.l_net, r_load=cfg.r_load)
    raise ConfigError(f'{cfg.command} needs --input FILE or --n N')


def load_oscillator(cfg, net=None):
    """Oscillator of the netlist (Chua defaults without one) with --impedance applied."""
    config = net.oscillator if net is not None else OscillatorConfig()
    if cfg.impedance is not None:
        config = replace(config, impedance=cfg.impedance)
    return oscillator_from_config(config)


def reduced_matrix_to_dict(result, omega):
    y = np.asarray(result.Y)
    return {
        'dim': int(y.shape[0]),
        'nodes': list(result.boundary),
        'omega': omega,
        'entries': [_complex_pair(z) for z in y.ravel()]
    }


def cmd_reduce(cfg):
    net = load_network(cfg)
    nb = net.n_boundary

    if cfg.omega is not None:
        y_a = eval_admittance(assemble_admittance(net), 1j * cfg.omega, cfg.tolerances.numeric_tol)
        result = kron_reduce(y_a, nb, nodes=net.nodes, tol=cfg.tolerances)
        write_json(reduced_matrix_to_dict(result, cfg.omega), cfg.output)
        return EXIT_OK

    data = {'dim': nb, 'nodes': list(net.boundary)}
    try:
        y_series, lap = kron_reduce_uniform(net, cfg.tolerances)
        data.update(form='uniform', y_series=y_series.to_dict(), laplacian=lap.tolist())
    except NotUniform as e:
        logger.info('not uniform (%s), reducing symbolically', e)
        y = kron_reduce_symbolic(assemble_admittance(net), nb).Y
        data.update(form='symbolic', entries=[[y[m, n].to_dict() for n in range(nb)] for m in range(nb)])
    write_json(data, cfg.output)
    return EXIT_OK


def cmd_classify(cfg):
    net = load_network(cfg)
    net_class = classify(net, tol=cfg.tolerances)
    write_json(net_class.to_dict(), cfg.output)
    return EXIT_OK


def cmd_certify(cfg):
    net = load_network(cfg)
    net_class = classify(net, tol=cfg.tolerances)
    osc = load_oscillator(cfg, net)
    report = certify(net_class, osc, cfg.sweep, processes=cfg.processes)
    write_json(report.to_dict(), cfg.output)
    return EXIT_OK if report.certified else EXIT_FAIL


def load_initial_state(path, system):
    """Initial state from JSON: a flat list, or one list of oscillator states per circuit."""
    with open(path, 'r') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f'initial state file {path} is not valid JSON: {e}') from None

    try:
        values = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f'initial state in {path} is not a numeric array') from None

    x0 = np.zeros(system.n_states)
    m = system.n_osc_states
    if values.shape == (system.n_states,):
        return values
    if values.shape == (system.n_circuits, m):
        x0[:system.n_circuits * m] = values.ravel()
        return x0
    raise ConfigError(f'initial state in {path} has shape {values.shape}; expected ({system.n_states},) '
                      f'or ({system.n_circuits}, {m})')


def cmd_simulate(cfg):
    net = load_network(cfg)
    net_class = classify(net, tol=cfg.tolerances)
    osc = load_oscillator(cfg, net)
    system = build_coupled_system(net_class, osc, cfg.tolerances.structural_tol)

    x0 = None if cfg.initial is None else load_initial_state(cfg.initial, system)
    traj = integrate(system, x0, cfg=cfg.simulation)

    with _open_output(cfg.output) as f:
        traj.to_csv(f)

    summary = summarize(traj, cfg.simulation)
    summary['metadata'] = {
        'network': cfg.input if cfg.input is not None else 'star',
        'kind': net_class.kind,
        'initial': cfg.initial if cfg.initial is not None else 'default',
        'z_load': None if cfg.input is not None or cfg.r_load is None else {'r': cfg.r_load, 'l': 0.},
        'coupling_states': system.coupling.n_states
    }
    if cfg.summary is not None or cfg.output is not None:
        write_json(summary, cfg.summary)
    logger.info('synchronized: %s (error %.4g -> %.4g)',
                summary['synchronized'], summary['initial_error'], summary['final_error'])
    return EXIT_OK


def cmd_surface(cfg):
    osc = load_oscillator(cfg, load_netlist(cfg.input) if cfg.input else None)
    n = cfg.n or STAR_DEFAULTS['n']

    r_grid = log_grid(*cfg.r_range, cfg.grid)
    l_grid = log_grid(*cfg.l_range, cfg.grid)
    xi = xi_surface(r_grid, l_grid, osc, n=n, cfg=cfg.sweep, processes=cfg.processes)

    with _open_output(cfg.output) as f:
        writer = csv.writer(f)
        writer.writerow(['r_net', 'l_net', 'xi'])
        for i, r in enumerate(r_grid):
            for j, l in enumerate(l_grid):
                writer.writerow([_fmt(r), _fmt(l), _fmt(xi[i, j])])

    if cfg.bode_r is not None:
        omegas = cfg.sweep.grid()
        mags = xi_frequency_response(cfg.bode_r, cfg.bode_l, osc, omegas)
        with open(cfg.bode_output, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['omega', 'xi'])
            for w, m in zip(omegas, mags):
                writer.writerow([_fmt(w), _fmt(m)])

    if cfg.summary is not None:
        write_json({
            'n': n,
            'impedance': osc.params['impedance'],
            'r_range': list(cfg.r_range),
            'l_range': list(cfg.l_range),
            'grid': cfg.grid,
            'xi_min': float(xi.min()),
            'xi_max': float(xi.max()),
            'certified_cells': int(np.count_nonzero(xi < 1.))
        }, cfg.summary)
    logger.info('xi surface for the %d-node star: %.4g .. %.4g', n, xi.min(), xi.max())
    return EXIT_OK


COMMAND_HANDLERS = {
    'reduce': cmd_reduce,
    'classify': cmd_classify,
    'certify': cmd_certify,
    'simulate': cmd_simulate,
    'surface': cmd_surface,
}


def main(argv=None, environ=None):
    args = build_parser().parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logger.setLevel(level)

    try:
        cfg = RunConfig.from_args(args, environ)
        return COMMAND_HANDLERS[cfg.command](cfg)
    except (NetSyncError, OSError) as e:
        logger.error('%s failed: %s: %s', args.command, type(e).__name__, e)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
