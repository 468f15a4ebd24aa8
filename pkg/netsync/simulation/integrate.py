"""Integration of coupled oscillator networks and synchronization metrics."""
import csv
import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from netsync.config import SimulationConfig
from netsync.errors import ConfigError, Divergence, StepUnderflow

logger = logging.getLogger(__name__)

# relative slack when checking that the stride is a multiple of dt
GRID_TOL = 1e-9


def rhs(system, t, x):
    """Time derivative of the full coupled state.

    Args:
        system (CoupledSystem): oscillators and coupling
        t (float): time, unused (the system is autonomous)
        x (np.ndarray): state in the layout of `system`

    Returns:
        np.ndarray: dx/dt
    """
    lin = system.osc.linear
    split = system.n_circuits * system.n_osc_states
    xc = x[:split].reshape(system.n_circuits, system.n_osc_states)
    xb = x[split:]

    v = xc @ lin.c
    i_net = system.coupling.currents(xb, v)
    i_g = -system.osc.g(v)

    dxc = xc @ lin.a.T + np.outer(i_g, lin.b_g) + np.outer(i_net, lin.b_inj)
    dxb = system.coupling.state_derivative(xb, v)
    return np.concatenate([dxc.ravel(), dxb])


def default_initial_state(system):
    """Terminal voltages 0.1 + 0.01 (j - 1) for circuit j, every other state at rest."""
    x0 = np.zeros(system.n_states)
    for j in range(system.n_circuits):
        x0[j * system.n_osc_states + system.terminal_index] = 0.1 + 0.01 * j
    return x0


def terminal_voltages(system, states):
    """Terminal voltage of every circuit, shape (T, N) for states of shape (T, n_states)."""
    states = np.atleast_2d(states)
    split = system.n_circuits * system.n_osc_states
    xc = states[:, :split].reshape(len(states), system.n_circuits, system.n_osc_states)
    return xc @ system.osc.linear.c


def projected_norm(v):
    """Norm of v projected onto the complement of the ones vector, along the last axis."""
    v = np.asarray(v, dtype=float)
    return np.linalg.norm(v - v.mean(axis=-1, keepdims=True), axis=-1)


def sync_error(v):
    """Synchronization error sqrt(sum_{n<m} (v_n - v_m)^2 / N) along the last axis.

    Computed as the norm of the deviation from the mean, since
    sum_{n<m} (v_n - v_m)^2 = N sum_n (v_n - mean)^2, which avoids the
    cancellation of the expanded form for nearly equal voltages.
    """
    return projected_norm(v)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of a coupled system.

    Args:
        times (np.ndarray): sample times (T,)
        states (np.ndarray): full states (T, n_states)
        v (np.ndarray): terminal voltages (T, N)
        sync_error (np.ndarray): synchronization error (T,)
    """
    times: np.ndarray
    states: np.ndarray
    v: np.ndarray
    sync_error: np.ndarray

    @property
    def n_circuits(self):
        return self.v.shape[1]

    @property
    def initial_error(self):
        return float(self.sync_error[0])

    @property
    def final_error(self):
        return float(self.sync_error[-1])

    def header(self):
        return ['t'] + [f'v_{j + 1}' for j in range(self.n_circuits)] + ['sync_error']

    def rows(self):
        for t, v, err in zip(self.times, self.v, self.sync_error):
            yield [t, *v, err]

    def to_csv(self, fp):
        """Writes one row per sample to an open text file."""
        writer = csv.writer(fp)
        writer.writerow(self.header())
        for row in self.rows():
            writer.writerow([format(float(x), '.17g') for x in row])


def _make_trajectory(system, times, states):
    v = terminal_voltages(system, states)
    return Trajectory(times=np.asarray(times, dtype=float), states=states, v=v, sync_error=sync_error(v))


def _sample_times(t_end, stride):
    n = int(np.floor(t_end / stride * (1 + GRID_TOL)))
    times = stride * np.arange(n + 1)
    times = times[times <= t_end]
    if t_end - times[-1] > GRID_TOL * t_end:
        times = np.append(times, t_end)
    times[-1] = min(times[-1], t_end)
    return times


def _integrate_rk45(system, x0, cfg):
    bound = cfg.divergence_bound

    def fun(t, x):
        return rhs(system, t, x)

    def guard(t, x):
        return bound - np.max(np.abs(x))
    guard.terminal = True

    sol = solve_ivp(fun, (0., cfg.t_end), x0, method='RK45', t_eval=_sample_times(cfg.t_end, cfg.stride),
                    rtol=cfg.rtol, atol=cfg.atol, events=guard)
    if sol.status == 1:
        t_hit = float(sol.t_events[0][0])
        raise Divergence(t_hit, float(np.max(np.abs(sol.y_events[0][0]))), bound)
    if sol.status == -1:
        raise StepUnderflow(f'integration failed before t_end={cfg.t_end}: {sol.message}')
    return sol.t, sol.y.T


def _rk4_step(f, t, x, dt):
    k1 = f(t, x)
    k2 = f(t + dt / 2, x + dt / 2 * k1)
    k3 = f(t + dt / 2, x + dt / 2 * k2)
    k4 = f(t + dt, x + dt * k3)
    return x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _integrate_rk4(system, x0, cfg):
    every = int(round(cfg.stride / cfg.dt))
    if every < 1 or abs(every * cfg.dt - cfg.stride) > GRID_TOL * cfg.stride:
        raise ConfigError(f'stride {cfg.stride} must be a positive multiple of dt {cfg.dt}')
    n_steps = int(round(cfg.t_end / cfg.dt))
    if n_steps < 1:
        raise ConfigError(f't_end {cfg.t_end} is shorter than one step of {cfg.dt}')

    def fun(t, x):
        return rhs(system, t, x)

    x = np.array(x0, dtype=float)
    steps, states = [0], [x]
    for step in range(1, n_steps + 1):
        x = _rk4_step(fun, (step - 1) * cfg.dt, x, cfg.dt)
        magnitude = np.max(np.abs(x))
        if not np.isfinite(magnitude) or magnitude > cfg.divergence_bound:
            raise Divergence(step * cfg.dt, float(magnitude), cfg.divergence_bound)
        if step % every == 0 or step == n_steps:
            steps.append(step)
            states.append(x)

    return np.array(steps) * cfg.dt, np.array(states)


def integrate(system, x0=None, t_end=None, method=None, cfg=None):
    """Integrates the coupled system from x0 over [0, t_end].

    Args:
        system (CoupledSystem): oscillators and coupling
        x0 (np.ndarray): initial state, `default_initial_state` when omitted
        t_end (float): final time, overrides `cfg.t_end`
        method (str): 'rk45' or 'rk4', overrides `cfg.method`
        cfg (SimulationConfig): integration settings

    Returns:
        Trajectory: samples every `cfg.stride` seconds
    """
    cfg = cfg or SimulationConfig()
    overrides = {k: v for k, v in (('t_end', t_end), ('method', method)) if v is not None}
    if overrides:
        cfg = replace(cfg, **overrides)

    x0 = default_initial_state(system) if x0 is None else np.asarray(x0, dtype=float)
    if x0.shape != (system.n_states,):
        raise ConfigError(f'initial state has shape {x0.shape}, expected ({system.n_states},)')

    logger.info('integrating %d circuits (%d states) to t=%g with %s',
                system.n_circuits, system.n_states, cfg.t_end, cfg.method)
    if cfg.method == 'rk45':
        times, states = _integrate_rk45(system, x0, cfg)
    else:
        times, states = _integrate_rk4(system, x0, cfg)

    traj = _make_trajectory(system, times, states)
    logger.info('sync error %.4g -> %.4g', traj.initial_error, traj.final_error)
    return traj


def is_synchronized(traj, threshold=SimulationConfig.threshold, t_end=None):
    """Whether the error stays below threshold * initial error over the second half of the run."""
    t_end = traj.times[-1] if t_end is None else t_end
    scale = traj.initial_error if traj.initial_error > 0 else 1.
    tail = traj.sync_error[traj.times >= t_end / 2]
    return bool(np.all(tail <= threshold * scale))


def summarize(traj, cfg=None):
    """Summary record of a run.

    Args:
        traj (Trajectory): integrated trajectory
        cfg (SimulationConfig): settings the run used

    Returns:
        dict: final_error, initial_error, synchronized, threshold, t_end, method, n_circuits
    """
    cfg = cfg or SimulationConfig()
    return {
        'final_error': traj.final_error,
        'initial_error': traj.initial_error,
        'synchronized': is_synchronized(traj, cfg.threshold, cfg.t_end),
        'threshold': cfg.threshold,
        't_end': cfg.t_end,
        'method': cfg.method,
        'n_circuits': traj.n_circuits
    }
