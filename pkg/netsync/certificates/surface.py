"""Certificate margin of the loaded star over a grid of line parameters.

For the star with a load at its center, the single mode gain reduces to
F(z_osc, 1/z_net) with z_net = R + sL, independently of N and of the load.
"""
import logging
from multiprocessing import Pool

import numpy as np

from netsync.config import SweepConfig
from netsync.errors import ConfigError
from netsync.network import series_impedance
from netsync.certificates.gains import hinf_scalar, lft_scalar

logger = logging.getLogger(__name__)


def star_mode_transfer(z_osc, r_net, l_net):
    return lft_scalar(z_osc, series_impedance(r_net, l_net).reciprocal())


def _check_line(r_net, l_net):
    if not (r_net > 0 and l_net >= 0):
        raise ConfigError(f'line parameters need R > 0 and L >= 0, got R={r_net!r}, L={l_net!r}')


def _xi_cell(args):
    z_osc, sigma, r_net, l_net, cfg = args
    return sigma * hinf_scalar(star_mode_transfer(z_osc, r_net, l_net), cfg).peak


def xi_surface(r_grid, l_grid, osc, n=4, cfg=None, processes=None):
    """Evaluates xi(R, L) = sigma * ||F(z_osc, 1/(R + sL))||_inf on a grid.

    Args:
        r_grid (sequence): line resistances, ohms
        l_grid (sequence): line inductances, henries
        osc (OscillatorModel): oscillator model
        n (int): number of boundary nodes of the star (xi does not depend on it)
        cfg (SweepConfig): frequency sweep
        processes (int): worker processes for the cell sweeps

    Returns:
        np.ndarray: xi values of shape (len(r_grid), len(l_grid))
    """
    r_grid, l_grid = list(r_grid), list(l_grid)
    if not r_grid or not l_grid:
        raise ConfigError('surface grids must be nonempty')
    if n < 2:
        raise ConfigError(f'a star needs at least two boundary nodes, got {n}')
    for r in r_grid:
        for l in l_grid:
            _check_line(r, l)

    cfg = cfg or SweepConfig()
    tasks = [(osc.z_osc, osc.sigma, r, l, cfg) for r in r_grid for l in l_grid]

    if processes and processes > 1:
        with Pool(processes) as pool:
            values = pool.map(_xi_cell, tasks)
    else:
        values = [_xi_cell(task) for task in tasks]

    xi = np.array(values).reshape(len(r_grid), len(l_grid))
    logger.info('xi surface on %dx%d grid: min %.4g, max %.4g', len(r_grid), len(l_grid), xi.min(), xi.max())
    return xi


def xi_frequency_response(r_net, l_net, osc, omegas):
    """sigma * |F(z_osc, 1/z_net)(j omega)| along a frequency grid."""
    _check_line(r_net, l_net)
    h = star_mode_transfer(osc.z_osc, r_net, l_net)
    return osc.sigma * np.abs(h.frequency_response(omegas))


def log_grid(lo, hi, count):
    if count == 1:
        return np.array([lo])
    return np.logspace(np.log10(lo), np.log10(hi), count)
