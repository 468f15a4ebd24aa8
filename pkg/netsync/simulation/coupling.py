"""Time-domain realization of a Kron-reduced coupling network."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.signal import tf2ss

from netsync.config import STRUCTURAL_TOL
from netsync.errors import UnsupportedForm

logger = logging.getLogger(__name__)

RESISTIVE = 'resistive'
SERIES_RL = 'rl'
STATE_SPACE = 'state_space'


@dataclass(frozen=True, eq=False)
class BranchBlock:
    """Current of one realized element driven by its voltage difference.

    x' = a x + b dv,  i = c x + d dv

    Args:
        label (str): branch name, e.g. '1-2' or '3-gnd'
        form (str): 'resistive', 'rl' or 'state_space'
        a (np.ndarray): state matrix (k x k)
        b (np.ndarray): input vector (k,)
        c (np.ndarray): output vector (k,)
        d (float): feedthrough conductance
    """
    label: str
    form: str
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: float = 0.

    @property
    def n_states(self):
        return self.a.shape[0]

    def admittance(self, s):
        if self.n_states == 0:
            return complex(self.d)
        return complex(self.c @ np.linalg.solve(s * np.eye(self.n_states) - self.a, self.b) + self.d)


def realize_admittance(y, weight, label):
    """Realizes weight * y(s) as a branch block.

    A first-order y = 1/(R_u + s L_u) becomes a physical series RL branch with
    R = R_u/weight and L = L_u/weight; a constant y is a conductance; any other
    proper y is realized in controllable canonical form.

    Args:
        y (RationalFunction): per-unit admittance
        weight (float): branch weight
        label (str): branch name

    Returns:
        BranchBlock: realized branch
    """
    y = y.cancel()
    if not y.is_proper:
        raise UnsupportedForm(f'branch {label}: improper admittance {y!r} (capacitive line) cannot be simulated')

    empty = np.zeros((0, 0))
    if y.den.degree == 0:
        return BranchBlock(label, RESISTIVE, empty, np.zeros(0), np.zeros(0), weight * y.num.coeffs[0])

    if y.num.degree == 0 and y.den.degree == 1 and weight > 0 and y.num.coeffs[0] > 0 and y.den.coeffs[0] >= 0:
        # y = k/(s + p) = 1/(p/k + s/k)
        k, p = y.num.coeffs[0], y.den.coeffs[0]
        r, l = p / k / weight, 1. / k / weight
        return BranchBlock(label, SERIES_RL, np.array([[-r / l]]), np.array([1. / l]), np.array([1.]))

    a, b, c, d = tf2ss(weight * y.num.coeffs[::-1], y.den.coeffs[::-1])
    return BranchBlock(label, STATE_SPACE, a, b[:, 0], c[0], float(d[0, 0]))


@dataclass(frozen=True, eq=False)
class CouplingRealization:
    """Linear coupling network as a set of branch blocks.

    Branch voltage differences are `incidence @ v`, node injections
    `incidence.T @ i`. Block states are stacked in branch order.

    Args:
        n_nodes (int): number of boundary nodes
        blocks (tuple): BranchBlock per realized branch or shunt
        incidence (np.ndarray): (n_blocks, n_nodes) signed incidence
    """
    n_nodes: int
    blocks: tuple
    incidence: np.ndarray

    def __post_init__(self):
        sizes = [blk.n_states for blk in self.blocks]
        offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        n = int(offsets[-1])
        a = np.zeros((n, n))
        b = np.zeros((n, len(self.blocks)))
        c = np.zeros((len(self.blocks), n))
        for k, blk in enumerate(self.blocks):
            lo, hi = offsets[k], offsets[k + 1]
            a[lo:hi, lo:hi] = blk.a
            b[lo:hi, k] = blk.b
            c[k, lo:hi] = blk.c
        object.__setattr__(self, '_a', a)
        object.__setattr__(self, '_b', b)
        object.__setattr__(self, '_c', c)
        object.__setattr__(self, '_d', np.array([blk.d for blk in self.blocks], dtype=float))

    @property
    def n_states(self):
        return self._a.shape[0]

    @property
    def labels(self):
        return tuple(blk.label for blk in self.blocks)

    def state_derivative(self, x, v):
        return self._a @ x + self._b @ (self.incidence @ v)

    def currents(self, x, v):
        """Net current drawn from each node by the network."""
        dv = self.incidence @ v
        return self.incidence.T @ (self._c @ x + self._d * dv)

    def admittance(self, s):
        """Port admittance of the realization at complex s."""
        h = np.array([blk.admittance(s) for blk in self.blocks])
        return self.incidence.T @ (h[:, None] * self.incidence)


def realize_coupling(net_class, tol=STRUCTURAL_TOL):
    """Builds branch blocks reproducing y_shunt(s) I + y_series(s) L.

    Every off-diagonal weight w_nm = -L_nm becomes a branch between n and m;
    a nonzero y_shunt becomes a branch from every node to ground.

    Args:
        net_class (NetworkClass): classified network
        tol (float): weights below `tol * max weight` are dropped

    Returns:
        CouplingRealization: realized coupling
    """
    if not net_class.is_classified:
        raise UnsupportedForm(f'cannot realize an unclassified network: {net_class.reason}')

    n = net_class.n_boundary
    lap = net_class.laplacian
    rows, cols = np.triu_indices(n, 1)
    weights = -lap[rows, cols]
    keep = np.abs(weights) > tol * np.max(np.abs(weights))
    if np.any(~keep & (weights != 0)):
        logger.warning('dropping %d negligible reduced branches', int(np.sum(~keep & (weights != 0))))

    blocks, incidence = [], []
    for i, j, w in zip(rows[keep], cols[keep], weights[keep]):
        blocks.append(realize_admittance(net_class.y_series, float(w), f'{i + 1}-{j + 1}'))
        row = np.zeros(n)
        row[i], row[j] = 1., -1.
        incidence.append(row)

    if net_class.y_shunt is not None and not net_class.y_shunt.is_zero:
        for i in range(n):
            blocks.append(realize_admittance(net_class.y_shunt, 1., f'{i + 1}-gnd'))
            row = np.zeros(n)
            row[i] = 1.
            incidence.append(row)

    realization = CouplingRealization(n_nodes=n, blocks=tuple(blocks), incidence=np.array(incidence).reshape(-1, n))
    logger.info('coupling realized with %d branches (%s), %d states',
                len(blocks), ', '.join(sorted({blk.form for blk in blocks})), realization.n_states)
    return realization


@dataclass(frozen=True, eq=False)
class CoupledSystem:
    """N identical oscillators attached to a realized coupling network.

    State layout: circuit-major oscillator states, x[k*m:(k+1)*m] holding the
    m states of circuit k+1 (v_a, v_b, i_L for Chua), followed by the
    coupling block states in branch order.

    Args:
        osc (OscillatorModel): oscillator model
        coupling (CouplingRealization): realized network
    """
    osc: object
    coupling: CouplingRealization

    @property
    def n_circuits(self):
        return self.coupling.n_nodes

    @property
    def n_osc_states(self):
        return self.osc.linear.n_states

    @property
    def n_states(self):
        return self.n_circuits * self.n_osc_states + self.coupling.n_states

    @property
    def terminal_index(self):
        return int(np.argmax(self.osc.linear.c))

    def state_labels(self):
        labels = [f'{name}[{k + 1}]' for k in range(self.n_circuits) for name in self.osc.linear.labels]
        for blk in self.coupling.blocks:
            labels += [f'{blk.label}:{q}' for q in range(blk.n_states)]
        return labels

    def layout(self):
        split = self.n_circuits * self.n_osc_states
        return {
            'n_circuits': self.n_circuits,
            'oscillator_states': [0, split],
            'coupling_states': [split, self.n_states],
            'order': 'circuit-major',
            'labels': self.state_labels()
        }


def build_coupled_system(net_class, osc, tol=STRUCTURAL_TOL):
    return CoupledSystem(osc=osc, coupling=realize_coupling(net_class, tol))
