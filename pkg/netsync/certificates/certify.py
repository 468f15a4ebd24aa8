"""Small-gain synchronization certificates over the reduced-network spectrum."""
import logging
from dataclasses import dataclass, replace
from multiprocessing import Pool

import numpy as np

from netsync.config import STRUCTURAL_TOL, SweepConfig
from netsync.errors import NotNormal, Unclassified
from netsync.numerics import differential_basis, is_normal, mat_solve, svd_max
from netsync.certificates.gains import MARGINAL, UNSTABLE, hinf_scalar, lft_scalar, z_eq
from netsync.reduction import SHUNT_KINDS

logger = logging.getLogger(__name__)

CONDITIONAL = 'conditional'
INCONCLUSIVE_BOUNDARY = 'inconclusive-boundary'

# modes whose peak is this close to the largest one are all reported as the max
TIE_TOL = 1e-9


@dataclass(frozen=True)
class ModeGain:
    """Peak loop gain of one Laplacian mode."""
    lam: float
    peak: float
    omega_star: float
    stability: str
    boundary: bool = False
    axis_frequencies: tuple = ()
    is_max: bool = False

    def to_dict(self):
        data = {
            'lambda': self.lam,
            'peak': self.peak,
            'omega_star': self.omega_star,
            'stability': self.stability,
            'boundary': self.boundary,
            'is_max': self.is_max
        }
        if self.axis_frequencies:
            data['axis_frequencies'] = list(self.axis_frequencies)
        return data


@dataclass(frozen=True)
class GainReport:
    """Certificate outcome.

    Args:
        passed: True, False, 'conditional' or 'inconclusive-boundary'
        margin (float): sigma times the largest mode peak
        sigma (float): slope bound of the nonlinearity
        modes (tuple): ModeGain per evaluated eigenvalue
        kind (str): network class the certificate was dispatched on
    """
    passed: object
    margin: float
    sigma: float
    modes: tuple
    kind: str

    @property
    def certified(self):
        return self.passed is True

    def to_dict(self):
        return {
            'pass': self.passed,
            'margin': self.margin,
            'sigma': self.sigma,
            'kind': self.kind,
            'modes': [m.to_dict() for m in self.modes]
        }


def loop_impedance(net_class, osc):
    """z_osc, or its parallel combination with the reduced shunt for shunt kinds."""
    if net_class.kind in SHUNT_KINDS:
        return z_eq(osc.z_osc, net_class.y_shunt)
    return osc.z_osc


def mode_transfer(z, y_series, lam):
    return lft_scalar(z, y_series * lam)


def _mode_gain(args):
    z, y_series, lam, cfg = args
    res = hinf_scalar(mode_transfer(z, y_series, lam), cfg)
    logger.debug('mode lambda=%.6g: peak %.6g at omega %.6g (%s)', lam, res.peak, res.omega_star, res.stability)
    return ModeGain(lam=lam, peak=res.peak, omega_star=res.omega_star, stability=res.stability,
                    boundary=res.boundary, axis_frequencies=res.axis_frequencies)


def _verdict(margin, gains):
    if margin >= 1 or any(g.stability == UNSTABLE for g in gains):
        return False
    if any(g.boundary for g in gains):
        return INCONCLUSIVE_BOUNDARY
    if any(g.stability == MARGINAL for g in gains):
        return CONDITIONAL
    return True


def certify(net_class, osc, cfg=None, processes=None):
    """Evaluates the small-gain certificate sigma * max_j ||F(z, y_series lambda_j)|| < 1.

    Uniform kinds use every nonzero eigenvalue of the reduced Laplacian,
    homogeneous kinds the single eigenvalue N; shunt kinds replace z_osc by
    its parallel combination with y_shunt.

    Args:
        net_class (NetworkClass): classified network
        osc (OscillatorModel): oscillator model
        cfg (SweepConfig): frequency sweep
        processes (int): worker processes for the per-mode sweeps

    Returns:
        GainReport: margin, verdict and per-mode gains
    """
    if not net_class.is_classified:
        raise Unclassified(net_class.reason or 'network is unclassified')
    cfg = cfg or SweepConfig()

    z = loop_impedance(net_class, osc)
    tasks = [(z, net_class.y_series, float(lam), cfg) for lam in net_class.modes]

    if processes and processes > 1 and len(tasks) > 1:
        with Pool(processes) as pool:
            gains = pool.map(_mode_gain, tasks)
    else:
        gains = [_mode_gain(task) for task in tasks]

    top = max(g.peak for g in gains)
    gains = tuple(
        replace(g, is_max=bool(g.peak >= top * (1 - TIE_TOL))) for g in gains
    )
    margin = float(osc.sigma * top)
    passed = _verdict(margin, gains)

    logger.info('certificate for %s network: margin %.6g, pass=%s', net_class.kind, margin, passed)
    return GainReport(passed=passed, margin=margin, sigma=float(osc.sigma), modes=gains, kind=net_class.kind)


def mode_gain_profile(net_class, osc, omegas):
    """max_j |F(z, y_series lambda_j)(j omega)| at each frequency."""
    z = loop_impedance(net_class, osc)
    profiles = [np.abs(mode_transfer(z, net_class.y_series, lam).frequency_response(omegas))
                for lam in net_class.modes]
    return np.max(profiles, axis=0)


def matrix_gain_profile(y_of_s, z_osc, omegas, tol=STRUCTURAL_TOL):
    """Largest singular value of (I + z_osc Y)^-1 z_osc on the complement of 1.

    Args:
        y_of_s (callable): returns the reduced admittance matrix at complex s
        z_osc (RationalFunction): oscillator impedance
        omegas (np.ndarray): angular frequencies, rad/s
        tol (float): normality tolerance

    Returns:
        np.ndarray: gain per frequency
    """
    out = np.empty(len(omegas))
    basis = None
    for k, omega in enumerate(omegas):
        s = 1j * omega
        y = np.asarray(y_of_s(s), dtype=complex)
        if not is_normal(y, tol):
            raise NotNormal(f'admittance at omega={omega:.6g} is not normal')
        if basis is None:
            basis = differential_basis(y.shape[0])

        z = z_osc(s)
        eye = np.eye(y.shape[0])
        f = mat_solve(eye + z * y, z * eye)
        out[k] = svd_max(basis.conj().T @ f @ basis)
    return out


def matrix_gain_oracle(y_of_s, z_osc, omegas, tol=STRUCTURAL_TOL):
    return float(np.max(matrix_gain_profile(y_of_s, z_osc, omegas, tol)))
