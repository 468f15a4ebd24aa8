"""Loop gains and their peak magnitude over frequency."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from netsync.config import NUMERIC_TOL, SweepConfig
from netsync.errors import DegenerateLoop, UnboundedGain
from netsync.numerics import RationalFunction, poly_arith

logger = logging.getLogger(__name__)

STABLE = 'stable'
MARGINAL = 'marginal'
UNSTABLE = 'unstable'

# poles with |Re p| below this (relative to max(1, |p|max)) sit on the axis
AXIS_TOL = 1e-9

# a peak at the top of the band is checked this many decades further up
SETTLE_DECADES = 6
SETTLE_TOL = 1e-6


@dataclass(frozen=True)
class PeakResult:
    """Peak of |h(j omega)| over the sweep band.

    Args:
        peak (float): largest magnitude found
        omega_star (float): frequency of the peak, rad/s
        stability (str): 'stable', 'marginal' or 'unstable'
        boundary (bool): peak sits at an end of the band
        axis_frequencies (tuple): frequencies of imaginary-axis poles
    """
    peak: float
    omega_star: float
    stability: str
    boundary: bool = False
    axis_frequencies: tuple = ()


def lft_scalar(a, b):
    """Closed loop a/(1 + a*b) of a negative feedback interconnection.

    Args:
        a (RationalFunction): forward path
        b (RationalFunction): feedback path

    Returns:
        RationalFunction: na*db / (da*db + na*nb)
    """
    num = poly_arith(a.num, b.den, 'mul')
    den = poly_arith(poly_arith(a.den, b.den, 'mul'), poly_arith(a.num, b.num, 'mul'), 'add')
    if den.is_zero:
        raise DegenerateLoop('1 + a*b vanishes identically')
    return RationalFunction(num, den)


def z_eq(z_osc, y_shunt=None):
    """Impedance of z_osc in parallel with a shunt admittance, 1/(1/z_osc + y_shunt)."""
    if y_shunt is None or y_shunt.is_zero:
        return z_osc
    return lft_scalar(z_osc, y_shunt)


def pole_stability(h, tol=AXIS_TOL):
    """Classifies the poles of h after removable pole-zero pairs are cancelled.

    Args:
        h (RationalFunction): transfer function
        tol (float): relative width of the imaginary-axis band

    Returns:
        tuple: (verdict, frequencies of poles on the axis)
    """
    poles = h.cancel().poles()
    if poles.size == 0:
        return STABLE, ()

    threshold = tol * max(1., np.max(np.abs(poles)))
    on_axis = np.abs(poles.real) <= threshold
    axis = tuple(sorted({float(abs(p.imag)) for p in poles[on_axis]}))

    if np.any(poles.real > threshold):
        return UNSTABLE, axis
    if np.any(on_axis):
        return MARGINAL, axis
    return STABLE, ()


def high_frequency_limit(h):
    """|h(j omega)| as omega -> inf for a proper h (the denominator is monic)."""
    if h.relative_degree > 0:
        return 0.
    return float(abs(h.num.leading))


def _settled_peak(h, edge, cfg):
    """Supremum above the band when |h| climbs steadily to its high-frequency limit, else None."""
    limit = high_frequency_limit(h)
    top = np.log10(cfg.omega_max)
    omegas = np.logspace(top, top + SETTLE_DECADES, 50 * SETTLE_DECADES + 1)
    mags = np.abs(h.frequency_response(omegas, NUMERIC_TOL))

    scale = max(limit, edge)
    if np.any(np.isnan(mags)) or np.any(np.diff(mags) < -SETTLE_TOL * scale):
        return None
    if abs(mags[-1] - limit) > SETTLE_TOL * scale:
        return None
    return max(limit, float(mags.max()))


def hinf_scalar(h, cfg=None):
    """Approximates sup over omega of |h(j omega)|.

    The magnitude is evaluated on the log-spaced grid of `cfg`; an interior
    grid maximum is refined by golden-section search in log-frequency
    between its two neighbours. A flat response counts as interior. A
    maximum at the top of the band is accepted when the response keeps
    rising to its high-frequency limit over SETTLE_DECADES more decades;
    the limit is then the supremum. Any other maximum at either end of the
    band is returned unrefined with `boundary` set.

    Args:
        h (RationalFunction): proper transfer function
        cfg (SweepConfig): sweep settings, defaults when omitted

    Returns:
        PeakResult: peak, its frequency and the pole verdict
    """
    cfg = cfg or SweepConfig()
    if not h.is_proper:
        raise UnboundedGain(f'numerator degree {h.num.degree} exceeds denominator degree {h.den.degree}')

    stability, axis = pole_stability(h)
    if stability != STABLE:
        logger.warning('loop gain has %s poles (axis frequencies %s)', stability, axis)

    omegas = cfg.grid()
    mags = np.abs(h.frequency_response(omegas, NUMERIC_TOL))
    if np.all(np.isnan(mags)):
        return PeakResult(np.inf, float(omegas[0]), stability, False, axis)

    k = int(np.nanargmax(mags))
    peak, omega_star = float(mags[k]), float(omegas[k])

    if peak - float(np.nanmin(mags)) <= cfg.refine_tol * peak:
        return PeakResult(peak, omega_star, stability, False, axis)

    if k == len(omegas) - 1:
        settled = _settled_peak(h, peak, cfg)
        if settled is not None:
            logger.debug('|h| settles to its high-frequency limit %.6g above the band', settled)
            return PeakResult(settled, omega_star, stability, False, axis)

    if k == 0 or k == len(omegas) - 1:
        logger.warning('peak |h| = %.6g at the sweep boundary omega = %.3g rad/s; '
                       'the supremum may lie outside the band', peak, omega_star)
        return PeakResult(peak, omega_star, stability, True, axis)

    def neg_mag(x):
        value = abs(h.frequency_response(np.array([10. ** x]))[0])
        return -value if np.isfinite(value) else 0.

    lo, mid, hi = np.log10(omegas[k - 1:k + 2])
    try:
        res = minimize_scalar(neg_mag, bracket=(lo, mid, hi), method='golden',
                              tol=cfg.refine_tol, options={'maxiter': cfg.refine_iters})
    except (ValueError, RuntimeError):
        # flat top, the grid value stands
        return PeakResult(peak, omega_star, stability, False, axis)

    if -res.fun > peak:
        peak, omega_star = float(-res.fun), float(10. ** res.x)

    return PeakResult(peak, omega_star, stability, False, axis)
