"""Network classification: which synchronization certificate applies."""
import logging
from dataclasses import dataclass

import numpy as np

from netsync.config import DEFAULT_TOLERANCES
from netsync.errors import DegenerateHomogeneous, EvalNearPole, GuardViolated, NotUniform, SingularInterior
from netsync.network import assemble_admittance, eval_admittance
from netsync.numerics import complete_laplacian, sym_eig
from netsync.reduction.homogeneous import homogeneous_params
from netsync.reduction.impedance import effective_impedance_matrix
from netsync.reduction.kron import kron_reduce, kron_reduce_symbolic, kron_reduce_uniform

logger = logging.getLogger(__name__)

NO_SHUNT_UNIFORM = 'no_shunt_uniform'
NO_SHUNT_HOMOGENEOUS = 'no_shunt_homogeneous'
SHUNT_UNIFORM = 'shunt_uniform'
SHUNT_HOMOGENEOUS = 'shunt_homogeneous'
UNCLASSIFIED = 'unclassified'

NETWORK_KINDS = (NO_SHUNT_UNIFORM, NO_SHUNT_HOMOGENEOUS, SHUNT_UNIFORM, SHUNT_HOMOGENEOUS, UNCLASSIFIED)
HOMOGENEOUS_KINDS = (NO_SHUNT_HOMOGENEOUS, SHUNT_HOMOGENEOUS)
SHUNT_KINDS = (SHUNT_UNIFORM, SHUNT_HOMOGENEOUS)

DEFAULT_PROBE_OMEGAS = (1e-2, 1e-1, 1., 1e1, 1e2)
DEFAULT_PROBES = tuple(1j * w for w in DEFAULT_PROBE_OMEGAS)

# a probe on a pole moves up by this factor, at most MAX_PROBE_NUDGES times
PROBE_NUDGE = 2. ** (1. / 16.)
MAX_PROBE_NUDGES = 8

CORRESPONDENCE_NOTE = (
    'y_series and y_shunt come from inverting the effective-impedance forward map and are '
    'cross-checked against direct Schur reduction; the closed-form correspondence commonly '
    'quoted for this network swaps the two roles and is not used'
)

# forward-map and direct-reduction values should agree far better than this
CROSS_CHECK_WARN = 1e-6


@dataclass(frozen=True)
class NetworkClass:
    """Classification verdict with the reduced-network parameters.

    Args:
        kind (str): one of NETWORK_KINDS
        n_boundary (int): number of boundary nodes N
        y_series (RationalFunction): per-unit branch admittance of the reduced network
        y_shunt (RationalFunction): shunt admittance at each boundary node, None without shunts
        laplacian (np.ndarray): real reduced Laplacian L (Gamma for homogeneous kinds)
        eigenvalues (np.ndarray): ascending eigenvalues of `laplacian`
        reason (str): why the network is unclassified
        notes (tuple): diagnostic messages
    """
    kind: str
    n_boundary: int
    y_series: object = None
    y_shunt: object = None
    laplacian: np.ndarray = None
    eigenvalues: np.ndarray = None
    reason: str = None
    notes: tuple = ()

    @property
    def is_classified(self):
        return self.kind != UNCLASSIFIED

    @property
    def modes(self):
        """Eigenvalues entering the certificate: N once for homogeneous kinds, else lambda_2..lambda_N."""
        if self.kind in HOMOGENEOUS_KINDS:
            return np.array([float(self.n_boundary)])
        return np.asarray(self.eigenvalues[1:], dtype=float)

    def admittance(self, s):
        """Reduced admittance y_shunt(s) I + y_series(s) L at complex s."""
        y = self.y_series(s) * self.laplacian
        if self.y_shunt is not None:
            y = y + self.y_shunt(s) * np.eye(self.n_boundary)
        return y

    def to_dict(self):
        return {
            'kind': self.kind,
            'n_boundary': self.n_boundary,
            'lambda': None if self.eigenvalues is None else [float(v) for v in self.eigenvalues],
            'y_series': None if self.y_series is None else self.y_series.to_dict(),
            'y_shunt': None if self.y_shunt is None else self.y_shunt.to_dict(),
            'laplacian': None if self.laplacian is None else self.laplacian.tolist(),
            'reason': self.reason,
            'notes': list(self.notes)
        }


def _spread(values):
    """Largest relative deviation of complex values from the first one."""
    values = np.asarray(values)
    return np.max(np.abs(values - values.flat[0])) / np.max(np.abs(values))


def _homogeneous_laplacian(n):
    eigenvalues = np.full(n, float(n))
    eigenvalues[0] = 0.
    return complete_laplacian(n), eigenvalues


def _cross_check(y_func, values, probes):
    dev = max(abs(y_func(s) - v) / abs(v) for s, v in zip(probes, values))
    if dev > CROSS_CHECK_WARN:
        logger.warning('forward-map inversion deviates from direct reduction by %.3e', dev)
    return f'forward-map vs direct reduction max relative deviation {dev:.3e}'


def _unclassified(n, reason):
    logger.info('network unclassified: %s', reason)
    return NetworkClass(kind=UNCLASSIFIED, n_boundary=n, reason=reason)


def _reduce_at_probes(y_sym, n, probes, tol):
    """Reduced admittance at each probe; a probe on a pole or an interior resonance is moved up the axis.

    Returns:
        tuple: (probes actually used, reduced matrices)
    """
    used, reduced = [], []
    for s in probes:
        for _ in range(MAX_PROBE_NUDGES):
            try:
                y = kron_reduce(eval_admittance(y_sym, s, tol.numeric_tol), n, tol=tol).Y
            except (EvalNearPole, SingularInterior) as e:
                logger.debug('probe s=%s unusable (%s), moving it', s, type(e).__name__)
                s = s * PROBE_NUDGE
                continue
            used.append(s)
            reduced.append(y)
            break
        else:
            raise EvalNearPole(s, f'no usable probe near s={s!r} after {MAX_PROBE_NUDGES} moves')
    return tuple(used), reduced


def _classify_no_shunt(net, y_sym, reduced, probes, tol):
    n = net.n_boundary
    try:
        y_series, lap = kron_reduce_uniform(net, tol)
    except NotUniform as e:
        not_uniform = str(e)
    else:
        eigenvalues, _ = sym_eig(lap, tol.structural_tol)
        if abs(eigenvalues[0]) > tol.structural_tol * max(1., eigenvalues[-1]):
            logger.warning('smallest reduced Laplacian eigenvalue %.3e is not zero', eigenvalues[0])
        eigenvalues[0] = 0.
        return NetworkClass(kind=NO_SHUNT_UNIFORM, n_boundary=n, y_series=y_series,
                            laplacian=lap, eigenvalues=eigenvalues)

    pairs = np.triu_indices(n, 1)
    z_pairs = [effective_impedance_matrix(y, tol=tol)[pairs] for y in reduced]
    spread = max(_spread(z) for z in z_pairs)
    logger.debug('boundary effective impedance spread %.3e', spread)
    if spread > tol.structural_tol:
        return _unclassified(n, f'{not_uniform}; boundary effective impedances are not uniform '
                                f'(relative spread {spread:.3e})')

    y_series = (-kron_reduce_symbolic(y_sym, n).Y[0, 1]).cancel()
    expected = [homogeneous_params(z[0], None, n, tol)[0] for z in z_pairs]
    lap, eigenvalues = _homogeneous_laplacian(n)
    return NetworkClass(kind=NO_SHUNT_HOMOGENEOUS, n_boundary=n, y_series=y_series,
                        laplacian=lap, eigenvalues=eigenvalues,
                        notes=(_cross_check(y_series, expected, probes),))


def _classify_shunt(net, y_sym, reduced, probes, tol):
    n = net.n_boundary
    pairs = np.triu_indices(n, 1)
    grounded = [effective_impedance_matrix(y, grounded=True, tol=tol) for y in reduced]
    series_spread = max(_spread(z[:n, :n][pairs]) for z in grounded)
    shunt_spread = max(_spread(z[:n, n]) for z in grounded)
    logger.debug('effective impedance spread: series %.3e, shunt %.3e', series_spread, shunt_spread)

    if max(series_spread, shunt_spread) <= tol.structural_tol:
        expected = []
        for z in grounded:
            try:
                expected.append(homogeneous_params(z[0, 1], z[0, n], n, tol))
            except GuardViolated as e:
                raise DegenerateHomogeneous(str(e)) from e

        sym = kron_reduce_symbolic(y_sym, n).Y
        y_series = (-sym[0, 1]).cancel()
        y_shunt = sym.row_sum(0)
        lap, eigenvalues = _homogeneous_laplacian(n)
        notes = (
            CORRESPONDENCE_NOTE,
            'y_series ' + _cross_check(y_series, [e[0] for e in expected], probes),
            'y_shunt ' + _cross_check(y_shunt, [e[1] for e in expected], probes),
        )
        logger.warning(CORRESPONDENCE_NOTE)
        return NetworkClass(kind=SHUNT_HOMOGENEOUS, n_boundary=n, y_series=y_series, y_shunt=y_shunt,
                            laplacian=lap, eigenvalues=eigenvalues, notes=notes)

    # shunt-uniform: Y = y_shunt I + y_series L with one real L for every probe
    off = ~np.eye(n, dtype=bool)
    first = reduced[0] - np.mean(reduced[0].sum(axis=1)) * np.eye(n)
    a, b = np.unravel_index(np.argmax(np.where(off, np.abs(first), -1.)), first.shape)

    patterns = []
    for y in reduced:
        rows = y.sum(axis=1)
        if _spread(rows) > tol.structural_tol:
            return _unclassified(n, 'boundary effective impedances are not uniform and '
                                    'reduced shunt admittances differ between nodes')
        w = -(y - np.mean(rows) * np.eye(n)) / y[a, b]
        patterns.append(w)

    ref = patterns[0]
    scale = np.max(np.abs(ref))
    if any(np.max(np.abs(w - ref)) > tol.structural_tol * scale for w in patterns) or \
            np.max(np.abs(ref.imag)) > tol.structural_tol * scale:
        return _unclassified(n, 'boundary effective impedances are not uniform and the reduced '
                                'branch admittances share no common frequency-dependent factor')

    lap = ref.real
    lap = (lap + lap.T) / 2
    sym = kron_reduce_symbolic(y_sym, n).Y
    y_series = (-sym[a, b]).cancel()
    y_shunt = sym.row_sum(0)
    eigenvalues, _ = sym_eig(lap, tol.structural_tol)
    eigenvalues[0] = 0.
    return NetworkClass(kind=SHUNT_UNIFORM, n_boundary=n, y_series=y_series, y_shunt=y_shunt,
                        laplacian=lap, eigenvalues=eigenvalues)


def classify(net, probe_s=None, tol=DEFAULT_TOLERANCES):
    """Classifies a network and extracts its reduced parameters.

    Decision order: without shunts, uniform line characteristics first and
    then homogeneity of the boundary effective impedances; with shunts,
    homogeneity (boundary pairs and boundary-to-ground) first and then the
    shunt-uniform form y_shunt I + y_series L. Function-level properties are
    accepted only when they hold at every probe.

    Args:
        net (Netlist): validated netlist
        probe_s (sequence): probe points on the imaginary axis, DEFAULT_PROBES when omitted
        tol (Tolerances): tolerances

    Returns:
        NetworkClass: verdict and parameters
    """
    probes = DEFAULT_PROBES if probe_s is None else tuple(probe_s)
    n = net.n_boundary
    if n < 2:
        return _unclassified(n, 'a single boundary node has nothing to synchronize with')

    y_sym = assemble_admittance(net)
    probes, reduced = _reduce_at_probes(y_sym, n, probes, tol)

    zero_sums = all(np.max(np.abs(y.sum(axis=1))) <= tol.structural_tol * np.linalg.norm(y) for y in reduced)
    if zero_sums == net.has_shunts:
        logger.warning('reduced row sums %s zero although the netlist %s shunts',
                       'are' if zero_sums else 'are not', 'has' if net.has_shunts else 'has no')

    if net.has_shunts:
        result = _classify_shunt(net, y_sym, reduced, probes, tol)
    else:
        result = _classify_no_shunt(net, y_sym, reduced, probes, tol)

    if result.is_classified:
        logger.info('network classified as %s, eigenvalues %s', result.kind, np.round(result.eigenvalues, 6))
    return result
