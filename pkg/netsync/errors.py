"""Exceptions raised by netsync.

Every error the library raises derives from `NetSyncError`, so callers (the
CLI in particular) can catch the whole family in one place.
"""


class NetSyncError(Exception):
    """Base class for all netsync errors."""


class ConfigError(NetSyncError, ValueError):
    """Invalid tolerance, sweep or simulation setting."""


# numerics

class DivisionByZeroFunction(NetSyncError, ZeroDivisionError):
    """Division of a rational function by the identically zero function."""


class EvalNearPole(NetSyncError):
    """Rational function evaluated too close to one of its poles."""

    def __init__(self, s, message=None):
        self.s = s
        super().__init__(message or f'evaluation at s={s!r} is within tolerance of a pole')


class DegenerateInput(NetSyncError, ValueError):
    """Operation undefined for the given input (e.g. roots of the zero polynomial)."""


class SingularMatrix(NetSyncError):
    """LU factorization met a vanishing pivot."""


class NotSymmetric(NetSyncError, ValueError):
    """Matrix expected to be symmetric is not."""


# network model

class SchemaError(NetSyncError, ValueError):
    """Netlist document does not match the expected schema."""


class ValidationError(NetSyncError, ValueError):
    """Netlist is well-formed but violates a modeling assumption."""


# reduction

class SingularInterior(SingularMatrix):
    """Interior block of the admittance matrix cannot be eliminated."""


class NotUniform(NetSyncError):
    """Branch impedances do not share a common frequency-dependent factor."""


class RankDeficient(NetSyncError):
    """Zero-sum matrix has more than one zero eigenvalue (disconnected network)."""


class GuardViolated(NetSyncError):
    """Effective impedances sit on the degenerate ratio 2N/(N-1)."""


class DegenerateHomogeneous(GuardViolated):
    """Homogeneous network with shunts whose reduced parameters are undefined."""


# oscillator

class InvalidParams(NetSyncError, ValueError):
    """Oscillator component values or characteristic are invalid."""


# certificate

class DegenerateLoop(NetSyncError):
    """Feedback loop 1 + a*b vanishes identically."""


class UnboundedGain(NetSyncError):
    """Transfer function is improper, its peak gain is unbounded."""


class Unclassified(NetSyncError):
    """Network class does not admit a certificate."""


class NotNormal(NetSyncError, ValueError):
    """Matrix does not commute with its conjugate transpose."""


# simulator

class UnsupportedForm(NetSyncError):
    """Coupling admittance cannot be realized for time-domain simulation."""


class Divergence(NetSyncError):
    """Integrated state left the admissible bound."""

    def __init__(self, t, magnitude, bound):
        self.t = t
        self.magnitude = magnitude
        self.bound = bound
        super().__init__(f'state magnitude {magnitude:.6g} exceeded {bound:.6g} at t={t:.6g} s')


class StepUnderflow(NetSyncError):
    """Adaptive integrator could not make progress."""
