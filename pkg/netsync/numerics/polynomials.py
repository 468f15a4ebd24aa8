"""Real-coefficient polynomials in the Laplace variable s."""
import numpy as np
from numpy.polynomial import polynomial as P

from netsync.config import NUMERIC_TOL
from netsync.errors import DegenerateInput

POLY_OPS = ('add', 'sub', 'mul')


def _normalize(coeffs, tol=NUMERIC_TOL):
    """Strips negligible highest-order coefficients, zero polynomial -> [0]."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    assert c.ndim == 1, 'Polynomial coefficients must be a flat sequence'
    if c.size == 0 or not np.any(c):
        return np.zeros(1)

    scale = np.max(np.abs(c))
    kept = np.flatnonzero(np.abs(c) > tol * scale)
    return c[:kept[-1] + 1].copy()


def scaled_eval(coeffs, s):
    """Evaluates a polynomial as `value * s**shift` to keep large |s| finite.

    For |s| <= 1 plain Horner evaluation is used (shift 0). For |s| > 1 the
    reversed coefficients are evaluated at 1/s and the shift is the degree.

    Args:
        coeffs (np.ndarray): ascending coefficients
        s (complex or np.ndarray): evaluation points

    Returns:
        tuple: (value, shift) arrays broadcast like `s`
    """
    s = np.asarray(s, dtype=complex)
    outer = np.abs(s) > 1
    inv = 1. / np.where(outer, s, 1.)

    inner_val = P.polyval(np.where(outer, 0., s), coeffs)
    outer_val = P.polyval(inv, coeffs[::-1])

    value = np.where(outer, outer_val, inner_val)
    shift = np.where(outer, len(coeffs) - 1, 0)
    return value, shift


class Polynomial:
    """Immutable polynomial, `coeffs[k]` multiplies s**k."""

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs, tol=NUMERIC_TOL):
        c = _normalize(coeffs, tol)
        c.flags.writeable = False
        self._coeffs = c

    @classmethod
    def from_roots(cls, roots, leading=1.):
        """Builds `leading * prod(s - r)`; roots must be closed under conjugation."""
        roots = np.asarray(roots, dtype=complex)
        if roots.size == 0:
            return cls([leading])
        return cls(leading * np.real(P.polyfromroots(roots)))

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        return len(self._coeffs) - 1

    @property
    def leading(self):
        return self._coeffs[-1]

    @property
    def is_zero(self):
        return len(self._coeffs) == 1 and self._coeffs[0] == 0.

    def __call__(self, s):
        value, shift = scaled_eval(self._coeffs, s)
        out = value * np.asarray(s, dtype=complex) ** shift
        return out[()] if np.ndim(out) == 0 else out

    def __add__(self, other):
        return poly_arith(self, _coerce(other), 'add')

    __radd__ = __add__

    def __sub__(self, other):
        return poly_arith(self, _coerce(other), 'sub')

    def __rsub__(self, other):
        return poly_arith(_coerce(other), self, 'sub')

    def __mul__(self, other):
        return poly_arith(self, _coerce(other), 'mul')

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self._coeffs)

    def roots(self):
        return poly_roots(self)

    def to_list(self):
        return [float(c) for c in self._coeffs]

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self._coeffs, other._coeffs)

    def __hash__(self):
        return hash(tuple(self._coeffs))

    def __repr__(self):
        return f'Polynomial({self.to_list()})'


def _coerce(value):
    if isinstance(value, Polynomial):
        return value
    return Polynomial([value])


def poly_arith(a, b, op, tol=NUMERIC_TOL):
    """Adds, subtracts or multiplies two polynomials.

    Args:
        a (Polynomial): left operand
        b (Polynomial): right operand
        op (str): one of 'add', 'sub', 'mul'
        tol (float): relative trimming tolerance of the result

    Returns:
        Polynomial: normalized result
    """
    assert op in POLY_OPS, f'Unknown polynomial operation {op!r}'

    if op == 'mul':
        return Polynomial(P.polymul(a.coeffs, b.coeffs), tol=tol)

    coeffs = P.polyadd(a.coeffs, b.coeffs) if op == 'add' else P.polysub(a.coeffs, b.coeffs)
    # cancellation residue is measured against the operands, not the result
    scale = max(np.max(np.abs(a.coeffs)), np.max(np.abs(b.coeffs)))
    coeffs[np.abs(coeffs) <= tol * scale] = 0.
    return Polynomial(coeffs, tol=tol)


def poly_roots(p):
    """Roots of a polynomial from the eigenvalues of its companion matrix.

    Args:
        p (Polynomial): polynomial, not identically zero

    Returns:
        np.ndarray: `p.degree` complex roots (empty for constants)
    """
    if p.is_zero:
        raise DegenerateInput('the zero polynomial has no finite root set')
    if p.degree == 0:
        return np.empty(0, dtype=complex)
    return P.polyroots(p.coeffs).astype(complex)
