"""Rational functions of s: impedances, admittances and loop gains."""
import numpy as np
from numpy.polynomial import polynomial as P

from netsync.config import NUMERIC_TOL
from netsync.errors import DivisionByZeroFunction, EvalNearPole
from netsync.numerics.polynomials import Polynomial, poly_arith, scaled_eval

RF_OPS = ('add', 'sub', 'mul', 'div', 'parallel')

# largest relative residual of a root shared by numerator and denominator
CANCEL_TOL = 1e-7

# companion-matrix roots of a multiple root scatter by about eps**(1/m)
MATCH_RADIUS = 1e-4


class RationalFunction:
    """Immutable ratio num(s)/den(s) with a monic denominator.

    No automatic pole-zero cancellation is performed by the arithmetic; use
    `cancel` explicitly where a minimal form matters.
    """

    __slots__ = ('_num', '_den')

    def __init__(self, num, den=(1.,)):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        if den.is_zero:
            raise DivisionByZeroFunction('denominator is the zero polynomial')

        if num.is_zero:
            num, den = Polynomial([0.]), Polynomial([1.])
        else:
            lead = den.leading
            num = Polynomial(num.coeffs / lead)
            den = Polynomial(den.coeffs / lead)

        self._num = num
        self._den = den

    @classmethod
    def constant(cls, value):
        return cls([value])

    @classmethod
    def from_dict(cls, data):
        return cls(data['num'], data['den'])

    @property
    def num(self):
        return self._num

    @property
    def den(self):
        return self._den

    @property
    def is_zero(self):
        return self._num.is_zero

    @property
    def relative_degree(self):
        return self._den.degree - self._num.degree

    @property
    def is_proper(self):
        return self.relative_degree >= 0

    def __call__(self, s, tol=NUMERIC_TOL):
        return rf_eval(self, s, tol=tol)

    def frequency_response(self, omegas, tol=NUMERIC_TOL):
        """Evaluates on s = j*omega, NaN where omega sits on a pole.

        Args:
            omegas (np.ndarray): angular frequencies, rad/s
            tol (float): pole-proximity tolerance

        Returns:
            np.ndarray: complex response
        """
        value, near_pole = _eval_unchecked(self, 1j * np.asarray(omegas, dtype=float), tol)
        return np.where(near_pole, np.nan, value)

    def __add__(self, other):
        return rf_arith(self, _coerce(other), 'add')

    __radd__ = __add__

    def __sub__(self, other):
        return rf_arith(self, _coerce(other), 'sub')

    def __rsub__(self, other):
        return rf_arith(_coerce(other), self, 'sub')

    def __mul__(self, other):
        return rf_arith(self, _coerce(other), 'mul')

    __rmul__ = __mul__

    def __truediv__(self, other):
        return rf_arith(self, _coerce(other), 'div')

    def __rtruediv__(self, other):
        return rf_arith(_coerce(other), self, 'div')

    def __neg__(self):
        return RationalFunction(-self._num, self._den)

    def reciprocal(self):
        if self.is_zero:
            raise DivisionByZeroFunction('reciprocal of the zero function')
        return RationalFunction(self._den, self._num)

    def parallel(self, other):
        return rf_arith(self, _coerce(other), 'parallel')

    def poles(self):
        return self._den.roots()

    def zeros(self):
        if self.is_zero:
            return np.empty(0, dtype=complex)
        return self._num.roots()

    def cancel(self, tol=CANCEL_TOL):
        """Divides out the factors shared by numerator and denominator, see `common_factor`."""
        if self.is_zero or self._num.degree == 0 or self._den.degree == 0:
            return self

        factor, num, den = common_factor(self._num, self._den, tol)
        if factor.degree == 0:
            return self
        return RationalFunction(num, den)

    def to_dict(self):
        return {'num': self._num.to_list(), 'den': self._den.to_list()}

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        return hash((self._num, self._den))

    def __repr__(self):
        return f'RationalFunction(num={self._num.to_list()}, den={self._den.to_list()})'


def _coerce(value):
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value)
    return RationalFunction.constant(value)


def rf_arith(a, b, op, tol=NUMERIC_TOL):
    """Combines two rational functions.

    `parallel` is the parallel combination a*b/(a + b) of two impedances.

    Args:
        a (RationalFunction): left operand
        b (RationalFunction): right operand
        op (str): one of 'add', 'sub', 'mul', 'div', 'parallel'
        tol (float): coefficient trimming tolerance

    Returns:
        RationalFunction: renormalized result, without cancellation
    """
    assert op in RF_OPS, f'Unknown rational operation {op!r}'

    na, da, nb, db = a.num, a.den, b.num, b.den

    if op in ('add', 'sub') and da == db:
        num = poly_arith(na, nb, op, tol)
        den = da
    elif op in ('add', 'sub'):
        cross = poly_arith(na, db, 'mul', tol)
        other = poly_arith(nb, da, 'mul', tol)
        num = poly_arith(cross, other, op, tol)
        den = poly_arith(da, db, 'mul', tol)
    elif op == 'mul':
        num = poly_arith(na, nb, 'mul', tol)
        den = poly_arith(da, db, 'mul', tol)
    elif op == 'div':
        if b.is_zero:
            raise DivisionByZeroFunction('division by the zero function')
        num = poly_arith(na, db, 'mul', tol)
        den = poly_arith(da, nb, 'mul', tol)
    else:
        # a*b/(a+b) = na*nb / (na*db + nb*da)
        num = poly_arith(na, nb, 'mul', tol)
        den = poly_arith(poly_arith(na, db, 'mul', tol), poly_arith(nb, da, 'mul', tol), 'add', tol)
        if den.is_zero:
            raise DivisionByZeroFunction('parallel combination of opposite impedances')

    return RationalFunction(num, den)


def _eval_unchecked(f, s, tol):
    n_val, n_shift = scaled_eval(f.num.coeffs, s)
    d_val, d_shift = scaled_eval(f.den.coeffs, s)
    d_scale, _ = scaled_eval(np.abs(f.den.coeffs), np.abs(s))

    near_pole = np.abs(d_val) <= tol * np.abs(d_scale)
    safe_den = np.where(near_pole, 1., d_val)
    value = n_val / safe_den * np.asarray(s, dtype=complex) ** (n_shift - d_shift)
    return value, near_pole


def rf_eval(f, s, tol=NUMERIC_TOL):
    """Evaluates a rational function at complex s.

    Both polynomials are evaluated in the scaled form of `scaled_eval`, so
    the ratio stays finite for high degrees and large |s|.

    Args:
        f (RationalFunction): function to evaluate
        s (complex or np.ndarray): evaluation point(s)
        tol (float): relative pole-proximity threshold

    Returns:
        complex or np.ndarray: f(s)
    """
    value, near_pole = _eval_unchecked(f, s, tol)
    if np.any(near_pole):
        bad = np.asarray(s)[near_pole] if np.ndim(s) else s
        raise EvalNearPole(bad if np.ndim(bad) == 0 else bad.flat[0])
    return value[()] if np.ndim(value) == 0 else value


def _relative_residual(coeffs, r):
    scale = P.polyval(abs(r), np.abs(coeffs))
    return abs(P.polyval(r, coeffs)) / scale if scale > 0 else 0.


def _shared_factor(a, b, tol):
    """One real linear or quadratic factor dividing both a and b, or None.

    Candidate roots come from pairs lying within MATCH_RADIUS of each other;
    the candidate on which both polynomials come closest to vanishing is
    accepted when its residual is below `tol`.
    """
    roots_a, roots_b = P.polyroots(a), P.polyroots(b)
    pairs = sorted(((abs(x - y) / max(1., abs(y)), complex(x), complex(y)) for x in roots_a for y in roots_b),
                   key=lambda item: item[0])

    for dist, x, y in pairs:
        if dist > MATCH_RADIUS:
            break
        candidates = []
        for r in (x, y, 0.5 * (x + y)):
            if abs(r.imag) <= MATCH_RADIUS * max(1., abs(r)):
                r = complex(r.real, 0.)
            residual = max(_relative_residual(a, r), _relative_residual(b, r))
            candidates.append((residual, r))
        residual, r = min(candidates, key=lambda item: item[0])
        if residual > tol:
            continue
        if r.imag == 0.:
            return np.array([-r.real, 1.])
        return np.array([abs(r) ** 2, -2. * r.real, 1.])
    return None


def common_factor(a, b, tol=CANCEL_TOL):
    """Largest monic factor shared by two polynomials.

    Exact powers of s are split off first. Every other shared root is
    confirmed by the residual of both polynomials and divided out of the
    original coefficients, one real factor at a time, so the quotients keep
    the precision of the inputs.

    Args:
        a (Polynomial): first polynomial
        b (Polynomial): second polynomial
        tol (float): largest relative residual of an accepted shared root

    Returns:
        tuple: (factor, a / factor, b / factor) as Polynomials
    """
    if a.is_zero or b.is_zero:
        return Polynomial([1.]), a, b

    qa, qb = np.array(a.coeffs, dtype=float), np.array(b.coeffs, dtype=float)

    k = 0
    while k < min(len(qa), len(qb)) - 1 and qa[k] == 0. and qb[k] == 0.:
        k += 1
    factor = np.zeros(k + 1)
    factor[k] = 1.
    qa, qb = qa[k:], qb[k:]

    while len(qa) > 1 and len(qb) > 1:
        shared = _shared_factor(qa, qb, tol)
        if shared is None:
            break
        qa = P.polydiv(qa, shared)[0]
        qb = P.polydiv(qb, shared)[0]
        factor = P.polymul(factor, shared)

    return Polynomial(factor), Polynomial(qa), Polynomial(qb)
