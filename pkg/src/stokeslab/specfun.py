"""Configurable-precision complex arithmetic and the two analytic kernels.

Everything numeric downstream flows through two small value types:

``PreciseComplex``
    A complex number bundled with the decimal precision (``dps``) it was
    computed at.  Binary operations run at the larger of the two operands'
    precisions, so precision is propagated and never silently reduced.

``ArgTrackedNumber``
    A nonzero complex number in polar form ``r * exp(i*theta)`` whose
    argument is an unbounded real, never reduced modulo ``2*pi``.  Raising
    to a power ``t`` is defined as ``exp(t*(log r + i*theta))``, so two
    values with arguments differing by ``2*pi`` are equal as complex numbers
    yet produce powers differing by ``exp(2*pi*i*t)`` — exactly the
    distinction the monodromy computations depend on.

``log_gamma`` follows the classical scheme: upward recurrence until the
argument is deep enough in the right half-plane for the Stirling asymptotic
series, and the sine reflection identity for arguments left of ``Re u = 1/2``.
The branch is the analytic continuation from the positive reals across the
plane cut along the nonpositive reals (the imaginary part is unbounded, not
clamped to ``(-pi, pi]``).  The recurrence/Stirling split is calibrated so
the truncation error stays below ``10**-(D+5)`` at working precision ``D``.

No code path raises a raw complex value to a non-integer power with a
principal-branch rule; every such power goes through an explicit
``(log modulus, tracked argument)`` pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .laurent import to_mpc

_GUARD = 10  # extra working digits inside kernels


def _to_mpc(v) -> mpc:
    if isinstance(v, PreciseComplex):
        return v.value
    return to_mpc(v)


@dataclass(frozen=True)
class PreciseComplex:
    """A complex value together with the decimal precision it carries."""

    value: mpc
    dps: int

    @staticmethod
    def make(v, dps: int) -> PreciseComplex:
        """Build from any scalar (int, float, Fraction, complex, mpc, str)."""
        if dps < 1:
            raise ValueError("dps must be positive")
        with mp.workdps(dps):
            if isinstance(v, str):
                val = mpc(mpf(v))
            else:
                val = _to_mpc(v)
        return PreciseComplex(val, dps)

    def _coerce(self, other) -> PreciseComplex:
        if isinstance(other, PreciseComplex):
            return other
        return PreciseComplex.make(other, self.dps)

    def _binary(self, other, op) -> PreciseComplex:
        other = self._coerce(other)
        dps = max(self.dps, other.dps)
        with mp.workdps(dps):
            return PreciseComplex(op(self.value, other.value), dps)

    def __add__(self, other) -> PreciseComplex:
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other) -> PreciseComplex:
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other) -> PreciseComplex:
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other) -> PreciseComplex:
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other) -> PreciseComplex:
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other) -> PreciseComplex:
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self) -> PreciseComplex:
        return PreciseComplex(-self.value, self.dps)

    @property
    def real(self) -> mpf:
        return self.value.real

    @property
    def imag(self) -> mpf:
        return self.value.imag

    def conjugate(self) -> PreciseComplex:
        with mp.workdps(self.dps):
            return PreciseComplex(mpc(self.value.real, -self.value.imag), self.dps)

    def abs_value(self) -> mpf:
        with mp.workdps(self.dps):
            return abs(self.value)

    def at_dps(self, dps: int) -> PreciseComplex:
        """Restate at another precision (a widening carries no new digits)."""
        with mp.workdps(dps):
            return PreciseComplex(mpc(self.value), dps)

    def exp(self) -> PreciseComplex:
        with mp.workdps(self.dps):
            return PreciseComplex(mp.exp(self.value), self.dps)


@dataclass(frozen=True)
class ArgTrackedNumber:
    """``modulus * exp(i * theta)`` with an unbounded, unreduced argument."""

    modulus: mpf
    theta: mpf
    dps: int

    @staticmethod
    def from_polar(modulus, theta, dps: int) -> ArgTrackedNumber:
        with mp.workdps(dps):
            r = mpf(modulus) if not isinstance(modulus, Fraction) else (
                mpf(modulus.numerator) / mpf(modulus.denominator)
            )
            th = mpf(theta) if not isinstance(theta, Fraction) else (
                mpf(theta.numerator) / mpf(theta.denominator)
            )
        if r < 0:
            raise ValueError("modulus must be nonnegative")
        return ArgTrackedNumber(r, th, dps)

    def value(self) -> PreciseComplex:
        with mp.workdps(self.dps):
            return PreciseComplex(self.modulus * mp.expjpi(self.theta / mp.pi), self.dps)

    def rotated(self, delta) -> ArgTrackedNumber:
        with mp.workdps(self.dps):
            return ArgTrackedNumber(self.modulus, self.theta + mpf(delta), self.dps)

    def rotated_turns(self, k) -> ArgTrackedNumber:
        """Rotate by ``2*pi*k`` with pi taken at this value's own precision.

        Callers should prefer this to ``rotated(2*pi*k)``: it removes the
        trap of a pi constant evaluated at some ambient lower precision.
        """
        with mp.workdps(self.dps):
            if isinstance(k, Fraction):
                k = mpf(k.numerator) / k.denominator
            return ArgTrackedNumber(
                self.modulus, self.theta + 2 * mp.pi * mpf(k), self.dps
            )

    def scaled(self, factor) -> ArgTrackedNumber:
        with mp.workdps(self.dps):
            r = self.modulus * mpf(factor)
        if r < 0:
            raise ValueError("modulus must stay nonnegative")
        return ArgTrackedNumber(r, self.theta, self.dps)

    def __mul__(self, other: ArgTrackedNumber) -> ArgTrackedNumber:
        dps = max(self.dps, other.dps)
        with mp.workdps(dps):
            return ArgTrackedNumber(
                self.modulus * other.modulus, self.theta + other.theta, dps
            )

    def log(self) -> PreciseComplex:
        """``log r + i*theta`` — the tracked logarithm, not a principal one."""
        if self.modulus == 0:
            raise ValueError("log of a zero-modulus value")
        with mp.workdps(self.dps):
            return PreciseComplex(mpc(mp.log(self.modulus), self.theta), self.dps)

    def power(self, t) -> PreciseComplex:
        """``exp(t * (log r + i*theta))`` — the argument enters unreduced."""
        if self.modulus == 0:
            raise ValueError("power of a zero-modulus value")
        dps = max(self.dps, t.dps) if isinstance(t, PreciseComplex) else self.dps
        with mp.workdps(dps):
            tt = _to_mpc(t)
            return PreciseComplex(
                mp.exp(tt * mpc(mp.log(self.modulus), self.theta)), dps
            )

    def power_tracked(self, t) -> ArgTrackedNumber:
        """Real power, staying in polar form: ``(r**t, t*theta)``."""
        with mp.workdps(self.dps):
            t = mpf(t) if not isinstance(t, Fraction) else (
                mpf(t.numerator) / mpf(t.denominator)
            )
            return ArgTrackedNumber(self.modulus**t, t * self.theta, self.dps)


# -- gamma machinery -----------------------------------------------------------


def _is_nonpositive_integer(u: mpc) -> bool:
    return u.imag == 0 and u.real <= 0 and u.real == mp.floor(u.real)


def _stirling_cutoff(dps: int) -> int:
    """Smallest |u| at which the asymptotic series reaches 10**-(dps+5).

    The minimal term of the divergent series at radius R is about
    exp(-2*pi*R), so R = 0.37*(dps + 8) leaves a comfortable margin.
    """
    return max(10, math.ceil(0.37 * (dps + 8)))


def _stirling(u: mpc, dps: int) -> mpc:
    """Asymptotic series for the continued log-gamma; |u| past the cutoff."""
    tol = mpf(10) ** (-(dps + 8))
    acc = (u - mpf(1) / 2) * mp.log(u) - u + mp.log(2 * mp.pi) / 2
    inv2 = 1 / (u * u)
    pw = 1 / u
    for j in range(1, 8 * _stirling_cutoff(dps)):
        term = mp.bernoulli(2 * j) / (2 * j * (2 * j - 1)) * pw
        acc += term
        if abs(term) < tol:
            return acc
        pw *= inv2
    raise ArithmeticError("Stirling series failed to reach tolerance")


def _log_sin(u: mpc) -> mpc:
    """Branch-consistent ``log sin(pi*u)`` for the reflection identity.

    Uses the decomposition ``sin(pi*u) = exp(-i*pi*u) * (exp(2*i*pi*u) - 1)/(2i)``
    for ``Im u >= 0`` (and its conjugate below the axis), which keeps the
    fluctuating factor inside the unit disc where the principal logarithm is
    continuous, and never overflows for large |Im u|.
    """
    if u.imag >= 0:
        return (
            mpc(0, -mp.pi) * u
            + mp.log((mp.expjpi(2 * u) - 1) / mpc(0, 2))
        )
    return mp.conj(_log_sin(mp.conj(u)))


def log_gamma(u: PreciseComplex) -> PreciseComplex:
    """Log-gamma, continued analytically from the positive real axis.

    Poles (nonpositive integers) raise ``ValueError``.  The imaginary part
    is unbounded: this is the continuation, not ``log`` of ``gamma``.
    """
    dps = u.dps
    with mp.workdps(dps + _GUARD):
        val = mpc(u.value)
        if _is_nonpositive_integer(val):
            raise ValueError(f"log_gamma pole at {val}")
        out = _log_gamma_raw(val, dps)
    with mp.workdps(dps):
        return PreciseComplex(mpc(out), dps)


def _log_gamma_raw(val: mpc, dps: int) -> mpc:
    if val.real < mpf(1) / 2:
        # Reflection through sin; the recursive call lands in Re >= 1/2.
        return (
            mp.log(mp.pi) - _log_sin(val) - _log_gamma_raw(1 - val, dps)
        )
    cutoff = _stirling_cutoff(dps)
    shift = 0
    if abs(val) < cutoff:
        shift = int(mp.ceil(mp.sqrt(cutoff**2 - val.imag**2) - val.real)) + 1
    acc = _stirling(val + shift, dps)
    for k in range(shift):
        acc -= mp.log(val + k)
    return acc


def gamma_value(u: PreciseComplex) -> PreciseComplex:
    """``exp(log_gamma(u))``."""
    return log_gamma(u).exp()


def gamma_residue(r: int) -> Fraction:
    """Residue of gamma at ``-r``: ``(-1)**r / r!``."""
    if r < 0:
        raise ValueError(f"gamma_residue requires r >= 0, got {r}")
    return Fraction((-1) ** r, math.factorial(r))


# -- the two analytic kernels --------------------------------------------------


def master_phi(t, p: ArgTrackedNumber, z, n: int) -> PreciseComplex:
    """The master kernel: a tracked power of ``p`` times a gamma product.

    ``(e^{i*pi*(2-n)} p)**t * prod_a Gamma(z_a - t)`` where the power uses
    the exponent ``t * (log|p| + i*(arg p + pi*(2-n)))`` — the rotation by
    ``pi*(2-n)`` enters the tracked argument, never a principal branch.
    """
    if len(z) != n:
        raise ValueError(f"expected {n} parameters, got {len(z)}")
    dps = t.dps if isinstance(t, PreciseComplex) else p.dps
    t = t if isinstance(t, PreciseComplex) else PreciseComplex.make(t, dps)
    with mp.workdps(dps + _GUARD):
        rotated = ArgTrackedNumber(
            p.modulus, p.theta + mp.pi * (2 - n), max(p.dps, dps) + _GUARD
        )
        power_factor = rotated.power(t.at_dps(dps + _GUARD)).value
        gsum = mpc(0)
        for za in z:
            arg = _to_mpc(za) - t.value
            if _is_nonpositive_integer(arg):
                raise ValueError(f"gamma pole at z_a - t = {arg}")
            gsum += _log_gamma_raw(mpc(arg), dps)
        out = power_factor * mp.exp(gsum)
    with mp.workdps(dps):
        return PreciseComplex(mpc(out), dps)


def weight_w(t, y) -> PreciseComplex:
    """``prod_j (y_j - t)`` over the length-(n-1) parameter vector ``y``."""
    dps = t.dps if isinstance(t, PreciseComplex) else mp.dps
    t = t if isinstance(t, PreciseComplex) else PreciseComplex.make(t, dps)
    with mp.workdps(dps):
        acc = mpc(1)
        for yj in y:
            acc *= _to_mpc(yj) - t.value
        return PreciseComplex(acc, dps)
