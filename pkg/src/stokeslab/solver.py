"""Evaluators for the q-hypergeometric solution family.

Two independent evaluation routes are provided on purpose, and tests compare
them against each other:

* ``psi_J_jackson`` sums the residue series of the defining contour integral:
  term ``r`` carries ``(-1)^r/r!`` (the gamma residue), the tracked power
  ``(e^{i*pi*(2-n)} p)^{z_J + r}``, the gamma product over the other
  parameters, and the weight-function values at the evaluation point.  The
  gamma factors and powers are advanced by exact one-step ratios, so each
  additional term costs O(n) arithmetic, and the series is truncated once
  five consecutive terms fall below ``eps`` relative to the largest partial
  sum seen (which is also the cancellation monitor).

* ``psi_Q_parabola`` integrates over the right-opening parabola
  ``t = A + s^2 + i s`` with the trapezoid rule.  The contour encloses the
  parameter points ``z_a`` (A sits at least one unit left of all of them);
  the integrand decays superexponentially, so the trapezoid rule converges
  spectrally.  The overall orientation sign was calibrated once against the
  series route (see ``PARABOLA_SIGN``) and is frozen.

The series evaluator watches its own cancellation: if the largest partial
sum towers over the final value, the computation is repeated with enough
extra guard digits to pay for the loss.

``theta_map`` realizes the ring-to-solutions map: the Laurent-polynomial
argument is evaluated at the exponentiated parameters ``e^{2*pi*i*z_a}`` and
the result is the matching combination of the per-fixed-point series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .geometry import FIXED_POINT, CohVector, check_resonance_margin
from .ktheory import KClass, eval_kclass_numeric
from .laurent import to_mpc
from .specfun import ArgTrackedNumber, PreciseComplex, _log_gamma_raw, master_phi

# Orientation/sign of the parabola quadrature, calibrated once against the
# Jackson series at n=2, p=1/2, z=(3/10, -2/5) and frozen; see module tests.
PARABOLA_SIGN = +1

# Sign in the difference relation tying a unit downward shift of one
# parameter to the image under the corresponding shift operator
# (``geometry.qkz_operator``): lowering parameter ``i`` by one sends each
# series solution to QKZ_SHIFT_SIGN times the operator image of the
# unshifted solution, with each side's coordinates taken in the triangular
# basis of its own parameter tuple (``geometry.reframe`` moves vectors
# between parameter frames).  Calibrated numerically at 40 digits for ranks
# 2-4 and every shift index: residuals ~1e-40 with this sign, order one with
# the opposite sign.  The sign is normalization-independent: rescaling every
# solution by a common 1-periodic function of the parameters leaves it
# unchanged, so it is a property of the solution family itself.
QKZ_SHIFT_SIGN = -1

_BASE_GUARD = 15
_MAX_RETRIES = 3


class ConvergenceError(ArithmeticError):
    """Raised when a series or quadrature fails to reach its tolerance."""

    def __init__(self, message: str, last_magnitude=None):
        super().__init__(message)
        self.last_magnitude = last_magnitude


@dataclass(frozen=True)
class SolutionRequest:
    """Evaluation context: rank, parameters, base point, and tolerances."""

    n: int
    z: tuple
    p: ArgTrackedNumber
    dps: int
    r_max: int = 400
    eps: object = None

    @staticmethod
    def make(n, z, p, dps, r_max=400, eps=None) -> SolutionRequest:
        if len(z) != n:
            raise ValueError(f"expected {n} parameters, got {len(z)}")
        if p.modulus == 0:
            raise ValueError("|p| must be positive")
        check_resonance_margin(z, dps)
        with mp.workdps(dps):
            zz = tuple(to_mpc(v) for v in z)
            tol = mpf(10) ** -(dps + 5) if eps is None else mpf(eps)
        return SolutionRequest(n, zz, p, dps, r_max, tol)

    def exp_z(self, work_dps: int) -> tuple:
        """The exponentiated parameters ``e^{2*pi*i*z_a}``."""
        with mp.workdps(work_dps):
            return tuple(mp.expjpi(2 * mpc(v)) for v in self.z)


@dataclass(frozen=True)
class SolutionVector(CohVector):
    """A solution value in the fixed-point basis, tagged with its route."""

    provenance: str = "jackson"


def _series_once(J: int, req: SolutionRequest, work: int, want_deriv: bool):
    """One pass of the residue series at ``work`` digits.

    Returns (components, derivative components or None, max partial norm,
    final norm).  Raises ConvergenceError when r_max is hit.
    """
    n = req.n
    with mp.workdps(work):
        z = [mpc(v) for v in req.z]
        zJ = z[J - 1]
        rotated = ArgTrackedNumber(
            mpf(req.p.modulus), mpf(req.p.theta) + mp.pi * (2 - n), work
        )
        coeff = rotated.power(PreciseComplex.make(zJ, work)).value
        step_factor = rotated.value().value  # multiplies once per r-step
        for a in range(n):
            if a != J - 1:
                coeff *= mp.exp(_log_gamma_raw(z[a] - zJ, work))
        sums = [mpc(0)] * n
        dsums = [mpc(0)] * n if want_deriv else None
        max_partial = mpf(0)
        small_streak = 0
        for r in range(req.r_max + 1):
            term_mag = mpf(0)
            for idx in range(n):
                w = mpc(1)
                for a in range(n):
                    if a != idx:
                        w *= z[a] - zJ - r
                t = coeff * w
                sums[idx] += t
                if want_deriv:
                    dsums[idx] += t * (zJ + r)
                am = abs(t)
                if am > term_mag:
                    term_mag = am
            norm_now = max(abs(s) for s in sums)
            if norm_now > max_partial:
                max_partial = norm_now
            if term_mag < req.eps * (max_partial if max_partial > 0 else mpf(1)):
                small_streak += 1
                if small_streak >= 5:
                    final = max(max(abs(s) for s in sums), mpf(10) ** -(work * 2))
                    return sums, dsums, max_partial, final
            else:
                small_streak = 0
            # advance the shared coefficient from r to r+1
            denom = -(r + 1)
            for a in range(n):
                if a != J - 1:
                    denom *= z[a] - zJ - (r + 1)
            coeff = coeff * step_factor / denom
        raise ConvergenceError(
            f"series for component {J} did not settle within {req.r_max} terms",
            last_magnitude=term_mag,
        )


def _jackson_components(J: int, req: SolutionRequest, want_deriv: bool):
    """Cancellation-aware evaluation: retries with more guard digits."""
    guard = _BASE_GUARD
    for _ in range(_MAX_RETRIES + 1):
        work = req.dps + guard
        sums, dsums, max_partial, final = _series_once(J, req, work, want_deriv)
        with mp.workdps(work):
            lost = mp.log10(max_partial / final) if final > 0 else mpf(work)
        if lost < guard - 8:
            with mp.workdps(req.dps):
                comps = tuple(mpc(s) for s in sums)
                dcomps = tuple(mpc(s) for s in dsums) if want_deriv else None
            return comps, dcomps
        guard = int(lost) + 20
    raise ConvergenceError(
        f"cancellation exceeded the retry budget for component {J}"
    )


def psi_J_jackson(J: int, req: SolutionRequest) -> SolutionVector:
    """The J-th residue-series solution, in the fixed-point basis."""
    if not 1 <= J <= req.n:
        raise ValueError(f"index {J} out of range 1..{req.n}")
    comps, _ = _jackson_components(J, req, want_deriv=False)
    return SolutionVector(req.n, FIXED_POINT, comps, req.z, req.dps, "jackson")


def psi_J_jackson_with_log_derivative(
    J: int, req: SolutionRequest
) -> tuple[SolutionVector, SolutionVector]:
    """The solution and ``p d/dp`` of it, from one shared series pass.

    Each series term is an exact power ``(...)^{z_J + r}`` of ``p``, so the
    derivative series just carries the extra factor ``z_J + r``.
    """
    if not 1 <= J <= req.n:
        raise ValueError(f"index {J} out of range 1..{req.n}")
    comps, dcomps = _jackson_components(J, req, want_deriv=True)
    return (
        SolutionVector(req.n, FIXED_POINT, comps, req.z, req.dps, "jackson"),
        SolutionVector(req.n, FIXED_POINT, dcomps, req.z, req.dps, "jackson"),
    )


def _combine(weights, parts, req: SolutionRequest, provenance: str) -> SolutionVector:
    with mp.workdps(req.dps + _BASE_GUARD):
        comps = tuple(
            sum((weights[J] * parts[J].comps[idx] for J in range(req.n)), mpc(0))
            for idx in range(req.n)
        )
    with mp.workdps(req.dps):
        comps = tuple(mpc(c) for c in comps)
    return SolutionVector(req.n, FIXED_POINT, comps, req.z, req.dps, provenance)


def _kclass_weights(Q: KClass, req: SolutionRequest, work: int) -> list:
    zt = req.exp_z(work)
    return [
        eval_kclass_numeric(Q, zt[J], zt, work) for J in range(req.n)
    ]


def psi_Q_jackson(Q: KClass, req: SolutionRequest) -> SolutionVector:
    """The series solution attached to a ring class.

    The class is evaluated at ``X = e^{2*pi*i*z_J}``, ``Z_a = e^{2*pi*i*z_a}``
    and the values weight the per-fixed-point series.
    """
    if Q.n != req.n:
        raise ValueError("rank mismatch between class and request")
    work = req.dps + _BASE_GUARD
    weights = _kclass_weights(Q, req, work)
    parts = [psi_J_jackson(J, req) for J in range(1, req.n + 1)]
    return _combine(weights, parts, req, "jackson")


def psi_m(m: int, req: SolutionRequest) -> SolutionVector:
    """The solution labeled by an integer: the class ``X^{m-1}``.

    For ``m`` outside ``[1, n]`` the power is evaluated directly (without
    reduction), so the linear relation among ``n+1`` consecutive labels is a
    checkable statement rather than an identity built into the code.
    """
    return psi_Q_jackson(KClass.x_power(m - 1, req.n), req)


def theta_map(f: KClass, req: SolutionRequest) -> SolutionVector:
    """The module map from ring classes to solutions (series route)."""
    return psi_Q_jackson(f, req)


# -- parabola quadrature ---------------------------------------------------------


def default_parabola_apex(req: SolutionRequest, work: int):
    """``A`` with every parameter point strictly inside the parabola."""
    with mp.workdps(work):
        return min(mpc(v).real - mpc(v).imag ** 2 for v in req.z) - 1


def psi_Q_parabola(
    Q: KClass,
    req: SolutionRequest,
    s_max=None,
    step=None,
    apex=None,
) -> SolutionVector:
    """Quadrature route: trapezoid sums over ``t = A + s^2 + i s``.

    ``step`` defaults to 0.025 (small enough that the trapezoid
    discretization error sits below the working precision for the supported
    moduli |p| <= 10); ``s_max`` adapts until the integrand falls
    below ``10^-(D+10)`` of its peak unless given explicitly.  ``apex``
    overrides ``A`` (used by the contour-independence tests).
    """
    if Q.n != req.n:
        raise ValueError("rank mismatch between class and request")
    n = req.n
    work = req.dps + 2 * _BASE_GUARD
    with mp.workdps(work):
        z = [mpc(v) for v in req.z]
        zt = req.exp_z(work)
        A = mpf(apex) if apex is not None else default_parabola_apex(req, work)
        if A > default_parabola_apex(req, work):
            raise ValueError("apex does not enclose all parameter points")
        h = mpf(step) if step is not None else mpf("0.025")
        tail_cut = mpf(10) ** -(req.dps + 10)
        p_work = ArgTrackedNumber(mpf(req.p.modulus), mpf(req.p.theta), work)

        def integrand(s):
            t = A + s * s + mpc(0, 1) * s
            tp = PreciseComplex.make(t, work)
            phi = master_phi(tp, p_work, z, n).value
            qv = eval_kclass_numeric(Q, mp.expjpi(2 * t), zt, work)
            jac = 2 * s + mpc(0, 1)
            base = phi * qv * jac
            return [
                base * mp.fprod([z[a] - t for a in range(n) if a != idx])
                for idx in range(n)
            ]

        sums = [mpc(0)] * n
        center = integrand(mpf(0))
        for idx in range(n):
            sums[idx] += center[idx]
        peak = max(abs(v) for v in center)
        hard_cap = int((mpf(60) if s_max is None else mpf(s_max)) / h)
        if hard_cap < 1:
            raise ValueError("s_max must allow at least one step per direction")
        for direction in (1, -1):
            streak = 0
            k = 1
            while k <= hard_cap:
                vals = integrand(direction * k * h)
                mag = mpf(0)
                for idx in range(n):
                    sums[idx] += vals[idx]
                    if abs(vals[idx]) > mag:
                        mag = abs(vals[idx])
                if mag > peak:
                    peak = mag
                if s_max is None:
                    if mag < tail_cut * peak:
                        streak += 1
                        if streak >= 3:
                            break
                    else:
                        streak = 0
                k += 1
            else:
                # Reached the sample cap without the adaptive early exit:
                # honest only if the last sample is already below the tail
                # tolerance (an explicitly given range must cover the decay).
                if mag > tail_cut * peak:
                    raise ConvergenceError(
                        "parabola tail above tolerance at the sample cap",
                        last_magnitude=mag,
                    )
        comps = [
            PARABOLA_SIGN * h * s / (2 * mp.pi * mpc(0, 1)) for s in sums
        ]
    with mp.workdps(req.dps):
        comps = tuple(mpc(c) for c in comps)
    return SolutionVector(req.n, FIXED_POINT, comps, req.z, req.dps, "parabola")


# -- solution basis --------------------------------------------------------------


@dataclass(frozen=True)
class BasisMatrix:
    """Columns are consecutive labeled solutions in the fixed-point basis."""

    n: int
    first_label: int
    entries: tuple  # rows
    determinant: mpc
    condition: mpf
    singular: bool


def solution_basis_matrix(req: SolutionRequest, first_label: int = 1) -> BasisMatrix:
    """Matrix whose columns are the solutions labeled ``first_label .. +n-1``."""
    cols = [psi_m(m, req) for m in range(first_label, first_label + req.n)]
    n = req.n
    with mp.workdps(req.dps):
        rows = tuple(
            tuple(cols[j].comps[i] for j in range(n)) for i in range(n)
        )
        m = mp.matrix([[rows[i][j] for j in range(n)] for i in range(n)])
        det = mp.det(m)
        scale = max(max(abs(e) for e in row) for row in rows)
        singular = abs(det) <= mpf(10) ** -(req.dps - 10) * max(scale, mpf(1)) ** n
        if singular:
            cond = mpf("inf")
        else:
            inv = m**-1
            cond = mp.mnorm(m, 1) * mp.mnorm(inv, 1)
    return BasisMatrix(n, first_label, rows, det, cond, singular)
