"""Ray geometry, steepest-descent leading terms, and basis certification.

The angular coordinate is ``phi`` with ``s = r*e^{-2*pi*i*phi}`` and
``p = s^n``; rays sit at the rational angles ``phi = j/(2n)`` and are *even*
or *odd* with the parity of ``j``.  Between consecutive even rays a window of
``n`` consecutive integer labels is *admissible*: those solutions carry the
steepest-descent leading term

    (2*pi)^((n-1)/2)/sqrt(n) * e^{n*omega^m*s}
        * (-omega^m*s)^(sum(z)+(1-n)/2) * prod_{a != I}(z_a - omega^m*s)

at the fixed point ``I``, with the power branch pinned by
``arg(-omega^m*s) = 2*pi*m/n - pi - 2*pi*phi``.

Linear combinations of consecutive solutions are encoded as boundary paths on
the regular n-gon of n-th roots of unity: the direct path ``C^m(l)`` carries
``sum_j (-1)^j s_j(exp z) Psi^{m-j}`` over ``j = 0..m-l``; its reflection
walks the complementary boundary arc and carries the equal combination on
labels ``m-n..l-1`` (equality is the linear relation tying n+1 consecutive
labels).  A path is admissible at an angle when its head vertex has the
strictly largest real part after rotation by ``e^{-2*pi*i*phi}``; the
combination then inherits the head's leading term.

``certify_stokes_basis`` walks the subintervals cut by the rays from a top
angle ``a`` down to ``a - 1/2``, rewriting exactly one path to its reflection
at every even-ray crossing, and checks head admissibility plus the measured
decay of the relative leading-term error at every subinterval midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .braid import build_Q_double_prime, build_Q_prime, canonical_basis
from .geometry import FIXED_POINT
from .laurent import eval_numeric
from .solver import SolutionRequest, SolutionVector, psi_m
from .specfun import ArgTrackedNumber, PreciseComplex

DECAY_BAND = (Fraction(35, 100), Fraction(65, 100))


def default_radii(n: int) -> tuple:
    """Doubling radii for the decay measurement, capped by rank: the solution
    norms grow like ``e^{n*r}``, so large ranks stop at a smaller radius."""
    if n <= 3:
        return (8, 16, 32)
    if n <= 5:
        return (4, 8, 16)
    raise ValueError("decay measurement is supported for ranks up to 5")


# -- exact ray geometry ----------------------------------------------------------


def _as_fraction(phi) -> Fraction:
    if isinstance(phi, float):
        raise TypeError("angles must be exact rationals, not floats")
    return Fraction(phi)


def is_stokes_ray(phi, n: int) -> bool:
    """True when ``2*n*phi`` is an integer."""
    return (2 * n * _as_fraction(phi)).denominator == 1


def ray_index(phi, n: int) -> int:
    """The integer ``j`` with ``phi = j/(2n)``."""
    v = 2 * n * _as_fraction(phi)
    if v.denominator != 1:
        raise ValueError(f"{phi} is not a ray angle for n={n}")
    return int(v)


def is_even_ray(phi, n: int) -> bool:
    return ray_index(phi, n) % 2 == 0


def is_odd_ray(phi, n: int) -> bool:
    return ray_index(phi, n) % 2 == 1


def stokes_rays_between(n: int, lo, hi) -> list:
    """Ray angles strictly inside ``(lo, hi)``, ascending."""
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    if lo >= hi:
        raise ValueError("need lo < hi")
    out = []
    j = math.floor(2 * n * lo) + 1  # smallest index with j/(2n) > lo
    while Fraction(j, 2 * n) < hi:
        out.append(Fraction(j, 2 * n))
        j += 1
    return out


def is_resonant(phi, n: int) -> bool:
    """True when ``n*phi`` is an integer (the window loses one label)."""
    return (n * _as_fraction(phi)).denominator == 1


def admissible_ms(phi, n: int) -> tuple:
    """Labels ``m`` with ``n*phi < m < n*phi + n``: a window of n consecutive
    integers, shrinking to n-1 at the resonant angles."""
    lo = n * _as_fraction(phi)
    if lo.denominator == 1:
        base = int(lo)
        return tuple(range(base + 1, base + n))
    base = math.floor(lo)
    return tuple(range(base + 1, base + n + 1))


def collision_pair_exists(phi, n: int) -> bool:
    """Exact check: is there a pair ``m1 !== m2 (mod n)`` whose rotated
    vertices ``omega^m * e^{-2*pi*i*phi}`` share a real part?

    Cosine equality ``cos(2*pi*u) = cos(2*pi*v)`` holds exactly when
    ``u - v`` or ``u + v`` is an integer, so the test is decided on exact
    fractional angles with no numerics.
    """
    phi = _as_fraction(phi)
    for m1 in range(n):
        for m2 in range(m1 + 1, n):
            u = Fraction(m1, n) - phi
            v = Fraction(m2, n) - phi
            if (u - v) % 1 == 0 or (u + v) % 1 == 0:
                return True
    return False


# -- sector coordinates ------------------------------------------------------------


def _frac_to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class SectorPoint:
    """Radius and exact angle, with ``s = r*e^{-2*pi*i*phi}``."""

    r: Fraction
    phi: Fraction
    dps: int

    @staticmethod
    def make(r, phi, dps: int) -> SectorPoint:
        r = Fraction(r)
        if r <= 0:
            raise ValueError("radius must be positive")
        return SectorPoint(r, _as_fraction(phi), dps)

    def s_tracked(self) -> ArgTrackedNumber:
        with mp.workdps(self.dps):
            return ArgTrackedNumber.from_polar(
                self.r, -2 * mp.pi * _frac_to_mpf(self.phi), self.dps
            )

    def p_tracked(self, n: int) -> ArgTrackedNumber:
        """``p = s^n`` with the tracked argument ``-2*pi*n*phi``."""
        return self.s_tracked().power_tracked(n)

    def rotated_vertex(self, m: int, n: int) -> ArgTrackedNumber:
        """``omega^m * s`` as a tracked number: argument ``2*pi*(m/n - phi)``."""
        with mp.workdps(self.dps):
            return ArgTrackedNumber.from_polar(
                self.r,
                2 * mp.pi * _frac_to_mpf(Fraction(m, n) - self.phi),
                self.dps,
            )


def leading_term(m: int, sector: SectorPoint, z, I: int) -> PreciseComplex:
    """Steepest-descent leading term of the label-``m`` solution at the
    fixed point ``I`` (1-based), on the pinned power branch."""
    n = len(z)
    if m not in admissible_ms(sector.phi, n):
        raise ValueError(f"label m={m} is not admissible at phi={sector.phi}")
    if not 1 <= I <= n:
        raise ValueError(f"fixed-point index {I} out of range 1..{n}")
    work = sector.dps + 15
    with mp.workdps(work):
        lifted = SectorPoint(sector.r, sector.phi, work)
        omega_s = lifted.rotated_vertex(m, n).value().value
        # -omega^m*s with arg(-omega^m*s) = 2*pi*m/n - pi - 2*pi*phi, which
        # lies in (-pi, pi) exactly when m is admissible
        negated = ArgTrackedNumber.from_polar(
            lifted.r,
            2 * mp.pi * _frac_to_mpf(Fraction(m, n) - lifted.phi) - mp.pi,
            work,
        )
        zz = [PreciseComplex.make(v, work).value for v in z]
        exponent = PreciseComplex.make(sum(zz) + mpf(1 - n) / 2, work)
        front = (2 * mp.pi) ** (mpf(n - 1) / 2) / mp.sqrt(n)
        weight = mpc(1)
        for a in range(n):
            if a != I - 1:
                weight *= zz[a] - omega_s
        total = front * mp.exp(n * omega_s) * negated.power(exponent).value * weight
    with mp.workdps(sector.dps):
        return PreciseComplex(mpc(total), sector.dps)


# -- n-gon paths -------------------------------------------------------------------


@dataclass(frozen=True)
class NGonPath:
    """Boundary path with head vertex ``omega^head_label``; the reflected
    variant walks the complementary arc and carries the equal combination."""

    kind: str
    m: int
    l: int
    n: int

    @property
    def head_label(self) -> int:
        return self.m if self.kind == "direct" else self.m - self.n

    def summand_labels(self) -> tuple:
        """Labels of the solutions in the attached combination; these are
        also the vertex exponents the path visits."""
        if self.kind == "direct":
            return tuple(range(self.l, self.m + 1))
        return tuple(range(self.m - self.n, self.l))

    def reflect(self) -> NGonPath:
        return NGonPath(
            "reflected" if self.kind == "direct" else "direct",
            self.m,
            self.l,
            self.n,
        )

    def describe(self) -> str:
        mark = "" if self.kind == "direct" else "~"
        return f"{mark}C^{self.m}({self.l})"


def make_path(m: int, l: int, n: int, kind: str = "direct") -> NGonPath:
    if kind not in ("direct", "reflected"):
        raise ValueError(f"unknown path kind {kind!r}")
    if l > m:
        raise ValueError("tail label must not exceed head label")
    if m - l >= n:
        raise ValueError("path length must be below the rank")
    return NGonPath(kind, m, l, n)


def _exp_elem_syms(req: SolutionRequest, work: int) -> list:
    """Elementary symmetric values of the exponentiated parameters."""
    zt = req.exp_z(work)
    with mp.workdps(work):
        es = [mpc(1)] + [mpc(0)] * req.n
        for v in zt:
            for k in range(req.n, 0, -1):
                es[k] = es[k] + es[k - 1] * v
        return es


def path_solution(
    path: NGonPath, req: SolutionRequest, psi_provider=None
) -> SolutionVector:
    """The combination attached to the path, in the fixed-point basis.

    A direct path sums ``(-1)^j s_j Psi^{m-j}`` over ``j = 0..m-l``; its
    reflection sums ``(-1)^(j-1) s_j Psi^{m-j}`` over the complementary
    range ``j = m-l+1..n``.  ``psi_provider`` (label -> solution vector,
    evaluated at this same request) lets callers share cached evaluations;
    it defaults to the series route.
    """
    if path.n != req.n:
        raise ValueError("rank mismatch between path and request")
    n = req.n
    provider = psi_provider if psi_provider is not None else (
        lambda label: psi_m(label, req)
    )
    work = req.dps + 10
    es = _exp_elem_syms(req, work)
    if path.kind == "direct":
        terms = [((-1) ** j, j, path.m - j) for j in range(path.m - path.l + 1)]
    else:
        terms = [
            ((-1) ** (j - 1), j, path.m - j)
            for j in range(path.m - path.l + 1, n + 1)
        ]
    parts = [(sign, es[j], provider(label)) for sign, j, label in terms]
    with mp.workdps(work):
        acc = [mpc(0)] * n
        for sign, coeff, vec in parts:
            for i in range(n):
                acc[i] += sign * coeff * vec.comps[i]
    with mp.workdps(req.dps):
        comps = tuple(mpc(c) for c in acc)
    return SolutionVector(n, FIXED_POINT, comps, req.z, req.dps, "path")


def is_path_admissible(path: NGonPath, phi) -> bool:
    """Head vertex strictly dominant in real part after rotation by
    ``e^{-2*pi*i*phi}``.

    Ties are detected exactly on the fractional angles (they happen only on
    rays) and raise ``ValueError``; away from ties a 40-digit comparison is
    decisive.
    """
    phi = _as_fraction(phi)
    head = path.head_label
    u_head = Fraction(head, path.n) - phi
    with mp.workdps(40):
        head_re = mp.cos(2 * mp.pi * _frac_to_mpf(u_head))
        for label in path.summand_labels():
            if label == head:
                continue
            u = Fraction(label, path.n) - phi
            if (u_head - u) % 1 == 0 or (u_head + u) % 1 == 0:
                raise ValueError(
                    f"vertex tie at phi={phi}; admissibility is undefined there"
                )
            if mp.cos(2 * mp.pi * _frac_to_mpf(u)) > head_re:
                return False
    return True


# -- interleaved families ------------------------------------------------------------


def q_prime_paths(n: int, k: int = 0) -> list:
    """Path presentation of the first interleaved family on labels
    ``k+1..k+n``; matches ``braid.build_Q_prime`` slot for slot."""
    half = n // 2
    paths = []
    if n % 2:
        for j in range(1, half + 1):
            paths.append(make_path(k + j, k + j, n))
            paths.append(make_path(k + n + 1 - j, k + j + 1, n))
        paths.append(make_path(k + half + 1, k + half + 1, n))
    else:
        for j in range(1, half):
            paths.append(make_path(k + j, k + j, n))
            paths.append(make_path(k + n + 1 - j, k + j + 1, n))
        paths.append(make_path(k + half, k + half, n))
        paths.append(make_path(k + half + 1, k + half + 1, n))
    return paths


def q_double_prime_paths(n: int, k: int = 0) -> list:
    """Path presentation of the second interleaved family on labels
    ``k+1..k+n``; matches ``braid.build_Q_double_prime`` slot for slot."""
    half = n // 2
    paths = []
    for j in range(1, half + 1):
        paths.append(make_path(k + n + 1 - j, k + j, n))
        paths.append(make_path(k + j, k + j, n))
    if n % 2:
        paths.append(make_path(k + half + 1, k + half + 1, n))
    return paths


def _instantiate_basis(symbolic, k: int, req: SolutionRequest) -> tuple:
    """Evaluate module vectors on the labeled solutions: coordinate ``i``
    (0-based) weights the label-``k+i+1`` solution, with the symmetric
    variables evaluated at the exponentiated parameters."""
    n = req.n
    work = req.dps + 10
    zt = req.exp_z(work)
    cache = {}

    def get_psi(label):
        if label not in cache:
            cache[label] = psi_m(label, req)
        return cache[label]

    out = []
    for vec in symbolic.vectors:
        with mp.workdps(work):
            acc = [mpc(0)] * n
            for i in range(n):
                poly = vec.comps[i]
                if poly.is_zero():
                    continue
                coeff = eval_numeric(poly, zt, work)
                sol = get_psi(k + i + 1)
                for t in range(n):
                    acc[t] += coeff * sol.comps[t]
        with mp.workdps(req.dps):
            comps = tuple(mpc(c) for c in acc)
        out.append(SolutionVector(n, FIXED_POINT, comps, req.z, req.dps, "basis"))
    return tuple(out)


def solution_family(symbolic, k: int, req: SolutionRequest) -> tuple:
    """Evaluate an exceptional module basis on the labeled solutions.

    Module coordinate ``i`` (0-based) weights the label ``k+i+1`` solution;
    the symmetric-variable coefficients are evaluated at the exponentiated
    parameters.
    """
    return _instantiate_basis(symbolic, k, req)


def basis_Q_prime(k: int, req: SolutionRequest) -> tuple:
    """The first interleaved solution family on labels ``k+1..k+n``."""
    return _instantiate_basis(build_Q_prime(canonical_basis(req.n)), k, req)


def basis_Q_double_prime(k: int, req: SolutionRequest) -> tuple:
    """The second interleaved solution family on labels ``k+1..k+n``."""
    return _instantiate_basis(build_Q_double_prime(canonical_basis(req.n)), k, req)


# -- asymptotic error measurement ----------------------------------------------------


def _cancellation_guard(n: int, r) -> int:
    """Extra digits needed to evaluate a decaying solution at radius ``r``.

    The series route assembles every solution from parts as large as
    ``e^{n*r}`` while a decaying target can be as small as ``e^{-n*r}``, so
    up to ``2*n*r/ln(10)`` leading digits cancel."""
    return math.ceil(2 * n * float(r) / math.log(10)) + 10


def _boosted_request(n: int, z, r, phi, dps: int) -> SolutionRequest:
    work = dps + _cancellation_guard(n, r)
    sector = SectorPoint.make(r, phi, work)
    return SolutionRequest.make(n, z, sector.p_tracked(n), work, r_max=1600)


def _head_coefficient(path: NGonPath, req: SolutionRequest, work: int):
    """Coefficient of the head summand in the path's combination: 1 for a
    direct path, ``(-1)^(n-1) s_n`` of the exponentiated parameters for a
    reflected one (its head summand is the ``j = n`` term)."""
    if path.kind == "direct":
        return mpc(1)
    es = _exp_elem_syms(req, work)
    with mp.workdps(work):
        return mpc((-1) ** (req.n - 1)) * es[req.n]


def leading_term_error(path: NGonPath, sector: SectorPoint, z, psi_provider=None):
    """Relative leading-term error of the path's combination at the sector
    point: the 2-norm over fixed points of ``value/(c * leading) - 1``,
    where ``c`` is the head summand's coefficient.

    Solutions are evaluated with enough extra working digits to survive the
    exponential cancellation a decaying label suffers on the series route;
    a caller-supplied ``psi_provider`` must deliver values of at least that
    accuracy at this sector's radius.
    """
    n = len(z)
    req = _boosted_request(n, z, sector.r, sector.phi, sector.dps)
    value = path_solution(path, req, psi_provider=psi_provider)
    head = path.head_label
    coeff = _head_coefficient(path, req, sector.dps + 10)
    with mp.workdps(sector.dps + 10):
        total = mpf(0)
        for I in range(1, n + 1):
            lead = coeff * leading_term(head, sector, z, I).value
            total += abs(value.comps[I - 1] / lead - 1) ** 2
        return mp.sqrt(total)


def decay_ratios(path: NGonPath, phi, z, dps: int = 60, radii=None):
    """Leading-term errors at doubling radii and their successive ratios
    ``E(2r)/E(r)``; the error shrinks like ``C/r``, so ratios sit near 1/2."""
    radii = default_radii(len(z)) if radii is None else radii
    return _decay_with_cache(path, _as_fraction(phi), z, dps, radii, {})


def _decay_with_cache(path, phi, z, dps, radii, cache):
    n = len(z)
    errors = []
    for r in radii:
        sector = SectorPoint.make(r, phi, dps)
        req = _boosted_request(n, z, r, phi, dps)

        def provider(label, _req=req, _r=r):
            key = (label, _r)
            if key not in cache:
                cache[key] = psi_m(label, _req)
            return cache[key]

        errors.append(leading_term_error(path, sector, z, psi_provider=provider))
    ratios = tuple(errors[i + 1] / errors[i] for i in range(len(errors) - 1))
    return tuple(errors), ratios


# -- interval walk certification -------------------------------------------------------


class CertificationError(RuntimeError):
    """Structural violation of the interval-walk procedure."""


@dataclass(frozen=True)
class ElementCheck:
    """One family element examined at one subinterval midpoint."""

    path: NGonPath
    head: int
    admissible: bool
    errors: tuple
    ratios: tuple
    ok: bool


@dataclass(frozen=True)
class SubintervalRecord:
    lo: Fraction
    hi: Fraction
    midpoint: Fraction
    window: tuple
    checks: tuple
    ok: bool


@dataclass(frozen=True)
class CertificationReport:
    family: str
    n: int
    k: int
    a: Fraction
    ok: bool
    subintervals: tuple
    rewrites: tuple
    failure: str


def _nearest_ray_distance(a: Fraction, n: int) -> Fraction:
    scaled = (2 * n * a) % 1
    return min(scaled, 1 - scaled) / (2 * n)


def certify_stokes_basis(
    family: str,
    k: int,
    a,
    z,
    dps: int = 60,
    radii=None,
    band=DECAY_BAND,
) -> CertificationReport:
    """Walk the subintervals from ``a`` down to ``a - 1/2`` and check that
    the chosen family stays an asymptotic basis throughout.

    The walk margin is half the distance from ``a`` to the nearest ray; the
    subinterval bounds are the rays strictly inside ``(a - 1/2, a)``.  At
    each even-ray crossing exactly one path must rewrite to its reflection —
    violations of that structure (a rewrite forced at an odd ray, zero or
    several offending paths at an even ray, a second reflection) raise
    ``CertificationError``.  Head admissibility and decay-band failures are
    analytic outcomes, recorded in the report with ``ok=False``.
    """
    n = len(z)
    a = _as_fraction(a)
    if is_stokes_ray(a, n):
        raise ValueError("the top angle must avoid the rays")
    if family == "prime":
        paths = q_prime_paths(n, k)
    elif family == "double_prime":
        paths = q_double_prime_paths(n, k)
    else:
        raise ValueError(f"unknown family {family!r}")
    radii = default_radii(n) if radii is None else radii
    band = tuple(
        _frac_to_mpf(b) if isinstance(b, Fraction) else mpf(b) for b in band
    )

    eps = _nearest_ray_distance(a, n) / 2
    top = a + eps
    bottom = a - Fraction(1, 2) - eps
    rays = stokes_rays_between(n, a - Fraction(1, 2), a)
    bounds = [top] + list(reversed(rays)) + [bottom]

    subrecords = []
    rewrites = []
    failure = ""
    ok = True
    for idx in range(len(bounds) - 1):
        hi, lo = bounds[idx], bounds[idx + 1]
        mid = (lo + hi) / 2
        window = set(admissible_ms(mid, n))
        crossing = None if idx == 0 else bounds[idx]

        offenders = [
            i for i, pth in enumerate(paths) if not set(pth.summand_labels()) <= window
        ]
        if crossing is None:
            if offenders:
                raise CertificationError(
                    "initial presentation uses labels outside the admissible window"
                )
        elif is_even_ray(crossing, n):
            if len(offenders) != 1:
                raise CertificationError(
                    f"even-ray crossing at {crossing} requires exactly one "
                    f"rewrite, found {len(offenders)}"
                )
            i = offenders[0]
            old = paths[i]
            if old.kind != "direct":
                raise CertificationError(
                    f"path {old.describe()} would need a second reflection"
                )
            new = old.reflect()
            if not set(new.summand_labels()) <= window:
                raise CertificationError(
                    f"reflection of {old.describe()} still leaves the window"
                )
            paths[i] = new
            rewrites.append((crossing, old, new))
        else:
            if offenders:
                raise CertificationError(f"rewrite forced at odd ray {crossing}")

        checks = []
        sub_ok = True
        cache = {}
        for pth in paths:
            admissible = is_path_admissible(pth, mid)
            errors: tuple = ()
            ratios: tuple = ()
            good = admissible
            if admissible:
                errors, ratios = _decay_with_cache(pth, mid, z, dps, radii, cache)
                good = all(band[0] <= ratio <= band[1] for ratio in ratios)
            checks.append(
                ElementCheck(pth, pth.head_label, admissible, errors, ratios, good)
            )
            if not good:
                sub_ok = False
                if not failure:
                    why = (
                        "head vertex not dominant"
                        if not admissible
                        else "error decay outside the band"
                    )
                    failure = f"{pth.describe()} on ({lo}, {hi}): {why}"
        subrecords.append(
            SubintervalRecord(lo, hi, mid, tuple(sorted(window)), tuple(checks), sub_ok)
        )
        ok = ok and sub_ok

    return CertificationReport(
        family, n, k, a, ok, tuple(subrecords), tuple(rewrites), failure
    )
