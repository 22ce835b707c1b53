"""Cohomology bases, quantum multiplication, R-matrices, and qKZ operators.

Vectors live in one of three bases of the same rank-``n`` space:

``x_basis``
    Coefficients against ``1, x, ..., x^{n-1}`` where ``x`` is the degree-one
    generator of the cohomology ring.
``g_basis``
    Coefficients against ``g_i = prod_{a=i+1..n} (x - z_a)``; in particular
    ``g_n = 1`` and ``g_1`` has degree ``n-1``.
``fixed_point``
    Values at the ``n`` torus fixed points, i.e. evaluations at ``x = z_I``.

Operators are plain ``n x n`` matrices tagged with the basis they act in.
The R-matrices are elementary in the g-basis; the qKZ operators are the
standard ordered products of R-matrices around a diagonal ``p``-power whose
exponent uses the tracked argument of ``p`` (never an argument reduced to a
principal range — coherence of the monodromy checks depends on this).

Yang-Baxter and inversion are polynomial identities in the spectral
parameters, so the module also exposes symbolic R-matrices over exact
two-variable polynomials; the numeric and symbolic constructions share their
shape by design.

Numeric operator constructors enforce the resonance margin on ``z``: every
pairwise difference must stay at least ``0.25`` away from every integer of
relevant size.  This keeps gamma evaluations and basis conversions
well-conditioned everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .laurent import LaurentPoly, to_mpc
from .specfun import ArgTrackedNumber, PreciseComplex, log_gamma

X_BASIS = "x_basis"
G_BASIS = "g_basis"
FIXED_POINT = "fixed_point"
_TAGS = (X_BASIS, G_BASIS, FIXED_POINT)

RESONANCE_MARGIN = mpf(1) / 4


def check_resonance_margin(z, dps: int, margin=RESONANCE_MARGIN) -> None:
    """Reject ``z`` whose pairwise differences come too close to integers.

    The window of integers tested is ``|m| <= ceil(max |z_a - z_b|) + 2``.
    """
    with mp.workdps(dps):
        zz = [to_mpc(v) for v in z]
        diffs = [za - zb for i, za in enumerate(zz) for j, zb in enumerate(zz) if i != j]
        if not diffs:
            return
        m_max = int(mp.ceil(max(abs(d) for d in diffs))) + 2
        worst = min(
            abs(d - m) for d in diffs for m in range(-m_max, m_max + 1)
        )
        if worst < margin:
            raise ValueError(
                f"parameter vector too close to resonance: margin {worst} < {margin}"
            )


@dataclass(frozen=True)
class CohVector:
    """A vector in one of the three bases, with its numeric context."""

    n: int
    basis_tag: str
    comps: tuple
    z: tuple
    dps: int

    def __post_init__(self):
        if self.basis_tag not in _TAGS:
            raise ValueError(f"unknown basis tag {self.basis_tag!r}")
        if len(self.comps) != self.n or len(self.z) != self.n:
            raise ValueError("component/context length must equal n")

    @staticmethod
    def make(n: int, basis_tag: str, comps, z, dps: int) -> CohVector:
        with mp.workdps(dps):
            return CohVector(
                n, basis_tag, tuple(to_mpc(c) for c in comps),
                tuple(to_mpc(v) for v in z), dps,
            )


@dataclass(frozen=True)
class OperatorMatrix:
    """A square matrix acting on ``CohVector``s of a matching basis tag."""

    n: int
    basis_tag: str
    entries: tuple  # tuple of row tuples
    z: tuple
    dps: int

    def __post_init__(self):
        if self.basis_tag not in _TAGS:
            raise ValueError(f"unknown basis tag {self.basis_tag!r}")
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("entries must form an n x n matrix")

    @staticmethod
    def identity(n: int, basis_tag: str, z, dps: int) -> OperatorMatrix:
        with mp.workdps(dps):
            rows = tuple(
                tuple(mpc(1) if i == j else mpc(0) for j in range(n)) for i in range(n)
            )
            return OperatorMatrix(n, basis_tag, rows, tuple(to_mpc(v) for v in z), dps)

    def apply(self, v: CohVector) -> CohVector:
        if v.basis_tag != self.basis_tag:
            raise ValueError(
                f"basis mismatch: operator {self.basis_tag}, vector {v.basis_tag}"
            )
        if v.n != self.n:
            raise ValueError("rank mismatch")
        with mp.workdps(max(self.dps, v.dps)):
            comps = tuple(
                sum((self.entries[i][j] * v.comps[j] for j in range(self.n)), mpc(0))
                for i in range(self.n)
            )
            return CohVector(self.n, self.basis_tag, comps, v.z, max(self.dps, v.dps))

    def compose(self, other: OperatorMatrix) -> OperatorMatrix:
        """Matrix product ``self @ other`` (apply ``other`` first)."""
        if self.basis_tag != other.basis_tag or self.n != other.n:
            raise ValueError("operator shape/basis mismatch")
        dps = max(self.dps, other.dps)
        with mp.workdps(dps):
            rows = tuple(
                tuple(
                    sum(
                        (self.entries[i][k] * other.entries[k][j] for k in range(self.n)),
                        mpc(0),
                    )
                    for j in range(self.n)
                )
                for i in range(self.n)
            )
            return OperatorMatrix(self.n, self.basis_tag, rows, self.z, dps)

    def determinant(self) -> mpc:
        with mp.workdps(self.dps):
            m = mp.matrix([[self.entries[i][j] for j in range(self.n)]
                           for i in range(self.n)])
            return mp.det(m)


# -- quantum multiplication ------------------------------------------------------


def _elem_sym_values(z, k: int) -> mpc:
    """Elementary symmetric value s_k(z) (numeric, at ambient precision)."""
    n = len(z)
    acc = [mpc(1)] + [mpc(0)] * n
    for za in z:
        for j in range(min(n, k), 0, -1):
            acc[j] += za * acc[j - 1]
    return acc[k]


def quantum_mult_matrix(
    p: ArgTrackedNumber, z, basis_tag: str, dps: int
) -> OperatorMatrix:
    """Multiplication by the degree-one generator, deformed by ``p``.

    In the monomial basis the matrix is the companion matrix of
    ``x^n - s_1 x^{n-1} + ... - (-1)^n s_n - p``; in the g-basis it is
    bidiagonal with ``z_i`` on the diagonal, ones above, and ``p`` in the
    lower-left corner.
    """
    n = len(z)
    if basis_tag not in (X_BASIS, G_BASIS):
        raise ValueError("quantum multiplication acts in x_basis or g_basis")
    check_resonance_margin(z, dps)
    with mp.workdps(dps):
        zz = [to_mpc(v) for v in z]
        pv = p.value().value
        rows = [[mpc(0)] * n for _ in range(n)]
        if basis_tag == X_BASIS:
            for j in range(n - 1):
                rows[j + 1][j] = mpc(1)
            for i in range(1, n + 1):
                rows[n - i][n - 1] = (-1) ** (i - 1) * _elem_sym_values(zz, i)
            rows[0][n - 1] += pv
        else:
            for i in range(n):
                rows[i][i] = zz[i]
            for i in range(1, n):
                rows[i - 1][i] = mpc(1)
            rows[n - 1][0] += pv
        return OperatorMatrix(
            n, basis_tag, tuple(tuple(r) for r in rows), tuple(zz), dps
        )


# -- R-matrices and qKZ operators --------------------------------------------------


def r_matrix(a: int, b: int, u, n: int, z, dps: int) -> OperatorMatrix:
    """The elementary g-basis R-matrix ``R_{ab}(u)`` (1-based indices).

    Fixes ``g_i`` for ``i`` outside ``{a, b}``, sends ``g_b`` to ``g_a`` and
    ``g_a`` to ``g_b + u g_a``.
    """
    if a == b:
        raise ValueError("R-matrix needs distinct indices")
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError("index out of range")
    with mp.workdps(dps):
        uu = to_mpc(u)
        rows = [[mpc(0)] * n for _ in range(n)]
        for i in range(n):
            if i not in (a - 1, b - 1):
                rows[i][i] = mpc(1)
        rows[a - 1][b - 1] = mpc(1)
        rows[b - 1][a - 1] = mpc(1)
        rows[a - 1][a - 1] = uu
        return OperatorMatrix(
            n, G_BASIS, tuple(tuple(r) for r in rows), tuple(to_mpc(v) for v in z), dps
        )


def r_matrix_symbolic(a: int, b: int, u: LaurentPoly, n: int) -> tuple:
    """Symbolic R-matrix over exact polynomials; same layout as :func:`r_matrix`.

    ``u`` is any exact polynomial (e.g. a variable or a difference of two),
    and the result is an ``n x n`` tuple-of-tuples of polynomials in the same
    ring, suitable for exact identity checks.
    """
    if a == b:
        raise ValueError("R-matrix needs distinct indices")
    nv = u.nvars
    zero, one = LaurentPoly.zero(nv), LaurentPoly.one(nv)
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        if i not in (a - 1, b - 1):
            rows[i][i] = one
    rows[a - 1][b - 1] = one
    rows[b - 1][a - 1] = one
    rows[a - 1][a - 1] = u
    return tuple(tuple(r) for r in rows)


def symbolic_mat_mul(m1: tuple, m2: tuple) -> tuple:
    n = len(m1)
    return tuple(
        tuple(
            sum((m1[i][k] * m2[k][j] for k in range(n)),
                LaurentPoly.zero(m1[0][0].nvars))
            for j in range(n)
        )
        for i in range(n)
    )


def qkz_operator(i: int, p: ArgTrackedNumber, z, dps: int) -> OperatorMatrix:
    """The i-th qKZ operator (g-basis), 1-based.

    The ordered product ``R_{i,i-1}(z_i - z_{i-1} - 1) ... R_{i,1}(z_i - z_1 - 1)
    . p^{-E_i} . R_{i,n}(z_i - z_n) ... R_{i,i+1}(z_i - z_{i+1})`` where
    ``p^{-E_i}`` is diagonal with ``exp(-(log|p| + i arg p))`` in slot ``i``
    — the tracked argument of ``p`` enters the exponent unreduced.
    """
    n = len(z)
    if not 1 <= i <= n:
        raise ValueError(f"operator index {i} out of range 1..{n}")
    if p.modulus == 0:
        raise ValueError("p must be nonzero")
    check_resonance_margin(z, dps)
    with mp.workdps(dps):
        zz = [to_mpc(v) for v in z]
        acc = None
        # left block: a = i-1 down to 1, arguments shifted by -1
        for a in range(i - 1, 0, -1):
            f = r_matrix(i, a, zz[i - 1] - zz[a - 1] - 1, n, zz, dps)
            acc = f if acc is None else acc.compose(f)
        # diagonal p^{-E_i} with the tracked argument
        p_inv = p.power(PreciseComplex.make(-1, dps)).value
        rows = [[mpc(1) if r == c else mpc(0) for c in range(n)] for r in range(n)]
        rows[i - 1][i - 1] = p_inv
        diag = OperatorMatrix(n, G_BASIS, tuple(tuple(r) for r in rows), tuple(zz), dps)
        acc = diag if acc is None else acc.compose(diag)
        # right block: a = n down to i+1, unshifted arguments
        for a in range(n, i, -1):
            f = r_matrix(i, a, zz[i - 1] - zz[a - 1], n, zz, dps)
            acc = acc.compose(f)
        return acc


# -- basis conversion ---------------------------------------------------------------


def _g_in_x_coords(z, n: int) -> list:
    """Columns: coefficients of ``g_i`` against ``1, x, ..., x^{n-1}``."""
    cols = []
    for i in range(1, n + 1):
        coeffs = [mpc(1)] + [mpc(0)] * (n - 1)  # the constant polynomial 1
        deg = 0
        for a in range(i + 1, n + 1):
            deg += 1
            for k in range(deg, 0, -1):
                coeffs[k] = (coeffs[k - 1] if k >= 1 else mpc(0)) - z[a - 1] * coeffs[k]
            coeffs[0] = -z[a - 1] * coeffs[0]
        cols.append(coeffs)
    return cols


def _check_distinct(z, dps: int) -> None:
    with mp.workdps(dps):
        zz = [to_mpc(v) for v in z]
        for i in range(len(zz)):
            for j in range(i + 1, len(zz)):
                if zz[i] == zz[j]:
                    raise ValueError("coincident parameters make conversion singular")


def basis_convert(v: CohVector, target_tag: str) -> CohVector:
    """Convert between the three bases (round trips hold to precision)."""
    if target_tag not in _TAGS:
        raise ValueError(f"unknown basis tag {target_tag!r}")
    if target_tag == v.basis_tag:
        return v
    _check_distinct(v.z, v.dps)
    n, dps = v.n, v.dps
    with mp.workdps(dps + 10):
        zz = [mpc(c) for c in v.z]
        comps = [mpc(c) for c in v.comps]

        def x_to_fp(cs):
            return [
                sum((cs[k] * zz[I] ** k for k in range(n)), mpc(0)) for I in range(n)
            ]

        def fp_to_x(vals):
            vand = mp.matrix([[zz[I] ** k for k in range(n)] for I in range(n)])
            sol = mp.lu_solve(vand, mp.matrix(vals))
            return [sol[k] for k in range(n)]

        gcols = _g_in_x_coords(zz, n)

        def g_to_x(cs):
            out = [mpc(0)] * n
            for i in range(n):
                for k in range(n):
                    out[k] += cs[i] * gcols[i][k]
            return out

        def x_to_g(cs):
            gmat = mp.matrix([[gcols[i][k] for i in range(n)] for k in range(n)])
            sol = mp.lu_solve(gmat, mp.matrix(cs))
            return [sol[i] for i in range(n)]

        if v.basis_tag == X_BASIS:
            out = x_to_fp(comps) if target_tag == FIXED_POINT else x_to_g(comps)
        elif v.basis_tag == G_BASIS:
            xc = g_to_x(comps)
            out = xc if target_tag == X_BASIS else x_to_fp(xc)
        else:
            xc = fp_to_x(comps)
            out = xc if target_tag == X_BASIS else x_to_g(xc)
    with mp.workdps(dps):
        return CohVector(n, target_tag, tuple(mpc(c) for c in out), v.z, dps)


def reframe(v: CohVector, new_z, target_tag: str | None = None) -> CohVector:
    """Express ``v`` relative to a different parameter tuple.

    Only the monomial basis is parameter-free, so the vector is routed
    through it: convert to the monomial basis in the old frame, re-tag the
    coordinates with ``new_z``, and convert onward to ``target_tag``
    (defaults to the original basis).  This is the explicit conversion used
    when comparing vectors attached to shifted parameter tuples.
    """
    tag = v.basis_tag if target_tag is None else target_tag
    x = basis_convert(v, X_BASIS)
    with mp.workdps(v.dps):
        moved = CohVector(
            v.n, X_BASIS, x.comps, tuple(to_mpc(c) for c in new_z), v.dps
        )
    return basis_convert(moved, tag)


def gamma_class_at_fixed_point(J: int, z, dps: int) -> mpc:
    """``prod_{a != J} Gamma(1 + z_a - z_J)`` (1-based ``J``)."""
    n = len(z)
    if not 1 <= J <= n:
        raise ValueError(f"fixed point index {J} out of range 1..{n}")
    with mp.workdps(dps + 10):
        zz = [to_mpc(v) for v in z]
        acc = mpc(1)
        for a in range(n):
            if a == J - 1:
                continue
            u = 1 + zz[a] - zz[J - 1]
            acc *= log_gamma(PreciseComplex.make(u, dps)).exp().value
    with mp.workdps(dps):
        return mpc(acc)
