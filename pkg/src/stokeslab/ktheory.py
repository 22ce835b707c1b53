"""Equivariant K-theory ring of projective space P^{n-1} and its pairing.

A ``KClass`` is a Laurent polynomial in the tautological class ``X`` whose
coefficients are exact Laurent polynomials in the torus parameters
``Z_1..Z_n`` (see :mod:`stokeslab.laurent`).  The defining relation is

    (X - Z_1)(X - Z_2)...(X - Z_n) = 0,

so every class has a unique reduced representative of X-degree in
``[0, n-1]``; :func:`reduce` computes it, eliminating high powers through
``X^n = s_1 X^{n-1} - s_2 X^{n-2} + ... + (-1)^{n-1} s_n`` and negative
powers through the inverse relation obtained by dividing by ``s_n X``.

``pushforward`` is the proper pushforward to a point.  On reduced
representatives it reads off the constant coefficient: the localization sum
``sum_a f(Z_a) / prod_{b != a} (1 - Z_a/Z_b)`` kills ``X^1..X^{n-1}`` and
sends ``1`` to ``1``.  The localization sum itself, evaluated with exact
rational arithmetic at user-chosen parameter values, is kept as an
independent oracle (:func:`pushforward_localization`).

``form_A`` is the sesquilinear pairing with Gram values
``A(X^i, X^j) = m_{j-i}`` for ``i <= j`` (complete homogeneous symmetric
polynomial) and ``0`` for ``j < i < j + n``; the first argument's ``Z``
coefficients are conjugated by ``Z -> Z^{-1}``.  Its independent oracle
(:func:`form_A_residue_oracle`) is the localization sum of
``f(X^{-1}, Z^{-1}) g(X, Z)`` weighted by ``Z_a^{n-1} / prod(Z_a - Z_b)``.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp, mpc

from .laurent import (
    LaurentPoly,
    bar,
    complete_hom,
    elem_sym,
    eval_exact,
    eval_numeric,
    parse_text,
    to_mpc,
    to_text,
)


class KClass:
    """Laurent polynomial in ``X`` with coefficients in ``Q[Z^{+-1}]``."""

    __slots__ = ("n", "_coeffs")

    def __init__(self, n: int, coeffs: dict[int, LaurentPoly] | None = None):
        if n < 2:
            raise ValueError("need at least two torus parameters")
        clean: dict[int, LaurentPoly] = {}
        for deg, poly in (coeffs or {}).items():
            if poly.nvars != n:
                raise ValueError(f"coefficient at X^{deg} has nvars != {n}")
            if not poly.is_zero():
                clean[int(deg)] = poly
        self.n = n
        self._coeffs = clean

    # -- construction ----------------------------------------------------------

    @staticmethod
    def zero(n: int) -> KClass:
        return KClass(n, {})

    @staticmethod
    def one(n: int) -> KClass:
        return KClass(n, {0: LaurentPoly.one(n)})

    @staticmethod
    def x_power(d: int, n: int) -> KClass:
        return KClass(n, {d: LaurentPoly.one(n)})

    @staticmethod
    def from_scalar(c: LaurentPoly) -> KClass:
        return KClass(c.nvars, {0: c})

    # -- views -----------------------------------------------------------------

    def coeff(self, deg: int) -> LaurentPoly:
        return self._coeffs.get(deg, LaurentPoly.zero(self.n))

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_reduced(self) -> bool:
        return all(0 <= d < self.n for d in self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KClass):
            return NotImplemented
        return self.n == other.n and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"KClass({self.n}, {kclass_to_text(self)!r})"

    # -- linear structure --------------------------------------------------------

    def _check(self, other: KClass) -> None:
        if self.n != other.n:
            raise ValueError(f"parameter count mismatch: {self.n} != {other.n}")

    def __add__(self, other: KClass) -> KClass:
        self._check(other)
        out = dict(self._coeffs)
        for d, c in other._coeffs.items():
            out[d] = out.get(d, LaurentPoly.zero(self.n)) + c
        return KClass(self.n, out)

    def __neg__(self) -> KClass:
        return KClass(self.n, {d: -c for d, c in self._coeffs.items()})

    def __sub__(self, other: KClass) -> KClass:
        return self + (-other)

    def __mul__(self, other: KClass) -> KClass:
        self._check(other)
        out: dict[int, LaurentPoly] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                d = d1 + d2
                out[d] = out.get(d, LaurentPoly.zero(self.n)) + c1 * c2
        return KClass(self.n, out)

    def scale(self, c) -> KClass:
        """Multiply by a scalar: a ``LaurentPoly`` in Z or a rational."""
        if isinstance(c, LaurentPoly):
            return KClass(self.n, {d: c * v for d, v in self._coeffs.items()})
        return KClass(self.n, {d: v.scale(c) for d, v in self._coeffs.items()})


def bar_k(f: KClass) -> KClass:
    """The involution ``X -> X^{-1}``, ``Z -> Z^{-1}`` (before reduction)."""
    return KClass(f.n, {-d: bar(c) for d, c in f._coeffs.items()})


def reduce(f: KClass) -> KClass:
    """Unique representative with X-degrees in ``[0, n-1]``."""
    n = f.n
    coeffs = {d: c for d, c in f._coeffs.items()}
    # X^n = sum_{k=1..n} (-1)^{k-1} s_k X^{n-k}
    top = [elem_sym(k, n).scale(Fraction((-1) ** (k - 1))) for k in range(1, n + 1)]
    while coeffs and max(coeffs) >= n:
        d = max(coeffs)
        c = coeffs.pop(d)
        for k in range(1, n + 1):
            key = d - k
            coeffs[key] = coeffs.get(key, LaurentPoly.zero(n)) + c * top[k - 1]
            if coeffs[key].is_zero():
                del coeffs[key]
    # X^{-1} = (-1)^{n-1} s_n(Z^{-1}) sum_{i=0..n-1} (-1)^i s_i X^{n-1-i}
    sn_inv = bar(elem_sym(n, n)).scale(Fraction((-1) ** (n - 1)))
    bottom = [sn_inv * elem_sym(i, n).scale(Fraction((-1) ** i)) for i in range(n)]
    while coeffs and min(coeffs) < 0:
        d = min(coeffs)
        c = coeffs.pop(d)
        for i in range(n):
            key = d + n - i
            coeffs[key] = coeffs.get(key, LaurentPoly.zero(n)) + c * bottom[i]
            if coeffs[key].is_zero():
                del coeffs[key]
    return KClass(n, coeffs)


def kmul(f: KClass, g: KClass) -> KClass:
    """Product in the quotient ring (reduced representative)."""
    return reduce(f * g)


def pushforward(f: KClass) -> LaurentPoly:
    """Pushforward to a point: the constant coefficient of the reduced class."""
    return reduce(f).coeff(0)


def pushforward_localization(f: KClass, zvals) -> Fraction:
    """Independent oracle: exact localization sum at rational parameters.

    ``zvals`` must be distinct nonzero rationals, one per torus parameter.
    """
    zvals = [Fraction(v) for v in zvals]
    _require_distinct_nonzero(zvals, f.n)
    total = Fraction(0)
    for a in range(f.n):
        weight = Fraction(1)
        for b in range(f.n):
            if b != a:
                weight *= 1 - zvals[a] / zvals[b]
        total += eval_kclass(f, zvals[a], zvals) / weight
    return total


def form_A(f: KClass, g: KClass) -> LaurentPoly:
    """Sesquilinear pairing, conjugate-linear in ``f``.

    Computed from the Gram values ``A(X^i, X^j) = m_{j-i}`` (``i <= j``) on
    reduced representatives; pairs with ``i > j`` contribute nothing.
    """
    f = reduce(f)
    g = reduce(g)
    n = f.n
    out = LaurentPoly.zero(n)
    for i in range(n):
        ai = f.coeff(i)
        if ai.is_zero():
            continue
        for j in range(i, n):
            bj = g.coeff(j)
            if bj.is_zero():
                continue
            out = out + bar(ai) * bj * complete_hom(j - i, n)
    return out


def form_A_residue_oracle(f: KClass, g: KClass, zvals, precision: int = 40):
    """Independent numeric oracle for :func:`form_A`.

    Evaluates ``sum_a f(X=1/Z_a, Z^{-1}) g(X=Z_a, Z) / prod_{b != a}
    (1 - Z_b/Z_a)`` with mpmath at ``precision`` decimal digits; ``zvals``
    may be complex but must be distinct and nonzero.
    """
    if f.n != g.n:
        raise ValueError("parameter count mismatch")
    if len(zvals) != f.n:
        raise ValueError(f"need {f.n} parameter values, got {len(zvals)}")
    with mp.workdps(precision + 10):
        z = [to_mpc(v) for v in zvals]
        if any(v == 0 for v in z):
            raise ValueError("parameter values must be nonzero")
        for a in range(f.n):
            for b in range(a + 1, f.n):
                if z[a] == z[b]:
                    raise ValueError("parameter values must be distinct")
        zinv = [1 / v for v in z]
        total = mpc(0)
        for a in range(f.n):
            weight = mpc(1)
            for b in range(f.n):
                if b != a:
                    weight *= 1 - z[b] / z[a]
            total += (
                eval_kclass_numeric(f, zinv[a], zinv, precision)
                * eval_kclass_numeric(g, z[a], z, precision)
                / weight
            )
        return total


def eval_kclass(f: KClass, xval, zvals) -> Fraction:
    """Exact evaluation at rational ``X`` and ``Z`` values."""
    xval = Fraction(xval)
    total = Fraction(0)
    for d in f.degrees():
        total += xval**d * eval_exact(f.coeff(d), zvals)
    return total


def eval_kclass_numeric(f: KClass, xval, zvals, precision: int):
    """Numeric evaluation at complex ``X`` and ``Z`` values (mpmath)."""
    with mp.workdps(precision + 5):
        x = to_mpc(xval)
        total = mpc(0)
        for d in f.degrees():
            total += x**d * eval_numeric(f.coeff(d), zvals, precision)
        return total


def _require_distinct_nonzero(zvals, n: int) -> None:
    if len(zvals) != n:
        raise ValueError(f"need {n} parameter values, got {len(zvals)}")
    if any(v == 0 for v in zvals):
        raise ValueError("parameter values must be nonzero")
    if len(set(zvals)) != n:
        raise ValueError("parameter values must be distinct")


# -- textual form --------------------------------------------------------------


def _xz_names(n: int) -> tuple[str, ...]:
    return ("X",) + tuple(f"Z{i + 1}" for i in range(n))


def to_xz_poly(f: KClass) -> LaurentPoly:
    """Flatten to a Laurent polynomial in ``n + 1`` variables (``X`` first)."""
    out: dict[tuple[int, ...], Fraction] = {}
    for d, poly in f._coeffs.items():
        for exps, c in poly.terms():
            out[(d,) + exps] = c
    return LaurentPoly(f.n + 1, out)


def from_xz_poly(p: LaurentPoly) -> KClass:
    """Inverse of :func:`to_xz_poly`."""
    n = p.nvars - 1
    coeffs: dict[int, LaurentPoly] = {}
    for exps, c in p.terms():
        d = exps[0]
        coeffs.setdefault(d, LaurentPoly.zero(n))
        coeffs[d] = coeffs[d] + LaurentPoly.monomial(c, exps[1:])
    return KClass(n, coeffs)


def coeff_vector(f: KClass) -> tuple[LaurentPoly, ...]:
    """Length-``n`` vector of reduced coefficients of ``X^0 .. X^{n-1}``."""
    r = reduce(f)
    return tuple(r.coeff(d) for d in range(f.n))


def serialize_kclass(f: KClass) -> list[str]:
    """The ``n`` reduced Laurent coefficients as text, X-power ascending."""
    return [to_text(c) for c in coeff_vector(f)]


def kclass_to_text(f: KClass) -> str:
    return to_text(to_xz_poly(f), names=_xz_names(f.n))


def kclass_from_text(s: str, n: int) -> KClass:
    return from_xz_poly(parse_text(s, n + 1, names=_xz_names(n)))
