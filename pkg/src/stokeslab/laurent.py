"""Exact multivariate Laurent polynomials with rational coefficients.

A ``LaurentPoly`` is a finite map from integer exponent vectors (entries may
be negative) to nonzero rational coefficients, together with the number of
variables.  The zero polynomial is the empty map.  This canonical form makes
equality a plain map comparison, and the deterministic (lexicographic) term
order makes printed output reproducible byte-for-byte.

Coefficients are stored as plain ``int`` whenever they are integral and as
``fractions.Fraction`` otherwise; the two compare and hash identically, and
integer arithmetic skips Fraction's per-operation gcd, which dominates the
running time of the larger symbolic computations downstream.

Internally an exponent vector is packed into a single integer in balanced
base ``2**_SHIFT`` (digit ``i`` holds the exponent of variable ``i``, each
digit in ``(-2**(_SHIFT-1), 2**(_SHIFT-1))``).  Packed keys add under
monomial multiplication and negate under variable inversion, which replaces
per-term tuple construction in the innermost product loop with single
integer operations.  Exponents in this codebase stay below a few hundred in
magnitude, far inside the per-digit headroom; constructors reject anything
larger.

The variables are nameless internally; printing and parsing default to
``Z1..Zn``.  Ring elements built here are used both as coefficients over the
torus variables and, with one extra leading variable, as polynomials in the
projective-space class ``X``.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from mpmath import mp, mpc, mpf

Exponents = tuple[int, ...]
Coeff = int | Fraction

_FACTOR_RE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\^(-?\d+))?$")

_SHIFT = 16
_HALF = 1 << (_SHIFT - 1)
_MASK = (1 << _SHIFT) - 1


def _pack(exps) -> int:
    """Pack an exponent vector into one balanced base-``2**_SHIFT`` integer."""
    key = 0
    for i, e in enumerate(exps):
        if not -_HALF < e < _HALF:
            raise ValueError(f"exponent {e} out of supported range")
        key += e << (_SHIFT * i)
    return key


def _unpack(key: int, nvars: int) -> Exponents:
    """Recover the exponent vector from a packed key (balanced digits)."""
    exps = []
    for _ in range(nvars):
        digit = ((key + _HALF) & _MASK) - _HALF
        exps.append(digit)
        key = (key - digit) >> _SHIFT
    return tuple(exps)


def _norm_coeff(c) -> Coeff:
    """Exact coefficient, as int when integral."""
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class LaurentPoly:
    """Immutable Laurent polynomial in ``nvars`` variables over Q."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: dict[Exponents, Coeff] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean: dict[int, Coeff] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has length != nvars={nvars}")
            key = _pack(exps)
            coeff = _norm_coeff(coeff)
            if coeff:
                acc = clean.get(key, 0) + coeff
                if acc:
                    clean[key] = _norm_coeff(acc)
                else:
                    clean.pop(key, None)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, nvars: int, terms: dict[int, Coeff]) -> LaurentPoly:
        """Internal: wrap an already-canonical packed term map without re-checking."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "nvars", nvars)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> LaurentPoly:
        return LaurentPoly(nvars, {})

    @staticmethod
    def const(c, nvars: int) -> LaurentPoly:
        return LaurentPoly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def one(nvars: int) -> LaurentPoly:
        return LaurentPoly.const(1, nvars)

    @staticmethod
    def var(i: int, nvars: int, power: int = 1) -> LaurentPoly:
        """The monomial ``Z_{i+1}^power`` (``i`` is 0-based)."""
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for nvars={nvars}")
        exps = [0] * nvars
        exps[i] = power
        return LaurentPoly(nvars, {tuple(exps): Fraction(1)})

    @staticmethod
    def monomial(c, exps: Exponents) -> LaurentPoly:
        return LaurentPoly(len(exps), {tuple(exps): Fraction(c)})

    # -- canonical views -------------------------------------------------------

    def terms(self) -> tuple[tuple[Exponents, Coeff], ...]:
        """Terms as ``(exponents, coefficient)`` pairs in lexicographic order."""
        n = self.nvars
        return tuple(sorted((_unpack(k, n), c) for k, c in self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exps: Exponents) -> Fraction:
        try:
            key = _pack(exps)
        except ValueError:
            return Fraction(0)
        return Fraction(self._terms.get(key, 0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    def is_single_term(self) -> bool:
        """True for a unit of the Laurent ring: exactly one nonzero term."""
        return len(self._terms) == 1

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.nvars, frozenset(self._terms.items())))
            )
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self.nvars}, {self.to_text()!r})"

    # -- arithmetic ------------------------------------------------------------

    def _check_compatible(self, other: LaurentPoly) -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} != {other.nvars}")

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        self._check_compatible(other)
        out = dict(self._terms)
        get = out.get
        for exps, coeff in other._terms.items():
            acc = get(exps, 0) + coeff
            if acc:
                out[exps] = _norm_coeff(acc)
            else:
                out.pop(exps, None)
        return LaurentPoly._raw(self.nvars, out)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        self._check_compatible(other)
        a, b = self._terms, other._terms
        if len(a) == 1:
            ((k1, c1),) = a.items()
            return LaurentPoly._raw(
                self.nvars, {k1 + k2: _norm_coeff(c1 * c2) for k2, c2 in b.items()}
            )
        if len(b) == 1:
            ((k2, c2),) = b.items()
            return LaurentPoly._raw(
                self.nvars, {k1 + k2: _norm_coeff(c1 * c2) for k1, c1 in a.items()}
            )
        out: dict[int, Coeff] = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                key = e1 + e2
                acc = get(key, 0) + c1 * c2
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        return LaurentPoly._raw(
            self.nvars, {k: _norm_coeff(v) for k, v in out.items()}
        )

    def scale(self, c) -> LaurentPoly:
        c = _norm_coeff(c)
        if not c:
            return LaurentPoly._raw(self.nvars, {})
        return LaurentPoly._raw(
            self.nvars, {e: _norm_coeff(c * v) for e, v in self._terms.items()}
        )

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if not self.is_single_term():
                raise ValueError("can only invert single-term Laurent polynomials")
            ((key, coeff),) = self._terms.items()
            inv = LaurentPoly._raw(self.nvars, {-key: _norm_coeff(Fraction(1) / coeff)})
            return inv ** (-k)
        result = LaurentPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Termwise sum (canonical form)."""
    return f + g


def mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Distributive product (canonical form)."""
    return f * g


def bar(f: LaurentPoly) -> LaurentPoly:
    """The involution sending every variable to its inverse."""
    return LaurentPoly._raw(f.nvars, {-k: c for k, c in f._terms.items()})


def elem_sym(k: int, n: int) -> LaurentPoly:
    """Elementary symmetric polynomial ``s_k`` in ``n`` variables (``s_0 = 1``)."""
    if k < 0 or k > n:
        raise ValueError(f"elem_sym requires 0 <= k <= n, got k={k}, n={n}")
    out: dict[Exponents, Fraction] = {}
    for combo in itertools.combinations(range(n), k):
        exps = [0] * n
        for i in combo:
            exps[i] = 1
        out[tuple(exps)] = Fraction(1)
    return LaurentPoly(n, out)


_COMPLETE_HOM_CACHE: dict[tuple[int, int], LaurentPoly] = {}


def complete_hom(k: int, n: int) -> LaurentPoly:
    """Complete homogeneous symmetric polynomial ``m_k`` in ``n`` variables.

    Computed by the recurrence ``m_k = sum_{i=1..n} (-1)^{i+1} s_i m_{k-i}``
    (with ``m_0 = 1``), which keeps the cost polynomial in ``k``.
    """
    if k < 0:
        raise ValueError(f"complete_hom requires k >= 0, got k={k}")
    if k == 0:
        return LaurentPoly.one(n)
    key = (k, n)
    if key not in _COMPLETE_HOM_CACHE:
        acc = LaurentPoly.zero(n)
        for i in range(1, min(n, k) + 1):
            term = elem_sym(i, n) * complete_hom(k - i, n)
            acc = acc + term if i % 2 == 1 else acc - term
        _COMPLETE_HOM_CACHE[key] = acc
    return _COMPLETE_HOM_CACHE[key]


def to_mpc(v) -> mpc:
    """Convert to ``mpmath.mpc`` at the current precision; Fractions exact."""
    if isinstance(v, Fraction):
        return mpc(mpf(v.numerator)) / mpf(v.denominator)
    return mpc(v)


def eval_numeric(f: LaurentPoly, point, precision: int):
    """Evaluate at a complex vector, returning an ``mpmath.mpc``.

    ``precision`` is in decimal digits.  A zero coordinate paired with a
    negative exponent raises ``ZeroDivisionError``.
    """
    if len(point) != f.nvars:
        raise ValueError(f"point has length {len(point)}, expected {f.nvars}")
    with mp.workdps(precision + 5):
        pt = [to_mpc(v) for v in point]
        total = mpc(0)
        for exps, coeff in f.terms():
            val = mpc(mpf(coeff.numerator)) / mpf(coeff.denominator)
            for z, e in zip(pt, exps):
                if e == 0:
                    continue
                if z == 0 and e < 0:
                    raise ZeroDivisionError("negative exponent at a zero coordinate")
                val *= z**e
            total += val
        return total


def eval_exact(f: LaurentPoly, point) -> Fraction:
    """Evaluate at a vector of rationals with exact Fraction arithmetic."""
    if len(point) != f.nvars:
        raise ValueError(f"point has length {len(point)}, expected {f.nvars}")
    pt = [Fraction(v) for v in point]
    total = Fraction(0)
    for exps, coeff in f.terms():
        val = coeff
        for z, e in zip(pt, exps):
            if e == 0:
                continue
            if z == 0 and e < 0:
                raise ZeroDivisionError("negative exponent at a zero coordinate")
            val *= z**e
        total += val
    return total


def default_names(nvars: int) -> tuple[str, ...]:
    return tuple(f"Z{i + 1}" for i in range(nvars))


def to_text(f: LaurentPoly, names: tuple[str, ...] | None = None) -> str:
    """Serialize as a sum of terms ``c * Z1^a1*...*Zn^an``.

    Zero exponents are omitted, the coefficient is a rational in lowest terms,
    and terms appear in the deterministic (lexicographic) order.
    """
    names = names or default_names(f.nvars)
    if len(names) != f.nvars:
        raise ValueError("wrong number of variable names")
    if f.is_zero():
        return "0"
    parts = []
    for exps, coeff in f.terms():
        factors = "*".join(f"{names[i]}^{e}" for i, e in enumerate(exps) if e != 0)
        parts.append(f"{coeff} * {factors}" if factors else str(coeff))
    return " + ".join(parts)


def parse_text(s: str, nvars: int, names: tuple[str, ...] | None = None) -> LaurentPoly:
    """Parse the textual serialization produced by :func:`to_text`.

    Also accepts light variations: missing explicit coefficient (``Z1^2``),
    ``^1`` omitted, and ``-`` joining terms.
    """
    names = names or default_names(nvars)
    index = {name: i for i, name in enumerate(names)}
    normalized = s.replace("-", "+-").replace("^+-", "^-").replace("e+-", "e-")
    total = LaurentPoly.zero(nvars)
    for chunk in normalized.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff = Fraction(1)
        exps = [0] * nvars
        for factor in (p.strip() for p in chunk.split("*")):
            if not factor:
                continue
            if factor == "-":
                coeff = -coeff
                continue
            m = _FACTOR_RE.match(factor)
            if m and m.group(1) in index:
                exps[index[m.group(1)]] += int(m.group(2) or 1)
            else:
                if factor.startswith("-") and factor[1:].strip() in index:
                    coeff = -coeff
                    exps[index[factor[1:].strip()]] += 1
                else:
                    coeff *= Fraction(factor)
        total = total + LaurentPoly.monomial(coeff, tuple(exps))
    return total
