"""Exceptional bases of the rank-n module and the braid-group action.

The module is free of rank ``n`` over the Laurent ring in ``Z_1..Z_n``, with
basis ``e_1..e_n`` and sesquilinear form ``A(e_i, e_j) = m_{j-i}`` for
``i <= j`` (complete homogeneous symmetric polynomial) and ``0`` for
``i > j``; scalars move through as ``A(a x, b y) = bar(a) b A(x, y)``.
A basis is *exceptional* when its Gram matrix is unit upper-triangular.

Braid generators mutate adjacent pairs:

    tau_i:     (v_i, v_{i+1}) -> (v_{i+1} - A(v_i, v_{i+1}) v_i,  v_i)
    tau_i^-1:  (v_i, v_{i+1}) -> (v_{i+1},  v_i - bar(A(v_i, v_{i+1})) v_{i+1})

(the inverse formula is forced by the round trip and sesquilinearity).
Words act with the rightmost letter first.  Every pairing a mutation needs
is computed honestly from the coordinates; the only shortcut taken is that
a basis produced by mutating a verified-exceptional basis is marked
exceptional without re-verifying the whole Gram matrix (mutations preserve
exceptionality — a fact the test suite checks independently via
:func:`is_exceptional`, which always recomputes from scratch).

Beyond the generators this module builds the named words (``gamma``,
``delta_odd``, ``delta_even``, the Coxeter word), the modified Coxeter map
(first vector rescaled by ``(-1)^{n+1} s_n(Z^{-1})``), the interleaved bases
Q' and Q'' assembled from partial alternating sums

    v_m(l) = v_m - s_1 v_{m-1} + ... + (-1)^{m-l} s_{m-l} v_l,

and basis labels outside ``1..n``, which are rewritten into the module by
the rank-n recurrence ``sum_{i=0..n} (-1)^{n-i} s_{n-i} e_{k+i} = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentPoly, bar, complete_hom, elem_sym

_MUL_MEMO: dict[tuple[LaurentPoly, LaurentPoly], LaurentPoly] = {}


def _mmul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Memoized product; the same scalar/Gram products recur along words."""
    if len(a._terms) <= 1 or len(b._terms) <= 1:
        return a * b
    key = (a, b)
    got = _MUL_MEMO.get(key)
    if got is None:
        got = a * b
        _MUL_MEMO[key] = got
    return got


# -- module vectors ------------------------------------------------------------


class ModuleVector:
    """Element of the free rank-n module: coordinates over ``e_1..e_n``."""

    __slots__ = ("n", "comps")

    def __init__(self, comps):
        comps = tuple(comps)
        if not comps:
            raise ValueError("empty coordinate vector")
        self.n = len(comps)
        for c in comps:
            if not isinstance(c, LaurentPoly) or c.nvars != self.n:
                raise ValueError("coordinates must be LaurentPoly in n variables")
        self.comps = comps

    @staticmethod
    def basis_vector(i: int, n: int) -> ModuleVector:
        """``e_i`` (1-based)."""
        if not 1 <= i <= n:
            raise ValueError(f"basis index {i} out of range 1..{n}")
        return ModuleVector(
            [LaurentPoly.one(n) if j == i - 1 else LaurentPoly.zero(n) for j in range(n)]
        )

    @staticmethod
    def zero(n: int) -> ModuleVector:
        return ModuleVector([LaurentPoly.zero(n)] * n)

    def __add__(self, other: ModuleVector) -> ModuleVector:
        self._check(other)
        return ModuleVector([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: ModuleVector) -> ModuleVector:
        self._check(other)
        return ModuleVector([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> ModuleVector:
        return ModuleVector([-a for a in self.comps])

    def scale(self, c) -> ModuleVector:
        if isinstance(c, LaurentPoly):
            return ModuleVector([_mmul(c, a) for a in self.comps])
        return ModuleVector([a.scale(c) for a in self.comps])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self) -> int:
        return hash(self.comps)

    def __repr__(self) -> str:
        return f"ModuleVector({[str(c.terms()) for c in self.comps]})"

    def _check(self, other: ModuleVector) -> None:
        if self.n != other.n:
            raise ValueError(f"rank mismatch: {self.n} != {other.n}")


def form_A_module(x: ModuleVector, y: ModuleVector) -> LaurentPoly:
    """The sesquilinear form, from ``A(e_i, e_j) = m_{j-i}`` (``i <= j``)."""
    if x.n != y.n:
        raise ValueError(f"rank mismatch: {x.n} != {y.n}")
    n = x.n
    # Group component pairs by the offset k = j - i and multiply by the
    # complete-homogeneous weight once per offset: the grouped sums collapse
    # substantially before the weight multiplication, which keeps the
    # intermediate term counts small on heavily mutated vectors.
    out = LaurentPoly.zero(n)
    for k in range(n):
        grouped = LaurentPoly.zero(n)
        for i in range(n - k):
            xi = x.comps[i]
            yj = y.comps[i + k]
            if xi.is_zero() or yj.is_zero():
                continue
            grouped = grouped + _mmul(bar(xi), yj)
        if not grouped.is_zero():
            out = out + _mmul(grouped, complete_hom(k, n))
    return out


# -- bases ---------------------------------------------------------------------

Gram = tuple[tuple[LaurentPoly, ...], ...]


def canonical_gram(n: int) -> Gram:
    """The Gram matrix of ``e_1..e_n``: ``m_{j-i}`` above, ``0`` below."""
    return tuple(
        tuple(
            complete_hom(j - i, n) if j >= i else LaurentPoly.zero(n)
            for j in range(n)
        )
        for i in range(n)
    )


class ExceptionalBasis:
    """Ordered basis of the rank-n module.

    The Gram matrix is computed honestly from the coordinates on first
    request and cached.  ``_certified`` marks bases whose exceptionality is
    already established — either checked directly or inherited through a
    mutation from a checked basis.
    """

    __slots__ = ("n", "vectors", "_gram", "_certified")

    def __init__(self, vectors, _certified: bool = False):
        vectors = tuple(vectors)
        if not vectors:
            raise ValueError("empty basis")
        n = vectors[0].n
        if len(vectors) != n:
            raise ValueError(f"need exactly {n} vectors, got {len(vectors)}")
        for v in vectors:
            if v.n != n:
                raise ValueError("mixed ranks in basis")
        self.n = n
        self.vectors = vectors
        self._gram: Gram | None = None
        self._certified = _certified

    def gram(self) -> Gram:
        if self._gram is None:
            self._gram = tuple(
                tuple(form_A_module(vi, vj) for vj in self.vectors)
                for vi in self.vectors
            )
        return self._gram

    def coordinate_determinant(self) -> LaurentPoly:
        """Determinant of the coordinate matrix, by subset dynamic programming."""
        n = self.n
        rows = [v.comps for v in self.vectors]
        dp: dict[int, LaurentPoly] = {0: LaurentPoly.one(n)}
        for r in range(n):
            ndp: dict[int, LaurentPoly] = {}
            for mask, val in dp.items():
                for c in range(n):
                    if mask >> c & 1:
                        continue
                    a = rows[r][c]
                    if a.is_zero():
                        continue
                    term = _mmul(val, a)
                    if bin(mask >> (c + 1)).count("1") % 2:
                        term = -term
                    key = mask | 1 << c
                    ndp[key] = ndp.get(key, LaurentPoly.zero(n)) + term
            dp = ndp
        return dp.get((1 << n) - 1, LaurentPoly.zero(n))

    def validate(self) -> LaurentPoly:
        """Check linear independence: the coordinate determinant must be a
        unit of the Laurent ring (a single nonzero term).  Returns it."""
        det = self.coordinate_determinant()
        if not det.is_single_term():
            raise ValueError("vectors are not a basis: determinant is not a unit")
        return det

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExceptionalBasis):
            return NotImplemented
        return self.vectors == other.vectors

    def __hash__(self) -> int:
        return hash(self.vectors)

    def __repr__(self) -> str:
        return f"ExceptionalBasis(n={self.n})"


def canonical_basis(n: int) -> ExceptionalBasis:
    """The standard basis ``e_1..e_n``; its Gram matrix is canonical."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    return ExceptionalBasis(
        [ModuleVector.basis_vector(i, n) for i in range(1, n + 1)],
        _certified=True,
    )


def gram(basis: ExceptionalBasis) -> Gram:
    return basis.gram()


def is_exceptional(basis: ExceptionalBasis) -> bool:
    """Honest check: recompute every pairing from the coordinates."""
    n = basis.n
    one = LaurentPoly.one(n)
    for i, vi in enumerate(basis.vectors):
        if form_A_module(vi, vi) != one:
            return False
        for j, vj in enumerate(basis.vectors):
            if j < i and not form_A_module(vi, vj).is_zero():
                return False
    return True


def _require_exceptional(Q: ExceptionalBasis) -> None:
    if Q._certified:
        return
    if not is_exceptional(Q):
        raise ValueError("basis is not exceptional")
    Q._certified = True


def apply_tau(i: int, Q: ExceptionalBasis) -> ExceptionalBasis:
    """Mutate positions ``(i, i+1)``; requires an exceptional basis."""
    n = Q.n
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    _require_exceptional(Q)
    i0 = i - 1
    v_i, v_i1 = Q.vectors[i0], Q.vectors[i0 + 1]
    c = form_A_module(v_i, v_i1)
    new_i = v_i1 - v_i.scale(c)
    vectors = list(Q.vectors)
    vectors[i0], vectors[i0 + 1] = new_i, v_i
    return ExceptionalBasis(vectors, _certified=True)


def apply_tau_inverse(i: int, Q: ExceptionalBasis) -> ExceptionalBasis:
    """Inverse mutation, pinned by the round trip with :func:`apply_tau`."""
    n = Q.n
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    _require_exceptional(Q)
    i0 = i - 1
    w_i, w_i1 = Q.vectors[i0], Q.vectors[i0 + 1]
    c = form_A_module(w_i, w_i1)
    new_i1 = w_i - w_i1.scale(bar(c))
    vectors = list(Q.vectors)
    vectors[i0], vectors[i0 + 1] = w_i1, new_i1
    return ExceptionalBasis(vectors, _certified=True)


# -- braid words -----------------------------------------------------------------


@dataclass(frozen=True)
class BraidWord:
    """Word in the braid generators; letter ``+i`` is ``tau_i``, ``-i`` its
    inverse.  Words act with the rightmost letter first."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for l in self.letters:
            if not isinstance(l, int) or l == 0:
                raise ValueError(f"bad letter {l!r}: need nonzero generator index")

    def __add__(self, other: BraidWord) -> BraidWord:
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(tuple(-l for l in reversed(self.letters)))

    def to_text(self) -> str:
        return ",".join(f"T{-l}" if l < 0 else f"t{l}" for l in self.letters)

    @staticmethod
    def from_text(s: str) -> BraidWord:
        letters = []
        for tok in s.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if tok[0] == "t":
                letters.append(int(tok[1:]))
            elif tok[0] == "T":
                letters.append(-int(tok[1:]))
            else:
                raise ValueError(f"bad braid letter {tok!r}")
        return BraidWord(tuple(letters))


def apply_word(word: BraidWord, Q: ExceptionalBasis) -> ExceptionalBasis:
    """Apply a word, rightmost letter first."""
    for l in reversed(word.letters):
        Q = apply_tau(l, Q) if l > 0 else apply_tau_inverse(-l, Q)
    return Q


def coxeter_word(n: int) -> BraidWord:
    return BraidWord(tuple(range(1, n)))


def gamma_word(n: int) -> BraidWord:
    """``gamma_n = beta_l beta_{l-2} ... beta_2`` with ``beta_k = tau_k ...
    tau_{n-1}`` and ``l = n-1`` (odd n) or ``n-2`` (even n); empty for n=2."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    top = n - 1 if n % 2 else n - 2
    letters: list[int] = []
    for k in range(top, 1, -2):
        letters.extend(range(k, n))
    return BraidWord(tuple(letters))


def delta_odd_word(n: int) -> BraidWord:
    """``tau_1 tau_3 ...`` ending at ``tau_{n-2}`` (odd n) or ``tau_{n-1}``
    (even n)."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    return BraidWord(tuple(range(1, n, 2)))


def delta_even_word(n: int) -> BraidWord:
    """``tau_2 tau_4 ...`` ending at ``tau_{n-1}`` (odd n) or ``tau_{n-2}``
    (even n); empty for n=2."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    return BraidWord(tuple(range(2, n, 2)))


def _require_canonical(Q: ExceptionalBasis) -> None:
    if Q.gram() != canonical_gram(Q.n):
        raise ValueError("basis does not have the canonical Gram matrix")


def coxeter(Q: ExceptionalBasis) -> ExceptionalBasis:
    """Apply ``tau_1 ... tau_{n-1}``; requires a canonical Gram matrix.

    The result is ``{v_n - s_1 v_{n-1} + ... + (-1)^{n-1} s_{n-1} v_1,
    v_1, ..., v_{n-1}}``.
    """
    _require_canonical(Q)
    return apply_word(coxeter_word(Q.n), Q)


def modified_coxeter(Q: ExceptionalBasis) -> ExceptionalBasis:
    """Coxeter map with the first output vector rescaled by
    ``(-1)^{n+1} s_n(Z^{-1})``; the rescaled basis has canonical Gram."""
    n = Q.n
    C = coxeter(Q)
    unit = bar(elem_sym(n, n)).scale(Fraction((-1) ** (n + 1)))
    vectors = list(C.vectors)
    vectors[0] = vectors[0].scale(unit)
    return ExceptionalBasis(vectors, _certified=True)


# -- interleaved bases Q' and Q'' -------------------------------------------------


def telescoped_vector(Q: ExceptionalBasis, m: int, l: int) -> ModuleVector:
    """``v_m(l) = v_m - s_1 v_{m-1} + ... + (-1)^{m-l} s_{m-l} v_l`` (1-based)."""
    n = Q.n
    if not 1 <= l <= m <= n:
        raise ValueError(f"need 1 <= l <= m <= n, got l={l}, m={m}, n={n}")
    out = ModuleVector.zero(n)
    for t in range(m - l + 1):
        term = Q.vectors[m - t - 1].scale(elem_sym(t, n))
        out = out + term if t % 2 == 0 else out - term
    return out


def build_Q_prime(Q: ExceptionalBasis) -> ExceptionalBasis:
    """Interleave ``v_1..v_{k+1}`` with partial alternating sums (odd slots
    keep the low vectors; this equals ``gamma_n Q`` for canonical-Gram Q)."""
    n = Q.n
    k = n // 2
    slots: list[ModuleVector | None] = [None] * n
    if n % 2:  # n = 2k + 1
        for j in range(1, k + 2):
            slots[2 * j - 2] = Q.vectors[j - 1]
        for j in range(1, k + 1):
            slots[2 * j - 1] = telescoped_vector(Q, 2 * k + 2 - j, j + 1)
    else:  # n = 2k
        for j in range(1, k + 1):
            slots[2 * j - 2] = Q.vectors[j - 1]
        slots[n - 1] = Q.vectors[k]
        for j in range(1, k):
            slots[2 * j - 1] = telescoped_vector(Q, 2 * k + 1 - j, j + 1)
    return ExceptionalBasis(slots)


def build_Q_double_prime(Q: ExceptionalBasis) -> ExceptionalBasis:
    """The companion interleaving (equals ``delta_odd Q'`` for canonical-Gram
    Q): partial sums at odd slots, low vectors at even slots."""
    n = Q.n
    k = n // 2
    slots: list[ModuleVector | None] = [None] * n
    if n % 2:  # n = 2k + 1
        for j in range(1, k + 1):
            slots[2 * j - 1] = Q.vectors[j - 1]
        slots[2 * k] = Q.vectors[k]
        for j in range(1, k + 1):
            slots[2 * j - 2] = telescoped_vector(Q, 2 * k + 2 - j, j)
    else:  # n = 2k
        for j in range(1, k + 1):
            slots[2 * j - 1] = Q.vectors[j - 1]
        for j in range(1, k + 1):
            slots[2 * j - 2] = telescoped_vector(Q, 2 * k + 1 - j, j)
    return ExceptionalBasis(slots)


# -- labels outside 1..n ------------------------------------------------------------

_LABEL_MEMO: dict[tuple[int, int], ModuleVector] = {}


def extended_label_vector(j: int, n: int) -> ModuleVector:
    """Realize the formal label ``e_j`` for any integer ``j`` inside rank n.

    Out-of-range labels are rewritten through the recurrence
    ``sum_{i=0..n} (-1)^{n-i} s_{n-i} e_{k+i} = 0``: upward as
    ``e_{k+n} = -sum_{i<n} (-1)^{n-i} s_{n-i} e_{k+i}`` and downward as
    ``e_k = (-1)^{n+1} s_n(Z^{-1}) sum_{i>=1} (-1)^{n-i} s_{n-i} e_{k+i}``.
    """
    if 1 <= j <= n:
        return ModuleVector.basis_vector(j, n)
    key = (j, n)
    if key in _LABEL_MEMO:
        return _LABEL_MEMO[key]
    out = ModuleVector.zero(n)
    if j > n:
        for i in range(n):  # e_j with k = j - n
            c = elem_sym(n - i, n).scale(Fraction(-((-1) ** (n - i))))
            out = out + extended_label_vector(j - n + i, n).scale(c)
    else:
        sn_inv = bar(elem_sym(n, n)).scale(Fraction((-1) ** (n + 1)))
        for i in range(1, n + 1):  # e_j with k = j
            c = _mmul(sn_inv, elem_sym(n - i, n)).scale(Fraction((-1) ** (n - i)))
            out = out + extended_label_vector(j + i, n).scale(c)
    _LABEL_MEMO[key] = out
    return out


def shifted_canonical_basis(n: int, k: int) -> ExceptionalBasis:
    """The basis with formal labels ``e_{k+1} .. e_{k+n}`` realized in rank n."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    return ExceptionalBasis([extended_label_vector(k + i, n) for i in range(1, n + 1)])
