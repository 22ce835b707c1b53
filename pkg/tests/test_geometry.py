"""Tests for bases, quantum multiplication, R-matrices, and qKZ operators."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from stokeslab.geometry import (
    FIXED_POINT,
    G_BASIS,
    X_BASIS,
    CohVector,
    OperatorMatrix,
    basis_convert,
    check_resonance_margin,
    gamma_class_at_fixed_point,
    qkz_operator,
    quantum_mult_matrix,
    r_matrix,
    r_matrix_symbolic,
    symbolic_mat_mul,
)
from stokeslab.laurent import LaurentPoly
from stokeslab.specfun import ArgTrackedNumber, PreciseComplex

D = 40


def close(a, b, tol=None):
    tol = mpf(10) ** -(D - 6) if tol is None else mpf(tol)
    with mp.workdps(D + 10):
        return abs(mpc(a) - mpc(b)) <= tol * (1 + abs(mpc(b)))


def mat_close(m1, m2):
    return all(
        close(m1.entries[i][j], m2.entries[i][j])
        for i in range(m1.n)
        for j in range(m1.n)
    )


# Fractional parts pairwise at least 1/4 apart on the circle (the operator
# constructors enforce that margin); five such values cannot exist, so the
# length-5 vector below is only used where plain distinctness is required.
ZS = {
    2: (Fraction(3, 10), Fraction(-2, 5)),
    3: (Fraction(3, 10), Fraction(-2, 5), Fraction(2)),
    4: (Fraction(0), Fraction(5, 4), Fraction(-3, 2), Fraction(11, 4)),
}
Z5_DISTINCT = (Fraction(0), Fraction(5, 4), Fraction(-3, 2), Fraction(11, 4), Fraction(7, 2))


def tracked(r, th):
    return ArgTrackedNumber.from_polar(r, th, D)


# -- resonance margin ---------------------------------------------------------


def test_margin_rejects_near_integer_differences():
    with pytest.raises(ValueError):
        check_resonance_margin((0, Fraction(1, 10)), D)
    with pytest.raises(ValueError):
        check_resonance_margin((0, Fraction(9, 10), 2), D)


def test_margin_accepts_spread_parameters():
    check_resonance_margin(ZS[4], D)


# -- quantum multiplication ----------------------------------------------------


def test_g_basis_matrix_rank_two():
    z = ZS[2]
    p = tracked(2, 0.3)
    m = quantum_mult_matrix(p, z, G_BASIS, D)
    with mp.workdps(D):
        pv = p.value().value
        assert close(m.entries[0][0], mpf(3) / 10)
        assert close(m.entries[0][1], 1)
        assert close(m.entries[1][0], pv)
        assert close(m.entries[1][1], mpf(-2) / 5)


def test_x_basis_matrix_classical_rank_two():
    z = ZS[2]
    m = quantum_mult_matrix(tracked(0, 0.0), z, X_BASIS, D)
    with mp.workdps(D + 10):
        s1 = mpf(3) / 10 + mpf(-2) / 5
        s2 = (mpf(3) / 10) * (mpf(-2) / 5)
        assert close(m.entries[0][0], 0)
        assert close(m.entries[0][1], -s2)
        assert close(m.entries[1][0], 1)
        assert close(m.entries[1][1], s1)


def test_trace_is_parameter_sum_in_both_bases():
    for n in (2, 3, 4):
        z = ZS[n]
        sz = sum(Fraction(v) for v in z)
        for tag in (X_BASIS, G_BASIS):
            m = quantum_mult_matrix(tracked(Fraction(7, 4), -0.2), z, tag, D)
            with mp.workdps(D + 10):
                tr = sum((m.entries[i][i] for i in range(n)), mpc(0))
                assert close(tr, mpf(sz.numerator) / sz.denominator)


def test_bases_are_similar_via_conversion():
    rng = random.Random(5)
    for n in (2, 3, 4):
        z = ZS[n]
        p = tracked(Fraction(5, 4), 0.7)
        mx = quantum_mult_matrix(p, z, X_BASIS, D)
        mg = quantum_mult_matrix(p, z, G_BASIS, D)
        for _ in range(3):
            v = CohVector.make(
                n, X_BASIS,
                [mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(n)],
                z, D,
            )
            direct = mx.apply(v)
            through_g = basis_convert(mg.apply(basis_convert(v, G_BASIS)), X_BASIS)
            for a, b in zip(direct.comps, through_g.comps):
                assert close(a, b)


def test_rejects_resonant_z():
    with pytest.raises(ValueError):
        quantum_mult_matrix(tracked(1, 0.0), (0, Fraction(11, 10)), G_BASIS, D)


# -- R-matrices -----------------------------------------------------------------


def test_r_matrix_swap_at_zero():
    z = ZS[3]
    m = r_matrix(1, 2, 0, 3, z, D)
    v = CohVector.make(3, G_BASIS, [1, 0, 0], z, D)
    assert close(m.apply(v).comps[1], 1)  # g_1 -> g_2 at u=0
    w = CohVector.make(3, G_BASIS, [0, 0, 5], z, D)
    assert close(m.apply(w).comps[2], 5)  # g_3 fixed


def test_r_matrix_action_display():
    z = ZS[3]
    u = mpc("0.37", "-1.2")
    m = r_matrix(1, 2, u, 3, z, D)
    v = CohVector.make(3, G_BASIS, [1, 0, 0], z, D)  # g_1 = g_a
    out = m.apply(v)
    assert close(out.comps[0], u) and close(out.comps[1], 1) and close(out.comps[2], 0)
    w = CohVector.make(3, G_BASIS, [0, 1, 0], z, D)  # g_2 = g_b
    out = m.apply(w)
    assert close(out.comps[0], 1) and close(out.comps[1], 0)


def test_inversion_relation_exact():
    # R_{ab}(u) R_{ba}(-u) = 1 as an identity in the polynomial variable u.
    u = LaurentPoly.var(0, 1)
    for n in (2, 3, 4, 5):
        one = LaurentPoly.one(1)
        zero = LaurentPoly.zero(1)
        for a, b in itertools.permutations(range(1, n + 1), 2):
            prod = symbolic_mat_mul(
                r_matrix_symbolic(a, b, u, n), r_matrix_symbolic(b, a, -u, n)
            )
            for i in range(n):
                for j in range(n):
                    assert prod[i][j] == (one if i == j else zero)


def test_yang_baxter_exact():
    # R_{ab}(u-v) R_{ac}(u) R_{bc}(v) = R_{bc}(v) R_{ac}(u) R_{ab}(u-v),
    # exactly, coefficient by coefficient, in two polynomial variables.
    u = LaurentPoly.var(0, 2)
    v = LaurentPoly.var(1, 2)
    for n in (2, 3, 4, 5):
        for a, b, c in itertools.permutations(range(1, n + 1), 3):
            lhs = symbolic_mat_mul(
                r_matrix_symbolic(a, b, u - v, n),
                symbolic_mat_mul(
                    r_matrix_symbolic(a, c, u, n), r_matrix_symbolic(b, c, v, n)
                ),
            )
            rhs = symbolic_mat_mul(
                r_matrix_symbolic(b, c, v, n),
                symbolic_mat_mul(
                    r_matrix_symbolic(a, c, u, n), r_matrix_symbolic(a, b, u - v, n)
                ),
            )
            assert lhs == rhs


def test_r_matrix_rejects_equal_indices():
    with pytest.raises(ValueError):
        r_matrix(2, 2, 1, 3, ZS[3], D)


# -- qKZ operators ----------------------------------------------------------------


def test_qkz_rank_two_factorizations():
    z = ZS[2]
    p = tracked(Fraction(3, 2), 0.4)
    with mp.workdps(D):
        z1 = mpf(3) / 10
        z2 = mpf(-2) / 5
        k1 = qkz_operator(1, p, z, D)
        pinv = p.power(PreciseComplex.make(-1, D)).value
        # K_1 = p^{-E_1} R_{12}(z_1 - z_2)
        r12 = r_matrix(1, 2, z1 - z2, 2, z, D)
        expect = OperatorMatrix(
            2, G_BASIS,
            ((pinv * r12.entries[0][0], pinv * r12.entries[0][1]),
             (r12.entries[1][0], r12.entries[1][1])),
            k1.z, D,
        )
        assert mat_close(k1, expect)
        # K_2 = R_{21}(z_2 - z_1 - 1) p^{-E_2}
        k2 = qkz_operator(2, p, z, D)
        r21 = r_matrix(2, 1, z2 - z1 - 1, 2, z, D)
        expect2 = OperatorMatrix(
            2, G_BASIS,
            ((r21.entries[0][0], r21.entries[0][1] * pinv),
             (r21.entries[1][0], r21.entries[1][1] * pinv)),
            k2.z, D,
        )
        assert mat_close(k2, expect2)


def test_qkz_invertible_at_random_parameters():
    rng = random.Random(31)
    for n in (2, 3, 4):
        z = ZS[n]
        for _ in range(3):
            p = tracked(Fraction(rng.randint(1, 8), 4), rng.uniform(-3, 3))
            for i in range(1, n + 1):
                k = qkz_operator(i, p, z, D)
                assert abs(k.determinant()) > mpf(10) ** -(D - 10)


def test_qkz_rejects_zero_p():
    with pytest.raises(ValueError):
        qkz_operator(1, tracked(0, 0.0), ZS[2], D)


# -- basis conversion ----------------------------------------------------------------


def test_unit_class_is_all_ones_at_fixed_points():
    z = ZS[3]
    gn = CohVector.make(3, G_BASIS, [0, 0, 1], z, D)
    fp = basis_convert(gn, FIXED_POINT)
    assert all(close(c, 1) for c in fp.comps)
    xu = CohVector.make(3, X_BASIS, [1, 0, 0], z, D)
    fp2 = basis_convert(xu, FIXED_POINT)
    assert all(close(c, 1) for c in fp2.comps)


def test_g1_fixed_point_values():
    z = ZS[3]
    g1 = CohVector.make(3, G_BASIS, [1, 0, 0], z, D)
    fp = basis_convert(g1, FIXED_POINT)
    with mp.workdps(D + 10):
        zz = [mpf(v.numerator) / v.denominator for v in z]
        for idx in range(3):
            expect = (zz[idx] - zz[1]) * (zz[idx] - zz[2])
            assert close(fp.comps[idx], expect)


def test_round_trips_all_pairs():
    rng = random.Random(17)
    for n in (2, 3, 4, 5):
        z = Z5_DISTINCT[:n] if n == 5 else ZS[n]
        comps = [mpc(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(n)]
        for src in (X_BASIS, G_BASIS, FIXED_POINT):
            v = CohVector.make(n, src, comps, z, D)
            for dst in (X_BASIS, G_BASIS, FIXED_POINT):
                back = basis_convert(basis_convert(v, dst), src)
                for a, b in zip(back.comps, v.comps):
                    assert close(a, b)


def test_convert_rejects_coincident_parameters():
    v = CohVector.make(2, X_BASIS, [1, 2], (1, 1), D)
    with pytest.raises(ValueError):
        basis_convert(v, FIXED_POINT)


# -- gamma class -----------------------------------------------------------------


def test_gamma_class_rank_two_value():
    import mpmath

    val = gamma_class_at_fixed_point(1, (Fraction(3, 10), 0), D)
    with mp.workdps(D + 10):
        assert close(val, mpmath.gamma(mpf("0.7")))


def test_gamma_class_pole_rejected():
    with pytest.raises(ValueError):
        gamma_class_at_fixed_point(2, (0, 2), D)


def test_gamma_class_uses_only_z():
    v1 = gamma_class_at_fixed_point(2, ZS[3], D)
    v2 = gamma_class_at_fixed_point(2, list(ZS[3]), D)
    assert close(v1, v2, mpf(10) ** -(D - 2))
