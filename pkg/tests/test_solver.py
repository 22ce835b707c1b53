"""Tests for the solution evaluators.

The two evaluation routes (residue series, parabola quadrature) are compared
against each other, and the difference/shift structure of the solution family
is checked against the operator module at frozen sample points.
"""

from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from stokeslab.geometry import (
    FIXED_POINT,
    G_BASIS,
    X_BASIS,
    CohVector,
    basis_convert,
    gamma_class_at_fixed_point,
    qkz_operator,
    quantum_mult_matrix,
    reframe,
)
from stokeslab.ktheory import KClass
from stokeslab.ktheory import reduce as kreduce
from stokeslab.laurent import LaurentPoly, elem_sym
from stokeslab.solver import (
    QKZ_SHIFT_SIGN,
    ConvergenceError,
    SolutionRequest,
    default_parabola_apex,
    psi_J_jackson,
    psi_J_jackson_with_log_derivative,
    psi_Q_jackson,
    psi_Q_parabola,
    psi_m,
    solution_basis_matrix,
    theta_map,
)
from stokeslab.specfun import ArgTrackedNumber, PreciseComplex

D = 40

ZS = {
    2: (Fraction(3, 10), Fraction(-2, 5)),
    3: (Fraction(3, 10), Fraction(-2, 5), Fraction(2)),
    4: (Fraction(0), Fraction(5, 4), Fraction(-3, 2), Fraction(11, 4)),
}


def make_req(n, pmod=Fraction(5, 4), parg=0.6, dps=D, z=None, **kw):
    p = ArgTrackedNumber.from_polar(pmod, parg, dps)
    return SolutionRequest.make(n, ZS[n] if z is None else z, p, dps, **kw)


def rel_diff(u_comps, v_comps, dps=D):
    with mp.workdps(dps + 10):
        scale = max(
            max(abs(mpc(c)) for c in u_comps), max(abs(mpc(c)) for c in v_comps)
        )
        if scale == 0:
            return mpf(0)
        return max(abs(mpc(a) - mpc(b)) for a, b in zip(u_comps, v_comps)) / scale


def elem_syms_numeric(vals, work):
    """All elementary symmetric values of ``vals`` (index 0..len)."""
    with mp.workdps(work):
        es = [mpc(1)] + [mpc(0)] * len(vals)
        for v in vals:
            for k in range(len(vals), 0, -1):
                es[k] = es[k] + es[k - 1] * v
        return es


# -- request validation ----------------------------------------------------------


def test_request_rejects_resonant_parameters():
    p = ArgTrackedNumber.from_polar(Fraction(1, 2), 0.0, D)
    with pytest.raises(ValueError):
        SolutionRequest.make(2, (Fraction(3, 10), Fraction(13, 10)), p, D)


def test_request_rejects_zero_modulus():
    p = ArgTrackedNumber.from_polar(0, 0.0, D)
    with pytest.raises(ValueError):
        SolutionRequest.make(2, ZS[2], p, D)


def test_request_default_tolerance():
    req = make_req(2)
    with mp.workdps(D + 5):
        assert abs(req.eps - mpf(10) ** -(D + 5)) <= mpf(10) ** -(D + 15)


# -- residue series leading behavior ---------------------------------------------


@pytest.mark.parametrize("n", [2, 3])
def test_leading_term_matches_gamma_prefactor(n):
    """At small |p| the own-component value approaches the r=0 term,
    which is the tracked power of p times the one-shifted gamma product."""
    req = make_req(n, pmod=Fraction(1, 10**8), parg=0.3)
    for J in range(1, n + 1):
        vec = psi_J_jackson(J, req)
        with mp.workdps(D + 15):
            rot = req.p.rotated((2 - n) * mp.pi)
            zj = PreciseComplex.make(req.z[J - 1], D + 15)
            pref = rot.power(zj).value * gamma_class_at_fixed_point(
                J, list(req.z), D + 15
            )
            own = vec.comps[J - 1]
            assert abs(own / pref - 1) < mpf("1e-6")
            # every other component carries the vanishing weight factor
            for I in range(1, n + 1):
                if I != J:
                    assert abs(vec.comps[I - 1]) < mpf("1e-6") * abs(own)


def test_provenance_tags():
    req = make_req(2)
    assert psi_J_jackson(1, req).provenance == "jackson"
    assert psi_Q_parabola(KClass.x_power(0, 2), req).provenance == "parabola"


# -- series vs quadrature --------------------------------------------------------


def test_single_solution_extraction_cross_route():
    """n=2 at z=(0.3, -0.2), |p|=1, arg 0: the first per-point solution,
    computed by series, equals the quadrature value of (X - Z_2) divided
    by the exponentiated-parameter difference."""
    z = (Fraction(3, 10), Fraction(-1, 5))
    p = ArgTrackedNumber.from_polar(1, 0.0, D)
    req = SolutionRequest.make(2, z, p, D)
    series = psi_J_jackson(1, req)
    q = KClass(2, {1: LaurentPoly.one(2), 0: LaurentPoly.var(1, 2).scale(-1)})
    quad = psi_Q_parabola(q, req)
    zt = req.exp_z(D + 10)
    with mp.workdps(D + 10):
        comps = [c / (zt[0] - zt[1]) for c in quad.comps]
    assert rel_diff(series.comps, comps) < mpf(10) ** -(D - 10)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("pmod", [Fraction(1, 2), Fraction(2), Fraction(10)])
def test_parabola_agrees_with_series(n, pmod):
    req = make_req(n, pmod=pmod, parg=0.3)
    q = KClass.x_power(0, n)
    a = psi_Q_jackson(q, req)
    b = psi_Q_parabola(q, req)
    assert rel_diff(a.comps, b.comps) < mpf(10) ** -(D - 10)


def test_parabola_contour_independence():
    req = make_req(2)
    q = KClass.x_power(1, 2)
    base = psi_Q_parabola(q, req)
    with mp.workdps(D + 10):
        lower = default_parabola_apex(req, D + 10) - mpf("1.5")
    moved = psi_Q_parabola(q, req, apex=lower)
    assert rel_diff(base.comps, moved.comps) < mpf(10) ** -(D - 10)


def test_parabola_rejects_non_enclosing_apex():
    req = make_req(2)
    with mp.workdps(D + 10):
        bad = default_parabola_apex(req, D + 10) + mpf("0.5")
    with pytest.raises(ValueError):
        psi_Q_parabola(KClass.x_power(0, 2), req, apex=bad)


def test_parabola_step_and_range_stability():
    """Halving the step and widening the sample range move the worst-case
    value (the largest supported modulus) by less than the target accuracy."""
    req = make_req(2, pmod=Fraction(10), parg=0.3)
    q = KClass.x_power(0, 2)
    base = psi_Q_parabola(q, req)
    halved = psi_Q_parabola(q, req, step=mpf("0.0125"))
    assert rel_diff(base.comps, halved.comps) < mpf(10) ** -(D - 10)
    wide = psi_Q_parabola(q, req, s_max=12)
    wider = psi_Q_parabola(q, req, s_max=24)
    assert rel_diff(wide.comps, wider.comps) < mpf(10) ** -(D - 10)
    assert rel_diff(base.comps, wide.comps) < mpf(10) ** -(D - 10)


def test_parabola_tail_error_when_range_too_short():
    req = make_req(2, pmod=Fraction(10), parg=0.3)
    with pytest.raises(ConvergenceError):
        psi_Q_parabola(KClass.x_power(0, 2), req, s_max=2)


# -- linear-combination structure -------------------------------------------------


def test_zero_class_gives_zero_vector():
    req = make_req(3)
    vec = psi_Q_jackson(KClass.zero(3), req)
    assert all(c == 0 for c in vec.comps)


@pytest.mark.parametrize("n", [2, 3])
def test_relation_ideal_annihilated(n):
    """The class prod_a (X - Z_a) pairs to zero: series route exactly
    (its weights vanish), quadrature route to quadrature accuracy."""
    req = make_req(n)
    ideal = KClass(
        n,
        {
            n - k: elem_sym(k, n).scale(Fraction((-1) ** k))
            for k in range(n + 1)
        },
    )
    scale_vec = psi_m(1, req)
    with mp.workdps(D + 10):
        scale = max(abs(c) for c in scale_vec.comps)
        series = psi_Q_jackson(ideal, req)
        assert max(abs(c) for c in series.comps) < mpf(10) ** -(D - 5) * scale
        quad = psi_Q_parabola(ideal, req)
        assert max(abs(c) for c in quad.comps) < mpf(10) ** -(D - 10) * scale


def test_x_power_class_is_labeled_solution():
    req = make_req(3)
    for m in (1, 2, 3):
        a = psi_Q_jackson(KClass.x_power(m - 1, 3), req)
        b = psi_m(m, req)
        assert rel_diff(a.comps, b.comps) < mpf(10) ** -(D - 5)


def test_labeled_solution_one_sums_per_point_solutions():
    req = make_req(3)
    total = psi_m(1, req)
    with mp.workdps(D + 10):
        acc = [mpc(0)] * 3
        for J in (1, 2, 3):
            vec = psi_J_jackson(J, req)
            for i in range(3):
                acc[i] += vec.comps[i]
    assert rel_diff(total.comps, acc) < mpf(10) ** -(D - 5)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("k", [-1, 0, 1])
def test_consecutive_label_relation(n, k):
    """sum_{i=0..n} (-1)^{n-i} s_{n-i}(exp z) Psi^{k+i} = 0."""
    req = make_req(n)
    zt = req.exp_z(D + 10)
    with mp.workdps(D + 10):
        es = elem_syms_numeric(list(zt), D + 10)
        acc = [mpc(0)] * n
        scale = mpf(0)
        for i in range(n + 1):
            vec = psi_m(k + i, req)
            coeff = (-1) ** (n - i) * es[n - i]
            for t in range(n):
                acc[t] += coeff * vec.comps[t]
            scale = max(scale, max(abs(c) for c in vec.comps))
        assert max(abs(a) for a in acc) < mpf(10) ** -(D - 15) * scale


@pytest.mark.parametrize("n", [2, 3])
def test_monodromy_advances_label(n):
    """Increasing arg p by one full turn turns solution m into solution m+1."""
    req = make_req(n)
    turned = SolutionRequest.make(n, ZS[n], req.p.rotated_turns(1), D)
    for m in (1, 2):
        a = psi_m(m, turned)
        b = psi_m(m + 1, req)
        assert rel_diff(a.comps, b.comps) < mpf(10) ** -(D - 12)


# -- the ring-to-solutions map ----------------------------------------------------


def test_theta_map_unit():
    req = make_req(3)
    a = theta_map(KClass.one(3), req)
    b = psi_m(1, req)
    assert rel_diff(a.comps, b.comps) < mpf(10) ** -(D - 5)


def test_theta_map_module_structure():
    """Multiplying the class by s_1(Z) multiplies the value by s_1(exp z)."""
    req = make_req(3)
    q = KClass.from_scalar(elem_sym(1, 3))
    a = theta_map(q, req)
    zt = req.exp_z(D + 10)
    with mp.workdps(D + 10):
        s1 = zt[0] + zt[1] + zt[2]
        base = psi_m(1, req)
        scaled = [s1 * c for c in base.comps]
    assert rel_diff(a.comps, scaled) < mpf(10) ** -(D - 12)


def test_theta_map_respects_reduction():
    """X^n and its reduced representative map to the same value, which is
    the solution labeled n+1."""
    req = make_req(3)
    reduced = kreduce(KClass.x_power(3, 3))
    a = theta_map(reduced, req)
    b = psi_m(4, req)
    assert rel_diff(a.comps, b.comps) < mpf(10) ** -(D - 12)


# -- truncation control ------------------------------------------------------------


def test_truncation_insensitive_to_doubled_cap():
    req = make_req(2, pmod=Fraction(10), parg=0.3)
    req2 = make_req(2, pmod=Fraction(10), parg=0.3, r_max=800)
    a = psi_J_jackson(1, req)
    b = psi_J_jackson(1, req2)
    with mp.workdps(D + 10):
        nrm = max(abs(c) for c in a.comps)
        assert max(abs(x - y) for x, y in zip(a.comps, b.comps)) < req.eps * nrm


def test_truncation_cap_error_carries_magnitude():
    req = make_req(2, pmod=Fraction(10), parg=0.3, r_max=5)
    with pytest.raises(ConvergenceError) as info:
        psi_J_jackson(1, req)
    assert info.value.last_magnitude is not None
    assert info.value.last_magnitude > 0


# -- differential and shift structure ----------------------------------------------


@pytest.mark.parametrize("n", [2, 3])
def test_flow_equation_residual(n):
    """p d/dp of each solution equals quantum multiplication acting on it."""
    req = make_req(n)
    mx = quantum_mult_matrix(req.p, list(req.z), X_BASIS, D)
    for J in range(1, n + 1):
        psi, dpsi = psi_J_jackson_with_log_derivative(J, req)
        with mp.workdps(D + 10):
            xv = basis_convert(
                CohVector(n, FIXED_POINT, psi.comps, req.z, D), X_BASIS
            )
            back = basis_convert(mx.apply(xv), FIXED_POINT)
            nrm = max(abs(c) for c in psi.comps)
            res = max(
                abs(dpsi.comps[i] - back.comps[i]) for i in range(n)
            )
            assert res < mpf(10) ** -(D - 15) * nrm


@pytest.mark.parametrize("n", [2, 3])
def test_shift_equation_residual(n):
    """Lowering parameter i by one equals QKZ_SHIFT_SIGN times the shift
    operator's image, each side in the triangular basis of its own frame."""
    req = make_req(n)
    for i in range(1, n + 1):
        shifted = tuple(
            Fraction(v) - (1 if a == i - 1 else 0) for a, v in enumerate(ZS[n])
        )
        req_s = SolutionRequest.make(n, shifted, req.p, D)
        K = qkz_operator(i, req.p, list(req.z), D)
        for J in range(1, n + 1):
            lhs = basis_convert(
                CohVector(n, FIXED_POINT, psi_J_jackson(J, req_s).comps, req_s.z, D),
                G_BASIS,
            )
            rhs = basis_convert(
                CohVector(n, FIXED_POINT, psi_J_jackson(J, req).comps, req.z, D),
                G_BASIS,
            )
            with mp.workdps(D + 10):
                kv = [
                    sum(K.entries[r][c] * rhs.comps[c] for c in range(n))
                    for r in range(n)
                ]
                nrm = max(abs(v) for v in kv)
                res = max(
                    abs(lhs.comps[r] - QKZ_SHIFT_SIGN * kv[r]) for r in range(n)
                )
                assert res < mpf(10) ** -(D - 15) * nrm


# -- solution basis ----------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_basis_matrix_invertible(n):
    req = make_req(n)
    basis = solution_basis_matrix(req)
    assert not basis.singular
    assert abs(basis.determinant) > 0
    assert basis.condition < mpf("1e30")


def test_label_shift_is_companion_action():
    """Columns labeled 2..n+1 equal columns 1..n times the companion matrix
    of the polynomial with the exponentiated parameters as roots."""
    n = 3
    req = make_req(n)
    m1 = solution_basis_matrix(req, first_label=1)
    m2 = solution_basis_matrix(req, first_label=2)
    zt = req.exp_z(D + 10)
    with mp.workdps(D + 10):
        es = elem_syms_numeric(list(zt), D + 10)
        comp = [[mpc(0)] * n for _ in range(n)]
        for j in range(n - 1):
            comp[j + 1][j] = mpc(1)
        for i in range(n):
            comp[i][n - 1] = (-1) ** (n - i + 1) * es[n - i]
        prod = [
            [
                sum(m1.entries[r][k] * comp[k][c] for k in range(n))
                for c in range(n)
            ]
            for r in range(n)
        ]
        scale = max(max(abs(e) for e in row) for row in m2.entries)
        worst = max(
            abs(prod[r][c] - m2.entries[r][c])
            for r in range(n)
            for c in range(n)
        )
        assert worst < mpf(10) ** -(D - 15) * scale


# -- frame moves -------------------------------------------------------------------


def test_reframe_same_parameters_is_identity():
    req = make_req(2)
    vec = basis_convert(
        CohVector(2, FIXED_POINT, psi_J_jackson(1, req).comps, req.z, D), G_BASIS
    )
    back = reframe(vec, req.z)
    assert rel_diff(vec.comps, back.comps) < mpf(10) ** -(D - 8)


def test_reframe_round_trip():
    req = make_req(2)
    vec = basis_convert(
        CohVector(2, FIXED_POINT, psi_J_jackson(1, req).comps, req.z, D), G_BASIS
    )
    with mp.workdps(D + 10):
        other = (mpc("0.9"), mpc("-0.7"))
    there = reframe(vec, other)
    back = reframe(there, req.z)
    assert there.basis_tag == G_BASIS
    assert rel_diff(vec.comps, back.comps) < mpf(10) ** -(D - 10)
