from fractions import Fraction
from math import factorial

import pytest

from ilwlax import (DiffPoly, HierarchyConfig, LocalFunctional, Scalar,
                    bernoulli, build_lax, functional_equal, ilw_equation_rhs,
                    ilw_h2_display, pd_polynomial, poisson_bracket, verify,
                    verify_all)
from ilwlax.errors import DepthInsufficient, ResidualTerms
from ilwlax.hierarchy import invert_shift_minus_one

K = 6


def bernoulli_series(order: int, step: int = 1) -> DiffPoly:
    """sum_n B_n/n! (step * I e d/dx)^n applied to u."""
    out = DiffPoly.zero(order)
    for n in range(order + 1):
        if bernoulli(n) == 0 and n != 0:
            continue
        coeff = Scalar.term(bernoulli(n) * Fraction(step ** n, factorial(n)),
                            order, i=n, eps=n)
        out = out + DiffPoly.monomial({n: 1}, coeff)
    return out


def test_config_depth_rule():
    with pytest.raises(DepthInsufficient):
        HierarchyConfig(eps_order=4, lambda_depth=3, d_max=3)


def test_a0_is_u(lax):
    assert lax.a(0) == DiffPoly.u(K)


def test_a1_is_bernoulli_series_of_u(lax):
    tau = Scalar.term(1, K, tau=1)
    assert lax.a(1) == bernoulli_series(K).scale_scalar(tau)
    assert lax.f(1) == bernoulli_series(K)


def test_f2_against_residue_recursion_oracle(lax):
    # independent route: the S^(-2) level of res [V, L^m] = I e d/dx res L^m
    # at m = 2 pins v_2 through (1 - S^2) v_2 = known lower data
    guard = K + 1
    ieps = Scalar.term(1, guard, i=1, eps=1)
    L2 = lax.lax_power(2, guard=True)
    c1 = L2.zero_terms[1]
    c2 = L2.zero_terms[2]
    u = DiffPoly.u(guard)
    assert c2 == DiffPoly.constant(Scalar.one(guard))
    assert c1 == u + u.lambda_shift(1)
    v1 = -lax.f_guard(1)
    rhs = (L2.residue().x_derivative().scale_scalar(ieps)
           - (v1 * c1.lambda_shift(-1) - c1 * v1.lambda_shift(1)))
    v2 = invert_shift_minus_one(-rhs, step=2)
    assert -v2 == lax.f(2)


def test_coefficient_invariants(lax):
    for n in range(lax.config.lambda_depth + 1):
        assert lax.a(n).homogeneity_degree() == 0
        assert lax.a(n).tau_degree() <= n
        if n >= 1:
            assert lax.f(n).homogeneity_degree() == 0
            tau = Scalar.term(1, K, tau=1)
            assert lax.a(n) == lax.f(n).scale_scalar(tau)


def test_defining_equation_and_log(lax):
    assert verify(lax, "defining_equation").passed
    log_op = lax.log_operator()
    assert log_op.first_terms == {0: DiffPoly.constant(Scalar.one(K))}
    assert log_op.zero_terms[-1] == bernoulli_series(K)
    for m in (1, 2, 3):
        assert verify(lax, "log_commutation", (m,)).passed
        assert verify(lax, "log_residue_recursion", (m,)).passed


def test_flow_translation(lax):
    assert lax.flow(0) == DiffPoly.variable(1, K)


def test_flow_one_explicit(lax):
    u = DiffPoly.u(K)
    ux = DiffPoly.variable(1, K)
    expected = u * ux + ux.scale_scalar(Scalar.term(1, K, tau=1))
    for g in range(1, K // 2 + 1):
        coeff = Scalar.term(-abs(bernoulli(2 * g)) / factorial(2 * g),
                            K, tau=1, eps=2 * g)
        expected = expected + DiffPoly.monomial({2 * g + 1: 1}, coeff)
    assert lax.flow(1) == expected


def test_flow_routes_agree(lax):
    for d in range(lax.config.d_max + 1):
        assert lax.flow(d) == lax.flow_via_commutator(d)


def test_flow_homogeneity_and_reality(lax):
    for d in range(lax.config.d_max + 1):
        q = lax.flow(d)
        assert q.homogeneity_degree() == 1
        assert q.is_real_even()


def test_flow_index_gate(lax):
    with pytest.raises(DepthInsufficient):
        lax.flow(lax.config.d_max + 1)


def test_hamiltonian_d0(lax):
    half_u2 = DiffPoly.monomial({0: 2}, Scalar.rational(Fraction(1, 2), K))
    assert lax.hamiltonian(0) == LocalFunctional(half_u2)


def test_hamiltonian_d1_decomposition(lax):
    tau = Scalar.term(1, K, tau=1)
    expected = lax.ilw_hamiltonian(0).scale_scalar(tau) + lax.ilw_hamiltonian(1)
    assert lax.hamiltonian(1) == expected


def test_hamiltonian_reality(lax):
    for d in range(lax.config.d_max + 1):
        for func in (lax.hamiltonian(d), lax.ilw_hamiltonian(d)):
            grad = func.gradient()
            assert grad.is_real_even()


def test_pd_polynomials():
    assert pd_polynomial(1).coeffs == (Fraction(1),)
    assert pd_polynomial(2).coeffs == (Fraction(1), Fraction(1))
    assert pd_polynomial(3).coeffs == (Fraction(1, 2), Fraction(3, 2), Fraction(1))
    assert pd_polynomial(4).coeffs == (Fraction(1, 6), Fraction(1),
                                       Fraction(11, 6), Fraction(1))


def test_ilw_h0_h1(lax):
    assert lax.ilw_hamiltonian(0) == LocalFunctional(
        DiffPoly.monomial({0: 2}, Scalar.rational(Fraction(1, 2), K)))
    density = lax.ilw_hamiltonian(1).density
    expected = DiffPoly.monomial({0: 3}, Scalar.rational(Fraction(1, 6), K))
    for g, q in ((1, Fraction(1, 24)), (2, Fraction(1, 1440)), (3, Fraction(1, 60480))):
        expected = expected + DiffPoly.monomial(
            {2 * g: 1, 0: 1}, Scalar.term(-q, K, tau=1, eps=2 * g))
    assert density == expected


def test_ilw_dispersionless_parts(lax):
    from ilwlax.dispersionless import UTauPoly, diffpoly_dispersionless
    for d in range(lax.config.d_max + 1):
        got = diffpoly_dispersionless(lax.ilw_hamiltonian(d).density)
        assert got == UTauPoly.term(Fraction(1, factorial(d + 2)), u=d + 2)


def test_ilw_commutes_with_h1(lax):
    for d in range(lax.config.d_max + 1):
        bracket = poisson_bracket(lax.ilw_hamiltonian(d), lax.ilw_hamiltonian(1))
        assert bracket.is_zero()


def test_ilw_h2_golden(lax):
    assert functional_equal(lax.ilw_hamiltonian(2), ilw_h2_display(K))
    assert verify(lax, "ilw_h2_explicit").passed


def test_ilw_equation_form(lax):
    report = verify(lax, "ilw_equation_form")
    assert report.passed
    flow1 = lax.ilw_hamiltonian(1).gradient().x_derivative()
    assert flow1 == ilw_equation_rhs(K)
    shift = DiffPoly.monomial({1: 1}, Scalar.term(1, K, tau=1))
    assert lax.flow(1) == flow1 + shift


def test_triangular_relation(lax):
    for d in range(lax.config.d_max + 1):
        assert verify(lax, "triangular_relation", (d,)).passed


def test_flow_commutativity(lax):
    for d1 in range(lax.config.d_max + 1):
        for d2 in range(d1 + 1, lax.config.d_max + 1):
            assert verify(lax, "flow_commutativity", (d1, d2)).passed


def test_conservation(lax):
    for d in range(1, lax.config.d_max + 2):
        assert verify(lax, "conservation", (d,)).passed


def test_hamiltonian_flow_match(lax):
    for d in range(lax.config.d_max + 1):
        assert verify(lax, "hamiltonian_flow_match", (d,)).passed


def test_lax_brackets_vanish(lax):
    for d1 in range(lax.config.d_max + 1):
        for d2 in range(d1, lax.config.d_max + 1):
            assert poisson_bracket(lax.hamiltonian(d1), lax.hamiltonian(d2)).is_zero()


def test_poisson_bracket_antisymmetry():
    import random

    from conftest import random_poly
    rng = random.Random(20)
    for _ in range(10):
        f = LocalFunctional(random_poly(rng, 4))
        g = LocalFunctional(random_poly(rng, 4))
        assert (poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero()
        assert poisson_bracket(f, f).is_zero()


def test_depth_stability(lax):
    wider = build_lax(HierarchyConfig(eps_order=K, lambda_depth=6, d_max=3))
    for n in range(lax.config.lambda_depth + 1):
        assert wider.a(n) == lax.a(n)
    for d in range(4):
        assert functional_equal(wider.hamiltonian(d), lax.hamiltonian(d))
        assert functional_equal(wider.ilw_hamiltonian(d), lax.ilw_hamiltonian(d))


def test_residue_power_gate(lax):
    with pytest.raises(DepthInsufficient):
        lax.residue_power(lax.config.lambda_depth + 2)


def test_unknown_check_rejected(lax):
    with pytest.raises(ValueError):
        verify(lax, "no_such_check")


def test_verify_all_passes(lax):
    reports = verify_all(lax)
    assert len(reports) >= 25
    assert all(r.passed for r in reports)


def test_symbol_match(lax):
    assert verify(lax, "symbol_match").passed
