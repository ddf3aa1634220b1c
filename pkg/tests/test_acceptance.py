"""Acceptance suite at the reference configuration K=6, N=5, dMax=3.

Every equality is exact in the truncated ring (zero tolerance modulo
e^(K+1) and the configured shift depth).  Each criterion prints one
PASS/FAIL line with its own wall time and asserts its runtime budget.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import factorial

from ilwlax import (DiffPoly, HierarchyConfig, LocalFunctional, Scalar,
                    bernoulli, build_lax, check_dispersionless_identities,
                    functional_equal, ilw_equation_rhs, ilw_h2_display,
                    pd_polynomial, poisson_bracket, solve_symbol, to_mu_form,
                    verify)
from ilwlax.dispersionless import diffpoly_dispersionless
from ilwlax.diffpoly import MuPoly
from ilwlax.scalars import MuScalar
from ilwlax.shiftops import ShiftOperator

from conftest import random_operator, random_poly

K = 6


@contextmanager
def criterion(number: int, label: str, budget_seconds: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {number}: {label}")
        raise
    elapsed = time.perf_counter() - start
    print(f"[PASS] criterion {number}: {label} ({elapsed:.2f}s, budget {budget_seconds:g}s)")
    assert elapsed < budget_seconds


def expected_a1(order: int) -> DiffPoly:
    tau = Scalar.term(1, order, tau=1)
    series = DiffPoly.zero(order)
    for n in range(order + 1):
        if n and bernoulli(n) == 0:
            continue
        coeff = Scalar.term(bernoulli(n) / factorial(n), order, i=n, eps=n)
        series = series + DiffPoly.monomial({n: 1}, coeff)
    return series.scale_scalar(tau)


def test_criterion_1_lax_coefficients():
    with criterion(1, "a_0 = u and a_1 is the Bernoulli expansion", 1.0):
        small = build_lax(HierarchyConfig(eps_order=K, lambda_depth=1, d_max=0))
        assert small.a(0) == DiffPoly.u(K)
        # explicit expansion: t*(u - (I e/2) u_x - (e^2/12) u_xx
        #                        - (e^4/720) u_4 - (e^6/30240) u_6)
        literal = DiffPoly.zero(K)
        for pairs, coeff in (
            ({0: 1}, Scalar.term(1, K, tau=1)),
            ({1: 1}, Scalar.term(Fraction(-1, 2), K, i=1, tau=1, eps=1)),
            ({2: 1}, Scalar.term(Fraction(-1, 12), K, tau=1, eps=2)),
            ({4: 1}, Scalar.term(Fraction(-1, 720), K, tau=1, eps=4)),
            ({6: 1}, Scalar.term(Fraction(-1, 30240), K, tau=1, eps=6)),
        ):
            literal = literal + DiffPoly.monomial(pairs, coeff)
        assert small.a(1) == literal
        assert literal == expected_a1(K)


def test_criterion_2_defining_equation():
    with criterion(2, "defining equation, log commutation, residue recursion", 30.0):
        lax = build_lax(HierarchyConfig(eps_order=K, lambda_depth=5, d_max=3))
        assert verify(lax, "defining_equation").passed
        for m in (1, 2, 3):
            assert verify(lax, "log_commutation", (m,)).passed
            assert verify(lax, "log_residue_recursion", (m,)).passed


def test_criterion_3_first_flow(lax):
    with criterion(3, "T_1 flow value and commutator route", 30.0):
        u = DiffPoly.u(K)
        ux = DiffPoly.variable(1, K)
        expected = u * ux + ux.scale_scalar(Scalar.term(1, K, tau=1))
        for g, q in ((1, Fraction(1, 12)), (2, Fraction(1, 720)), (3, Fraction(1, 30240))):
            expected = expected + DiffPoly.monomial(
                {2 * g + 1: 1}, Scalar.term(-q, K, tau=1, eps=2 * g))
        assert lax.flow(1) == expected
        assert lax.flow_via_commutator(1) == expected


def test_criterion_4_flow_commutativity(lax):
    with criterion(4, "pairwise commutativity of the first four flows", 300.0):
        for d1, d2 in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
            assert verify(lax, "flow_commutativity", (d1, d2)).passed


def test_criterion_5_hamiltonian_structure(lax):
    with criterion(5, "Hamiltonian structure: gradients, brackets, conservation", 300.0):
        for d in range(4):
            assert verify(lax, "hamiltonian_flow_match", (d,)).passed
        for d1 in range(4):
            for d2 in range(4):
                assert poisson_bracket(lax.hamiltonian(d1), lax.hamiltonian(d2)).is_zero()
        for d in range(1, 5):
            assert verify(lax, "conservation", (d,)).passed


def test_criterion_6_triangular_relation(lax):
    with criterion(6, "triangular relation and flow shift", 300.0):
        assert pd_polynomial(2).coeffs == (Fraction(1), Fraction(1))
        assert pd_polynomial(3).coeffs == (Fraction(1, 2), Fraction(3, 2), Fraction(1))
        assert pd_polynomial(4).coeffs == (Fraction(1, 6), Fraction(1),
                                           Fraction(11, 6), Fraction(1))
        for d in range(4):
            assert verify(lax, "triangular_relation", (d,)).passed
        # first Lax flow is the substituted equation flow plus translation
        ilw_flow = lax.ilw_hamiltonian(1).gradient().x_derivative()
        shift = DiffPoly.monomial({1: 1}, Scalar.term(1, K, tau=1))
        assert lax.flow(1) == ilw_flow + shift


def test_criterion_7_ilw_h2_golden(lax):
    with criterion(7, "reconstructed fourth Hamiltonian matches the display", 60.0):
        display = ilw_h2_display(K)
        assert functional_equal(lax.ilw_hamiltonian(2), display)
        mu = MuPoly.from_diffpoly(display.density)
        checks = {
            ((0, 4),): MuScalar.term(Fraction(1, 24)),
            ((2, 1), (0, 2)): MuScalar.term(Fraction(1, 48), mu=0, eps=2),
            ((4, 1), (0, 1)): MuScalar.term(Fraction(3, 2) * Fraction(1, 720),
                                            mu=0, eps=4),
            ((4, 1), (0, 2)): MuScalar.term(Fraction(1, 4) * Fraction(1, 720),
                                            mu=1, eps=4),
            ((6, 1), (0, 1)): MuScalar.term(Fraction(2, 1) * Fraction(1, 30240),
                                            mu=1, eps=6),
            ((6, 1), (0, 2)): MuScalar.term(Fraction(1, 4) * Fraction(1, 30240),
                                            mu=2, eps=6),
        }
        assert mu.terms == checks


def test_criterion_8_ilw_equation_form(lax):
    with criterion(8, "equation right-hand side coefficients", 60.0):
        rhs = ilw_equation_rhs(K)
        for g, q in ((1, Fraction(1, 12)), (2, Fraction(1, 720)), (3, Fraction(1, 30240))):
            assert rhs.terms[((2 * g + 1, 1),)] == Scalar.term(-q, K, tau=1, eps=2 * g)
            assert q == abs(bernoulli(2 * g)) / factorial(2 * g)
        assert lax.ilw_hamiltonian(1).gradient().x_derivative() == rhs


def test_criterion_9_dispersionless_oracle(lax):
    with criterion(9, "zero-dispersion identities and coefficient match", 10.0):
        reports = check_dispersionless_identities(5, depth=8)
        assert all(r.passed for r in reports)
        symbol = solve_symbol(8)
        for n in range(6):
            assert diffpoly_dispersionless(lax.a(n)) == symbol.coefficient(n)


def test_criterion_10_property_suites(lax):
    with criterion(10, "structural property suites", 120.0):
        # weights
        for n in range(6):
            assert lax.a(n).homogeneity_degree() == 0
            if n:
                assert lax.f(n).homogeneity_degree() == 0
        for d in range(4):
            assert lax.flow(d).homogeneity_degree() == 1

        # reality of every Hamiltonian gradient
        for d in range(4):
            assert lax.hamiltonian(d).gradient().is_real_even()
            assert lax.ilw_hamiltonian(d).gradient().is_real_even()

        # randomized residue-commutator functionals
        rng = random.Random(99)
        for _ in range(100):
            m, n = rng.randint(-3, 3), rng.randint(-3, 3)
            f = random_poly(rng, 4)
            g = random_poly(rng, 4)
            comm = ShiftOperator.of_poly(f, m).commutator(ShiftOperator.of_poly(g, n))
            assert LocalFunctional(comm.residue()).is_zero()

        # composition and associativity laws
        for _ in range(10):
            slot = rng.randint(0, 3)
            a, b, c = (random_operator(rng, 3, with_first=(slot == i + 1), span=1)
                       for i in range(3))
            assert a.compose(b).compose(c) == a.compose(b.compose(c))
        p = random_poly(rng, 4)
        q = random_poly(rng, 4)
        assert (p * q).lambda_shift(2) == p.lambda_shift(2) * q.lambda_shift(2)

        # primitive round trips
        for _ in range(25):
            q = random_poly(rng, 4)
            deriv = q.x_derivative()
            assert deriv.formal_primitive().x_derivative() == deriv

        # depth stability
        wider = build_lax(HierarchyConfig(eps_order=K, lambda_depth=6, d_max=3))
        for n in range(6):
            assert wider.a(n) == lax.a(n)
        for d in range(4):
            assert functional_equal(wider.hamiltonian(d), lax.hamiltonian(d))
