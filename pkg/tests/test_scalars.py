import random
from fractions import Fraction
from math import factorial

import pytest

from ilwlax import MuScalar, Scalar, bernoulli, divide_by_i_eps, from_mu_form, to_mu_form
from ilwlax.errors import NotDivisible, NotRealEven, TruncationMismatch

from conftest import random_scalar

K = 6


def ieps(order=K):
    return Scalar.term(1, order, i=1, eps=1)


def test_i_eps_square():
    assert ieps() * ieps() == Scalar.term(-1, K, eps=2)


def test_truncation_drops_high_orders():
    one = Scalar.one(1)
    tau_eps = Scalar.term(1, 1, tau=1, eps=1)
    assert (one + tau_eps) * (one - tau_eps) == Scalar.one(1)


def test_i_cube():
    half_tau = Scalar.term(Fraction(1, 2), K, tau=1)
    cube = ieps() * ieps() * ieps()
    assert half_tau * cube == Scalar.term(Fraction(-1, 2), K, i=1, tau=1, eps=3)


def test_i_exponent_folds_in_constructor():
    assert Scalar.term(1, K, i=2) == Scalar.term(-1, K)
    assert Scalar.term(1, K, i=3) == Scalar.term(-1, K, i=1)


def test_mixed_orders_rejected():
    with pytest.raises(TruncationMismatch):
        Scalar.one(3) + Scalar.one(4)
    with pytest.raises(TruncationMismatch):
        Scalar.one(3) * Scalar.one(4)


def test_bernoulli_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(6) == Fraction(1, 42)
    for n in range(3, 25, 2):
        assert bernoulli(n) == 0


def test_bernoulli_generating_function():
    # convolution of sum B_n z^n / n! with (exp(z) - 1)/z must be 1
    for n in range(0, 16):
        acc = sum(bernoulli(k) / factorial(k) * Fraction(1, factorial(n - k + 1))
                  for k in range(n + 1))
        assert acc == (1 if n == 0 else 0)


def test_divide_by_i_eps_examples():
    q = divide_by_i_eps(Scalar.term(3, K, i=1, eps=1))
    assert q == Scalar.term(3, K - 1)
    assert q.order == K - 1
    assert divide_by_i_eps(Scalar.term(-1, K, eps=2)) == Scalar.term(1, K - 1, i=1, eps=1)
    with pytest.raises(NotDivisible):
        divide_by_i_eps(Scalar.term(5, K, tau=1))


def test_divide_by_tau():
    assert Scalar.term(2, K, tau=3, eps=1).divide_by_tau() == Scalar.term(2, K, tau=2, eps=1)
    with pytest.raises(NotDivisible):
        Scalar.term(1, K, eps=2).divide_by_tau()


def test_to_mu_form_examples():
    # g=1 coefficient of the cubic Hamiltonian's second-derivative term
    assert to_mu_form(Scalar.term(Fraction(-1, 24), K, tau=1, eps=2)) == \
        MuScalar.term(Fraction(1, 24), mu=0, eps=2)
    assert to_mu_form(Scalar.term(Fraction(5, 7), K, tau=2, eps=4)) == \
        MuScalar.term(Fraction(5, 7), mu=0, eps=4)
    assert to_mu_form(Scalar.one(K)) == MuScalar.term(1)


def test_to_mu_form_rejects_imaginary_and_odd():
    with pytest.raises(NotRealEven):
        to_mu_form(Scalar.term(1, K, i=1, eps=2))
    with pytest.raises(NotRealEven):
        to_mu_form(Scalar.term(1, K, eps=3))


def test_mu_round_trip():
    rng = random.Random(7)
    for _ in range(50):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            g = rng.randint(0, 3)
            a = rng.randint(-2, g)  # mu power never exceeds eps/2
            terms[(a, 2 * g)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        m = MuScalar(terms)
        assert to_mu_form(from_mu_form(m, K)) == m


def test_tau_round_trip_real_even():
    rng = random.Random(8)
    for _ in range(50):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            g = rng.randint(0, 3)
            t = rng.randint(0, 3)
            terms[(0, t, 2 * g)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        s = Scalar(terms, K)
        assert from_mu_form(to_mu_form(s), K) == s


def test_ring_axioms_randomized():
    rng = random.Random(42)
    for _ in range(60):
        a = random_scalar(rng, K)
        b = random_scalar(rng, K)
        c = random_scalar(rng, K)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a - a == Scalar.zero(K)


def test_render():
    s = Scalar.term(Fraction(-1, 12), K, tau=1, eps=2)
    assert s.render() == "-(1/12)*t*e^2"
    assert Scalar.zero(K).render() == "0"
    assert Scalar.term(1, K, i=1).render() == "I"


def test_json_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        s = random_scalar(rng, K)
        assert Scalar.from_json(s.to_json()) == s
