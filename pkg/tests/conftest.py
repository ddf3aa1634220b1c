import random
from fractions import Fraction

import pytest

from ilwlax import DiffPoly, HierarchyConfig, Scalar, ShiftOperator, build_lax

REFERENCE = HierarchyConfig(eps_order=6, lambda_depth=5, d_max=3)


@pytest.fixture(scope="session")
def lax():
    """Reference build shared across the suite (K=6, N=5, dMax=3)."""
    return build_lax(REFERENCE)


def random_scalar(rng: random.Random, order: int, max_eps: int = 2) -> Scalar:
    s = Scalar.zero(order)
    for _ in range(rng.randint(1, 3)):
        s = s + Scalar.term(
            Fraction(rng.randint(-6, 6), rng.randint(1, 4)), order,
            i=rng.randint(0, 1), tau=rng.randint(0, 2),
            eps=rng.randint(0, min(max_eps, order)))
    return s


def random_poly(rng: random.Random, order: int, max_order: int = 3,
                max_factors: int = 2, n_terms: int = 3) -> DiffPoly:
    p = DiffPoly.zero(order)
    for _ in range(rng.randint(1, n_terms)):
        pairs = {}
        for _ in range(rng.randint(1, max_factors)):
            k = rng.randint(0, max_order)
            pairs[k] = pairs.get(k, 0) + 1
        p = p + DiffPoly.monomial(pairs, random_scalar(rng, order))
    return p


def random_operator(rng: random.Random, order: int, with_first: bool = False,
                    span: int = 2) -> ShiftOperator:
    zero = {n: random_poly(rng, order, max_order=2, n_terms=2)
            for n in range(-span, span + 1) if rng.random() < 0.6}
    first = {}
    if with_first:
        first[rng.randint(-1, 1)] = random_poly(rng, order, max_order=1, n_terms=1)
    return ShiftOperator(zero, first, order)
