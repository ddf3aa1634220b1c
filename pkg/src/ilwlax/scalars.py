"""Exact coefficient ring of the truncated operator calculus.

A :class:`Scalar` is an element of (Q adjoined I with I^2 = -1)[t][e]
modulo e^(K+1): a finite sum of monomials I^i * t^a * e^b with rational
coefficients, where I is the imaginary unit (exponent kept reduced mod 2,
the sign of I^2 folded into the coefficient), t is a polynomial variable
and e is the series variable truncated at order K.  The truncation order
is part of the value; combining values of different orders is an error,
never a silent coercion.

:class:`MuScalar` is the alternative normalization used on the
intermediate-long-wave side: Laurent monomials m^a * e^(2g) with rational
coefficients, I-free and even in e.  The two are related by the monomial
maps :func:`to_mu_form` / :func:`from_mu_form`.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Tuple

from .errors import NotDivisible, NotRealEven, TruncationMismatch

Key = Tuple[int, int, int]  # (i_pow in {0, 1}, tau_pow >= 0, eps_pow >= 0)

_bernoulli_cache = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """n-th Bernoulli number in the z/(exp(z)-1) convention, so that
    bernoulli(1) == -1/2.  Values are memoized write-once per index."""
    if n < 0:
        raise ValueError("bernoulli index must be non-negative")
    if n >= len(_bernoulli_cache):
        with _bernoulli_lock:
            while len(_bernoulli_cache) <= n:
                m = len(_bernoulli_cache)
                # sum_{k=0}^{m} C(m+1, k) B_k = 0
                acc = Fraction(0)
                binom = 1
                for k in range(m):
                    acc += binom * _bernoulli_cache[k]
                    binom = binom * (m + 1 - k) // (k + 1)
                _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[n]


def _fold_i(i_pow: int, coeff: Fraction) -> Tuple[int, Fraction]:
    # I^n -> sign * I^(n mod 2) with sign from I^2 = -1
    r = i_pow % 4
    if r in (2, 3):
        coeff = -coeff
    return r % 2, coeff


class Scalar:
    """Immutable element of the truncated coefficient ring."""

    __slots__ = ("terms", "order")

    def __init__(self, terms: Mapping[Key, Fraction], order: int):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        canon: dict = {}
        for (i_pow, tau_pow, eps_pow), coeff in terms.items():
            if tau_pow < 0 or eps_pow < 0:
                raise ValueError("negative exponent in Scalar term")
            if eps_pow > order:
                continue
            coeff = Fraction(coeff)
            i_pow, coeff = _fold_i(i_pow, coeff)
            key = (i_pow, tau_pow, eps_pow)
            coeff = canon.get(key, Fraction(0)) + coeff
            if coeff:
                canon[key] = coeff
            elif key in canon:
                del canon[key]
        object.__setattr__(self, "terms", canon)
        object.__setattr__(self, "order", order)

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict, order: int) -> "Scalar":
        """Trusted construction from an already-canonical term dict."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "order", order)
        return obj

    @classmethod
    def zero(cls, order: int) -> "Scalar":
        return cls._raw({}, order)

    @classmethod
    def one(cls, order: int) -> "Scalar":
        return cls({(0, 0, 0): Fraction(1)}, order)

    @classmethod
    def term(cls, coeff, order: int, i: int = 0, tau: int = 0, eps: int = 0) -> "Scalar":
        return cls({(i, tau, eps): Fraction(coeff)}, order)

    @classmethod
    def rational(cls, value, order: int) -> "Scalar":
        return cls.term(Fraction(value), order)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_real_even(self) -> bool:
        """No imaginary unit and only even powers of e."""
        return all(i == 0 and e % 2 == 0 for (i, _, e) in self.terms)

    def tau_degree(self) -> int:
        return max((t for (_, t, _) in self.terms), default=0)

    def constant_value(self) -> Fraction:
        """Coefficient of the unit monomial."""
        return self.terms.get((0, 0, 0), Fraction(0))

    def is_constant(self) -> bool:
        return all(k == (0, 0, 0) for k in self.terms)

    def with_order(self, order: int) -> "Scalar":
        """Re-truncate.  Lowering drops high-order terms; raising declares
        the missing coefficients zero, which is the caller's responsibility
        to justify."""
        if order >= self.order:
            return Scalar._raw(dict(self.terms), order)
        return Scalar._raw(
            {k: c for k, c in self.terms.items() if k[2] <= order}, order)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Scalar") -> None:
        if self.order != other.order:
            raise TruncationMismatch(
                f"scalar orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            prev = merged.get(key)
            if prev is None:
                merged[key] = coeff
            else:
                acc = prev + coeff
                if acc:
                    merged[key] = acc
                else:
                    del merged[key]
        return Scalar._raw(merged, self.order)

    def __neg__(self) -> "Scalar":
        return Scalar._raw({k: -c for k, c in self.terms.items()}, self.order)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        order = self.order
        for (i1, t1, e1), c1 in self.terms.items():
            for (i2, t2, e2), c2 in other.terms.items():
                e = e1 + e2
                if e > order:
                    continue
                q = c1 * c2
                i = i1 + i2
                if i > 1:
                    i -= 2
                    q = -q
                key = (i, t1 + t2, e)
                prev = out.get(key)
                out[key] = q if prev is None else prev + q
        return Scalar._raw({k: c for k, c in out.items() if c}, order)

    __rmul__ = __mul__

    def scale(self, q) -> "Scalar":
        q = Fraction(q)
        if not q:
            return Scalar._raw({}, self.order)
        return Scalar._raw({k: c * q for k, c in self.terms.items()}, self.order)

    def divide_rational(self, q) -> "Scalar":
        q = Fraction(q)
        if not q:
            raise ZeroDivisionError("division of Scalar by zero rational")
        return self.scale(1 / q)

    def divide_by_tau(self) -> "Scalar":
        """Exact division by t; every term must contain it."""
        out = {}
        for (i, t, e), c in self.terms.items():
            if t == 0:
                raise NotDivisible(f"term I^{i}*t^{t}*e^{e} has no t factor")
            out[(i, t - 1, e)] = c
        return Scalar._raw(out, self.order)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Scalar)
                and self.order == other.order
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    # -- rendering / serialization -----------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, t, e), c in self.sorted_terms():
            body = _render_monomial(c, [("I", i), ("t", t), ("e", e)])
            parts.append(body)
        return _join_signed(parts)

    __str__ = render

    def __repr__(self):
        return f"Scalar({self.render()!r}, K={self.order})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"i": i, "tau": t, "eps": e,
                 "num": str(c.numerator), "den": str(c.denominator)}
                for (i, t, e), c in self.sorted_terms()
            ],
            "K": self.order,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Scalar":
        terms = {}
        for item in obj["terms"]:
            key = (int(item["i"]), int(item["tau"]), int(item["eps"]))
            terms[key] = terms.get(key, Fraction(0)) + Fraction(
                int(item["num"]), int(item["den"]))
        return cls(terms, int(obj["K"]))


def divide_by_i_eps(s: Scalar) -> Scalar:
    """Exact division by I*e.

    Every term must carry at least one power of e.  The top coefficient of
    the quotient would need the truncated e^(K+1) part of the input, so the
    result carries truncation order K-1.
    """
    out = {}
    for (i, t, e), c in s.terms.items():
        if e == 0:
            raise NotDivisible(f"term I^{i}*t^{t} is free of e")
        # 1/I = -I
        if i == 1:
            out[(0, t, e - 1)] = c
        else:
            out[(1, t, e - 1)] = -c
    return Scalar._raw(out, s.order - 1)


class MuScalar:
    """Coefficient in the m-normalization: Laurent powers of m paired with
    even powers of e, rational coefficients, no imaginary unit."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], Fraction]):
        canon = {}
        for (mu_pow, eps_pow), coeff in terms.items():
            if eps_pow < 0 or eps_pow % 2:
                raise ValueError("MuScalar needs even, non-negative e powers")
            coeff = Fraction(coeff)
            if coeff:
                canon[(mu_pow, eps_pow)] = canon.get((mu_pow, eps_pow), Fraction(0)) + coeff
                if not canon[(mu_pow, eps_pow)]:
                    del canon[(mu_pow, eps_pow)]
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, *_):
        raise AttributeError("MuScalar is immutable")

    @classmethod
    def term(cls, coeff, mu: int = 0, eps: int = 0) -> "MuScalar":
        return cls({(mu, eps): Fraction(coeff)})

    def __add__(self, other: "MuScalar") -> "MuScalar":
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = merged.get(key, Fraction(0)) + coeff
            if acc:
                merged[key] = acc
            elif key in merged:
                del merged[key]
        return MuScalar(merged)

    def __neg__(self) -> "MuScalar":
        return MuScalar({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MuScalar") -> "MuScalar":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, MuScalar) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = [
            _render_monomial(c, [("m", mu), ("e", e)])
            for (mu, e), c in self.sorted_terms()
        ]
        return _join_signed(parts)

    __str__ = render

    def __repr__(self):
        return f"MuScalar({self.render()!r})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"mu": mu, "eps": e, "num": str(c.numerator), "den": str(c.denominator)}
                for (mu, e), c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MuScalar":
        terms = {}
        for item in obj["terms"]:
            key = (int(item["mu"]), int(item["eps"]))
            terms[key] = terms.get(key, Fraction(0)) + Fraction(
                int(item["num"]), int(item["den"]))
        return cls(terms)


def to_mu_form(s: Scalar) -> MuScalar:
    """Convert a real, e-even Scalar to the m-normalization.

    Monomial map: t^k e^(2g) -> (-1)^k m^(g-k) e^(2g).  Raises
    :class:`NotRealEven` if the input carries I or odd powers of e.
    """
    out: dict = {}
    for (i, t, e), c in s.terms.items():
        if i != 0 or e % 2:
            raise NotRealEven(f"term I^{i}*t^{t}*e^{e} is not real and even")
        g = e // 2
        key = (g - t, e)
        coeff = c if t % 2 == 0 else -c
        acc = out.get(key, Fraction(0)) + coeff
        if acc:
            out[key] = acc
        elif key in out:
            del out[key]
    return MuScalar(out)


def from_mu_form(m: MuScalar, order: int) -> Scalar:
    """Inverse of :func:`to_mu_form`: m^a e^(2g) -> (-1)^(a+g) t^(g-a) e^(2g).

    Defined for mu powers a <= g (so the t exponent stays non-negative);
    terms beyond the truncation order are dropped.
    """
    out: dict = {}
    for (a, e), c in m.terms.items():
        g = e // 2
        if a > g:
            raise ValueError(
                f"monomial m^{a}*e^{e} has no polynomial image in t")
        coeff = c if (a + g) % 2 == 0 else -c
        key = (0, g - a, e)
        acc = out.get(key, Fraction(0)) + coeff
        if acc:
            out[key] = acc
        elif key in out:
            del out[key]
    return Scalar(out, order)


# -- shared rendering helpers ------------------------------------------------

def _render_monomial(coeff: Fraction, powers: Iterable[Tuple[str, int]]) -> str:
    symbols = []
    for name, p in powers:
        if p == 0:
            continue
        symbols.append(name if p == 1 else f"{name}^{p}")
    mag = abs(coeff)
    if mag == 1 and symbols:
        body = "*".join(symbols)
    else:
        num = str(mag) if mag.denominator == 1 else f"({mag})"
        body = "*".join([num] + symbols)
    return ("-" if coeff < 0 else "") + body


def _join_signed(parts: list) -> str:
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out
