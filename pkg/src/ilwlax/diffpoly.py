"""Differential polynomials in u and its x-derivatives.

A monomial is a product u_{k1}^{m1} * ... * u_{kr}^{mr}, stored as a tuple
of (derivative order, multiplicity) pairs sorted by descending order; the
empty tuple is the unit monomial.  A :class:`DiffPoly` maps monomials to
:class:`~ilwlax.scalars.Scalar` coefficients sharing one truncation order.
Coefficients never depend on x, so the kernel of the variational
derivative is exactly total derivatives plus variable-free terms, which is
what makes :class:`LocalFunctional` equality decidable.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Mapping, Optional, Tuple

from .errors import NotATotalDerivative, NotHomogeneous, NotRealEven, TruncationMismatch
from .scalars import MuScalar, Scalar, to_mu_form
from .scalars import divide_by_i_eps as _scalar_div_i_eps
from .scalars import _join_signed

Monomial = Tuple[Tuple[int, int], ...]


def _mono(pairs: Mapping[int, int]) -> Monomial:
    return tuple(sorted(((k, m) for k, m in pairs.items() if m), reverse=True))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    merged = dict(a)
    for k, m in b:
        merged[k] = merged.get(k, 0) + m
    return _mono(merged)


def _mono_weight(mono: Monomial) -> int:
    """Total derivative count: u_k counts k per factor."""
    return sum(k * m for k, m in mono)


def _mono_render(mono: Monomial) -> str:
    names = []
    for k, m in sorted(mono):
        if k == 0:
            name = "u"
        elif k == 1:
            name = "u_x"
        elif k == 2:
            name = "u_xx"
        else:
            name = f"u_{k}"
        names.append(name if m == 1 else f"{name}^{m}")
    return "*".join(names)


class DiffPoly:
    """Immutable differential polynomial with exact truncated coefficients.

    Shift and derivative-chain results are memoized per instance; the
    caches hold values equal under races, so concurrent reads are safe.
    """

    __slots__ = ("terms", "order", "_chain", "_shifts")

    def __init__(self, terms: Mapping[Monomial, Scalar], order: int):
        canon: Dict[Monomial, Scalar] = {}
        for mono, coeff in terms.items():
            if coeff.order != order:
                raise TruncationMismatch(
                    f"coefficient order {coeff.order} != polynomial order {order}")
            if coeff.is_zero():
                continue
            if mono in canon:
                acc = canon[mono] + coeff
                if acc.is_zero():
                    del canon[mono]
                else:
                    canon[mono] = acc
            else:
                canon[mono] = coeff
        object.__setattr__(self, "terms", canon)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_chain", None)
        object.__setattr__(self, "_shifts", None)

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Scalar], order: int) -> "DiffPoly":
        """Trusted construction from an already-canonical term dict."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "_chain", None)
        object.__setattr__(obj, "_shifts", None)
        return obj

    def __setattr__(self, *_):
        raise AttributeError("DiffPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "DiffPoly":
        return cls({}, order)

    @classmethod
    def variable(cls, k: int, order: int) -> "DiffPoly":
        """The single variable u_k."""
        return cls({((k, 1),): Scalar.one(order)}, order)

    @classmethod
    def u(cls, order: int) -> "DiffPoly":
        return cls.variable(0, order)

    @classmethod
    def constant(cls, scalar: Scalar) -> "DiffPoly":
        return cls({(): scalar}, scalar.order)

    @classmethod
    def monomial(cls, pairs: Mapping[int, int], coeff: Scalar) -> "DiffPoly":
        return cls({_mono(pairs): coeff}, coeff.order)

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiffPoly)
                and self.order == other.order
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.order, frozenset(
            (m, frozenset(c.terms.items())) for m, c in self.terms.items())))

    def variable_free_coefficient(self) -> Scalar:
        return self.terms.get((), Scalar.zero(self.order))

    def max_derivative_order(self) -> int:
        return max((mono[0][0] for mono in self.terms if mono), default=0)

    def tau_degree(self) -> int:
        return max((c.tau_degree() for c in self.terms.values()), default=0)

    def with_order(self, order: int) -> "DiffPoly":
        """Re-truncate every coefficient; see Scalar.with_order for the
        contract when raising."""
        out = {}
        for m, c in self.terms.items():
            c = c.with_order(order)
            if c.terms:
                out[m] = c
        return DiffPoly._raw(out, order)

    def is_real_even(self) -> bool:
        return all(c.is_real_even() for c in self.terms.values())

    def parity_split(self) -> Tuple["DiffPoly", "DiffPoly"]:
        """Split into (real-even, the rest) by coefficient monomial parity."""
        even: Dict[Monomial, Scalar] = {}
        odd: Dict[Monomial, Scalar] = {}
        for mono, coeff in self.terms.items():
            e_terms = {k: c for k, c in coeff.terms.items() if k[0] == 0 and k[2] % 2 == 0}
            o_terms = {k: c for k, c in coeff.terms.items() if not (k[0] == 0 and k[2] % 2 == 0)}
            if e_terms:
                even[mono] = Scalar._raw(e_terms, self.order)
            if o_terms:
                odd[mono] = Scalar._raw(o_terms, self.order)
        return DiffPoly._raw(even, self.order), DiffPoly._raw(odd, self.order)

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "DiffPoly") -> None:
        if self.order != other.order:
            raise TruncationMismatch(
                f"polynomial orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        self._check(other)
        merged = dict(self.terms)
        for mono, coeff in other.terms.items():
            if mono in merged:
                acc = merged[mono] + coeff
                if acc.is_zero():
                    del merged[mono]
                else:
                    merged[mono] = acc
            else:
                merged[mono] = coeff
        return DiffPoly._raw(merged, self.order)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly._raw({m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Scalar):
            return self.scale_scalar(other)
        self._check(other)
        order = self.order
        acc: Dict[Monomial, dict] = {}
        for m1, c1 in self.terms.items():
            c1_terms = c1.terms
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                bucket = acc.get(mono)
                if bucket is None:
                    bucket = acc[mono] = {}
                for (i1, t1, e1), q1 in c1_terms.items():
                    for (i2, t2, e2), q2 in c2.terms.items():
                        e = e1 + e2
                        if e > order:
                            continue
                        q = q1 * q2
                        i = i1 + i2
                        if i > 1:
                            i -= 2
                            q = -q
                        key = (i, t1 + t2, e)
                        prev = bucket.get(key)
                        bucket[key] = q if prev is None else prev + q
        out: Dict[Monomial, Scalar] = {}
        for mono, bucket in acc.items():
            bucket = {k: v for k, v in bucket.items() if v}
            if bucket:
                out[mono] = Scalar._raw(bucket, order)
        return DiffPoly._raw(out, order)

    __rmul__ = __mul__

    def scale(self, q) -> "DiffPoly":
        q = Fraction(q)
        if not q:
            return DiffPoly.zero(self.order)
        return DiffPoly._raw({m: c.scale(q) for m, c in self.terms.items()}, self.order)

    def scale_scalar(self, s: Scalar) -> "DiffPoly":
        if s.order != self.order:
            raise TruncationMismatch(
                f"scalar order {s.order} != polynomial order {self.order}")
        if s.is_zero():
            return DiffPoly.zero(self.order)
        out = {}
        for m, c in self.terms.items():
            c = c * s
            if c.terms:
                out[m] = c
        return DiffPoly._raw(out, self.order)

    # -- calculus -----------------------------------------------------------

    def x_derivative(self) -> "DiffPoly":
        """Total x-derivative: u_k -> u_{k+1} by the Leibniz rule."""
        out: Dict[Monomial, Scalar] = {}
        for mono, coeff in self.terms.items():
            base = dict(mono)
            for k, m in mono:
                bumped = dict(base)
                bumped[k] = m - 1
                bumped[k + 1] = bumped.get(k + 1, 0) + 1
                new = _mono(bumped)
                c = coeff.scale(m)
                if new in out:
                    acc = out[new] + c
                    if acc.is_zero():
                        del out[new]
                    else:
                        out[new] = acc
                else:
                    out[new] = c
        return DiffPoly._raw(out, self.order)

    def _derivative_chain(self, j: int) -> "DiffPoly":
        """j-th total derivative, memoized so that repeated shifts of the
        same polynomial reuse one chain."""
        chain = self._chain
        if chain is None:
            chain = [self]
            object.__setattr__(self, "_chain", chain)
        while len(chain) <= j:
            chain.append(chain[-1].x_derivative())
        return chain[j]

    def partial(self, k: int) -> "DiffPoly":
        """Formal partial derivative with respect to the variable u_k."""
        out: Dict[Monomial, Scalar] = {}
        for mono, coeff in self.terms.items():
            d = dict(mono)
            m = d.get(k)
            if not m:
                continue
            d[k] = m - 1
            new = _mono(d)
            c = coeff.scale(m)
            out[new] = (out[new] + c) if new in out else c
        return DiffPoly._raw({m: c for m, c in out.items() if c.terms}, self.order)

    def lambda_shift(self, n: int) -> "DiffPoly":
        """Apply the shift exp(n*I*e*d/dx); a ring homomorphism, finite
        because powers of e beyond the truncation vanish."""
        if n == 0:
            return self
        shifts = self._shifts
        if shifts is None:
            shifts = {}
            object.__setattr__(self, "_shifts", shifts)
        cached = shifts.get(n)
        if cached is not None:
            return cached
        out = self
        for j in range(1, self.order + 1):
            deriv = self._derivative_chain(j)
            if deriv.is_zero():
                break
            coeff = Scalar.term(Fraction(n ** j, factorial(j)), self.order, i=j, eps=j)
            out = out + deriv.scale_scalar(coeff)
        shifts[n] = out
        return out

    def variational_derivative(self) -> "DiffPoly":
        """Euler operator: sum over k of (-d/dx)^k applied to partial(k)."""
        out = DiffPoly.zero(self.order)
        orders = {k for mono in self.terms for k, _ in mono}
        for k in orders:
            term = self.partial(k)
            for _ in range(k):
                term = term.x_derivative()
            out = out + (term if k % 2 == 0 else -term)
        return out

    def evolutionary_derivative(self, q: "DiffPoly") -> "DiffPoly":
        """Derivative of self along the flow u -> u + delta * q: the sum of
        d/dx^k(q) times partial(k)."""
        self._check(q)
        orders = sorted({k for mono in self.terms for k, _ in mono})
        out = DiffPoly.zero(self.order)
        for k in orders:
            out = out + q._derivative_chain(k) * self.partial(k)
        return out

    def divide_by_i_eps(self) -> "DiffPoly":
        """Coefficient-wise exact division by I*e; drops one truncation
        order like the scalar version."""
        return DiffPoly._raw(
            {m: _scalar_div_i_eps(c) for m, c in self.terms.items()},
            self.order - 1)

    def formal_primitive(self) -> "DiffPoly":
        """Integrate by parts: return q with q.x_derivative() == self.

        Greedy elimination of the leading monomial (largest in the
        descending (order, multiplicity) tuple ordering).  The leading
        monomial of a total derivative always has its highest-derivative
        variable to the first power, so a stall at a nonlinear or
        derivative-free top variable certifies the input is not a total
        derivative.
        """
        if not self.variable_free_coefficient().is_zero():
            raise NotATotalDerivative("input has a variable-free part")
        work = self
        out = DiffPoly.zero(self.order)
        while work.terms:
            mono = max(work.terms)
            k_top, m_top = mono[0]
            if k_top == 0:
                raise NotATotalDerivative(f"underivated monomial {_mono_render(mono)}")
            if m_top > 1:
                raise NotATotalDerivative(
                    f"nonlinear top variable in {_mono_render(mono)}")
            coeff = work.terms[mono]
            rest = dict(mono)
            del rest[k_top]
            j = rest.get(k_top - 1, 0)
            rest[k_top - 1] = j + 1
            cand = DiffPoly({_mono(rest): coeff.scale(Fraction(1, j + 1))}, self.order)
            out = out + cand
            work = work - cand.x_derivative()
        return out

    def homogeneity_degree(self) -> int:
        """Common weight (derivative count minus e power) of all terms."""
        degree: Optional[int] = None
        for mono, coeff in self.terms.items():
            w = _mono_weight(mono)
            for (_, _, e) in coeff.terms:
                d = w - e
                if degree is None:
                    degree = d
                elif d != degree:
                    raise NotHomogeneous(
                        f"monomial {_mono_render(mono)}*e^{e} has weight {d}, "
                        f"expected {degree}")
        return 0 if degree is None else degree

    # -- rendering / serialization -----------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.sorted_terms():
            mono_str = _mono_render(mono)
            if not mono_str:
                parts.append(coeff.render() if len(coeff.terms) == 1
                             else "(" + coeff.render() + ")")
                continue
            if len(coeff.terms) == 1:
                cs = coeff.render()
                if cs == "1":
                    parts.append(mono_str)
                elif cs == "-1":
                    parts.append("-" + mono_str)
                else:
                    parts.append(cs + "*" + mono_str)
            else:
                parts.append("(" + coeff.render() + ")*" + mono_str)
        return _join_signed(parts)

    __str__ = render

    def __repr__(self):
        return f"DiffPoly({self.render()!r}, K={self.order})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"vars": [[k, m] for k, m in mono], "coeff": coeff.to_json()}
                for mono, coeff in self.sorted_terms()
            ],
            "K": self.order,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DiffPoly":
        order = int(obj["K"])
        terms: Dict[Monomial, Scalar] = {}
        for item in obj["terms"]:
            mono = _mono({int(k): int(m) for k, m in item["vars"]})
            coeff = Scalar.from_json(item["coeff"])
            terms[mono] = terms.get(mono, Scalar.zero(order)) + coeff
        return cls(terms, order)


class MuPoly:
    """Differential polynomial with MuScalar coefficients; a display and
    interchange form only, produced by gauge conversion."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, MuScalar]):
        canon = {m: c for m, c in terms.items() if not c.is_zero()}
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, *_):
        raise AttributeError("MuPoly is immutable")

    @classmethod
    def from_diffpoly(cls, p: DiffPoly) -> "MuPoly":
        return cls({m: to_mu_form(c) for m, c in p.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, MuPoly) and self.terms == other.terms

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True):
            mono_str = _mono_render(mono)
            if not mono_str:
                parts.append(coeff.render())
            elif len(coeff.terms) == 1:
                cs = coeff.render()
                if cs == "1":
                    parts.append(mono_str)
                elif cs == "-1":
                    parts.append("-" + mono_str)
                else:
                    parts.append(cs + "*" + mono_str)
            else:
                parts.append("(" + coeff.render() + ")*" + mono_str)
        return _join_signed(parts)

    __str__ = render

    def to_json(self) -> dict:
        return {
            "terms": [
                {"vars": [[k, m] for k, m in mono], "coeff": coeff.to_json()}
                for mono, coeff in sorted(self.terms.items(), key=lambda kv: kv[0],
                                          reverse=True)
            ]
        }


class LocalFunctional:
    """A differential polynomial considered modulo total x-derivatives.

    Zero-testing goes through the variational derivative: the functional
    vanishes exactly when the Euler operator kills the density and the
    density has no variable-free part (a nonzero constant under the
    integral signals an upstream bug and counts as nonzero here).
    """

    __slots__ = ("density",)

    def __init__(self, density: DiffPoly):
        object.__setattr__(self, "density", density)

    def __setattr__(self, *_):
        raise AttributeError("LocalFunctional is immutable")

    @property
    def order(self) -> int:
        return self.density.order

    def is_zero(self) -> bool:
        return (self.density.variable_free_coefficient().is_zero()
                and self.density.variational_derivative().is_zero())

    def constant_obstruction(self) -> Scalar:
        """The variable-free part of the density, flagged separately."""
        return self.density.variable_free_coefficient()

    def __add__(self, other: "LocalFunctional") -> "LocalFunctional":
        return LocalFunctional(self.density + other.density)

    def __sub__(self, other: "LocalFunctional") -> "LocalFunctional":
        return LocalFunctional(self.density - other.density)

    def __neg__(self) -> "LocalFunctional":
        return LocalFunctional(-self.density)

    def scale_scalar(self, s: Scalar) -> "LocalFunctional":
        return LocalFunctional(self.density.scale_scalar(s))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalFunctional):
            return NotImplemented
        return (self - other).is_zero()

    def gradient(self) -> DiffPoly:
        return self.density.variational_derivative()

    def real_even_density(self) -> DiffPoly:
        """Representative density that is I-free and even in e.

        The density splits by coefficient parity; when the functional is
        real and even, the odd part integrates to zero, so it must be a
        total derivative.  Raises :class:`NotRealEven` otherwise.
        """
        even, odd = self.density.parity_split()
        if not odd.variable_free_coefficient().is_zero():
            raise NotRealEven("odd part has a variable-free term")
        if not odd.variational_derivative().is_zero():
            raise NotRealEven("odd part of the density is not a total derivative")
        return even

    def mu_representative(self) -> DiffPoly:
        """Real-even representative with no negative powers of m after
        conversion.

        The total derivative preserves the (t, e) bigrade of coefficients,
        so any graded piece with t exceeding e/2 (which would convert to a
        Laurent monomial in m) can only be an exact term; it is checked to
        be one and dropped.
        """
        even = self.real_even_density()
        order = even.order
        kept: Dict[Monomial, Scalar] = {}
        dropped: Dict[Tuple[int, int], Dict[Monomial, Scalar]] = {}
        for mono, coeff in even.terms.items():
            for key, q in coeff.terms.items():
                _, t, e = key
                target = kept if t <= e // 2 else dropped.setdefault((t, e), {})
                piece = Scalar._raw({key: q}, order)
                target[mono] = target[mono] + piece if mono in target else piece
        for (t, e), part in dropped.items():
            graded = DiffPoly._raw(
                {m: c for m, c in part.items() if c.terms}, order)
            if not graded.variable_free_coefficient().is_zero() \
                    or not graded.variational_derivative().is_zero():
                raise NotRealEven(
                    f"graded part t^{t} e^{e} is not a total derivative")
        return DiffPoly._raw({m: c for m, c in kept.items() if c.terms}, order)

    def render(self) -> str:
        return self.density.render()

    __str__ = render

    def __repr__(self):
        return f"LocalFunctional({self.density.render()!r})"

    def to_json(self) -> dict:
        return {"density": self.density.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "LocalFunctional":
        return cls(DiffPoly.from_json(obj["density"]))


def functional_is_zero(f: LocalFunctional) -> bool:
    return f.is_zero()


def functional_equal(f: LocalFunctional, g: LocalFunctional) -> bool:
    return (f - g).is_zero()
