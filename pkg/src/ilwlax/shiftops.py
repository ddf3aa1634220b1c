"""Shift operators: Laurent sums in the translation S = exp(I*e*d/dx) with
differential-polynomial coefficients, plus an optional first-order part.

An operator is sum_n a_n * S^n + (sum_n b_n * S^n) o (I*e*d/dx), kept in
the normal form with all derivative factors commuted to the right.  The
calculus stays within first order in d/dx: composing two operators that
both carry a first-order part raises instead of extending the algebra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .diffpoly import DiffPoly
from .errors import SecondOrderOverflow, TruncationMismatch
from .scalars import Scalar


def _i_eps(order: int) -> Scalar:
    return Scalar.term(1, order, i=1, eps=1)


def _merge(table: Dict[int, DiffPoly], n: int, p: DiffPoly) -> None:
    if p.is_zero():
        return
    if n in table:
        acc = table[n] + p
        if acc.is_zero():
            del table[n]
        else:
            table[n] = acc
    else:
        table[n] = p


class ShiftOperator:
    """Immutable operator in normal form; zero coefficients are trimmed."""

    __slots__ = ("zero_terms", "first_terms", "order", "_powers")

    def __init__(self, zero_terms: Mapping[int, DiffPoly],
                 first_terms: Mapping[int, DiffPoly], order: int):
        zt: Dict[int, DiffPoly] = {}
        ft: Dict[int, DiffPoly] = {}
        for table, source in ((zt, zero_terms), (ft, first_terms)):
            for n, p in source.items():
                if p.order != order:
                    raise TruncationMismatch(
                        f"coefficient order {p.order} != operator order {order}")
                if not p.is_zero():
                    table[n] = p
        object.__setattr__(self, "zero_terms", zt)
        object.__setattr__(self, "first_terms", ft)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_powers", {})

    def __setattr__(self, *_):
        raise AttributeError("ShiftOperator is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "ShiftOperator":
        return cls({}, {}, order)

    @classmethod
    def shift(cls, n: int, order: int) -> "ShiftOperator":
        """The pure shift S^n."""
        return cls({n: DiffPoly.constant(Scalar.one(order))}, {}, order)

    @classmethod
    def of_poly(cls, p: DiffPoly, n: int = 0) -> "ShiftOperator":
        return cls({n: p}, {}, p.order)

    @classmethod
    def derivative(cls, order: int) -> "ShiftOperator":
        """The first-order unit I*e*d/dx."""
        return cls({}, {0: DiffPoly.constant(Scalar.one(order))}, order)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.zero_terms and not self.first_terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, ShiftOperator)
                and self.order == other.order
                and self.zero_terms == other.zero_terms
                and self.first_terms == other.first_terms)

    @property
    def n_min(self) -> int:
        keys = list(self.zero_terms) + list(self.first_terms)
        return min(keys) if keys else 0

    @property
    def n_max(self) -> int:
        keys = list(self.zero_terms) + list(self.first_terms)
        return max(keys) if keys else 0

    def _check(self, other: "ShiftOperator") -> None:
        if self.order != other.order:
            raise TruncationMismatch(
                f"operator orders differ: {self.order} vs {other.order}")

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "ShiftOperator") -> "ShiftOperator":
        self._check(other)
        zt = dict(self.zero_terms)
        ft = dict(self.first_terms)
        for n, p in other.zero_terms.items():
            _merge(zt, n, p)
        for n, p in other.first_terms.items():
            _merge(ft, n, p)
        return ShiftOperator(zt, ft, self.order)

    def __neg__(self) -> "ShiftOperator":
        return ShiftOperator({n: -p for n, p in self.zero_terms.items()},
                             {n: -p for n, p in self.first_terms.items()},
                             self.order)

    def __sub__(self, other: "ShiftOperator") -> "ShiftOperator":
        return self + (-other)

    def scale_scalar(self, s: Scalar) -> "ShiftOperator":
        return ShiftOperator({n: p.scale_scalar(s) for n, p in self.zero_terms.items()},
                             {n: p.scale_scalar(s) for n, p in self.first_terms.items()},
                             self.order)

    def scale(self, q) -> "ShiftOperator":
        q = Fraction(q)
        return ShiftOperator({n: p.scale(q) for n, p in self.zero_terms.items()},
                             {n: p.scale(q) for n, p in self.first_terms.items()},
                             self.order)

    # -- composition ---------------------------------------------------------

    def compose(self, other: "ShiftOperator") -> "ShiftOperator":
        """Operator product in normal form.

        Uses S^n o f = (shifted f) S^n and (I*e*d/dx) o f =
        f (I*e*d/dx) + I*e*f_x.  At most one factor may carry a
        first-order part.
        """
        self._check(other)
        if self.first_terms and other.first_terms:
            raise SecondOrderOverflow(
                "composition of two first-order operators")
        ieps = _i_eps(self.order)
        zt: Dict[int, DiffPoly] = {}
        ft: Dict[int, DiffPoly] = {}
        for n, a in self.zero_terms.items():
            for m, b in other.zero_terms.items():
                _merge(zt, n + m, a * b.lambda_shift(n))
            for m, b in other.first_terms.items():
                _merge(ft, n + m, a * b.lambda_shift(n))
        for n, a in self.first_terms.items():
            for m, b in other.zero_terms.items():
                shifted = b.lambda_shift(n)
                _merge(zt, n + m, a * shifted.x_derivative().scale_scalar(ieps))
                _merge(ft, n + m, a * shifted)
        return ShiftOperator(zt, ft, self.order)

    def coefficient_derivative(self) -> "ShiftOperator":
        """Coefficient-wise x-derivative of both parts."""
        return ShiftOperator(
            {n: p.x_derivative() for n, p in self.zero_terms.items()},
            {n: p.x_derivative() for n, p in self.first_terms.items()},
            self.order)

    def _constant_derivative_multiple(self):
        """If the operator is c * S^0 o (I*e*d/dx) with variable-free c,
        return c; otherwise None."""
        if self.zero_terms or set(self.first_terms) - {0}:
            return None
        coeff = self.first_terms.get(0)
        if coeff is None or set(coeff.terms) - {()}:
            return None
        return coeff.variable_free_coefficient()

    def commutator(self, other: "ShiftOperator") -> "ShiftOperator":
        """[self, other].  Commutators with a constant multiple of
        I*e*d/dx act as the coefficient derivative and are allowed even
        when self carries a first-order part."""
        self._check(other)
        c = other._constant_derivative_multiple()
        if c is not None:
            ieps = _i_eps(self.order)
            return self.coefficient_derivative().scale_scalar(-(ieps * c))
        c = self._constant_derivative_multiple()
        if c is not None:
            ieps = _i_eps(self.order)
            return other.coefficient_derivative().scale_scalar(ieps * c)
        return self.compose(other) - other.compose(self)

    def power(self, m: int) -> "ShiftOperator":
        """m-th power by repeated composition; intermediate powers are
        cached on the instance (concurrent inserts race benignly since the
        values are equal)."""
        if m < 1:
            raise ValueError("power expects m >= 1")
        if self.first_terms:
            raise SecondOrderOverflow("powers are defined for pure shift series")
        self._powers.setdefault(1, self)
        result = self._powers.get(m)
        if result is not None:
            return result
        best = max(k for k in self._powers if k <= m)
        result = self._powers[best]
        for k in range(best + 1, m + 1):
            result = result.compose(self)
            self._powers[k] = result
        return result

    # -- projections ----------------------------------------------------------

    def positive_part(self) -> "ShiftOperator":
        return ShiftOperator(
            {n: p for n, p in self.zero_terms.items() if n >= 0},
            {n: p for n, p in self.first_terms.items() if n >= 0},
            self.order)

    def negative_part(self) -> "ShiftOperator":
        return self - self.positive_part()

    def residue(self) -> DiffPoly:
        """The S^0 coefficient of the shift part.  The first-order part is
        deliberately excluded; callers that care can inspect it."""
        return self.zero_terms.get(0, DiffPoly.zero(self.order))

    # -- rendering / serialization ----------------------------------------------

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for n in sorted(self.zero_terms, reverse=True):
            parts.append((self.zero_terms[n], _shift_symbol(n)))
        for n in sorted(self.first_terms, reverse=True):
            suffix = _shift_symbol(n)
            suffix = (suffix + "*Dx") if suffix else "Dx"
            parts.append((self.first_terms[n].scale_scalar(_i_eps(self.order)), suffix))
        rendered = []
        for poly, suffix in parts:
            body = poly.render()
            if not suffix:
                rendered.append(body)
            elif body == "1":
                rendered.append(suffix)
            elif body == "-1":
                rendered.append("-" + suffix)
            elif len(poly.terms) == 1 and len(next(iter(poly.terms.values())).terms) == 1:
                rendered.append(body + "*" + suffix)
            else:
                rendered.append("(" + body + ")*" + suffix)
        out = rendered[0]
        for part in rendered[1:]:
            if part.startswith("-"):
                out += " - " + part[1:]
            else:
                out += " + " + part
        return out

    __str__ = render

    def __repr__(self):
        return f"ShiftOperator({self.render()!r}, K={self.order})"

    def render_symbol(self) -> str:
        """Symbol rendering: S^n becomes exp(n z)."""
        if self.is_zero():
            return "0"
        rendered = []
        for n in sorted(self.zero_terms, reverse=True):
            body = self.zero_terms[n].render()
            factor = _exp_symbol(n)
            if not factor:
                rendered.append(body)
            elif body == "1":
                rendered.append(factor)
            elif body == "-1":
                rendered.append("-" + factor)
            elif len(self.zero_terms[n].terms) == 1:
                rendered.append(body + "*" + factor)
            else:
                rendered.append("(" + body + ")*" + factor)
        for n in sorted(self.first_terms, reverse=True):
            poly = self.first_terms[n].scale_scalar(_i_eps(self.order))
            factor = _exp_symbol(n)
            suffix = (factor + "*Dx") if factor else "Dx"
            body = poly.render()
            if body == "1":
                rendered.append(suffix)
            elif body == "-1":
                rendered.append("-" + suffix)
            elif len(poly.terms) == 1 and len(next(iter(poly.terms.values())).terms) == 1:
                rendered.append(body + "*" + suffix)
            else:
                rendered.append("(" + body + ")*" + suffix)
        out = rendered[0]
        for part in rendered[1:]:
            if part.startswith("-"):
                out += " - " + part[1:]
            else:
                out += " + " + part
        return out

    def to_json(self) -> dict:
        return {
            "zero": [[n, self.zero_terms[n].to_json()]
                     for n in sorted(self.zero_terms, reverse=True)],
            "first": [[n, self.first_terms[n].to_json()]
                      for n in sorted(self.first_terms, reverse=True)],
            "K": self.order,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ShiftOperator":
        order = int(obj["K"])
        zt = {int(n): DiffPoly.from_json(p) for n, p in obj["zero"]}
        ft = {int(n): DiffPoly.from_json(p) for n, p in obj.get("first", [])}
        return cls(zt, ft, order)


def _shift_symbol(n: int) -> str:
    if n == 0:
        return ""
    if n == 1:
        return "S"
    return f"S^{n}"


def _exp_symbol(n: int) -> str:
    if n == 0:
        return ""
    if n == 1:
        return "exp(z)"
    return f"exp({n}*z)"


def linear_combination(pairs: Iterable[Tuple[Scalar, ShiftOperator]]) -> ShiftOperator:
    """Sum of scalar multiples; all entries must share one truncation order."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("linear_combination of nothing (order unknown)")
    out = ShiftOperator.zero(pairs[0][1].order)
    for scalar, op in pairs:
        if scalar.order != op.order:
            raise TruncationMismatch(
                f"scalar order {scalar.order} != operator order {op.order}")
        out = out + op.scale_scalar(scalar)
    return out
