"""Independent zero-dispersion oracle.

At e = 0 the operator symbol collapses to a scalar Laurent series in
w = exp(-z) whose coefficients are plain polynomials in u and t.  This
module solves the defining fixed-point equation for that series on its
own dedicated types (deliberately sharing no code with the truncated ring,
so it can serve as a cross-check) and verifies the elementary identities
that the hierarchy's Hamiltonian structure reduces to at e = 0.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import BadLeading, DepthInsufficient, NonConvergence
from .report import VerificationReport


class UTauPoly:
    """Polynomial in u and t with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], Fraction]):
        canon = {}
        for (u_pow, tau_pow), coeff in terms.items():
            if u_pow < 0 or tau_pow < 0:
                raise ValueError("negative exponent in UTauPoly")
            coeff = Fraction(coeff)
            if coeff:
                canon[(u_pow, tau_pow)] = coeff
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, *_):
        raise AttributeError("UTauPoly is immutable")

    @classmethod
    def zero(cls) -> "UTauPoly":
        return cls({})

    @classmethod
    def term(cls, coeff, u: int = 0, tau: int = 0) -> "UTauPoly":
        return cls({(u, tau): Fraction(coeff)})

    @classmethod
    def u(cls) -> "UTauPoly":
        return cls.term(1, u=1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, UTauPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "UTauPoly") -> "UTauPoly":
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = merged.get(key, Fraction(0)) + coeff
            if acc:
                merged[key] = acc
            elif key in merged:
                del merged[key]
        return UTauPoly(merged)

    def __neg__(self) -> "UTauPoly":
        return UTauPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "UTauPoly") -> "UTauPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: Dict[Tuple[int, int], Fraction] = {}
        for (u1, t1), c1 in self.terms.items():
            for (u2, t2), c2 in other.terms.items():
                key = (u1 + u2, t1 + t2)
                acc = out.get(key, Fraction(0)) + c1 * c2
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
        return UTauPoly(out)

    __rmul__ = __mul__

    def scale(self, q) -> "UTauPoly":
        q = Fraction(q)
        if not q:
            return UTauPoly.zero()
        return UTauPoly({k: c * q for k, c in self.terms.items()})

    def partial_u(self) -> "UTauPoly":
        out = {}
        for (u, t), c in self.terms.items():
            if u:
                out[(u - 1, t)] = c * u
        return UTauPoly(out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (u, t), c in sorted(self.terms.items(), reverse=True):
            symbols = []
            if u:
                symbols.append("u" if u == 1 else f"u^{u}")
            if t:
                symbols.append("t" if t == 1 else f"t^{t}")
            mag = abs(c)
            if mag == 1 and symbols:
                body = "*".join(symbols)
            else:
                num = str(mag) if mag.denominator == 1 else f"({mag})"
                body = "*".join([num] + symbols)
            parts.append(("-" if c < 0 else "") + body)
        out = parts[0]
        for part in parts[1:]:
            out += (" - " + part[1:]) if part.startswith("-") else (" + " + part)
        return out

    __str__ = render

    def __repr__(self):
        return f"UTauPoly({self.render()!r})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"u": u, "tau": t, "num": str(c.numerator), "den": str(c.denominator)}
                for (u, t), c in sorted(self.terms.items())
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "UTauPoly":
        return cls({(int(i["u"]), int(i["tau"])): Fraction(int(i["num"]), int(i["den"]))
                    for i in obj["terms"]})


def u_antiderivative(p: UTauPoly) -> UTauPoly:
    """Antiderivative in u: u^j -> u^(j+1)/(j+1), t untouched."""
    out = {}
    for (u, t), c in p.terms.items():
        out[(u + 1, t)] = c / (u + 1)
    return UTauPoly(out)


class SymbolSeries:
    """Truncated series c_{-1} exp(z) + sum_{n>=0} c_n exp(-n z), stored by
    the exponent of w = exp(-z); an optional linear z term carries the
    logarithm's leading part."""

    __slots__ = ("coeffs", "depth", "z_linear")

    def __init__(self, coeffs: Mapping[int, UTauPoly], depth: int,
                 z_linear: Fraction = Fraction(0)):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        canon = {}
        for n, p in coeffs.items():
            if n > depth:
                continue
            if not p.is_zero():
                canon[n] = p
        object.__setattr__(self, "coeffs", canon)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "z_linear", Fraction(z_linear))

    def __setattr__(self, *_):
        raise AttributeError("SymbolSeries is immutable")

    def coefficient(self, n: int) -> UTauPoly:
        return self.coeffs.get(n, UTauPoly.zero())

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymbolSeries)
                and self.depth == other.depth
                and self.z_linear == other.z_linear
                and self.coeffs == other.coeffs)

    def series_part_mul(self, other: "SymbolSeries") -> "SymbolSeries":
        """Product of the pure series parts (z terms must be absent)."""
        if self.z_linear or other.z_linear:
            raise ValueError("cannot multiply series with z terms")
        depth = min(self.depth, other.depth)
        out: Dict[int, UTauPoly] = {}
        for n1, p1 in self.coeffs.items():
            for n2, p2 in other.coeffs.items():
                n = n1 + n2
                if n > depth:
                    continue
                acc = out.get(n, UTauPoly.zero()) + p1 * p2
                out[n] = acc
        return SymbolSeries(out, depth)

    def power(self, m: int) -> "SymbolSeries":
        if m < 1:
            raise ValueError("power expects m >= 1")
        out = self
        for _ in range(m - 1):
            out = out.series_part_mul(self)
        return out

    def log(self) -> "SymbolSeries":
        """Formal logarithm: z plus log of 1 + (lower-order tail).

        Requires the leading exp(z) coefficient to be exactly 1.
        """
        if self.coefficient(-1) != UTauPoly.term(1):
            raise BadLeading("symbol must start with exp(z)")
        if self.z_linear:
            raise ValueError("log of a series that already has a z term")
        # tail b_n = c_{n-1} multiplies w^n once exp(z) is factored out
        tail = {n + 1: p for n, p in self.coeffs.items() if n >= 0}
        powers: Dict[int, UTauPoly] = {}
        current = dict(tail)
        out: Dict[int, UTauPoly] = {}
        k = 1
        while current and k <= self.depth:
            sign = Fraction((-1) ** (k + 1), k)
            for n, p in current.items():
                out[n] = out.get(n, UTauPoly.zero()) + p.scale(sign)
            nxt: Dict[int, UTauPoly] = {}
            for n1, p1 in current.items():
                for n2, p2 in tail.items():
                    n = n1 + n2
                    if n > self.depth:
                        continue
                    nxt[n] = nxt.get(n, UTauPoly.zero()) + p1 * p2
            current = nxt
            k += 1
        return SymbolSeries(out, self.depth, z_linear=Fraction(1))

    def inverse(self) -> "SymbolSeries":
        """Multiplicative inverse of a series with unit exp(z) leading term,
        computed by the geometric series on the factored tail."""
        if self.coefficient(-1) != UTauPoly.term(1):
            raise BadLeading("symbol must start with exp(z)")
        tail = {n + 1: p for n, p in self.coeffs.items() if n >= 0}
        out: Dict[int, UTauPoly] = {1: UTauPoly.term(1)}
        current = {0: UTauPoly.term(1)}
        k = 1
        while current and k <= self.depth:
            nxt: Dict[int, UTauPoly] = {}
            for n1, p1 in current.items():
                for n2, p2 in tail.items():
                    n = n1 + n2
                    if n > self.depth:
                        continue
                    nxt[n] = nxt.get(n, UTauPoly.zero()) + p1 * p2
            current = nxt
            sign = Fraction((-1) ** k)
            for n, p in current.items():
                if n + 1 <= self.depth:
                    out[n + 1] = out.get(n + 1, UTauPoly.zero()) + p.scale(sign)
            k += 1
        return SymbolSeries(out, self.depth)

    def partial_u(self) -> "SymbolSeries":
        return SymbolSeries({n: p.partial_u() for n, p in self.coeffs.items()},
                            self.depth, z_linear=Fraction(0))

    def render(self) -> str:
        parts = []
        if self.z_linear:
            parts.append("z" if self.z_linear == 1 else f"({self.z_linear})*z")
        for n in sorted(self.coeffs):
            body = self.coeffs[n].render()
            if n == 0:
                parts.append(body if len(self.coeffs[n].terms) == 1 else f"({body})")
            else:
                factor = "exp(z)" if n == -1 else f"exp({-n}*z)"
                if body == "1":
                    parts.append(factor)
                elif len(self.coeffs[n].terms) == 1:
                    parts.append(body + "*" + factor)
                else:
                    parts.append(f"({body})*" + factor)
        if not parts:
            return "0"
        out = parts[0]
        for part in parts[1:]:
            out += (" - " + part[1:]) if part.startswith("-") else (" + " + part)
        return out

    __str__ = render

    def to_json(self) -> dict:
        return {
            "zLinear": {"num": str(self.z_linear.numerator),
                        "den": str(self.z_linear.denominator)},
            "depth": self.depth,
            "coeffs": [[n, self.coeffs[n].to_json()] for n in sorted(self.coeffs)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SymbolSeries":
        z = obj["zLinear"]
        return cls({int(n): UTauPoly.from_json(p) for n, p in obj["coeffs"]},
                   int(obj["depth"]),
                   z_linear=Fraction(int(z["num"]), int(z["den"])))


def solve_symbol(depth: int) -> SymbolSeries:
    """Solve S - t*log(S) = exp(z) + u - t*z for the symbol series.

    Fixed-point sweeps S <- exp(z) + u + t*(series part of log S) starting
    from exp(z) + u; the degree-n coefficient depends only on lower ones,
    so depth+1 sweeps must reach a fixed point.
    """
    base = SymbolSeries({-1: UTauPoly.term(1), 0: UTauPoly.u()}, depth)
    current = base
    for _ in range(depth + 1):
        log_tail = {n: p for n, p in current.log().coeffs.items() if n >= 1}
        coeffs = {-1: UTauPoly.term(1), 0: UTauPoly.u()}
        for n, p in log_tail.items():
            coeffs[n] = coeffs.get(n, UTauPoly.zero()) + p * UTauPoly.term(1, tau=1)
        nxt = SymbolSeries(coeffs, depth)
        if nxt == current:
            return current
        current = nxt
    raise NonConvergence(f"symbol coefficients did not stabilize at depth {depth}")


def symbol_residue_power(s: SymbolSeries, m: int) -> UTauPoly:
    """exp(0*z) coefficient of the m-th power."""
    if m > s.depth + 1:
        raise DepthInsufficient(
            f"residue of power {m} needs depth >= {m - 1}, have {s.depth}")
    return s.power(m).coefficient(0)


def check_dispersionless_identities(d_max: int, depth: Optional[int] = None
                                    ) -> List[VerificationReport]:
    """Verify the four zero-dispersion identities for d <= d_max.

    (a) the u-derivative of the symbol is the geometric series in t times
        the inverse symbol;
    (b) the residue recursion linking consecutive powers;
    (c) residues of powers against the triangular polynomials;
    (d) the Hamiltonian density identity, taken at the d/du level since
        the coefficients carry no explicit x.
    """
    from .hierarchy import pd_polynomial  # local import to avoid a cycle

    if depth is None:
        depth = d_max + 4
    if depth < d_max + 2:
        raise DepthInsufficient(
            f"identities for d <= {d_max} need depth >= {d_max + 2}")
    reports: List[VerificationReport] = []
    symbol = solve_symbol(depth)

    def _res_over_fact(m: int) -> UTauPoly:
        return symbol_residue_power(symbol, m).scale(Fraction(1, factorial(m)))

    # (a) compare through the stored depth
    start = time.perf_counter()
    lhs = symbol.partial_u()
    inv = symbol.inverse()
    rhs_coeffs: Dict[int, UTauPoly] = {0: UTauPoly.term(1)}
    power = None
    tau = UTauPoly.term(1, tau=1)
    tau_power = UTauPoly.term(1)
    for j in range(1, depth + 1):
        power = inv if power is None else power.series_part_mul(inv)
        tau_power = tau_power * tau
        for n, p in power.coeffs.items():
            if 0 <= n <= depth:
                rhs_coeffs[n] = rhs_coeffs.get(n, UTauPoly.zero()) + p * tau_power
    ok = True
    witness = None
    for n in range(-1, depth + 1):
        diff = lhs.coefficient(n) - SymbolSeries(rhs_coeffs, depth).coefficient(n)
        if not diff.is_zero():
            ok, witness = False, {"n": n, "diff": diff.to_json()}
            break
    reports.append(VerificationReport(
        "dispersionless_symbol_derivative", (), ok, witness,
        int(1000 * (time.perf_counter() - start))))

    for d in range(0, d_max + 1):
        # (b) holds for d >= 1
        if d >= 1:
            start = time.perf_counter()
            diff = (_res_over_fact(d + 1).partial_u()
                    - _res_over_fact(d)
                    - _res_over_fact(d).partial_u() * Fraction(1, d) * tau)
            reports.append(VerificationReport(
                "dispersionless_recursion", (d,), diff.is_zero(),
                None if diff.is_zero() else diff.to_json(),
                int(1000 * (time.perf_counter() - start))))

        # (c)
        start = time.perf_counter()
        pd = pd_polynomial(d + 1)
        expected = UTauPoly.zero()
        for j in range(0, d + 1):
            expected = expected + UTauPoly.term(
                pd.coeffs[j] / factorial(j + 1), u=j + 1, tau=d - j)
        diff = _res_over_fact(d + 1) - expected
        reports.append(VerificationReport(
            "dispersionless_triangular", (d,), diff.is_zero(),
            None if diff.is_zero() else diff.to_json(),
            int(1000 * (time.perf_counter() - start))))

        # (d)
        start = time.perf_counter()
        diff = (_res_over_fact(d + 2) - _res_over_fact(d + 1) * Fraction(1, d + 1) * tau
                ).partial_u() - _res_over_fact(d + 1)
        reports.append(VerificationReport(
            "dispersionless_hamiltonian", (d,), diff.is_zero(),
            None if diff.is_zero() else diff.to_json(),
            int(1000 * (time.perf_counter() - start))))
    return reports


def diffpoly_dispersionless(p) -> UTauPoly:
    """e = 0 limit of a differential polynomial; defined when the surviving
    terms contain no derivatives of u (true for weight-zero objects)."""
    out = UTauPoly.zero()
    for mono, coeff in p.terms.items():
        pieces = {}
        for (i, t, e), c in coeff.terms.items():
            if e:
                continue
            if i:
                raise ValueError("imaginary survivor at e = 0")
            pieces[t] = pieces.get(t, Fraction(0)) + c
        if not pieces:
            continue
        if any(k != 0 for k, _ in mono):
            raise ValueError("derivative variable survives at e = 0")
        u_pow = sum(m for _, m in mono)
        for t, c in pieces.items():
            out = out + UTauPoly.term(c, u=u_pow, tau=t)
    return out
