"""Sparse multivariate polynomials and rational functions over Q.

Just enough algebra to carry Laurent coefficients symbolically in the free
parameters. Variables are small integers (parameter indices); a monomial is
a sorted tuple of ``(var, exponent)`` pairs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple  # ((var, exp), ...), sorted by var, exp > 0


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms: dict = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "Poly":
        c = Fraction(c)
        return cls({(): c}) if c else cls()

    @classmethod
    def var(cls, index: int) -> "Poly":
        return cls({((index, 1),): Fraction(1)})

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[int]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).terms == {}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, values: Mapping[int, Fraction]):
        """Substitute numbers for some or all variables."""
        out = Poly()
        acc: dict = {}
        for m, c in self.terms.items():
            coef = c
            rest = []
            for v, e in m:
                if v in values:
                    coef = coef * values[v] ** e
                else:
                    rest.append((v, e))
            key = tuple(rest)
            acc[key] = acc.get(key, 0) + coef
        out = Poly(acc)
        if not (out.variables()):
            return out.const_value()
        return out

    def __repr__(self):
        return f"Poly({render_poly(self)})"


def render_poly(p: Poly, names=None) -> str:
    if p.is_zero():
        return "0"

    def name(v):
        return names[v] if names else f"p{v}"

    pieces = []
    for m in sorted(p.terms, key=lambda m: (-sum(e for _, e in m), m)):
        c = p.terms[m]
        mono = "*".join(name(v) if e == 1 else f"{name(v)}^{e}" for v, e in m)
        if not mono:
            pieces.append(_fmt_q(c))
        elif c == 1:
            pieces.append(mono)
        elif c == -1:
            pieces.append("-" + mono)
        else:
            pieces.append(f"{_fmt_q(c)}*{mono}")
    return " + ".join(pieces).replace("+ -", "- ")


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# univariate helpers for cancellation
# --------------------------------------------------------------------------

def _to_univariate(p: Poly, var: int) -> list[Fraction]:
    deg = max((dict(m).get(var, 0) for m in p.terms), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for m, c in p.terms.items():
        coeffs[dict(m).get(var, 0)] += c
    return coeffs


def _strip(c: list[Fraction]) -> list[Fraction]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _udivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a, b = _strip(a), _strip(b)
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, bc in enumerate(b):
            r[i + shift] -= f * bc
        r = _strip(r)
    return q, r


def _ugcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _strip(a), _strip(b)
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def _group_by_other_vars(p: Poly, var: int) -> dict:
    groups: dict = {}
    for m, c in p.terms.items():
        d = dict(m)
        e = d.pop(var, 0)
        key = tuple(sorted(d.items()))
        groups.setdefault(key, {})[e] = c
    return groups


def _divide_by_univariate(p: Poly, var: int, g: list[Fraction]) -> Poly:
    out: dict = {}
    for key, powers in _group_by_other_vars(p, var).items():
        coeffs = [Fraction(0)] * (max(powers) + 1)
        for e, c in powers.items():
            coeffs[e] = c
        q, r = _udivmod(coeffs, g)
        assert not r, "inexact division during cancellation"
        for e, c in enumerate(q):
            if c:
                m = dict(key)
                if e:
                    m[var] = e
                out[tuple(sorted(m.items()))] = c
    return Poly(out)


def _univariate_poly(coeffs: list[Fraction], var: int) -> Poly:
    return Poly({(((var, e),) if e else ()): c for e, c in enumerate(coeffs) if c})


class RatFunc:
    """Quotient of two :class:`Poly`; denominators stay constant-free when possible."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Poly.const(1)
        elif den.is_const():
            num = num * (1 / den.const_value())
            den = Poly.const(1)
        else:
            num, den = _cancel(num, den)
        self.num, self.den = num, den

    @classmethod
    def var(cls, index: int) -> "RatFunc":
        return cls(Poly.var(index))

    def is_polynomial(self) -> bool:
        return self.den.is_const()

    def is_const(self) -> bool:
        return self.den.is_const() and self.num.is_const()

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.num.const_value()

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den)) if self.den.is_const() else id(self)

    def evaluate(self, values: Mapping[int, Fraction]):
        num = self.num.evaluate(values)
        den = self.den.evaluate(values)
        if isinstance(num, Fraction) and isinstance(den, Fraction):
            if den == 0:
                raise ZeroDivisionError("parameter values hit a pole of a coefficient")
            return num / den
        return RatFunc(num, den)

    def render(self, names=None) -> str:
        if self.den.is_const():
            return render_poly(self.num, names)
        return f"({render_poly(self.num, names)})/({render_poly(self.den, names)})"

    def __repr__(self):
        return f"RatFunc({self.render()})"


def _cancel(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    dvars = den.variables()
    if len(dvars) != 1:
        return num, den
    (var,) = dvars
    dc = _to_univariate(den, var)
    g = dc
    for powers in _group_by_other_vars(num, var).values():
        coeffs = [Fraction(0)] * (max(powers) + 1)
        for e, c in powers.items():
            coeffs[e] = c
        g = _ugcd(g, coeffs)
        if len(g) <= 1:
            break
    if len(g) > 1:
        num = _divide_by_univariate(num, var, g)
        den = _divide_by_univariate(den, var, g)
    # make the denominator monic so equal functions print alike
    lead = _strip(_to_univariate(den, var))[-1] if den.variables() else den.const_value()
    if lead != 1:
        num = num * (1 / lead)
        den = den * (1 / lead)
    return num, den


def as_ratfunc(x) -> RatFunc:
    return x if isinstance(x, RatFunc) else RatFunc(x)


def evaluate_all(items: Iterable, values: Mapping[int, Fraction]) -> tuple:
    return tuple(as_ratfunc(x).evaluate(values) for x in items)


def primitive_vector(vec: Iterable) -> tuple:
    """Divide a polynomial vector in one variable by the gcd of its entries."""
    vec = tuple(as_ratfunc(v) for v in vec)
    if not all(v.is_polynomial() for v in vec):
        return vec
    nums = [v.num for v in vec]
    allvars = set().union(*(p.variables() for p in nums))
    if len(allvars) != 1:
        return vec
    (var,) = allvars
    g: list = []
    for p in nums:
        if not p.is_zero():
            g = _ugcd(g, _to_univariate(p, var)) if g else _ugcd(_to_univariate(p, var), [])
    if len(g) <= 1:
        return vec
    return tuple(RatFunc(_divide_by_univariate(p, var, g)) if not p.is_zero() else RatFunc(0) for p in nums)
