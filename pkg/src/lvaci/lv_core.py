"""The three-species skew-symmetric Lotka-Volterra system.

    x1' =  a x1 x2 + b x1 x3
    x2' = -a x1 x2 + c x2 x3
    x3' = -b x1 x3 - c x2 x3

Every function here accepts either exact states (Fractions) or floating
states; the defining equations are written once and used in both modes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmath import to_fraction


class DomainError(ValueError):
    """Casimir evaluation outside the region where the real power is defined."""


class ZeroComponent(ValueError):
    """A state component is zero where the log-gradient needs 1/x_i."""


@dataclass(frozen=True)
class LVSystem:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.a == 0 and self.b == 0 and self.c == 0:
            raise ValueError("the zero system (0,0,0) has no dynamics")

    @classmethod
    def parse(cls, a, b, c) -> "LVSystem":
        return cls(a, b, c)

    @property
    def triple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c)

    @property
    def matrix(self) -> tuple:
        a, b, c = self.triple
        z = Fraction(0)
        return ((z, a, b), (-a, z, c), (-b, -c, z))

    def scaled(self, t) -> "LVSystem":
        t = to_fraction(t)
        return LVSystem(self.a * t, self.b * t, self.c * t)

    def as_floats(self) -> tuple[float, float, float]:
        return (float(self.a), float(self.b), float(self.c))

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.triple) + ")"


def check_state(x: Sequence) -> tuple:
    """Return ``x`` as a 3-tuple, refusing a mix of exact and float entries."""
    x = tuple(x)
    if len(x) != 3:
        raise ValueError(f"state must have 3 components, got {len(x)}")
    kinds = {isinstance(v, float) for v in x}
    if len(kinds) > 1:
        raise TypeError("exact and floating components mixed in one state")
    return x


def is_exact(x: Sequence) -> bool:
    return not any(isinstance(v, float) for v in x)


def vector_field(s: LVSystem, x: Sequence) -> tuple:
    x1, x2, x3 = check_state(x)
    if is_exact((x1, x2, x3)):
        a, b, c = s.triple
    else:
        a, b, c = s.as_floats()
    return (
        a * x1 * x2 + b * x1 * x3,
        -a * x1 * x2 + c * x2 * x3,
        -b * x1 * x3 - c * x2 * x3,
    )


def hamiltonian(x: Sequence):
    x1, x2, x3 = check_state(x)
    return x1 + x2 + x3


def casimir_exponents(s: LVSystem) -> tuple[Fraction, Fraction, Fraction]:
    """Exponents of F = x1^c x2^(-b) x3^a."""
    return (s.c, -s.b, s.a)


def casimir(s: LVSystem, x: Sequence) -> float:
    """Evaluate F = x1^c x2^(-b) x3^a in floating point.

    Non-positive components are only allowed under a non-negative integer
    exponent, where the power is a plain product.
    """
    x = check_state(x)
    out = 1.0
    for xi, e in zip(x, casimir_exponents(s)):
        if xi <= 0 and not (e.denominator == 1 and e >= 0):
            raise DomainError(f"x^{e} is not real-defined at x={xi}")
        if e.denominator == 1 and e >= 0:
            out *= float(xi) ** int(e)
        else:
            out *= math.exp(float(e) * math.log(float(xi)))
    return out


def log_casimir(s: LVSystem, x: Sequence) -> float:
    """log F on the open positive orthant."""
    x = check_state(x)
    if any(v <= 0 for v in x):
        raise DomainError("log F needs a strictly positive state")
    return sum(float(e) * math.log(float(v)) for v, e in zip(x, casimir_exponents(s)))


def poisson_matrix(s: LVSystem, x: Sequence) -> tuple:
    x1, x2, x3 = check_state(x)
    a, b, c = s.triple if is_exact((x1, x2, x3)) else s.as_floats()
    zero = x1 - x1
    return (
        (zero, a * x1 * x2, b * x1 * x3),
        (-a * x1 * x2, zero, c * x2 * x3),
        (-b * x1 * x3, -c * x2 * x3, zero),
    )


def casimir_gradient_check(s: LVSystem, x: Sequence) -> bool:
    """Exact test that pi(x) annihilates grad log F = (c/x1, -b/x2, a/x3)."""
    x = tuple(to_fraction(v) for v in check_state(x))
    if any(v == 0 for v in x):
        raise ZeroComponent(f"state {x} has a zero component")
    grad = tuple(e / v for e, v in zip(casimir_exponents(s), x))
    pi = poisson_matrix(s, x)
    return all(sum(pi[i][j] * grad[j] for j in range(3)) == 0 for i in range(3))


def casimir_degree(s: LVSystem) -> Fraction:
    return s.a - s.b + s.c
