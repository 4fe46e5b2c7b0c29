"""Indicial locus, Kowalevski matrices and Kowalevski exponents.

With weight vector (1,1,1) the leading Laurent coefficients m solve
``m_i + f_i(m) = 0`` and the Kowalevski matrix is ``K(m) = Df(m) + I``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactmath import (
    LinearSolution,
    char_poly,
    is_integer,
    matvec,
    rational_roots,
    solve_linear,
)
from .lv_core import LVSystem, vector_field

POINT = "point"
LINE = "line"


class NotIndicial(ValueError):
    pass


class TrivialPoint(ValueError):
    pass


@dataclass(frozen=True)
class IndicialPoint:
    coords: tuple

    @property
    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.coords)

    @property
    def support(self) -> frozenset:
        return frozenset(i + 1 for i, v in enumerate(self.coords) if v != 0)


@dataclass(frozen=True)
class IndicialComponent:
    kind: str
    point: IndicialPoint
    direction: Optional[tuple] = None

    def at(self, t) -> IndicialPoint:
        """Point of the component at line parameter ``t`` (ignored for points)."""
        if self.kind == POINT:
            return self.point
        t = Fraction(t)
        return IndicialPoint(tuple(p + t * d for p, d in zip(self.point.coords, self.direction)))

    @property
    def label(self) -> str:
        if self.kind == LINE:
            return "line"
        sup = sorted(self.point.support)
        return "origin" if not sup else "x" + "".join(str(i) for i in sup)


@dataclass(frozen=True)
class KowalevskiSpectrum:
    point: IndicialPoint
    matrix: tuple
    exponents: tuple
    all_rational: bool

    @property
    def all_integer(self) -> bool:
        return self.all_rational and all(is_integer(r) for r in self.exponents)

    @property
    def positive(self) -> tuple:
        return tuple(sorted({r for r in self.exponents if r > 0}))


def indicial_residual(s: LVSystem, x) -> tuple:
    f = vector_field(s, x)
    return tuple(xi + fi for xi, fi in zip(x, f))


def is_indicial(s: LVSystem, x) -> bool:
    return all(r == 0 for r in indicial_residual(s, x))


def indicial_locus(s: LVSystem) -> list[IndicialComponent]:
    """All solutions of the indicial equation, grouped by support.

    Order: origin, the b-, c- and a-points (supports {1,3}, {2,3}, {1,2}),
    then the full-support line when a - b + c = 0.
    """
    a, b, c = s.triple
    zero = Fraction(0)
    comps = [IndicialComponent(POINT, IndicialPoint((zero, zero, zero)))]
    if b != 0:
        comps.append(IndicialComponent(POINT, IndicialPoint((1 / b, zero, -1 / b))))
    if c != 0:
        comps.append(IndicialComponent(POINT, IndicialPoint((zero, 1 / c, -1 / c))))
    if a != 0:
        comps.append(IndicialComponent(POINT, IndicialPoint((1 / a, -1 / a, zero))))
    # full support forces A m = -(1,1,1)
    sol: LinearSolution = solve_linear(s.matrix, (Fraction(-1),) * 3)
    if sol.consistent:
        assert len(sol.kernel_basis) == 1, "a nonzero skew 3x3 matrix has rank 2"
        comps.append(IndicialComponent(LINE, IndicialPoint(sol.particular), sol.kernel_basis[0]))
    return comps


def nontrivial_components(s: LVSystem) -> list[IndicialComponent]:
    return [c for c in indicial_locus(s) if not (c.kind == POINT and c.point.is_trivial)]


def _coords(p) -> tuple:
    return p.coords if isinstance(p, IndicialPoint) else tuple(p)


def jacobian(s: LVSystem, x) -> tuple:
    a, b, c = s.triple
    x1, x2, x3 = x
    return (
        (a * x2 + b * x3, a * x1, b * x1),
        (-a * x2, -a * x1 + c * x3, c * x2),
        (-b * x3, -c * x3, -b * x1 - c * x2),
    )


def kowalevski_matrix_unchecked(s: LVSystem, x) -> tuple:
    J = jacobian(s, x)
    return tuple(tuple(J[i][j] + (1 if i == j else 0) for j in range(3)) for i in range(3))


def kowalevski_matrix(s: LVSystem, p) -> tuple:
    x = _coords(p)
    if not is_indicial(s, x):
        raise NotIndicial(f"{tuple(str(v) for v in x)} does not solve the indicial equation of {s}")
    return kowalevski_matrix_unchecked(s, x)


def kowalevski_exponents(s: LVSystem, p) -> KowalevskiSpectrum:
    point = p if isinstance(p, IndicialPoint) else IndicialPoint(tuple(p))
    K = kowalevski_matrix(s, point)
    roots, split = rational_roots(char_poly(K))
    return KowalevskiSpectrum(point, K, tuple(roots), split)


def closed_form_third_exponent(s: LVSystem, p) -> Fraction:
    """Third exponent read off the support pattern of a two-support point."""
    a, b, c = s.triple
    d = a - b + c
    sup = IndicialPoint(_coords(p)).support
    if sup == frozenset({2, 3}):
        return d / c
    if sup == frozenset({1, 3}):
        return -d / b
    if sup == frozenset({1, 2}):
        return d / a
    raise ValueError(f"no closed form for support {sorted(sup)}")


def minus_one_eigenvector_check(s: LVSystem, p) -> bool:
    x = _coords(p)
    if all(v == 0 for v in x):
        raise TrivialPoint("the origin carries no -1 eigenvector")
    K = kowalevski_matrix(s, x)
    return matvec(K, x) == tuple(-v for v in x)


def component_spectrum(s: LVSystem, comp: IndicialComponent) -> KowalevskiSpectrum:
    return kowalevski_exponents(s, comp.point)


def line_spectra(s: LVSystem, comp: IndicialComponent, params=(0, 1, -1, Fraction(1, 2), 3)) -> list:
    """Spectra sampled along a line component.

    A cubic characteristic polynomial whose coefficients are polynomials of
    degree <= 2 in the line parameter is pinned down by three samples; five
    are taken.
    """
    if comp.kind != LINE:
        raise ValueError("not a line component")
    return [kowalevski_exponents(s, comp.at(t)) for t in params]


@dataclass(frozen=True)
class IntegralityReport:
    all_integer: bool
    spectra: tuple  # (component, KowalevskiSpectrum) pairs
    line_constant: Optional[bool] = None

    def offending(self) -> list:
        return [
            (comp, r)
            for comp, sp in self.spectra
            for r in sp.exponents
            if not is_integer(r)
        ] + [(comp, None) for comp, sp in self.spectra if not sp.all_rational]


def integrality_report(s: LVSystem) -> IntegralityReport:
    spectra = []
    line_constant = None
    for comp in nontrivial_components(s):
        sp = component_spectrum(s, comp)
        spectra.append((comp, sp))
        if comp.kind == LINE:
            samples = line_spectra(s, comp)
            line_constant = all(q.exponents == sp.exponents for q in samples)
    ok = all(sp.all_integer for _, sp in spectra)
    return IntegralityReport(ok, tuple(spectra), line_constant)
