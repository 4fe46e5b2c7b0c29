"""Laurent-series balances and the free-parameter (a.c.i.) test.

A balance is the formal solution ``x(t) = t^-1 * sum_k x^(k) t^k`` built on
one indicial component. Step ``k`` solves

    (k I - K(x^(0))) x^(k) = R^(k),
    R_i^(k) = sum_{l=1}^{k-1} x_i^(l) (A x^(k-l))_i.

Coefficients are carried as rational functions of the free parameters, so
compatibility at a resonant step is decided as an identity in the earlier
parameters, never at sampled values.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import exactmath as em
from .balances import (
    LINE,
    IndicialComponent,
    KowalevskiSpectrum,
    component_spectrum,
    integrality_report,
    kowalevski_matrix_unchecked,
    nontrivial_components,
)
from .lv_core import LVSystem
from .symbolic import RatFunc, as_ratfunc, primitive_vector

N_FREE_REQUIRED = 2  # n - 1 for three species
SAFETY_STEPS = 2


class MissingCoefficients(ValueError):
    pass


class OrderTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class FreeParameter:
    index: int
    step: int
    basis: tuple  # direction in coefficient space this parameter moves along

    @property
    def name(self) -> str:
        return f"p{self.index}"

    def coordinates(self) -> tuple[int, ...]:
        """1-based coordinates that can be normalized to be this parameter."""
        return tuple(i + 1 for i, v in enumerate(self.basis) if not as_ratfunc(v) == 0)


@dataclass(frozen=True)
class StepRecord:
    step: int
    resonant: bool
    compatible: bool
    kernel_dim: int
    params: tuple[int, ...] = ()
    defect: Optional[RatFunc] = None


@dataclass
class Balance:
    system: LVSystem
    component: IndicialComponent
    spectrum: KowalevskiSpectrum
    truncation_order: int
    coefficients: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    free_params: list = field(default_factory=list)
    obstructed_at: Optional[int] = None

    @property
    def free_param_total(self) -> int:
        return len(self.free_params)

    @property
    def unobstructed(self) -> bool:
        return self.obstructed_at is None

    @property
    def free_steps(self) -> tuple[int, ...]:
        return tuple(p.step for p in self.free_params)

    @property
    def max_step(self) -> int:
        return len(self.coefficients) - 1

    def parameter_indices(self) -> list[int]:
        return [p.index for p in self.free_params]

    def random_values(self, rng: random.Random | None = None, bound: int = 9) -> dict[int, Fraction]:
        rng = rng or random.Random(0)
        out = {}
        for i in self.parameter_indices():
            num = rng.choice([n for n in range(-bound, bound + 1) if n])
            out[i] = Fraction(num, rng.randint(1, bound))
        return out

    def instantiate(self, values: Mapping[int, Fraction]) -> list[tuple]:
        """Exact numeric coefficients for given parameter values."""
        missing = set(self.parameter_indices()) - set(values)
        if missing:
            raise ValueError(f"no value for parameters {sorted(missing)}")
        return [tuple(as_ratfunc(v).evaluate(values) for v in x) for x in self.coefficients]

    def summary(self) -> dict:
        return {
            "component": self.component.label,
            "leading": [em.fmt(v) for v in self.component.point.coords],
            "direction": None if self.component.direction is None else em.fmt_vec(self.component.direction),
            "exponents": [em.fmt(r) for r in self.spectrum.exponents],
            "free_parameters": [
                {
                    "name": p.name,
                    "step": p.step,
                    "basis": [as_ratfunc(v).render() for v in p.basis],
                    "coordinates": list(p.coordinates()),
                }
                for p in self.free_params
            ],
            "free_param_total": self.free_param_total,
            "obstructed_at": self.obstructed_at,
            "truncation_order": self.truncation_order,
        }


def step_rhs(s: LVSystem, coeffs: Sequence[Sequence], k: int) -> tuple:
    """R^(k) from the coefficients of steps 0..k-1 (only 1..k-1 enter)."""
    if k < 1:
        raise ValueError("step index starts at 1")
    if len(coeffs) < k:
        raise MissingCoefficients(f"step {k} needs coefficients 0..{k - 1}, have {len(coeffs)}")
    A = s.matrix
    out = []
    for i in range(3):
        acc = 0
        for l in range(1, k):
            y = coeffs[k - l]
            acc = acc + coeffs[l][i] * (A[i][0] * y[0] + A[i][1] * y[1] + A[i][2] * y[2])
        out.append(acc)
    return tuple(out)


def _clear_denominators(vec: Sequence) -> tuple:
    # a kernel direction may be rescaled freely; keep it polynomial so that
    # instantiating the parameters never lands on a pole
    vec = tuple(as_ratfunc(v) for v in vec)
    for v in vec:
        if not v.is_polynomial():
            den = RatFunc(v.den)
            vec = tuple(x * den for x in vec)
    return primitive_vector(vec)


def default_order(spectrum: KowalevskiSpectrum) -> int:
    positive = [r for r in spectrum.exponents if r > 0]
    top = max(positive) if positive else 0
    return int(top // 1) + SAFETY_STEPS


def expand(s: LVSystem, comp: IndicialComponent, order: int | None = None) -> Balance:
    spectrum = component_spectrum(s, comp)
    positive = [r for r in spectrum.exponents if r > 0 and em.is_integer(r)]
    k_p = int(max(positive)) if positive else 0
    if order is None:
        order = default_order(spectrum)
    if order < k_p:
        raise OrderTooSmall(f"order {order} is below the largest positive exponent {k_p}")

    bal = Balance(s, comp, spectrum, order)
    next_index = 0
    if comp.kind == LINE:
        t = RatFunc.var(next_index)
        x0 = tuple(RatFunc(p) + t * d for p, d in zip(comp.point.coords, comp.direction))
        bal.free_params.append(FreeParameter(next_index, 0, tuple(comp.direction)))
        bal.steps.append(StepRecord(0, True, True, 1, (next_index,)))
        next_index += 1
    else:
        x0 = tuple(RatFunc(v) for v in comp.point.coords)
        bal.steps.append(StepRecord(0, False, True, 0))
    bal.coefficients.append(x0)
    K = kowalevski_matrix_unchecked(s, x0)

    for k in range(1, order + 1):
        rhs = step_rhs(s, bal.coefficients, k)
        M = em.scalar_identity_minus(k, K)
        sol = em.solve_linear(M, rhs)
        if not sol.consistent:
            bal.steps.append(StepRecord(k, True, False, len(em.kernel(M)), defect=sol.defect))
            bal.obstructed_at = k
            break
        xk = list(sol.particular)
        introduced = []
        for vec in sol.kernel_basis:
            vec = _clear_denominators(vec)
            p = RatFunc.var(next_index)
            xk = [x + p * v for x, v in zip(xk, vec)]
            bal.free_params.append(FreeParameter(next_index, k, tuple(vec)))
            introduced.append(next_index)
            next_index += 1
        bal.coefficients.append(tuple(xk))
        bal.steps.append(
            StepRecord(k, bool(sol.kernel_basis), True, len(sol.kernel_basis), tuple(introduced))
        )
    return bal


def residual_check(
    s: LVSystem,
    bal: Balance,
    upto: int | None = None,
    values: Mapping[int, Fraction] | None = None,
    coefficients: Sequence[Sequence[Fraction]] | None = None,
) -> bool:
    """Substitute the truncated series into x' - f(x) and look for nonzero terms.

    Works on plain series multiplication, independently of :func:`step_rhs`.
    With ``y(t) = sum_k x^(k) t^k`` and ``x = y / t``,
    ``t^2 (x' - f(x)) = sum_k (k - 1) x^(k) t^k - y * (A y)``, whose
    coefficients of ``t^0 .. t^upto`` must all vanish.
    """
    if coefficients is None:
        if values is None:
            values = bal.random_values(random.Random(12345))
        coefficients = bal.instantiate(values)
    if upto is None:
        upto = len(coefficients) - 1
    if upto > len(coefficients) - 1:
        raise ValueError(f"balance only known to step {len(coefficients) - 1}")
    series = [tuple(coefficients[k]) for k in range(upto + 1)]
    A = s.matrix
    ay = [tuple(sum(A[i][j] * y[j] for j in range(3)) for i in range(3)) for y in series]
    for k in range(upto + 1):
        for i in range(3):
            prod = sum(series[l][i] * ay[k - l][i] for l in range(k + 1))
            if (k - 1) * series[k][i] - prod != 0:
                return False
    return True


@dataclass
class ACIVerdict:
    is_aci: bool
    witness: Optional[Balance]
    free_param_total: int
    report: list
    reason: str = ""


def aci_test(s: LVSystem, order: int | None = None) -> ACIVerdict:
    """Decide algebraic complete integrability from the Laurent data.

    Non-integer Kowalevski exponents reject immediately. Otherwise every
    nontrivial indicial component is expanded; the system passes when some
    component gives an unobstructed balance with two free parameters.
    """
    integ = integrality_report(s)
    if not integ.all_integer:
        bad = sorted({em.fmt(r) for _, r in integ.offending() if r is not None})
        return ACIVerdict(
            False,
            None,
            0,
            [],
            reason="non-integer Kowalevski exponent " + ", ".join(bad),
        )
    balances = [expand(s, comp, order) for comp in nontrivial_components(s)]
    good = [b for b in balances if b.unobstructed and b.free_param_total == N_FREE_REQUIRED]
    witness = good[0] if good else None
    total = max((b.free_param_total for b in balances if b.unobstructed), default=0)
    if witness is not None:
        reason = f"{witness.component.label} balance carries {N_FREE_REQUIRED} free parameters"
    else:
        obstructed = [b for b in balances if not b.unobstructed]
        reason = (
            f"at most {total} free parameter(s)"
            + (f"; obstruction at step {obstructed[0].obstructed_at}" if obstructed else "")
        )
    return ACIVerdict(witness is not None, witness, total, [b.summary() for b in balances], reason)
