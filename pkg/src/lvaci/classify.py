"""Equivalence of systems under coordinate permutations and scaling, and the
classification of integrable triples.

Permutations act on the interaction matrix by ``A'[i][m] = A[s(i)][s(m)]``
and a nonzero scale ``t`` divides every entry (``u = t x``). The classes
and their representatives:

    l2  (1, 0, 1)        l3  (1,-1, 1)        l4  (1,-1, 2)
    l6  (1,-2, 3)        lλ  (1, 1, λ), λ integer, λ != 0
    l0  (1, 1+μ, μ), μ != 0  (exactly the triples with a - b + c = 0)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional

from .exactmath import fmt, to_fraction
from .lv_core import LVSystem

L2, L3, L4, L6 = "l2", "l3", "l4", "l6"
LLAMBDA, LZERO = "l_lambda", "l0"
NOT_ACI, DEGENERATE = "not_aci", "degenerate"
ACI_KINDS = (L2, L3, L4, L6, LLAMBDA, LZERO)

EXCEPTIONAL = {
    L2: (1, 0, 1),
    L3: (1, -1, 1),
    L4: (1, -1, 2),
    L6: (1, -2, 3),
}


class ZeroScale(ValueError):
    pass


class NonIntegralK3(ValueError):
    pass


# --------------------------------------------------------------------------
# the group S3 x Q*
# --------------------------------------------------------------------------

# permutations as tuples (s(1), s(2), s(3)); order fixes the search order below
PERMUTATIONS = {
    "id": (1, 2, 3),
    "(1 2)": (2, 1, 3),
    "(1 3)": (3, 2, 1),
    "(2 3)": (1, 3, 2),
    "(1 2 3)": (2, 3, 1),
    "(1 3 2)": (3, 1, 2),
}
_CYCLE_NAMES = {v: k for k, v in PERMUTATIONS.items()}


@dataclass(frozen=True)
class GroupElement:
    sigma: tuple = (1, 2, 3)
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", to_fraction(self.scale))
        if sorted(self.sigma) != [1, 2, 3]:
            raise ValueError(f"{self.sigma} is not a permutation of (1, 2, 3)")

    @classmethod
    def named(cls, cycle: str, scale=1) -> "GroupElement":
        return cls(PERMUTATIONS[cycle], scale)

    @property
    def cycle(self) -> str:
        return _CYCLE_NAMES[tuple(self.sigma)]

    def then(self, other: "GroupElement") -> "GroupElement":
        """The element acting as ``other`` after ``self``."""
        return compose(other, self)

    def __str__(self) -> str:
        return f"{self.cycle}, scale {fmt(self.scale)}"


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Element h with ``apply_group(h, s) == apply_group(g1, apply_group(g2, s))``."""
    # the matrix action is a right action: g1.(g2.A)[i][m] = A[s2(s1(i))][s2(s1(m))]
    sigma = tuple(g2.sigma[g1.sigma[i] - 1] for i in range(3))
    return GroupElement(sigma, g1.scale * g2.scale)


def inverse(g: GroupElement) -> GroupElement:
    inv = [0, 0, 0]
    for i, si in enumerate(g.sigma):
        inv[si - 1] = i + 1
    return GroupElement(tuple(inv), 1 / g.scale)


def permute_matrix(sigma, A) -> tuple:
    return tuple(tuple(A[sigma[i] - 1][sigma[m] - 1] for m in range(3)) for i in range(3))


def apply_group(g: GroupElement, s: LVSystem) -> LVSystem:
    if g.scale == 0:
        raise ZeroScale("scale must be nonzero")
    A = permute_matrix(g.sigma, s.matrix)
    return LVSystem(A[0][1] / g.scale, A[0][2] / g.scale, A[1][2] / g.scale)


def permutation_images(s: LVSystem) -> Iterator[tuple[GroupElement, LVSystem]]:
    for sigma in PERMUTATIONS.values():
        g = GroupElement(sigma)
        yield g, apply_group(g, s)


def _first_nonzero(t) -> Fraction:
    return next(v for v in t if v != 0)


def normalize(s: LVSystem) -> tuple[LVSystem, GroupElement]:
    """Canonical representative of the orbit: lexicographic minimum over the
    six permutation images, each scaled so its first nonzero entry is 1."""
    best = None
    for g, img in permutation_images(s):
        t = _first_nonzero(img.triple)
        cand = img.scaled(1 / t)
        key = cand.triple
        if best is None or key < best[0].triple:
            best = (cand, GroupElement(g.sigma, t))
    return best


def is_isomorphic(s1: LVSystem, s2: LVSystem) -> bool:
    return normalize(s1)[0] == normalize(s2)[0]


def orbit(s: LVSystem) -> set:
    """All scale-normalized triples in the orbit (first nonzero entry 1)."""
    out = set()
    for _, img in permutation_images(s):
        out.add(img.scaled(1 / _first_nonzero(img.triple)).triple)
    return out


# --------------------------------------------------------------------------
# Diophantine lemmas
# --------------------------------------------------------------------------

def lemma1_holds(x: int, y: int) -> bool:
    den = x * y - x - y
    return den != 0 and (x + y) % den == 0


def lemma2_holds(x: int, y: int) -> bool:
    den = x * y + y - x
    return den != 0 and (x - y) % den == 0


def lemma1_solutions(bound: int) -> set:
    """Brute force over 1 <= x <= y <= bound of (x+y)/(xy-x-y) in Z."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return {(x, y) for x in range(1, bound + 1) for y in range(x, bound + 1) if lemma1_holds(x, y)}


def lemma1_closed_form(bound: int) -> set:
    sporadic = {(2, 3), (2, 4), (2, 6), (3, 3), (3, 6), (4, 4)}
    return {(1, lam) for lam in range(1, bound + 1)} | {p for p in sporadic if p[1] <= bound}


def lemma2_solutions(bound: int) -> set:
    """Brute force over 1 <= x, y <= bound of (x-y)/(xy+y-x) in Z."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return {(x, y) for x in range(1, bound + 1) for y in range(1, bound + 1) if lemma2_holds(x, y)}


def lemma2_closed_form(bound: int) -> set:
    return {(lam, 1) for lam in range(1, bound + 1)} | {(lam, lam) for lam in range(1, bound + 1)}


@dataclass(frozen=True)
class ExponentFamily:
    """Triples (a, b, c) = a * (1, b_ratio, c_ratio) with exponents k1, k2 (and k3)."""

    k1: int
    k2: int
    k3: Optional[int]
    b_ratio: Fraction
    c_ratio: Fraction

    def at(self, a=1) -> LVSystem:
        a = to_fraction(a)
        return LVSystem(a, a * self.b_ratio, a * self.c_ratio)


def family_from_exponents(k1: int, k2: int) -> ExponentFamily:
    """Systems whose a- and c-points have third exponents k1 and k2."""
    if k1 * k2 == 0:
        raise ValueError("zero exponents belong to the a - b + c = 0 family")
    den = k1 * k2 - k1 - k2
    b_ratio = Fraction(k1 + k2 - k1 * k2, k2)
    c_ratio = Fraction(k1, k2)
    if den == 0:
        if (k1, k2) != (2, 2):
            raise NonIntegralK3(f"k1 k2 - k1 - k2 = 0 with (k1, k2) = ({k1}, {k2})")
        # b = 0: the b-point does not exist, so there is no third exponent
        return ExponentFamily(k1, k2, None, b_ratio, c_ratio)
    k3 = Fraction(k1 * k2, den)
    if k3.denominator != 1:
        raise NonIntegralK3(f"k3 = {fmt(k3)} for (k1, k2) = ({k1}, {k2})")
    return ExponentFamily(k1, k2, int(k3), b_ratio, c_ratio)


# --------------------------------------------------------------------------
# six-class classification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassLabel:
    kind: str
    witness: Optional[GroupElement] = None
    lam: Optional[int] = None
    mu: Optional[Fraction] = None
    # orbit-invariant parameter: |λ| for l_λ, the least admissible μ for l0
    canonical_param: Optional[Fraction] = None
    mu_orbit: tuple = ()
    notes: tuple = field(default=())

    @property
    def is_aci(self) -> bool:
        return self.kind in ACI_KINDS

    @property
    def representative(self) -> Optional[LVSystem]:
        if self.kind in EXCEPTIONAL:
            return LVSystem(*EXCEPTIONAL[self.kind])
        if self.kind == LLAMBDA:
            return LVSystem(1, 1, self.lam)
        if self.kind == LZERO:
            return LVSystem(1, 1 + self.mu, self.mu)
        return None

    @property
    def name(self) -> str:
        if self.kind == LLAMBDA:
            return f"l_lambda(lambda={self.lam})"
        if self.kind == LZERO:
            return f"l0(mu={fmt(self.mu)})"
        return self.kind

    def invariant_key(self) -> tuple:
        return (self.kind, self.canonical_param)

    def to_dict(self) -> dict:
        rep = self.representative
        return {
            "kind": self.kind,
            "name": self.name,
            "lambda": self.lam,
            "mu": None if self.mu is None else fmt(self.mu),
            "canonical_param": None if self.canonical_param is None else fmt(self.canonical_param),
            "mu_orbit": [fmt(m) for m in self.mu_orbit],
            "representative": None if rep is None else [fmt(v) for v in rep.triple],
            "witness": None
            if self.witness is None
            else {"sigma": self.witness.cycle, "scale": fmt(self.witness.scale)},
            "notes": list(self.notes),
        }


def _scaled_images(s: LVSystem) -> Iterator[tuple[GroupElement, LVSystem]]:
    """Permutation images with a != 0, scaled to a = 1, in fixed group order."""
    for g, img in permutation_images(s):
        if img.a != 0:
            yield GroupElement(g.sigma, img.a), img.scaled(1 / img.a)


def is_degenerate(s: LVSystem) -> bool:
    return sum(1 for v in s.triple if v == 0) >= 2


def _lambda_of(rep: LVSystem) -> Optional[int]:
    if rep.b == 1 and rep.c != 0 and rep.c.denominator == 1:
        return int(rep.c)
    return None


def classify(s: LVSystem) -> ClassLabel:
    if is_degenerate(s):
        return ClassLabel(
            DEGENERATE,
            notes=(
                "two interaction coefficients vanish, so one species is decoupled; "
                "such systems lie outside the six-class list",
            ),
        )
    images = list(_scaled_images(s))
    if s.a - s.b + s.c == 0:
        mus = [(g, img.c) for g, img in images if img.c != 0]
        g, mu = mus[0]
        notes = []
        if any(img.c == 0 for _, img in images):
            notes.append("orbit also contains the excluded mu = 0 triple (1, 1, 0)")
        orbit_mus = tuple(sorted({m for _, m in mus}))
        return ClassLabel(LZERO, g, mu=mu, canonical_param=orbit_mus[0], mu_orbit=orbit_mus, notes=tuple(notes))
    for kind, rep in EXCEPTIONAL.items():
        for g, img in images:
            if img.triple == LVSystem(*rep).triple:
                return ClassLabel(kind, g)
    lams = [(g, _lambda_of(img)) for g, img in images if _lambda_of(img) is not None]
    if lams:
        g, lam = lams[0]
        notes = ()
        others = sorted({l for _, l in lams} - {lam})
        if others:
            notes = (f"orbit also contains (1, 1, {', '.join(str(o) for o in others)})",)
        return ClassLabel(LLAMBDA, g, lam=lam, canonical_param=Fraction(abs(lam)), notes=notes)
    return ClassLabel(NOT_ACI)


def class_representatives(lam: int = 2, mu=Fraction(1)) -> dict[str, LVSystem]:
    reps = {k: LVSystem(*v) for k, v in EXCEPTIONAL.items()}
    reps[LLAMBDA] = LVSystem(1, 1, lam)
    reps[LZERO] = LVSystem(1, 1 + to_fraction(mu), to_fraction(mu))
    return reps


def integer_box(max_abs: int) -> Iterator[LVSystem]:
    r = range(-max_abs, max_abs + 1)
    for a, b, c in product(r, r, r):
        if (a, b, c) != (0, 0, 0):
            yield LVSystem(a, b, c)


def degree_relation_check(exponents, m: int) -> Optional[tuple]:
    """Non-negative integers k_j with sum k_j rho_j = m and sum k_j <= m.

    Exhaustive search in lexicographic order of the certificate; returns the
    first hit or None.
    """
    if m < 0:
        raise ValueError("degree must be non-negative")
    rhos = [to_fraction(r) for r in exponents]
    n = len(rhos)

    def search(i: int, budget: int, target: Fraction, acc: list) -> Optional[tuple]:
        if i == n:
            return tuple(acc) if target == 0 else None
        for k in range(budget + 1):
            hit = search(i + 1, budget - k, target - k * rhos[i], acc + [k])
            if hit is not None:
                return hit
        return None

    return search(0, m, Fraction(m), [])
