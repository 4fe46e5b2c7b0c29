"""Exact rational linear algebra on 3-vectors and 3x3 matrices.

Scalars are :class:`fractions.Fraction`. The elimination routines only use
``+ - * /`` and comparison with zero, so they also run over any other exact
field type (the Laurent engine feeds them rational functions of its free
parameters).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

RatVector = tuple  # length-3 tuple of Fraction
RatMatrix = tuple  # 3x3 tuple of tuples of Fraction

UNIQUE = "unique"
AFFINE = "affine"
INCONSISTENT = "inconsistent"


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string exactly.

    Floats are refused: silently turning 0.1 into 3602879701896397/2**55
    is never what the caller wants here.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; pass an int, Fraction or 'p/q'")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(*entries) -> RatVector:
    if len(entries) == 1 and not isinstance(entries[0], (int, str, Fraction)):
        entries = tuple(entries[0])
    if len(entries) != 3:
        raise ValueError(f"expected 3 entries, got {len(entries)}")
    return tuple(to_fraction(e) for e in entries)


def mat(rows) -> RatMatrix:
    rows = tuple(tuple(to_fraction(e) for e in row) for row in rows)
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("expected a 3x3 matrix")
    return rows


def identity() -> RatMatrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(3)) for i in range(3))


def zero_matrix() -> RatMatrix:
    return tuple((Fraction(0),) * 3 for _ in range(3))


def diag(*entries) -> RatMatrix:
    d = vec(*entries)
    return tuple(tuple(d[i] if i == j else Fraction(0) for j in range(3)) for i in range(3))


def matvec(M, v) -> tuple:
    return tuple(sum((M[i][j] * v[j] for j in range(1, len(v))), M[i][0] * v[0]) for i in range(len(M)))


def matmul(A, B) -> tuple:
    n, m, p = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(1, m)), A[i][0] * B[0][j]) for j in range(p))
        for i in range(n)
    )


def matsub(A, B) -> tuple:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def scalar_identity_minus(k, M) -> tuple:
    """``k*I - M`` for a square matrix."""
    n = len(M)
    return tuple(tuple((k if i == j else 0) - M[i][j] for j in range(n)) for i in range(n))


def trace(M):
    return sum((M[i][i] for i in range(1, len(M))), M[0][0])


def det3(M):
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


# --------------------------------------------------------------------------
# Gaussian elimination
# --------------------------------------------------------------------------

def _is_zero(x: Any) -> bool:
    return x == 0


def rref(M) -> tuple[list[list], list[int]]:
    """Reduced row echelon form with leftmost pivots.

    Works for any rectangular matrix over an exact field. Returns the
    reduced rows and the pivot column indices.
    """
    R = [list(row) for row in M]
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if not _is_zero(R[i][col])), None)
        if pivot_row is None:
            continue
        R[r], R[pivot_row] = R[pivot_row], R[r]
        p = R[r][col]
        R[r] = [x / p for x in R[r]]
        for i in range(nrows):
            if i != r and not _is_zero(R[i][col]):
                f = R[i][col]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(col)
        r += 1
    return R, pivots


def rank(M) -> int:
    return len(rref(M)[1])


def _zero_like(x):
    return x - x


def _one_like(x):
    return _zero_like(x) + 1


def kernel(M) -> list[tuple]:
    """Basis of ``{v : M v = 0}``.

    One vector per free column, with a 1 in that column and zeros in the
    other free columns, so the basis is fully determined by the matrix.
    """
    R, pivots = rref(M)
    ncols = len(M[0])
    zero = _zero_like(M[0][0])
    one = _one_like(M[0][0])
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [zero] * ncols
        v[free] = one
        for row, pc in enumerate(pivots):
            v[pc] = -R[row][free]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class LinearSolution:
    kind: str
    particular: tuple | None = None
    kernel_basis: tuple = ()
    # first nonzero entry of the reduced inconsistent row, kept for diagnostics
    defect: Any = None

    @property
    def consistent(self) -> bool:
        return self.kind != INCONSISTENT


def solve_linear(M, rhs) -> LinearSolution:
    """Solve ``M x = rhs`` exactly and describe the full solution set."""
    n = len(M[0])
    aug = [list(row) + [b] for row, b in zip(M, rhs)]
    R, pivots = rref(aug)
    if n in pivots:
        row = pivots.index(n)
        return LinearSolution(INCONSISTENT, defect=R[row][n])
    zero = _zero_like(rhs[0] - M[0][0])
    x = [zero] * n
    for row, pc in enumerate(pivots):
        x[pc] = R[row][n] + zero
    basis = tuple(kernel(M))
    kind = UNIQUE if not basis else AFFINE
    return LinearSolution(kind, tuple(x), basis)


# --------------------------------------------------------------------------
# Polynomials in one variable
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial with Fraction coefficients, lowest degree first."""

    coefficients: tuple = field(default=())

    def __post_init__(self):
        coeffs = [to_fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-to_fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def __repr__(self) -> str:
        if self.is_zero():
            return "Polynomial(0)"
        terms = []
        for d in range(self.degree, -1, -1):
            c = self.coefficients[d]
            if c == 0:
                continue
            mono = "" if d == 0 else ("ρ" if d == 1 else f"ρ^{d}")
            coef = str(c) if (c != 1 or d == 0) else ""
            if c == -1 and d > 0:
                coef = "-"
            terms.append(f"{coef}{mono}")
        return "Polynomial(" + " + ".join(terms).replace("+ -", "- ") + ")"


def char_poly(M) -> Polynomial:
    """det(ρI - M) for a 3x3 matrix, as a monic cubic."""
    tr = trace(M)
    minors = (
        M[0][0] * M[1][1] - M[0][1] * M[1][0]
        + M[0][0] * M[2][2] - M[0][2] * M[2][0]
        + M[1][1] * M[2][2] - M[1][2] * M[2][1]
    )
    return Polynomial((-det3(M), minors, -tr, Fraction(1)))


def _synthetic_division(coeffs: list[Fraction], root: Fraction) -> tuple[list[Fraction], Fraction]:
    """Divide by (ρ - root); coefficients lowest first. Returns quotient, remainder."""
    hi_first = list(reversed(coeffs))
    out = [hi_first[0]]
    for c in hi_first[1:]:
        out.append(c + out[-1] * root)
    remainder = out.pop()
    return list(reversed(out)), remainder


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _primitive_integer(coeffs: list[Fraction]) -> list[int]:
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints]


def _find_one_root(coeffs: list[Fraction]) -> Fraction | None:
    """One rational root of a polynomial of degree >= 3 with nonzero constant term."""
    ints = _primitive_integer(coeffs)
    lead = abs(ints[-1])
    # cheap route: round the numeric roots to the nearest admissible fraction
    approx = np.roots([float(c) for c in reversed(ints)]) if all(
        abs(v) < 1e300 for v in ints
    ) else []
    for r in approx:
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        try:
            cand = Fraction(float(r.real)).limit_denominator(lead)
        except (OverflowError, ValueError):
            continue
        if Polynomial(tuple(coeffs))(cand) == 0:
            return cand
    # rational root theorem, exhaustive
    for q in _divisors(ints[-1]):
        for p in _divisors(ints[0]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if Polynomial(tuple(coeffs))(cand) == 0:
                    return cand
    return None


def rational_roots(p: Polynomial) -> tuple[list[Fraction], bool]:
    """All rational roots of ``p`` with multiplicity, sorted ascending.

    The flag is True when those roots account for the whole degree, i.e. the
    polynomial splits into linear factors over Q.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    coeffs = list(p.coefficients)
    roots: list[Fraction] = []
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots.append(Fraction(0))
        coeffs.pop(0)
    while len(coeffs) > 1:
        deg = len(coeffs) - 1
        if deg == 1:
            roots.append(-coeffs[0] / coeffs[1])
            coeffs = [coeffs[1]]
            break
        if deg == 2:
            c0, c1, c2 = coeffs
            disc = c1 * c1 - 4 * c2 * c0
            r = _rational_sqrt(disc)
            if r is None:
                break
            roots.extend([(-c1 - r) / (2 * c2), (-c1 + r) / (2 * c2)])
            coeffs = [c2]
            break
        root = _find_one_root(coeffs)
        if root is None:
            break
        coeffs, rem = _synthetic_division(coeffs, root)
        assert rem == 0
        roots.append(root)
    return sorted(roots), len(coeffs) == 1


def is_integer(q: Fraction) -> bool:
    return q.denominator == 1


def fmt(q) -> str:
    """Canonical exact rendering: ``"p/q"`` or ``"p"``."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_vec(v: Sequence) -> list[str]:
    return [fmt(x) for x in v]
