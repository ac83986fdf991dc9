"""Totally real number fields and the algebraic targets built from them.

Polynomials given to :func:`make_field` are in descending order (leading
coefficient first), matching the command line.  Field elements themselves
use ascending coefficient tuples in the chosen generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .approx import TargetVector, make_target
from .exactnum import AlgebraicReal, FieldElement, Interval, NumberField, is_irreducible, isolate_real_roots
from .lattice import det

__all__ = [
    "NotIrreducible",
    "NotTotallyReal",
    "DegreeTooSmall",
    "NotSpanning",
    "TotallyRealField",
    "FieldVector",
    "make_field",
    "standard_vector",
    "custom_vector",
    "geometric_embedding",
    "galpha",
    "Balpha",
    "eps_zero_estimate",
    "discriminant",
]

MAX_DEGREE = 6
PRECISION_CAP = 1 << 17


class NotIrreducible(ValueError):
    pass


class NotTotallyReal(ValueError):
    pass


class DegreeTooSmall(ValueError):
    pass


class NotSpanning(ValueError):
    pass


@dataclass(frozen=True)
class TotallyRealField:
    minpoly: tuple  # descending integer coefficients
    roots: tuple  # AlgebraicReals, ascending
    identity_root_index: int
    nf: NumberField

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def generator(self) -> FieldElement:
        return self.nf.gen

    def element(self, coeffs: Sequence) -> FieldElement:
        return self.nf.element(coeffs)

    def embedding_order(self) -> list[int]:
        """Root indices for sigma_1, ..., sigma_n (identity last)."""
        idx = [i for i in range(self.degree) if i != self.identity_root_index]
        return idx + [self.identity_root_index]


def make_field(coeffs: Sequence[int], embedding="largest") -> TotallyRealField:
    """Validate a minimal polynomial (descending coefficients) and isolate its roots.

    ``embedding`` picks the root realising the identity: ``largest``,
    ``smallest`` or an index into the ascending list of roots.
    """
    coeffs = [int(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    n = len(coeffs) - 1
    if n < 3:
        raise DegreeTooSmall("Case II needs degree at least 3")
    if n > MAX_DEGREE:
        raise ValueError(f"degree is capped at {MAX_DEGREE}")
    asc = list(reversed(coeffs))
    if not is_irreducible(asc):
        raise NotIrreducible(f"{coeffs} is reducible over Q")
    ivs = isolate_real_roots(asc)
    if len(ivs) != n:
        raise NotTotallyReal(f"only {len(ivs)} of {n} roots are real")
    roots = tuple(AlgebraicReal(asc, iv.lo, iv.hi, check_irreducible=False) for iv in ivs)
    if embedding == "largest":
        k = n - 1
    elif embedding == "smallest":
        k = 0
    else:
        k = int(embedding)
        if not 0 <= k < n:
            raise ValueError("embedding index out of range")
    nf = NumberField(roots[k], precision_cap=PRECISION_CAP)
    return TotallyRealField(tuple(coeffs), roots, k, nf)


def discriminant(coeffs: Sequence[int]) -> Fraction:
    """Discriminant of the monic normalisation (descending coefficients)."""
    import sympy

    x = sympy.Symbol("x")
    lead = coeffs[0]
    poly = sympy.Poly([sympy.Rational(c, lead) for c in coeffs], x)
    return Fraction(str(sympy.discriminant(poly)))


@dataclass(frozen=True)
class FieldVector:
    field: TotallyRealField
    components: tuple  # FieldElements alpha_1..alpha_d
    spanning_certificate: bool

    @property
    def dim(self) -> int:
        return len(self.components)

    def target(self) -> TargetVector:
        return make_target(self.components)


def _rank_full(field: TotallyRealField, comps) -> bool:
    rows = [list(field.element([1]).coeffs)] + [list(c.coeffs) for c in comps]
    return len(rows) == field.degree and det(rows) != 0


def standard_vector(field: TotallyRealField) -> FieldVector:
    """alpha_i = beta^i for i = 1..d."""
    d = field.degree - 1
    comps = tuple(field.element([0] * i + [1]) for i in range(1, d + 1))
    return FieldVector(field, comps, True)


def custom_vector(field: TotallyRealField, comps: Sequence) -> FieldVector:
    comps = tuple(c if isinstance(c, FieldElement) else field.element(c) for c in comps)
    if len(comps) != field.degree - 1:
        raise ValueError("need d = n - 1 components")
    ok = _rank_full(field, comps)
    if not ok:
        raise NotSpanning("1, alpha_1, ..., alpha_d do not span the field over Q")
    return FieldVector(field, comps, ok)


def _eval_at(coeffs, g: Interval) -> Interval:
    acc = Interval.point(0)
    for c in reversed(coeffs):
        acc = acc * g + c
    return acc


def geometric_embedding(field: TotallyRealField, x, width=Fraction(1, 1 << 100)) -> list[Interval]:
    """(sigma_1(x), ..., sigma_{n-1}(x), x) as enclosures of width <= ``width``."""
    x = x if isinstance(x, FieldElement) else field.element([x] if not isinstance(x, (list, tuple)) else x)
    out = []
    for k in field.embedding_order():
        w = Fraction(width)
        while True:
            iv = _eval_at(x.coeffs, field.roots[k].refine(w))
            if iv.width <= width:
                break
            w /= 1 << 32
        out.append(iv)
    return out


def _embed_matrix(fv: FieldVector, bits: int):
    """Columns sigma(alpha_1), ..., sigma(alpha_d), sigma(1) as mpf (rows = embeddings)."""
    width = Fraction(1, 1 << bits)
    cols = [geometric_embedding(fv.field, a, width) for a in fv.components]
    cols.append([Interval.point(1)] * fv.field.degree)
    n = fv.field.degree
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _interval_det(m: list[list[Interval]]) -> Interval:
    """Determinant enclosure: exact det of midpoints plus a perturbation bound."""
    n = len(m)
    mid = [[iv.mid for iv in row] for row in m]
    w = max(iv.width for row in m for iv in row) / 2
    big = max(abs(iv.lo) + abs(iv.hi) for row in m for iv in row) + w
    dm = det(mid)
    # |det(A + E) - det(A)| <= n * n! * big^{n-1} * w  for |E_ij| <= w
    err = n * math.factorial(n) * big ** (n - 1) * w
    return Interval(dm - err, dm + err)


@dataclass
class GAlpha:
    matrix: list  # n x n Intervals (rows = embeddings, identity last)
    det: Interval
    certified: bool

    def floats(self) -> list[list[float]]:
        return [[float(iv.mid) for iv in r] for r in self.matrix]


def galpha(fv: FieldVector, bits: int = 120) -> GAlpha:
    """g_alpha with columns sigma(alpha_1), ..., sigma(alpha_d), sigma(1)."""
    if not fv.spanning_certificate:
        raise NotSpanning("spanning certificate missing")
    while True:
        m = _embed_matrix(fv, bits)
        dv = _interval_det(m)
        if dv.sign() not in (None, 0):
            return GAlpha(m, dv, True)
        bits *= 2


@dataclass
class BAlpha:
    B: list  # d x d mpf, b_ij = sigma_j(alpha_i) - alpha_i
    det_B: Interval
    c1: object  # mpf, |det B|^{-1/n}
    hbar: list  # n x n mpf

    def det_hbar(self):
        return mpmath.det(mpmath.matrix(self.hbar))


def Balpha(fv: FieldVector, bits: int = 200, dps: int = 60) -> BAlpha:
    """B_alpha, c1 and hbar_alpha = c1 diag(B, 1)."""
    if not fv.spanning_certificate:
        raise NotSpanning("spanning certificate missing")
    d, n = fv.dim, fv.field.degree
    while True:
        width = Fraction(1, 1 << bits)
        emb = [geometric_embedding(fv.field, a, width) for a in fv.components]
        Biv = [[emb[i][j] - emb[i][n - 1] for j in range(d)] for i in range(d)]
        dv = _interval_det(Biv)
        if dv.sign() not in (None, 0):
            break
        bits *= 2
    with mpmath.workdps(dps):
        B = [[mpmath.mpf(iv.mid.numerator) / iv.mid.denominator for iv in row] for row in Biv]
        detB = mpmath.det(mpmath.matrix(B))
        c1 = abs(detB) ** (mpmath.mpf(-1) / n)
        hbar = [[c1 * B[i][j] if i < d and j < d else mpmath.mpf(0) for j in range(n)] for i in range(n)]
        hbar[n - 1][n - 1] = c1
    return BAlpha(B, dv, c1, hbar)


@dataclass(frozen=True)
class EpsZero:
    running_min: float
    running_argmin: tuple  # (q, p)
    tail_min: float
    tail_argmin: tuple


def eps_zero_estimate(fv: FieldVector, spec, q_max: int, workers: int = 1) -> EpsZero:
    """Empirical bracket for eps_0: min of q^{1/d} <q alpha> over q <= q_max and over (q_max/10, q_max]."""
    from .approx import min_displacement

    if q_max < 100:
        raise ValueError("q_max must be at least 100")
    theta = fv.target()
    run = min_displacement(theta, spec, 1, q_max, workers=workers)
    tail = min_displacement(theta, spec, q_max // 10 + 1, q_max, workers=workers)
    return EpsZero(run[0], run[1], tail[0], tail[1])
