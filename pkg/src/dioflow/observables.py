"""Observables attached to an approximation vector v = (p, q) in Z^n.

* the projected lattice: Z^n projected along v onto the horizontal space,
  rescaled to covolume one;
* the lift functional: the torus class recording how Z^n sits over it;
* residues of (p, q) modulo a list of integers.

Lattices are kept exactly: a rational "raw" basis of the projection plus
the scale q, the actual basis being q^{1/d} times the raw one.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import Interval, nth_root_interval
from .lattice import complete_basis, det, ext_gcd, gram, mat_inverse, mix_completion, reduce_basis, shortest_sq, transpose

__all__ = [
    "NotPrimitive",
    "ZeroVertical",
    "NotCoprime",
    "ProjectedLattice",
    "LiftClass",
    "ResidueProfile",
    "project_lattice",
    "lift_functional",
    "reconstruct",
    "rho_En",
    "shortest_gcd_lift",
    "residues",
    "primitive_mod_by_definition",
    "shape_invariants",
    "torus_coordinate_d1",
    "lift_coordinate_d1",
    "alternate_completion",
    "sys_exact_sq",
]


class NotPrimitive(ValueError):
    pass


class ZeroVertical(ValueError):
    pass


class NotCoprime(ValueError):
    pass


def _scaled(x, scale: int, power: float) -> float:
    """float(x * scale**power) without overflowing on huge scales."""
    x = Fraction(x)
    if x == 0:
        return 0.0
    lg = math.log(abs(x.numerator)) - math.log(x.denominator) + power * math.log(scale)
    return math.copysign(math.exp(lg), x)


def _half_open(x: Fraction) -> Fraction:
    """Representative of x mod 1 in [-1/2, 1/2)."""
    return x - math.floor(x + Fraction(1, 2))


@dataclass(frozen=True)
class ProjectedLattice:
    raw: tuple  # rows: d rational vectors spanning the projection (covolume 1/scale)
    scale: int  # |v_n|; the lattice is scale^{1/d} * span(raw)
    source_v: tuple
    reduced: bool = True

    @property
    def dim(self) -> int:
        return len(self.raw)

    @property
    def raw_gram(self) -> list[list[Fraction]]:
        return gram(self.raw)

    def basis(self, bits: int = 80) -> list[list[Interval]]:
        """Certified enclosures of the basis vectors (rows)."""
        s = nth_root_interval(self.scale, self.dim, bits)
        return [[s * Interval.point(x) for x in r] for r in self.raw]

    def basis_float(self) -> list[list[float]]:
        return [[_scaled(x, self.scale, 1.0 / self.dim) for x in r] for r in self.raw]

    def raw_det(self) -> Fraction:
        return det(self.raw)

    def covolume_exact(self) -> Fraction:
        """|det| of the actual basis, computed as |det raw| * scale (exactly 1)."""
        return abs(self.raw_det()) * self.scale

    def gram(self) -> list[list[float]]:
        return [[_scaled(x, self.scale, 2.0 / self.dim) for x in r] for r in self.raw_gram]

    def same_lattice(self, other: "ProjectedLattice") -> bool:
        """Exact equality of the point sets."""
        if self.scale != other.scale or self.dim != other.dim:
            return False
        m = mat_inverse(self.raw)
        # other rows expressed in our basis must be integral, and vice versa
        for a, b in ((self, other), (other, self)):
            inv = mat_inverse(a.raw)
            for r in b.raw:
                coords = [sum(r[k] * inv[k][j] for k in range(len(r))) for j in range(len(r))]
                if any(c.denominator != 1 for c in coords):
                    return False
        return True


@dataclass(frozen=True)
class LiftClass:
    lattice: ProjectedLattice
    functional: tuple  # rational covector psi on the raw lattice; f'(x) = psi(scale^{-1/d} x)
    coords: tuple  # psi on the lattice basis rows, reduced into [-1/2, 1/2)
    normalized: bool = True

    def same_class(self, other: "LiftClass") -> bool:
        """Both describe the same lattice and the covectors differ by a dual-lattice element."""
        if not self.lattice.same_lattice(other.lattice):
            return False
        diff = [a - b for a, b in zip(self.functional, other.functional)]
        for r in self.lattice.raw:
            if sum(x * y for x, y in zip(diff, r)).denominator != 1:
                return False
        return True

    def value(self, raw_point: Sequence[Fraction]) -> Fraction:
        return sum(Fraction(x) * y for x, y in zip(raw_point, self.functional))


@dataclass(frozen=True)
class ResidueProfile:
    moduli: tuple
    residues: tuple
    primitive_mod_m: tuple

    def as_dict(self) -> dict:
        return {str(m): list(r) for m, r in zip(self.moduli, self.residues)}


def _as_vector(v) -> tuple[int, ...]:
    if hasattr(v, "vector"):
        return tuple(v.vector)
    return tuple(int(x) for x in v)


def _check(v: tuple):
    if len(v) < 2:
        raise ValueError("need n >= 2")
    if v[-1] == 0:
        raise ZeroVertical("vertical coordinate is zero")
    if math.gcd(*v) != 1:
        raise NotPrimitive(f"{v} is not primitive")


def _project_rows(rows: list[list[int]], v: tuple):
    """Horizontal parts w_i and heights c_i of v_i = w_i + c_i v."""
    n = len(v)
    ws, cs = [], []
    for r in rows[:-1]:
        c = Fraction(r[-1], v[-1])
        ws.append([r[k] - c * v[k] for k in range(n - 1)])
        cs.append(c)
    return ws, cs


def _reduced_with_functional(ws, cs):
    """Reduce the raw basis and carry the functional values along."""
    psi = _solve_covector(ws, cs)
    red = reduce_basis(ws)
    coords = tuple(_half_open(sum(x * y for x, y in zip(r, psi))) for r in red)
    return red, psi, coords


def _solve_covector(ws, cs):
    # psi . w_i = c_i  ->  psi = W^{-1} c with W having rows w_i
    inv = mat_inverse(ws)
    d = len(ws)
    return tuple(sum(inv[j][i] * cs[i] for i in range(d)) for j in range(d))


def _build(v: tuple, rows) -> LiftClass:
    ws, cs = _project_rows(rows, v)
    red, psi, coords = _reduced_with_functional(ws, cs)
    lat = ProjectedLattice(tuple(tuple(r) for r in red), abs(v[-1]), v, True)
    return LiftClass(lat, psi, coords, True)


def project_lattice(v, completion=None) -> ProjectedLattice:
    """Lambda' = |v_n|^{1/d} pi^v(Z^n), reduced.  ``completion`` may supply the basis rows."""
    v = _as_vector(v)
    _check(v)
    rows = completion if completion is not None else complete_basis(v)
    return _build(v, rows).lattice


def lift_functional(v, completion=None) -> LiftClass:
    """Projected lattice with its lift-functional class."""
    v = _as_vector(v)
    _check(v)
    rows = completion if completion is not None else complete_basis(v)
    return _build(v, rows)


def alternate_completion(v, seed: int = 0):
    v = _as_vector(v)
    return mix_completion(complete_basis(v), random.Random(seed))


def rho_En(v, seed: int = 1) -> LiftClass:
    """a_t u(v') Z^n with v' = -pi(v)/v_n and e^{dt} = |v_n|, read off as (Lambda', f).

    The lattice is formed from the images of the standard basis; a basis
    through e_n is then obtained from an independently mixed completion.
    """
    v = _as_vector(v)
    _check(v)
    n, d, q = len(v), len(v) - 1, v[-1]
    vp = [Fraction(-x, q) for x in v[:-1]]
    # raw images of e_j: the horizontal part is divided by q^{1/d}
    images = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        hor = [e[k] + vp[k] * e[-1] for k in range(d)]
        images.append(hor + [Fraction(e[-1], q)])
    # e_n = sum_j v_j images_j; complete v in coefficient space
    rows = mix_completion(complete_basis(v), random.Random(seed))
    basis = [[sum(Fraction(c[j]) * images[j][k] for j in range(n)) for k in range(n)] for c in rows]
    assert basis[-1] == [0] * d + [1]
    ws = [r[:d] for r in basis[:-1]]
    cs = [r[-1] for r in basis[:-1]]
    red, psi, coords = _reduced_with_functional(ws, cs)
    lat = ProjectedLattice(tuple(tuple(r) for r in red), abs(q), v, True)
    return LiftClass(lat, psi, coords, True)


def reconstruct(lat: ProjectedLattice, lift, v) -> list[list]:
    """Basis rows of {|v_n|^{-1/d} x + (f(x) + k) v : x in Lambda', k in Z}.

    ``lift`` is a LiftClass or a raw covector.  When the lattice scale equals
    |v_n| the result is exact; otherwise rows are floats.
    """
    v = [Fraction(x) for x in v]
    if v[-1] == 0:
        raise ZeroVertical("vertical coordinate is zero")
    psi = lift.functional if isinstance(lift, LiftClass) else tuple(Fraction(x) for x in lift)
    d = lat.dim
    if abs(v[-1]) == lat.scale:
        rows = []
        for w in lat.raw:
            c = sum(x * y for x, y in zip(w, psi))
            rows.append([Fraction(w[k]) + c * v[k] for k in range(d)] + [c * v[-1]])
        rows.append(list(v))
        return rows
    factor = (lat.scale / abs(float(v[-1]))) ** (1.0 / d)
    rows = []
    for w in lat.raw:
        c = float(sum(x * y for x, y in zip(w, psi)))
        rows.append([float(w[k]) * factor + c * float(v[k]) for k in range(d)] + [c * float(v[-1])])
    rows.append([float(x) for x in v])
    return rows


def torus_coordinate_d1(lift: LiftClass) -> Fraction:
    """For d = 1: the class on the positive generator of Lambda', in [-1/2, 1/2)."""
    if lift.lattice.dim != 1:
        raise ValueError("only for d = 1")
    g = lift.lattice.raw[0][0]
    return _half_open(g * lift.functional[0])


def lift_coordinate_d1(p: int, q: int) -> Fraction:
    """Torus coordinate of the lift of (p, q) for d = 1, in closed form.

    Completing (p, q) by (a, b) with a q - b p = 1 puts the positive
    generator 1/q of the projection at (a, b) - (b/q)(p, q), so the class is
    b/q = -p^{-1}/q mod 1.  Agrees with torus_coordinate_d1(lift_functional(...)).
    """
    if q < 1:
        raise ValueError("q must be positive")
    if math.gcd(p, q) != 1:
        raise NotPrimitive(f"({p}, {q}) is not primitive")
    if q == 1:
        return Fraction(0)
    return _half_open(Fraction(-pow(p, -1, q), q))


def shortest_gcd_lift(p: int, q: int) -> tuple[int, int, Fraction]:
    """Shortest (u, v) with p v - q u = 1 and f = (p u + q v)/(p^2 + q^2) in [-1/2, 1/2).

    Among two equally short solutions the one with f >= 0 is taken; an f of
    exactly 1/2 is then reported as -1/2.
    """
    if q < 1:
        raise ValueError("q must be positive")
    g, x, y = ext_gcd(p, q)
    if g != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {g}")
    u0, v0 = -y, x  # p x + q y = 1
    nn = p * p + q * q
    t0 = Fraction(-(u0 * p + v0 * q), nn)
    cands = []
    for t in (math.floor(t0), math.floor(t0) + 1):
        u, v = u0 + t * p, v0 + t * q
        f = Fraction(p * u + q * v, nn)
        cands.append((u * u + v * v, 0 if f >= 0 else 1, (u, v), f))
    cands.sort()
    _, _, (u, v), f = cands[0]
    if f == Fraction(1, 2):
        f = Fraction(-1, 2)
    return u, v, f


def residues(v, moduli: Sequence[int]) -> ResidueProfile:
    v = _as_vector(v)
    res, prim = [], []
    for m in moduli:
        if m < 2:
            raise ValueError("moduli must be >= 2")
        res.append(tuple(x % m for x in v))
        prim.append(math.gcd(m, *v) == 1)
    return ResidueProfile(tuple(moduli), tuple(res), tuple(prim))


def primitive_mod_by_definition(a: Sequence[int], m: int) -> bool:
    """Brute force: a is primitive mod m unless a = b d with b a non-unit mod m."""
    import itertools

    n = len(a)
    a = tuple(x % m for x in a)
    for b in range(m):
        if math.gcd(b, m) == 1:
            continue
        for dvec in itertools.product(range(m), repeat=n):
            if tuple(b * x % m for x in dvec) == a:
                return False
    return True


def shape_invariants(lat: ProjectedLattice) -> tuple[float, list[list[float]]]:
    """(length of a shortest nonzero vector, reduced Gram matrix)."""
    sq, _ = shortest_sq([list(r) for r in lat.raw])
    return math.sqrt(_scaled(sq, lat.scale, 2.0 / lat.dim)), lat.gram()


def sys_exact_sq(lat: ProjectedLattice) -> tuple[Fraction, int]:
    """(s, scale) with sys(Lambda')^2 = s * scale^{2/d}, s exact."""
    sq, _ = shortest_sq([list(r) for r in lat.raw])
    return sq, lat.scale
