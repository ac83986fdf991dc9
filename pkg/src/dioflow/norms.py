"""Coordinate-symmetric norms on R^d and nearest integer points."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import Interval, PrecisionExhausted, compare, refine, sign, to_exact

__all__ = [
    "NormSpec",
    "UnsupportedExact",
    "parse_norm",
    "norm_value",
    "nearest_int_points",
    "ball_volume",
    "equivalence_constants",
    "exact_power",
    "int_magnitude",
]

KINDS = ("euclid", "sup", "l1", "lp")


class UnsupportedExact(ValueError):
    """Exact comparison is unavailable for this norm (L^p with p not an even integer)."""


@dataclass(frozen=True)
class NormSpec:
    kind: str
    dim: int
    p: Fraction | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.kind == "lp":
            if self.p is None or Fraction(self.p) <= 1:
                raise ValueError("L^p norms need p > 1")
            object.__setattr__(self, "p", Fraction(self.p))

    @property
    def label(self) -> str:
        return f"lp:{self.p}" if self.kind == "lp" else self.kind

    def with_dim(self, dim: int) -> "NormSpec":
        return NormSpec(self.kind, dim, self.p)


def parse_norm(text: str, dim: int) -> NormSpec:
    """Parse the CLI selectors ``euclid``, ``sup``, ``l1`` and ``lp:<p>``."""
    text = text.strip().lower()
    if text.startswith("lp:"):
        p = Fraction(text[3:])
        if p == 2:
            return NormSpec("euclid", dim)
        return NormSpec("lp", dim, p)
    aliases = {"euclid": "euclid", "euclidean": "euclid", "l2": "euclid", "sup": "sup", "linf": "sup", "max": "sup", "l1": "l1"}
    if text not in aliases:
        raise ValueError(f"unknown norm {text!r}; expected euclid, sup, l1 or lp:<p>")
    return NormSpec(aliases[text], dim)


def exact_power(spec: NormSpec) -> int:
    """k such that ||x||^k is a polynomial (or max) in the coordinates."""
    if spec.kind in ("sup", "l1"):
        return 1
    if spec.kind == "euclid":
        return 2
    p = spec.p
    if p.denominator == 1:
        return p.numerator
    raise UnsupportedExact(f"no exact comparison for L^{p}")


def _abs(x):
    return x if sign(x) >= 0 else -x


def norm_value(spec: NormSpec, x: Sequence, mode: str = "exact"):
    """Norm of ``x``.

    ``exact`` mode returns ||x||^k (k from :func:`exact_power`) as an exact
    value whose ordering matches the norm; ``numeric`` mode returns an
    :class:`Interval` enclosing ||x|| itself.
    """
    if len(x) != spec.dim:
        raise ValueError(f"expected {spec.dim} coordinates, got {len(x)}")
    x = [to_exact(c) for c in x]
    if mode == "exact":
        k = exact_power(spec)
        if spec.kind == "sup":
            best = Fraction(0)
            for c in x:
                a = _abs(c)
                if compare(a, best) > 0:
                    best = a
            return best
        if spec.kind == "l1":
            total = Fraction(0)
            for c in x:
                total = total + _abs(c)
            return total
        total = Fraction(0)
        for c in x:
            total = total + _abs(c) ** k
        return total
    if mode == "numeric":
        return _numeric_norm(spec, x, Fraction(1, 2**80))
    raise ValueError(f"unknown mode {mode!r}")


def _numeric_norm(spec: NormSpec, x, width: Fraction) -> Interval:
    ivs = [abs(refine(c, width)) for c in x]
    if spec.kind == "sup":
        return Interval(max(iv.lo for iv in ivs), max(iv.hi for iv in ivs))
    if spec.kind == "l1":
        return Interval(sum(iv.lo for iv in ivs), sum(iv.hi for iv in ivs))
    p = Fraction(2) if spec.kind == "euclid" else spec.p
    lo = _root_bound(sum(_pow_bound(iv.lo, p, down=True) for iv in ivs), p, down=True)
    hi = _root_bound(sum(_pow_bound(iv.hi, p, down=False) for iv in ivs), p, down=False)
    return Interval(lo, hi)


def _pow_bound(x: Fraction, p: Fraction, down: bool) -> Fraction:
    if x == 0:
        return Fraction(0)
    if p.denominator == 1:
        return x ** p.numerator
    # rational power: bracket through floats with a generous relative margin
    v = Fraction(float(x) ** float(p))
    return v * (1 - Fraction(1, 2**40)) if down else v * (1 + Fraction(1, 2**40))


def _root_bound(s: Fraction, p: Fraction, down: bool) -> Fraction:
    if s == 0:
        return Fraction(0)
    v = Fraction(float(s) ** (1 / float(p)))
    return v * (1 - Fraction(1, 2**40)) if down else v * (1 + Fraction(1, 2**40))


def _magnitude_cmp(spec: NormSpec, a, b) -> int:
    """Compare two difference vectors by norm."""
    try:
        exact_power(spec)
    except UnsupportedExact:
        width = Fraction(1, 2**60)
        while width > Fraction(1, 2**400):
            ia, ib = _numeric_norm(spec, a, width), _numeric_norm(spec, b, width)
            if ia.hi < ib.lo:
                return -1
            if ib.hi < ia.lo:
                return 1
            width /= 2**64
        raise PrecisionExhausted("L^p norms could not be separated")
    return compare(norm_value(spec, a), norm_value(spec, b))


def nearest_int_points(spec: NormSpec, y: Sequence):
    """(<y>, minimisers): distance from ``y`` to Z^d and every p attaining it.

    The distance is returned in exact-comparable form (||y - p||^k as in
    :func:`norm_value`).  Completeness: after the 2^d cell corners fix a
    radius r*, every p with ||p - y||_inf <= r*/c1 is examined.
    """
    if len(y) != spec.dim:
        raise ValueError(f"expected {spec.dim} coordinates, got {len(y)}")
    y = [to_exact(c) for c in y]
    floors = [_floor(c) for c in y]
    best = None
    for offs in itertools.product((0, 1), repeat=spec.dim):
        p = [f + o for f, o in zip(floors, offs)]
        diff = [c - pi for c, pi in zip(y, p)]
        if best is None or _magnitude_cmp(spec, diff, best) < 0:
            best = diff
    c1, _ = equivalence_constants(spec)
    radius = _numeric_norm(spec, best, Fraction(1, 2**40)).hi / Fraction(c1)
    ranges = []
    for c in y:
        iv = refine(c, Fraction(1, 2**40))
        ranges.append(range(math.ceil(iv.lo - radius), math.floor(iv.hi + radius) + 1))
    minimisers = []
    best_diff = None
    for p in itertools.product(*ranges):
        diff = [c - pi for c, pi in zip(y, p)]
        if best_diff is None:
            best_diff, minimisers = diff, [tuple(p)]
            continue
        s = _magnitude_cmp(spec, diff, best_diff)
        if s < 0:
            best_diff, minimisers = diff, [tuple(p)]
        elif s == 0:
            minimisers.append(tuple(p))
    try:
        dist = norm_value(spec, best_diff)
    except UnsupportedExact:
        dist = _numeric_norm(spec, best_diff, Fraction(1, 2**80))
    return dist, sorted(minimisers)


def _floor(c) -> int:
    if isinstance(c, Fraction):
        return math.floor(c)
    width = Fraction(1, 2**20)
    while True:
        iv = refine(c, width)
        lo, hi = math.floor(iv.lo), math.floor(iv.hi)
        if lo == hi:
            return lo
        # an integer lies inside the enclosure: decide exactly
        return hi if compare(c, hi) >= 0 else lo


def ball_volume(spec: NormSpec):
    """Lebesgue measure of the unit ball (exact Fraction for sup and l1)."""
    d = spec.dim
    if spec.kind == "sup":
        return Fraction(2**d)
    if spec.kind == "l1":
        return Fraction(2**d, math.factorial(d))
    if spec.kind == "euclid":
        return math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    p = float(spec.p)
    return (2 * math.gamma(1 + 1 / p)) ** d / math.gamma(1 + d / p)


def equivalence_constants(spec: NormSpec) -> tuple[float, float]:
    """(c1, c2) with c1 ||x||_inf <= ||x|| <= c2 ||x||_inf."""
    d = spec.dim
    if spec.kind == "sup":
        return (1, 1)
    if spec.kind == "l1":
        return (1, d)
    if spec.kind == "euclid":
        r = math.isqrt(d)
        return (1, r if r * r == d else math.sqrt(d))
    return (1, d ** (1 / float(spec.p)))


def int_magnitude(spec: NormSpec, r: Sequence[int]) -> int:
    """||r||^k for an integer vector (k = exact_power(spec))."""
    kind = spec.kind
    if kind == "sup":
        return max(abs(x) for x in r)
    if kind == "l1":
        return sum(abs(x) for x in r)
    if kind == "euclid":
        return sum(x * x for x in r)
    k = exact_power(spec)
    return sum(abs(x) ** k for x in r)
