"""Empirical distributions, the closed-form reference laws and simple verdicts.

KS statistics here are engineering gates: samples drawn along one orbit are
dependent, so the gates are fixed numbers rather than p-values.
"""

from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np
import sympy
from scipy import stats as _sps

from .norms import NormSpec, ball_volume

__all__ = [
    "EmpiricalDistribution",
    "ReferenceDistribution",
    "DoeblinLenstraAbs",
    "DoeblinLenstraSigned",
    "LiftD1",
    "UniformBallRadial",
    "UniformTorus",
    "DiscreteUniform",
    "cdf",
    "ks_statistic",
    "congruence_expected",
    "primitive_class_count",
    "kl_expected",
    "cluster_count",
    "clusters",
    "radial_profile",
    "RadialProfile",
    "tv_distance",
    "verdict",
    "histogram",
]

LOG2 = math.log(2.0)


@dataclass
class EmpiricalDistribution:
    samples: list
    sorted: bool = False

    def __post_init__(self):
        if len(self.samples) < 1:
            raise ValueError("need at least one sample")
        if self.sorted and any(a > b for a, b in zip(self.samples, self.samples[1:])):
            raise ValueError("samples flagged sorted are not ascending")

    @classmethod
    def of(cls, samples: Iterable) -> "EmpiricalDistribution":
        return cls(sorted(samples), True)

    @property
    def count(self) -> int:
        return len(self.samples)

    def ordered(self) -> list:
        return self.samples if self.sorted else sorted(self.samples)

    def cdf(self, t) -> float:
        return bisect.bisect_right(self.ordered(), t) / self.count

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def frequencies(self) -> dict:
        n = self.count
        return {k: c / n for k, c in Counter(self.samples).items()}


# ---------------------------------------------------------------------------
# reference laws


class ReferenceDistribution:
    """Base class; subclasses supply pdf and cdf."""

    kind = "abstract"
    support = (-math.inf, math.inf)
    continuous = True

    def pdf(self, t: float) -> float:
        raise NotImplementedError

    def cdf(self, t: float) -> float:
        raise NotImplementedError

    def cdf_array(self, ts) -> np.ndarray:
        return np.array([self.cdf(float(t)) for t in ts])

    def __repr__(self):
        return f"{type(self).__name__}()"


class DoeblinLenstraAbs(ReferenceDistribution):
    """|q(q theta - p)| over best approximations, d = 1."""

    kind = "DoeblinLenstraAbs"
    support = (0.0, 1.0)

    def pdf(self, t):
        if t < 0 or t > 1:
            return 0.0
        return 1 / LOG2 if t <= 0.5 else (1 / t - 1) / LOG2

    def cdf(self, t):
        if t <= 0:
            return 0.0
        if t >= 1:
            return 1.0
        if t <= 0.5:
            return t / LOG2
        return (0.5 + math.log(2 * t) - (t - 0.5)) / LOG2


class DoeblinLenstraSigned(ReferenceDistribution):
    """Signed version: density F(|t|)/2 on [-1, 1]."""

    kind = "DoeblinLenstraSigned"
    support = (-1.0, 1.0)
    _abs = DoeblinLenstraAbs()

    def pdf(self, t):
        return self._abs.pdf(abs(t)) / 2

    def cdf(self, t):
        half = self._abs.cdf(abs(t)) / 2
        return 0.5 + half if t >= 0 else 0.5 - half


class LiftD1(ReferenceDistribution):
    """Torus coordinate of the lift along best approximations, d = 1."""

    kind = "LiftD1"
    support = (-0.5, 0.5)

    def pdf(self, t):
        a = abs(t)
        if a > 0.5:
            return 0.0
        return (1 / (2 - a) + 1 / (1 + a)) / (2 * LOG2)

    def cdf(self, t):
        if t <= -0.5:
            return 0.0
        if t >= 0.5:
            return 1.0
        a = abs(t)
        half = math.log(2 * (1 + a) / (2 - a)) / (2 * LOG2)
        return 0.5 + half if t >= 0 else 0.5 - half


class UniformBallRadial(ReferenceDistribution):
    """Law of ||x|| / eps for x uniform in the eps-ball of R^d: cdf r^d."""

    kind = "UniformBallRadial"
    support = (0.0, 1.0)

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("d must be positive")
        self.d = d

    def pdf(self, t):
        return self.d * t ** (self.d - 1) if 0 <= t <= 1 else 0.0

    def cdf(self, t):
        return min(1.0, max(0.0, t)) ** self.d

    def __repr__(self):
        return f"UniformBallRadial({self.d})"


class UniformTorus(ReferenceDistribution):
    """Uniform on [lo, lo + 1), by default the centred circle [-1/2, 1/2)."""

    kind = "UniformTorus"

    def __init__(self, lo: float = -0.5):
        self.lo = lo
        self.support = (lo, lo + 1.0)

    def pdf(self, t):
        return 1.0 if self.lo <= t < self.lo + 1 else 0.0

    def cdf(self, t):
        return min(1.0, max(0.0, t - self.lo))


class DiscreteUniform(ReferenceDistribution):
    """Uniform over a finite set of labels (e.g. primitive residue classes)."""

    kind = "DiscreteUniform"
    continuous = False

    def __init__(self, labels: Sequence):
        if not labels:
            raise ValueError("need at least one label")
        self.labels = list(labels)
        self.N = len(self.labels)

    def pmf(self, label) -> Fraction:
        return Fraction(1, self.N) if label in set(self.labels) else Fraction(0)

    def expected(self) -> dict:
        return {k: 1 / self.N for k in self.labels}

    def __repr__(self):
        return f"DiscreteUniform(N={self.N})"


def cdf(ref: ReferenceDistribution, t: float) -> float:
    return ref.cdf(t)


# ---------------------------------------------------------------------------
# statistics


def ks_statistic(emp, ref: ReferenceDistribution) -> float:
    """Two-sided Kolmogorov-Smirnov distance sup |F_N - F|."""
    if not ref.continuous:
        raise ValueError("KS needs a continuous reference; use tv_distance")
    xs = emp.samples if isinstance(emp, EmpiricalDistribution) else list(emp)
    if len(xs) < 1:
        raise ValueError("need at least one sample")
    res = _sps.kstest(np.asarray(xs, dtype=float), ref.cdf_array, method="asymp")
    return float(res.statistic)


def tv_distance(observed: dict, expected: dict) -> float:
    """Total variation between two probability tables keyed by label."""
    keys = set(observed) | set(expected)
    return 0.5 * sum(abs(observed.get(k, 0.0) - expected.get(k, 0.0)) for k in keys)


def primitive_class_count(n: int, m: int) -> int:
    """Number of primitive classes in (Z/mZ)^n, via the prime factorisation of m."""
    if m < 2:
        raise ValueError("m must be at least 2")
    out = 1
    for p, r in sympy.factorint(m).items():
        out *= p ** (n * r) - p ** (n * (r - 1))
    return out


def congruence_expected(n: int, m: int) -> Fraction:
    """Limiting frequency of each primitive class mod m."""
    return Fraction(1, primitive_class_count(n, m))


def kl_expected(n: int, spec: NormSpec, eps) -> float:
    """zeta(n) / (V eps^d): mean of log(q_{k+1}/q_k) over eps-approximations."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if spec.dim != n - 1:
        raise ValueError("norm dimension must be n - 1")
    with mpmath.workdps(30):
        z = mpmath.zeta(n)
        return float(z / (mpmath.mpf(float(ball_volume(spec))) * mpmath.mpf(eps.numerator) ** spec.dim / mpmath.mpf(eps.denominator) ** spec.dim))


def clusters(samples: Iterable[float], width: float) -> list[list[float]]:
    """Single-linkage clusters: neighbours closer than ``width`` are joined."""
    if width <= 0:
        raise ValueError("width must be positive")
    xs = sorted(samples)
    out: list[list[float]] = []
    for x in xs:
        if out and x - out[-1][-1] <= width:
            out[-1].append(x)
        else:
            out.append([x])
    return out


def cluster_count(samples: Iterable[float], width: float) -> int:
    return len(clusters(samples, width))


def _float_norms(spec: NormSpec, x: np.ndarray) -> np.ndarray:
    a = np.abs(x)
    if spec.kind == "sup":
        return a.max(axis=1)
    if spec.kind == "l1":
        return a.sum(axis=1)
    p = 2.0 if spec.kind == "euclid" else float(spec.p)
    return (a**p).sum(axis=1) ** (1 / p)


@dataclass
class RadialProfile:
    counts: np.ndarray  # sectors x rings
    densities: np.ndarray
    sector_pass: list
    fraction: float
    verdict: bool
    radius: float = 0.0
    edges: list = field(default_factory=list)


def radial_profile(disps, spec: NormSpec, sectors: int = 16, rings: int = 8, *, radius: float | None = None, z: float = 3.0, need: float = 0.9) -> RadialProfile:
    """Per-sector radial histograms of planar samples and a monotonicity verdict.

    A sector passes when no ring's density exceeds the running minimum of
    the inner rings by more than ``z`` standard errors (Poisson counts).
    The verdict passes when at least ``need`` of the sectors pass.
    """
    if spec.dim != 2:
        raise ValueError("sector analysis needs d = 2")
    x = np.asarray([[float(a) for a in v] for v in disps])
    if x.ndim != 2 or x.shape[1] != 2:
        raise ValueError("expected planar samples")
    r = _float_norms(spec, x)
    R = float(radius) if radius is not None else float(r.max())
    ang = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2 * math.pi)
    si = np.minimum((ang / (2 * math.pi) * sectors).astype(int), sectors - 1)
    ri = np.minimum((r / R * rings).astype(int), rings - 1)
    counts = np.zeros((sectors, rings), dtype=int)
    np.add.at(counts, (si, ri), 1)
    edges = np.linspace(0.0, 1.0, rings + 1)
    area = edges[1:] ** 2 - edges[:-1] ** 2  # ring area in units of the sector
    dens = counts / area
    sector_pass = []
    for s in range(sectors):
        ok = True
        best = math.inf  # smallest density seen so far, with its variance
        best_var = 0.0
        for k in range(rings):
            d, var = dens[s, k], counts[s, k] / area[k] ** 2
            if d > best and (d - best) > z * math.sqrt(var + best_var + 1e-300):
                ok = False
                break
            if d < best:
                best, best_var = d, var
        sector_pass.append(ok)
    frac = sum(sector_pass) / sectors
    return RadialProfile(counts, dens, sector_pass, frac, frac >= need, R, list(edges))


def verdict(law: str, N: int, statistic: float, gate: float, *, upper: bool = True) -> dict:
    """JSON-ready record; passes when statistic <= gate (or >= gate if upper is False)."""
    ok = statistic <= gate if upper else statistic >= gate
    return {"law": law, "N": int(N), "statistic": float(statistic), "gate": float(gate), "pass": bool(ok)}


def histogram(samples: Sequence[float], bins: int = 50, lo: float | None = None, hi: float | None = None) -> list[tuple[float, float, int]]:
    """Rows (left, right, count) for plotting."""
    xs = np.asarray(samples, dtype=float)
    lo = float(xs.min()) if lo is None else lo
    hi = float(xs.max()) if hi is None else hi
    counts, edges = np.histogram(xs, bins=bins, range=(lo, hi))
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)]
