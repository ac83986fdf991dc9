import itertools
import math
import random
from fractions import Fraction as F
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from dioflow.norms import parse_norm
from dioflow.stats import (
    DiscreteUniform,
    DoeblinLenstraAbs,
    DoeblinLenstraSigned,
    EmpiricalDistribution,
    LiftD1,
    UniformBallRadial,
    UniformTorus,
    cdf,
    cluster_count,
    congruence_expected,
    histogram,
    kl_expected,
    ks_statistic,
    primitive_class_count,
    radial_profile,
    tv_distance,
    verdict,
)

CONTINUOUS = [DoeblinLenstraAbs(), DoeblinLenstraSigned(), LiftD1(), UniformBallRadial(1), UniformBallRadial(2), UniformTorus()]


def test_cdf_examples():
    assert cdf(DoeblinLenstraAbs(), 0.5) == pytest.approx(1 / (2 * math.log(2)))
    assert round(cdf(DoeblinLenstraAbs(), 0.5), 5) == 0.72135
    assert cdf(DoeblinLenstraAbs(), 1) == 1
    assert cdf(LiftD1(), 0) == 0.5


@pytest.mark.parametrize("ref", CONTINUOUS, ids=repr)
def test_cdf_integrates_density(ref):
    lo, hi = ref.support
    grid = np.linspace(lo, hi, 1001)
    for a, b in zip(grid[::50], grid[50::50]):
        mass, _ = integrate.quad(ref.pdf, a, b, points=[x for x in (0.0, 0.5, -0.5) if a < x < b] or None)
        assert abs(mass - (ref.cdf(b) - ref.cdf(a))) < 1e-9
    assert ref.cdf(hi) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [10, 1000])
def test_ks_on_exact_quantiles(n):
    ref = UniformBallRadial(2)
    qs = [math.sqrt((i - 0.5) / n) for i in range(1, n + 1)]
    assert ks_statistic(EmpiricalDistribution.of(qs), ref) <= 1 / (2 * n) + 1e-12


def test_ks_all_zeros():
    assert ks_statistic([0.0] * 50, UniformBallRadial(1)) == pytest.approx(1.0)


def test_ks_uniform_draws_order():
    rng = random.Random(0)
    d = ks_statistic([rng.random() - 0.5 for _ in range(10**4)], UniformTorus())
    assert 1e-3 < d < 2e-2


def test_ks_monotone_reparametrisation():
    rng = random.Random(1)
    xs = [rng.random() for _ in range(2000)]

    class Cubed(UniformTorus):
        def cdf(self, t):
            return super().cdf(math.copysign(abs(t) ** (1 / 3), t))

    a = ks_statistic(xs, UniformTorus(0.0))
    b = ks_statistic([x**3 for x in xs], Cubed(0.0))
    assert a == pytest.approx(b, abs=1e-12)


def test_ks_rejects_discrete_reference():
    with pytest.raises(ValueError):
        ks_statistic([1, 2], DiscreteUniform([1, 2]))


def test_congruence_examples():
    assert congruence_expected(2, 2) == F(1, 3)
    assert congruence_expected(2, 4) == F(1, 12)
    assert congruence_expected(3, 6) == F(1, 182)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_class_count_by_exhaustion(n):
    for m in range(2, 13 if n < 4 else 7):
        count = sum(1 for c in itertools.product(range(m), repeat=n) if gcd(m, *c) == 1)
        assert primitive_class_count(n, m) == count


def test_kl_examples():
    assert kl_expected(2, parse_norm("sup", 1), F(1, 2)) == pytest.approx(math.pi**2 / 6)
    assert round(kl_expected(3, parse_norm("euclid", 2), F(1, 2)), 5) == 1.53051
    assert round(kl_expected(3, parse_norm("sup", 2), 1), 6) == 0.300514
    with pytest.raises(ValueError):
        kl_expected(3, parse_norm("sup", 1), 1)


def test_cluster_examples():
    assert cluster_count([1.0, 1.0 + 1e-9, 2.0], 1e-6) == 2
    rng = random.Random(2)
    assert cluster_count([rng.random() for _ in range(1000)], 1e-6) >= 995


def test_radial_profile_controls():
    rng = np.random.default_rng(3)
    spec = parse_norm("euclid", 2)
    r = np.sqrt(rng.random(40000))
    a = rng.random(40000) * 2 * math.pi
    disk = np.column_stack([r * np.cos(a), r * np.sin(a)])
    assert radial_profile(disk, spec, radius=1.0).verdict
    r = 0.8 + 0.2 * rng.random(40000)
    ring = np.column_stack([r * np.cos(a), r * np.sin(a)])
    prof = radial_profile(ring, spec, radius=1.0)
    assert not prof.verdict and prof.fraction == 0.0


def test_tv_and_verdict():
    assert tv_distance({1: 0.5, 2: 0.5}, {1: 0.25, 2: 0.25, 3: 0.5}) == pytest.approx(0.5)
    assert verdict("x", 10, 0.1, 0.2)["pass"]
    assert not verdict("x", 10, 0.1, 0.2, upper=False)["pass"]


def test_empirical_distribution():
    e = EmpiricalDistribution.of([3, 1, 2, 2])
    assert e.count == 4 and e.cdf(2) == 0.75 and e.mean() == 2.0
    assert e.frequencies()[2] == 0.5
    with pytest.raises(ValueError):
        EmpiricalDistribution([2, 1], sorted=True)


def test_histogram_counts():
    rows = histogram([0.1, 0.2, 0.9], bins=2, lo=0.0, hi=1.0)
    assert [c for _, _, c in rows] == [2, 1]


@settings(max_examples=40, deadline=None)
@given(st.floats(-1, 1))
def test_signed_law_is_symmetric(t):
    ref = DoeblinLenstraSigned()
    assert ref.cdf(t) + ref.cdf(-t) == pytest.approx(1.0)
