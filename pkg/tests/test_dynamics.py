import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioflow.approx import ApproxVector, best_approximations, eps_approximations, make_target
from dioflow.dynamics import (
    CrossSectionGeometry,
    EpsilonExceedsR0,
    Mismatch,
    OutOfChart,
    d1_coordinates,
    d1_enumerate,
    default_r0,
    gaps,
    in_B,
    prefix_equivalence_check,
    subset_filter,
    visits,
)
from dioflow.exactnum import AlgebraicReal
from dioflow.norms import parse_norm

SUP1 = parse_norm("sup", 1)
TENTHS = make_target([F(3, 10)])


@pytest.fixture(scope="module")
def geom1():
    return CrossSectionGeometry.default(SUP1)


@pytest.fixture(scope="module")
def tenths_events(geom1):
    return visits(TENTHS, geom1, 20)


def test_default_r0():
    assert default_r0(SUP1, 2) == 1
    assert default_r0(parse_norm("sup", 2), 3) == 1
    assert default_r0(parse_norm("euclid", 2), 3) == F(1129, 1000)
    assert default_r0(SUP1, 2, eps=F(3, 2)) == F(3, 2)


def test_r0_satisfies_minkowski_condition():
    for name in ("sup", "euclid", "l1"):
        for d in (1, 2, 3):
            spec = parse_norm(name, d)
            r0 = default_r0(spec, d + 1)
            from dioflow.norms import ball_volume

            assert 2 * float(ball_volume(spec)) * float(r0) ** d >= 2 ** (d + 1) - 1e-12


def test_visits_of_three_tenths(tenths_events):
    for e in tenths_events:
        assert e.q * abs(e.q * F(3, 10) - e.p[0]) <= 1
        assert math.isclose(e.t, math.log(e.q))
    first = tenths_events[0]
    assert (first.q, first.p, first.t) == (1, (0,), 0.0)
    assert math.isclose(abs(first.disp[0]), 0.3)


def test_visits_of_zero_vector():
    evs = visits(make_target([0, 0]), CrossSectionGeometry.default(parse_norm("sup", 2)), 100)
    assert {e.q for e in evs} == {1}
    assert [e.p for e in evs if e.in_B] == [(0, 0)]


def test_in_B_examples(geom1):
    assert in_B(TENTHS, ApproxVector.of((1,), 3), geom1)
    assert in_B(TENTHS, ApproxVector.of((0,), 1), geom1)
    assert not in_B(TENTHS, ApproxVector.of((1,), 4), geom1)


def test_filters(tenths_events, geom1):
    assert [e.q for e in subset_filter(tenths_events, "b", geom=geom1)] == [1, 3, 10]
    half = {e.key() for e in subset_filter(tenths_events, "eps", F(1, 2), geom1)}
    full = {e.key() for e in subset_filter(tenths_events, "eps", F(1), geom1)}
    assert half <= full
    sharp = subset_filter(tenths_events, "sharp", geom=geom1)
    assert all(e.in_sharp for e in sharp) and all(e.q > 1 for e in sharp)
    with pytest.raises(EpsilonExceedsR0):
        subset_filter(tenths_events, "eps", F(2), geom1)


def test_prefix_equivalence(tenths_events, geom1):
    best = best_approximations(TENTHS, SUP1, 20).entries
    b = subset_filter(tenths_events, "b", geom=geom1)
    al = prefix_equivalence_check(b, best)
    assert (al.k0, al.l0, al.common) == (0, 0, 3)
    assert isinstance(prefix_equivalence_check(b[:1], best), Mismatch)


def test_golden_ratio_prefix_is_empty():
    th = make_target([AlgebraicReal([-1, 1, 1], 0, 1)])
    geom = CrossSectionGeometry.default(SUP1)
    evs = visits(th, geom, 10**4)
    al = prefix_equivalence_check(subset_filter(evs, "b", geom=geom), best_approximations(th, SUP1, 10**4).entries)
    assert (al.k0, al.l0) == (0, 0)


def test_gaps(tenths_events, geom1):
    g = gaps(subset_filter(tenths_events, "b", geom=geom1))
    assert g == pytest.approx([math.log(3), math.log(10 / 3)])
    assert gaps(tenths_events[:1]) == []


def test_d1_chart_examples():
    r = d1_coordinates(F(3, 10), F(1, 2))
    assert (r.f1, r.f2, r.in_B) == (F(-2, 3), F(2, 3), True)
    assert not d1_coordinates(F(8, 10), F(1, 2)).in_B
    assert d1_coordinates(F(0), F(1, 3)).in_B
    with pytest.raises(OutOfChart):
        d1_coordinates(F(3, 2), F(0))


def test_d1_chart_matches_enumeration():
    rng = random.Random(4)
    for _ in range(300):
        x = F(rng.randint(-999, 999), 1000)
        y = F(rng.randint(0, 999), 1000)
        rep = d1_coordinates(x, y)
        assert (rep.in_sharp, rep.in_B) == d1_enumerate(x, y)


dyadic = st.integers(1, 2**24 - 1).map(lambda n: F(n, 2**24))


@settings(max_examples=20, deadline=None)
@given(st.lists(dyadic, min_size=1, max_size=3), st.sampled_from(["sup", "euclid"]))
def test_oracle_equivalence(coords, name):
    th = make_target(coords)
    spec = parse_norm(name, len(coords))
    eps = F(1, 2)
    geom = CrossSectionGeometry.default(spec, eps)
    q_max = 3000
    evs = visits(th, geom, q_max)
    for which, ref in (
        ("b", best_approximations(th, spec, q_max, method="scan")),
        ("eps", eps_approximations(th, spec, eps, q_max, method="scan")),
    ):
        al = prefix_equivalence_check(subset_filter(evs, which, eps, geom), ref.entries)
        assert not isinstance(al, Mismatch)
        assert al.l0 == 0


@settings(max_examples=15, deadline=None)
@given(st.lists(dyadic, min_size=1, max_size=2))
def test_visit_time_identity(coords):
    th = make_target(coords)
    d = len(coords)
    evs = visits(th, CrossSectionGeometry.default(parse_norm("sup", d)), 5000)
    for e in evs:
        assert e.t == pytest.approx(math.log(e.q) / d, abs=1e-12)


def test_flow_matches_scan_enumeration():
    th = make_target([F(123457, 2**20), F(654321, 2**20)])
    geom = CrossSectionGeometry.default(parse_norm("euclid", 2))
    a = visits(th, geom, 5000, method="flow")
    b = visits(th, geom, 5000, method="scan")
    assert [(e.key(), e.in_sharp, e.in_B) for e in a] == [(e.key(), e.in_sharp, e.in_B) for e in b]


def test_non_sharp_events_stop():
    th = make_target([F(987654321, 2**32), F(123456789, 2**32)])
    geom = CrossSectionGeometry.default(parse_norm("sup", 2))
    counts = [sum(not e.in_sharp for e in visits(th, geom, 2**k)) for k in (10, 12, 14)]
    assert counts[0] == counts[1] == counts[2]
