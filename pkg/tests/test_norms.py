import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioflow.norms import ball_volume, equivalence_constants, nearest_int_points, norm_value, parse_norm


def test_norm_values():
    assert norm_value(parse_norm("sup", 2), [F(3, 4), F(-1, 2)]) == F(3, 4)
    assert norm_value(parse_norm("euclid", 2), [3, 4]) == 25
    assert norm_value(parse_norm("l1", 2), [F(1, 3), F(1, 6)]) == F(1, 2)


def test_numeric_mode_encloses_value():
    iv = norm_value(parse_norm("euclid", 2), [3, 4], mode="numeric")
    assert iv.contains(5)


def test_nearest_examples():
    assert nearest_int_points(parse_norm("sup", 1), [F(3, 10)]) == (F(3, 10), [(0,)])
    dist, pts = nearest_int_points(parse_norm("euclid", 2), [F(1, 2), F(1, 2)])
    assert dist == F(1, 2)
    assert sorted(pts) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_nearest_l1_against_box_scan():
    spec = parse_norm("l1", 2)
    y = [F(2, 5), F(7, 10)]
    dist, pts = nearest_int_points(spec, y)
    scan = {p: norm_value(spec, [c - x for c, x in zip(y, p)]) for p in itertools.product(range(-2, 3), repeat=2)}
    m = min(scan.values())
    assert dist == m == F(7, 10)
    assert sorted(pts) == sorted(p for p, v in scan.items() if v == m)


def test_ball_volumes():
    assert ball_volume(parse_norm("sup", 2)) == 4
    assert math.isclose(float(ball_volume(parse_norm("euclid", 2))), math.pi)
    assert ball_volume(parse_norm("l1", 3)) == F(4, 3)


def test_equivalence_constants():
    assert tuple(equivalence_constants(parse_norm("sup", 5))) == (1, 1)
    assert tuple(equivalence_constants(parse_norm("euclid", 4))) == (1, 2)
    assert tuple(equivalence_constants(parse_norm("l1", 2))) == (1, 2)


def test_bad_norm_name():
    with pytest.raises(ValueError):
        parse_norm("manhattan", 2)


coord = st.fractions(min_value=-5, max_value=5, max_denominator=60)
norm_names = st.sampled_from(["sup", "euclid", "l1", "lp:3"])


@settings(max_examples=80, deadline=None)
@given(norm_names, st.lists(coord, min_size=2, max_size=2), st.integers(-3, 3), st.integers(-3, 3))
def test_nearest_invariances(name, y, a, b):
    spec = parse_norm(name, 2)
    d0, _ = nearest_int_points(spec, y)
    assert nearest_int_points(spec, [y[0] + a, y[1] + b])[0] == d0
    assert nearest_int_points(spec, [-y[1], y[0]])[0] == d0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sup", "euclid", "l1"]), st.lists(coord, min_size=2, max_size=2))
def test_nearest_matches_box_scan(name, y):
    spec = parse_norm(name, 2)
    c1, c2 = equivalence_constants(spec)
    k = math.ceil(c2 / c1) + 1
    r = [round(c) for c in y]
    best = min(
        norm_value(spec, [c - (ri + o) for c, ri, o in zip(y, r, off)])
        for off in itertools.product(range(-k, k + 1), repeat=2)
    )
    assert nearest_int_points(spec, y)[0] == best


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sup", "euclid", "l1"]), st.lists(coord, min_size=3, max_size=3), st.lists(coord, min_size=3, max_size=3), st.fractions(0, 4, max_denominator=9))
def test_homogeneity_and_triangle(name, x, y, lam):
    spec = parse_norm(name, 3)
    k = 2 if name == "euclid" else 1
    nx = norm_value(spec, x)
    assert norm_value(spec, [lam * c for c in x]) == lam**k * nx
    nxy = float(norm_value(spec, [a + b for a, b in zip(x, y)])) ** (1 / k)
    assert nxy <= float(nx) ** (1 / k) + float(norm_value(spec, y)) ** (1 / k) + 1e-12
