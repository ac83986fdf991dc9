import itertools
from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from dioflow.approx import (
    ApproxVector,
    best_approximations,
    displacement,
    eps_approximations,
    is_best,
    is_eps,
    make_target,
    min_displacement,
)
from dioflow.exactnum import AlgebraicReal
from dioflow.norms import nearest_int_points, norm_value, parse_norm

SUP1 = parse_norm("sup", 1)
GOLDEN = AlgebraicReal([-1, 1, 1], 0, 1)  # (sqrt 5 - 1)/2


def av(p, q):
    return ApproxVector.of(tuple(p), q)


def test_best_of_three_tenths():
    seq = best_approximations(make_target([F(3, 10)]), SUP1, 20)
    assert seq.keys() == [(1, (0,)), (3, (1,)), (10, (3,))]
    assert seq.terminated


def test_best_of_golden_ratio_is_fibonacci():
    seq = best_approximations(make_target([GOLDEN]), SUP1, 10)
    assert [(v.p[0], v.q) for v in seq] == [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]
    assert not seq.terminated


def test_best_of_zero_vector():
    seq = best_approximations(make_target([0, 0]), parse_norm("sup", 2), 50)
    assert seq.keys() == [(1, (0, 0))]
    assert seq.terminated


def test_eps_examples():
    assert eps_approximations(make_target([F(1, 2)]), SUP1, F(1, 2), 4).keys() == [(1, (0,)), (1, (1,)), (2, (1,))]
    assert eps_approximations(make_target([GOLDEN]), SUP1, F(45, 100), 2).keys() == [(1, (1,))]


@pytest.mark.parametrize("x,eps", [(F(3, 10), F(3, 10)), (F(3, 10), F(29, 100)), (F(7, 10), F(1, 4))])
def test_eps_q_one(x, eps):
    got = eps_approximations(make_target([x]), SUP1, eps, 1).keys()
    assert bool(got) == (min(x, 1 - x) <= eps)


def test_displacement_examples():
    assert displacement(make_target([F(1, 2)]), av((1,), 2)).residual == (0,)
    assert displacement(make_target([0, 0]), av((1, 1), 1)).floats() == [1.0, 1.0]
    dsp = displacement(make_target([F(3, 10)]), av((1,), 3))
    assert dsp.exact_norm_power(SUP1) == (F(3, 10), 1)
    assert dsp.vector[0].contains(F(3, 10))


def test_is_best_examples():
    th = make_target([F(3, 10)])
    assert is_best(th, SUP1, av((1,), 3))
    assert not is_best(th, SUP1, av((1,), 4))
    assert is_best(th, SUP1, av((0,), 1))


def test_ties_are_exposed():
    seq = best_approximations(make_target([F(1, 2)]), SUP1, 4)
    first = seq.entries[0]
    assert first.q == 1 and first.tie and first.p == (0,)
    assert set(first.ties) >= {(0,), (1,)}


dyadic = st.integers(1, 2**30 - 1).map(lambda n: F(n, 2**30))
norms = st.sampled_from(["sup", "euclid"])


def _target(coords):
    return make_target(coords)


@settings(max_examples=25, deadline=None)
@given(st.lists(dyadic, min_size=1, max_size=3), norms)
def test_best_sequence_properties(coords, name):
    spec = parse_norm(name, len(coords))
    th = _target(coords)
    seq = best_approximations(th, spec, 3000)
    qs = [v.q for v in seq]
    dists = [norm_value(spec, th.residual(v.q, v.p)) for v in seq]
    assert all(v.primitive and gcd(*v.p, v.q) == 1 for v in seq)
    assert all(a < b for a, b in zip(qs, qs[1:]))
    assert all(a > b for a, b in zip(dists, dists[1:]))


@settings(max_examples=10, deadline=None)
@given(st.lists(dyadic, min_size=1, max_size=2), norms)
def test_best_sequence_is_exhaustive(coords, name):
    spec = parse_norm(name, len(coords))
    th = _target(coords)
    q_max = 150
    keys = set(best_approximations(th, spec, q_max).keys())
    for q in range(1, q_max + 1):
        for p in nearest_int_points(spec, [q * c for c in coords])[1]:
            if (q, tuple(p)) in keys:
                assert is_best(th, spec, av(p, q))
            elif not any(k[0] == q for k in keys):
                assert not is_best(th, spec, av(p, q))


@settings(max_examples=15, deadline=None)
@given(st.lists(dyadic, min_size=2, max_size=2), norms, st.permutations([0, 1]), st.tuples(st.booleans(), st.booleans()))
def test_signed_permutation_symmetry(coords, name, perm, flips):
    spec = parse_norm(name, 2)

    def R(x):
        return tuple((-1 if flips[i] else 1) * x[perm[i]] for i in range(2))

    a = best_approximations(_target(coords), spec, 2000)
    b = best_approximations(_target(list(R(coords))), spec, 2000)
    assert {(v.q, R(v.p)) for v in a if not v.tie} == {(v.q, v.p) for v in b if not v.tie}


@settings(max_examples=15, deadline=None)
@given(st.lists(dyadic, min_size=1, max_size=2), st.fractions(F(1, 10), F(1), max_denominator=20), st.fractions(0, F(1, 2), max_denominator=20))
def test_eps_superset(coords, eps, extra):
    spec = parse_norm("sup", len(coords))
    th = _target(coords)
    small = set(eps_approximations(th, spec, eps, 2000).keys())
    big = set(eps_approximations(th, spec, eps + extra, 2000).keys())
    assert small <= big
    for q, p in list(small)[:20]:
        assert is_eps(th, spec, eps, av(p, q))


@settings(max_examples=15, deadline=None)
@given(dyadic)
def test_continued_fractions_match_scan(x):
    th = _target([x])
    assert best_approximations(th, SUP1, 10**4, method="cf").keys() == best_approximations(th, SUP1, 10**4, method="scan").keys()
    eps = F(1, 2)
    assert eps_approximations(th, SUP1, eps, 10**4, method="cf").keys() == eps_approximations(th, SUP1, eps, 10**4, method="scan").keys()


def test_deterministic_across_workers():
    th = _target([F(123456789, 2**30), F(987654321, 2**30)])
    spec = parse_norm("euclid", 2)
    one = best_approximations(th, spec, 2 * 10**5, method="scan", workers=1)
    many = best_approximations(th, spec, 2 * 10**5, method="scan", workers=4)
    assert one.entries == many.entries
    e1 = eps_approximations(th, spec, F(1), 2 * 10**5, method="scan", workers=1)
    e4 = eps_approximations(th, spec, F(1), 2 * 10**5, method="scan", workers=4)
    assert e1.entries == e4.entries


def test_min_displacement_matches_brute_force():
    th = _target([F(1234567, 2**24), F(7654321, 2**24)])
    spec = parse_norm("sup", 2)
    val, (q, p) = min_displacement(th, spec, 1, 500)
    brute = min(
        (float(displacement(th, av(pp, qq)).norm(spec).mid), qq)
        for qq in range(1, 501)
        for pp in nearest_int_points(spec, [qq * c for c in th.coords])[1]
    )
    assert q == brute[1] and abs(val - brute[0]) < 1e-12
