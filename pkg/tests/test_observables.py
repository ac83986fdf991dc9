import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dioflow.experiments import _ball_points, _lattice_points
from dioflow.observables import (
    NotCoprime,
    NotPrimitive,
    ProjectedLattice,
    ZeroVertical,
    alternate_completion,
    lift_coordinate_d1,
    lift_functional,
    primitive_mod_by_definition,
    project_lattice,
    reconstruct,
    residues,
    rho_En,
    shape_invariants,
    shortest_gcd_lift,
    torus_coordinate_d1,
)

HEX_SYS = (2 / math.sqrt(3)) ** 0.5


def random_primitive(rng, n, size=60):
    while True:
        v = tuple(rng.randint(-size, size) for _ in range(n - 1)) + (rng.randint(1, size),)
        if math.gcd(*v) == 1:
            return v


def test_projection_along_last_axis():
    for n in (2, 3, 4):
        e = (0,) * (n - 1) + (1,)
        lat = project_lattice(e)
        assert lat.gram() == [[float(i == j) for j in range(n - 1)] for i in range(n - 1)]
        assert lat.covolume_exact() == 1
        assert lift_functional(e).coords == (0,) * (n - 1)


def test_projection_of_one_one():
    lat = project_lattice((1, 1))
    assert lat.gram() == [[1.0]]
    assert torus_coordinate_d1(lift_functional((1, 1))) == 0


def test_projection_errors():
    with pytest.raises(NotPrimitive):
        project_lattice((2, 4))
    with pytest.raises(ZeroVertical):
        project_lattice((1, 0))
    with pytest.raises(NotCoprime):
        shortest_gcd_lift(2, 4)


def test_shortest_gcd_lift_examples():
    assert shortest_gcd_lift(1, 2) == (0, 1, F(2, 5))
    assert shortest_gcd_lift(0, 1) == (-1, 0, F(0))
    assert shortest_gcd_lift(1, 1) == (0, 1, F(-1, 2))


def test_shortest_gcd_lift_is_shortest():
    for q in range(1, 40):
        for p in range(-40, 41):
            if math.gcd(p, q) != 1:
                continue
            u, v, f = shortest_gcd_lift(p, q)
            assert p * v - q * u == 1
            best = min((u + t * p) ** 2 + (v + t * q) ** 2 for t in range(-50, 51))
            assert u * u + v * v == best
            assert F(-1, 2) <= f < F(1, 2)


def test_lift_and_gcd_lift_relation():
    # the two torus coordinates differ by p / (q (p^2 + q^2)) modulo 1
    for q in range(1, 201):
        for p in range(q + 1):
            if math.gcd(p, q) != 1:
                continue
            h = torus_coordinate_d1(lift_functional((p, q)))
            f = shortest_gcd_lift(p, q)[2]
            assert (f + h + F(p, q * (p * p + q * q))).denominator == 1
            assert h == lift_coordinate_d1(p, q)


def test_lift_of_one_two():
    assert torus_coordinate_d1(lift_functional((1, 2))) == F(-1, 2)
    assert torus_coordinate_d1(rho_En((1, 2))) == F(-1, 2)


def test_reconstruct_examples():
    assert reconstruct(project_lattice((0, 0, 1)), lift_functional((0, 0, 1)), (0, 0, 1)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rows = reconstruct(project_lattice((0, 1)), [F(1, 2)], (0, 1))
    assert rows == [[1, F(1, 2)], [0, 1]]
    v = (1, 3, 2)
    rows = reconstruct(project_lattice(v), lift_functional(v), v)
    assert abs(_det3(rows)) == 1 and all(x.denominator == 1 for r in rows for x in r)


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def test_reconstruct_round_trip_in_ball():
    rng = random.Random(11)
    for n in (2, 3):
        ball = _ball_points(n, 100)
        for _ in range(10):
            v = random_primitive(rng, n)
            rows = reconstruct(project_lattice(v), lift_functional(v), v)
            assert _lattice_points(rows, 100) == ball


def test_well_defined_under_completion_change():
    rng = random.Random(5)
    for k in range(50):
        v = random_primitive(rng, 2 + k % 3)
        other = alternate_completion(v, seed=k)
        a, b = lift_functional(v), lift_functional(v, completion=other)
        assert a.same_class(b)
        assert project_lattice(v).gram() == project_lattice(v, completion=other).gram()


def test_diagram_commutes():
    rng = random.Random(3)
    for k in range(30):
        v = random_primitive(rng, 2 + k % 3)
        assert rho_En(v).lattice.same_lattice(project_lattice(v))


def test_unit_covolume():
    rng = random.Random(2)
    for k in range(40):
        v = random_primitive(rng, 2 + k % 3, size=10**6)
        assert project_lattice(v).covolume_exact() == 1


def test_residue_examples():
    r = residues((1, 2), [2])
    assert r.residues == ((1, 0),) and r.primitive_mod_m == (True,)
    r = residues((2, 4), [3, 2])
    assert r.residues == ((2, 1), (0, 0))
    assert r.primitive_mod_m == (True, False)


def test_primitive_mod_m_matches_definition():
    for m in range(2, 13):
        for a in itertools.product(range(m), repeat=2):
            assert residues(a, [m]).primitive_mod_m[0] == primitive_mod_by_definition(a, m)
    for m in range(2, 7):
        for a in itertools.product(range(m), repeat=3):
            assert residues(a, [m]).primitive_mod_m[0] == primitive_mod_by_definition(a, m)


def test_shape_of_standard_lattice():
    sys_len, g = shape_invariants(project_lattice((0, 0, 1)))
    assert sys_len == 1.0 and g == [[1.0, 0.0], [0.0, 1.0]]


def test_shape_of_near_hexagonal_lattice():
    h = F(866025403784, 10**12)  # close to sqrt(3)/2
    lat = ProjectedLattice(((F(1), F(0)), (F(1, 2), h)), 1, (0, 0, 1))
    sys_len, _ = shape_invariants(lat)
    assert math.isclose(sys_len / math.sqrt(float(h)), HEX_SYS, rel_tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_systole_below_hermite_bound(a, b, q):
    if math.gcd(a, b, q) != 1:
        return
    sys_len, g = shape_invariants(project_lattice((a, b, q)))
    assert 0 < sys_len <= HEX_SYS + 1e-9
    assert math.isclose(g[0][0], sys_len**2, rel_tol=1e-9)
