import itertools
import math
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dioflow.numfield import (
    Balpha,
    DegreeTooSmall,
    NotIrreducible,
    NotSpanning,
    NotTotallyReal,
    custom_vector,
    discriminant,
    eps_zero_estimate,
    galpha,
    geometric_embedding,
    make_field,
    standard_vector,
)
from dioflow.norms import parse_norm

CUBIC = (1, 1, -2, -1)
W = F(1, 2**100)


@pytest.fixture(scope="module")
def field():
    return make_field(CUBIC)


@pytest.fixture(scope="module")
def fv(field):
    return standard_vector(field)


def test_cubic_roots(field):
    assert field.degree == 3
    assert [round(float(r), 4) for r in field.roots] == [-1.8019, -0.4450, 1.2470]
    assert field.identity_root_index == 2


def test_second_cubic_roots():
    k = make_field((1, 0, -3, -1))
    assert [round(float(r), 3) for r in k.roots] == [-1.532, -0.347, 1.879]


def test_field_errors():
    with pytest.raises(NotTotallyReal):
        make_field((1, 0, 0, -2))
    with pytest.raises(DegreeTooSmall):
        make_field((1, 0, -2))
    with pytest.raises(NotIrreducible):
        make_field((1, -3, 3, -1))


def test_standard_vectors(field):
    assert [c.coeffs for c in standard_vector(field).components] == [(0, 1, 0), (0, 0, 1)]
    quartic = standard_vector(make_field((1, 0, -4, 0, 2)))
    assert quartic.dim == 3


def test_custom_vector_spanning(field):
    assert custom_vector(field, [[0, 1], [0, 1, 1]]).spanning_certificate
    with pytest.raises(NotSpanning):
        custom_vector(field, [[0, 1], [3, 2]])


def test_rank_oracle(field):
    for a, b in itertools.product(itertools.product(range(-1, 2), repeat=3), repeat=2):
        rank = sympy.Matrix([[1, 0, 0], list(a), list(b)]).rank()
        if rank == 3:
            assert custom_vector(field, [list(a), list(b)]).spanning_certificate
        else:
            with pytest.raises(NotSpanning):
                custom_vector(field, [list(a), list(b)])


def test_embedding_examples(field):
    assert all(iv.lo == iv.hi == 1 for iv in geometric_embedding(field, 1))
    emb = geometric_embedding(field, [0, 1], W)
    for iv, k in zip(emb, field.embedding_order()):
        assert iv.width <= W
        r = field.roots[k].refine(W)
        assert iv.lo <= r.hi and r.lo <= iv.hi
    sq = geometric_embedding(field, [0, 0, 1], W)
    for a, b in zip(emb, sq):
        assert abs(a.mid**2 - b.mid) < F(1, 2**90)


elements = st.lists(st.integers(-20, 20), min_size=3, max_size=3)


@settings(max_examples=25, deadline=None)
@given(elements, elements)
def test_embeddings_are_ring_maps(field, a, b):
    x, y = field.element(a), field.element(b)
    ex, ey, exy = (geometric_embedding(field, z, W) for z in (x, y, x * y))
    for u, v, w in zip(ex, ey, exy):
        assert abs(u.mid * v.mid - w.mid) < F(1, 2**80)


@settings(max_examples=25, deadline=None)
@given(elements)
def test_trace_identity(field, a):
    x = field.element(a)
    total = sum(iv.mid for iv in geometric_embedding(field, x, W))
    assert abs(total - _trace(x.coeffs)) < F(1, 2**80)


def _trace(coeffs):
    """Exact trace from the multiplication-by-beta matrix in the basis 1, b, b^2."""
    m = sympy.Matrix([[0, 0, 1], [1, 0, 2], [0, 1, -1]])  # multiplication by b in basis 1, b, b^2
    mat = sum((F(c) * m**i for i, c in enumerate(coeffs)), sympy.zeros(3, 3))
    return F(str(mat.trace()))


def test_galpha_structure(field, fv):
    g = galpha(fv)
    assert g.certified
    f = g.floats()
    assert [row[-1] for row in f] == [1.0, 1.0, 1.0]
    beta = float(field.roots[2])
    assert f[-1][:2] == pytest.approx([beta, beta * beta])
    assert discriminant(CUBIC) == 49
    lo, hi = sorted((abs(g.det.lo), abs(g.det.hi)))
    assert lo**2 <= 49 <= hi**2


def test_galpha_factorisation(fv):
    g = galpha(fv).floats()
    b = Balpha(fv)
    alpha = g[-1][:2]
    for j in range(3):
        for i in range(3):
            if j < 2 and i < 2:
                want = float(b.B[i][j]) + alpha[i]
            elif j < 2:
                want = 1.0
            else:
                want = alpha[i] if i < 2 else 1.0
            assert g[j][i] == pytest.approx(want, abs=1e-14)


def test_balpha(fv):
    b = Balpha(fv)
    assert len(b.B) == 2 and len(b.B[0]) == 2
    assert b.det_B.sign() not in (None, 0)
    assert b.det_B.width < F(1, 10**30)
    assert abs(abs(b.det_hbar()) - 1) < 1e-20


def test_embedded_module_has_no_zero_coordinates(field):
    for c in itertools.product(range(-3, 4), repeat=3):
        if not any(c):
            continue
        emb = geometric_embedding(field, list(c), F(1, 2**60))
        assert all(iv.sign() not in (None, 0) for iv in emb)


def test_eps_zero_positive(fv):
    est = eps_zero_estimate(fv, parse_norm("sup", 2), 10**5)
    assert est.running_min > 0 and est.tail_min >= est.running_min
    with pytest.raises(ValueError):
        eps_zero_estimate(fv, parse_norm("sup", 2), 10)
