"""Integer and rational lattice helpers: basis completion, reduction, enumeration."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

__all__ = [
    "ext_gcd",
    "complete_basis",
    "mix_completion",
    "det",
    "mat_inverse",
    "transpose",
    "gram",
    "lll_exact",
    "lagrange",
    "reduce_basis",
    "short_vectors",
    "shortest_sq",
]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def transpose(m):
    return [list(r) for r in zip(*m)]


def det(m) -> Fraction:
    """Exact determinant by fraction-free elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    out = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            out = -out
        out *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            if f:
                for c in range(i, n):
                    a[r][c] -= f * a[i][c]
    return out


def mat_inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for i in range(n):
        piv = next(r for r in range(i, n) if a[r][i] != 0)
        a[i], a[piv] = a[piv], a[i]
        inv = 1 / a[i][i]
        a[i] = [x * inv for x in a[i]]
        for r in range(n):
            if r != i and a[r][i] != 0:
                f = a[r][i]
                a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return [row[n:] for row in a]


def complete_basis(v: Sequence[int]) -> list[list[int]]:
    """Unimodular integer matrix (rows = basis vectors) whose last row is v.

    v must be primitive.  Built by Euclidean elimination: we find U with
    U v = e_n, then return the rows of (U^{-1})^T.
    """
    n = len(v)
    a = list(v)
    if math.gcd(*a) != 1:
        raise ValueError("vector is not primitive")
    # track U (row ops on a) and its inverse as column ops
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Ui = [[int(i == j) for j in range(n)] for i in range(n)]

    def addrow(dst, src, k):  # a[dst] += k a[src]
        a[dst] += k * a[src]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]
        for row in Ui:  # inverse: column src -= k column dst
            row[src] -= k * row[dst]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def negate(i):
        a[i] = -a[i]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    # move the gcd into the last slot
    for i in range(n - 1):
        while a[i] != 0:
            if a[n - 1] == 0:
                swap(i, n - 1)
                continue
            k = a[n - 1] // a[i]
            addrow(n - 1, i, -k)
            if a[n - 1] != 0:
                k = a[i] // a[n - 1]
                addrow(i, n - 1, -k)
            else:
                swap(i, n - 1)
    if a[n - 1] < 0:
        negate(n - 1)
    assert a[n - 1] == 1 and all(x == 0 for x in a[:-1])
    # v = Ui e_n, so the columns of Ui form a basis with last column v
    return transpose(Ui)


def mix_completion(basis: list[list[int]], rng: random.Random, rounds: int = 6) -> list[list[int]]:
    """Another completion of the same v: random unimodular mixing of the first n-1 rows
    plus random multiples of v added to them."""
    n = len(basis)
    rows = [list(r) for r in basis]
    v = rows[-1]
    for _ in range(rounds):
        if n > 2:
            i, j = rng.sample(range(n - 1), 2)
            k = rng.randint(-3, 3)
            rows[i] = [x + k * y for x, y in zip(rows[i], rows[j])]
        i = rng.randrange(n - 1)
        k = rng.randint(-5, 5)
        rows[i] = [x + k * y for x, y in zip(rows[i], v)]
        if rng.random() < 0.3:
            rows[i] = [-x for x in rows[i]]
    return rows


def gram(rows) -> list[list[Fraction]]:
    return [[sum(Fraction(x) * y for x, y in zip(a, b)) for b in rows] for a in rows]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def lagrange(b1, b2):
    """Lagrange-Gauss reduction of a rank-2 basis (exact)."""
    b1, b2 = list(b1), list(b2)
    n1, n2 = _dot(b1, b1), _dot(b2, b2)
    if n1 > n2:
        b1, b2, n1, n2 = b2, b1, n2, n1
    while True:
        k = _round_div(_dot(b1, b2), n1)
        b2 = [y - k * x for x, y in zip(b1, b2)]
        n2 = _dot(b2, b2)
        if n2 >= n1:
            break
        b1, b2, n1, n2 = b2, b1, n2, n1
    # canonical form of the Gram matrix: 0 <= 2 b1.b2 <= |b1|^2 <= |b2|^2
    b1 = _sign_norm(b1)
    dot = _dot(b1, b2)
    if dot < 0 or (dot == 0 and _sign_norm(b2) is not b2):
        b2 = [-x for x in b2]
    return b1, b2


def _round_div(a, b):
    """floor(a/b + 1/2) for b > 0."""
    if isinstance(a, int) and isinstance(b, int):
        return (2 * a + b) // (2 * b)
    return math.floor(Fraction(a) / b + Fraction(1, 2))


def _sign_norm(b):
    for x in b:
        if x != 0:
            return b if x > 0 else [-y for y in b]
    return b


def lll_exact(rows, delta=Fraction(3, 4)):
    """Textbook LLL with exact rational arithmetic (small dimensions)."""
    b = [[Fraction(x) for x in r] for r in rows]
    n = len(b)

    def gso(b):
        bs, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = list(b[i])
            for j in range(i):
                mu[i][j] = _dot(b[i], bs[j]) / _dot(bs[j], bs[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    bs, mu = gso(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = math.floor(mu[k][j] + Fraction(1, 2))
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                bs, mu = gso(b)
        if _dot(bs[k], bs[k]) >= (delta - mu[k][k - 1] ** 2) * _dot(bs[k - 1], bs[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bs, mu = gso(b)
            k = max(k - 1, 1)
    return [_sign_norm(r) for r in b]


def reduce_basis(rows):
    """Lagrange for rank 2, exact LLL otherwise; rank 1 is sign-normalised."""
    rows = [[Fraction(x) for x in r] for r in rows]
    if len(rows) == 1:
        return [_sign_norm(rows[0])]
    # clear denominators so the reduction runs on integers
    L = 1
    for r in rows:
        for x in r:
            L = L * x.denominator // math.gcd(L, x.denominator)
    ints = [[int(x * L) for x in r] for r in rows]
    if len(rows) == 2:
        red = list(lagrange(ints[0], ints[1]))
    elif len(rows) == 3:
        red = _canonical3(lll_exact(ints))
    else:
        red = lll_exact(ints)
    return [[Fraction(x) / L for x in r] for r in red]


def _canonical3(rows):
    """Rank 3: a basis attaining the successive minima with lexicographically least Gram.

    In rank 3 the successive minima are attained by a basis, so this Gram
    matrix depends only on the lattice.
    """
    bound = max(_dot(r, r) for r in rows)
    vecs = []
    for c in short_vectors(rows, bound):
        v = [sum(ci * r[k] for ci, r in zip(c, rows)) for k in range(len(rows[0]))]
        vecs.append((_dot(v, v), c, v))
    vecs.sort(key=lambda t: t[0])
    l1 = vecs[0][0]
    xs = [t for t in vecs if t[0] == l1]
    l2 = min(t[0] for t in vecs if any(_indep(x[1], t[1]) for x in xs))
    ys = [t for t in vecs if t[0] == l2]
    best = None
    for x in xs:
        for y in ys:
            if not _indep(x[1], y[1]):
                continue
            for z in vecs:
                if best is not None and z[0] > best[0][0]:
                    break
                if det([x[1], y[1], z[1]]) not in (1, -1):
                    continue
                for sy in (1, -1):
                    for sz in (1, -1):
                        yv = [sy * a for a in y[2]]
                        zv = [sz * a for a in z[2]]
                        key = (z[0], _dot(x[2], yv), _dot(x[2], zv), _dot(yv, zv))
                        if best is None or key < best[0]:
                            best = (key, [list(x[2]), yv, zv])
    return best[1]


def _indep(a, b) -> bool:
    return any(a[i] * b[j] != a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


def short_vectors(rows, bound):
    """Coefficient vectors c != 0 (up to sign) with |sum c_i b_i|^2 <= bound, exactly.

    Uses Gram-Schmidt pruning (Fincke-Pohst) with rational arithmetic.
    """
    b = [[Fraction(x) for x in r] for r in rows]
    n = len(b)
    bound = Fraction(bound)
    bs, mu = [], [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = list(b[i])
        for j in range(i):
            mu[i][j] = _dot(b[i], bs[j]) / _dot(bs[j], bs[j])
            v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
        bs.append(v)
    nb = [_dot(x, x) for x in bs]
    out = []
    c = [0] * n

    def rec(i, rem):
        # centre of coordinate i given c[i+1:]
        centre = -sum(mu[j][i] * c[j] for j in range(i + 1, n))
        r = rem / nb[i]
        # |c_i - centre|^2 <= r
        lo = math.ceil(centre - _sqrt_up(r))
        hi = math.floor(centre + _sqrt_up(r))
        for ci in range(lo, hi + 1):
            used = (ci - centre) ** 2 * nb[i]
            if used > rem:
                continue
            c[i] = ci
            if i == 0:
                if any(c):
                    out.append(tuple(c))
            else:
                rec(i - 1, rem - used)
        c[i] = 0

    rec(n - 1, bound)
    # keep one of each +-pair
    res = []
    for v in out:
        first = next(x for x in v if x != 0)
        if first > 0:
            res.append(v)
    return res


def _sqrt_up(x: Fraction) -> Fraction:
    if x <= 0:
        return Fraction(0)
    s = math.isqrt(x.numerator * x.denominator)
    return Fraction(s + 1, x.denominator)


def shortest_sq(rows) -> tuple[Fraction, list]:
    """Exact squared length of a shortest nonzero vector and all minimisers (up to sign)."""
    red = reduce_basis(rows)
    bound = min(_dot(r, r) for r in red)
    vecs = short_vectors(red, bound)
    n = len(red)
    pts = []
    best = None
    for c in vecs:
        v = [sum(c[i] * red[i][k] for i in range(n)) for k in range(len(red[0]))]
        nv = _dot(v, v)
        if best is None or nv < best:
            best, pts = nv, [v]
        elif nv == best:
            pts.append(v)
    return best, pts
