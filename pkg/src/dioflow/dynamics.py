"""Visits of the diagonal flow a_t u(-theta) Z^n to the cross-section S_{r0}.

A lattice a_t Lambda_theta lies in S_{r0} exactly when it has a primitive
vector of height one in the disk D_{r0}, i.e. when some primitive (p, q)
satisfies q^{1/d} ||p - q theta|| <= r0 at t = (1/d) log q.  Visits are
therefore computed arithmetically.

Two enumerators are provided.  ``scan`` walks q = 1, 2, ... and is limited
to moderate q.  ``flow`` follows the trajectory in dyadic time steps: at
step j the lattice diag(2^j, ..., 2^j, 2^{-dj}) u(-theta) Z^n is kept
reduced and every lattice point in the window ||x|| <= r0, 1 <= y < 2^d is
enumerated.  This reaches denominators with thousands of digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .approx import ApproxVector, TargetVector, _eps_scan
from .exactnum import FieldElement, compare, refine
from .norms import NormSpec, ball_volume, exact_power, int_magnitude, norm_value, UnsupportedExact

__all__ = [
    "EpsilonExceedsR0",
    "OutOfChart",
    "CrossSectionGeometry",
    "VisitEvent",
    "Mismatch",
    "Alignment",
    "default_r0",
    "visits",
    "flow_visits",
    "iter_visits",
    "in_B",
    "subset_filter",
    "prefix_equivalence_check",
    "gaps",
    "d1_coordinates",
    "d1_enumerate",
    "D1Report",
]


class EpsilonExceedsR0(ValueError):
    pass


class OutOfChart(ValueError):
    pass


def default_r0(spec: NormSpec, n: int | None = None, eps=None) -> Fraction:
    """Smallest convenient rational r0 with 2 V r0^d >= 2^n (three decimals unless exact)."""
    d = spec.dim if n is None else n - 1
    if n is not None and n - 1 != spec.dim:
        spec = spec.with_dim(n - 1)
    n = d + 1
    vol = ball_volume(spec)
    need = Fraction(2 ** (n - 1))
    if isinstance(vol, Fraction):
        target = need / vol  # r0^d >= target
        r = _rational_root_if_exact(target, d)
        if r is None:
            r = _round_up_root(float(target), d)
            while 2 * vol * r**d < 2**n:
                r += Fraction(1, 1000)
    else:
        r = _round_up_root(float(need) / vol, d)
        # float check with a margin; the volume is transcendental here
        while 2 * vol * float(r) ** d < 2**n * (1 + 1e-12):
            r += Fraction(1, 1000)
    if eps is not None and Fraction(eps) > r:
        r = Fraction(eps)
    return r


def _rational_root_if_exact(x: Fraction, d: int):
    from .exactnum import iroot

    a, b = iroot(x.numerator, d), iroot(x.denominator, d)
    if a**d == x.numerator and b**d == x.denominator:
        return Fraction(a, b)
    return None


def _round_up_root(x: float, d: int) -> Fraction:
    return Fraction(math.ceil(x ** (1.0 / d) * 1000 - 1e-9), 1000)


@dataclass(frozen=True)
class CrossSectionGeometry:
    spec: NormSpec
    r0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r0", Fraction(self.r0))
        vol = ball_volume(self.spec)
        lhs = 2 * vol * (self.r0 ** self.d if isinstance(vol, Fraction) else float(self.r0) ** self.d)
        if lhs < 2**self.n * (1 - 1e-12):
            raise ValueError("r0 violates the Minkowski condition 2 V r0^d >= 2^n")

    @classmethod
    def default(cls, spec: NormSpec, eps=None) -> "CrossSectionGeometry":
        return cls(spec, default_r0(spec, eps=eps))

    @property
    def d(self) -> int:
        return self.spec.dim

    @property
    def n(self) -> int:
        return self.spec.dim + 1


# ---------------------------------------------------------------------------
# exact residuals in fixed point


class _Fixed:
    """theta_i ~ N_i / S with |theta_i - N_i/S| <= err/S (err = 0 when exact)."""

    def __init__(self, theta: TargetVector, bits: int):
        self.theta = theta
        self.spec_cache = {}
        if theta.is_rational():
            L = theta.denominator_lcm()
            self.S = L
            self.N = [int(c * L) for c in theta.rational_coords()]
            self.err = 0
        else:
            self.S = 1 << bits
            self.N = []
            for c in theta.coords:
                iv = refine(c, Fraction(1, 1 << (bits + 2)))
                self.N.append(round(iv.mid * self.S))
            self.err = 1

    def residual(self, q: int, p: Sequence[int]) -> list[int]:
        S = self.S
        return [pi * S - q * Ni for pi, Ni in zip(p, self.N)]

    def slack(self, q: int) -> int:
        return abs(q) * self.err


def _mag_bounds(spec: NormSpec, r: Sequence[int], e: int) -> tuple[int, int]:
    if e == 0:
        m = int_magnitude(spec, r)
        return m, m
    lo = [max(abs(x) - e, 0) for x in r]
    hi = [abs(x) + e for x in r]
    return int_magnitude(spec, lo), int_magnitude(spec, hi)


# ---------------------------------------------------------------------------
# events


@dataclass
class VisitEvent:
    q: int
    p: tuple
    t: float
    disp: tuple  # float displacement q^{1/d}(p - q theta)
    disp_norm_float: float
    in_sharp: bool = True
    in_B: bool = False
    _theta: TargetVector | None = field(default=None, repr=False, compare=False)
    _spec: NormSpec | None = field(default=None, repr=False, compare=False)
    _mag: tuple | None = field(default=None, repr=False, compare=False)  # integer bounds of ||r||^k
    _rnorm: tuple | None = field(default=None, repr=False, compare=False)  # (||2^j r / S||, j)
    _fx: object = field(default=None, repr=False, compare=False)
    observables: dict | None = None

    @property
    def v(self) -> ApproxVector:
        return ApproxVector(self.p, self.q)

    def key(self) -> tuple:
        return (self.q, self.p)

    def disp_norm(self):
        """Exact ||disp||^{kd} (see Displacement.exact_norm_power)."""
        k = exact_power(self._spec)
        r = self._theta.residual(self.q, self.p)
        return norm_value(self._spec, r) ** self._spec.dim * self.q**k


def _event(theta, spec, fx: _Fixed, q, p, j) -> VisitEvent:
    d = spec.dim
    r = fx.residual(q, p)
    # float displacement without overflowing on huge q: scale by 2^j first
    y = q / (1 << (d * j))
    s = y ** (1.0 / d)
    x = tuple((v << j) / fx.S for v in r)
    disp = tuple(c * s for c in x)
    nf = _float_norm(spec, disp)
    ev = VisitEvent(q, tuple(p), math.log(q) / d, disp, nf, _theta=theta, _spec=spec)
    ev._rnorm = (_float_norm(spec, x), j)
    ev._fx = fx
    return ev


def _even(spec):
    try:
        exact_power(spec)
        return True
    except UnsupportedExact:
        return False


def _float_norm(spec: NormSpec, x) -> float:
    a = [abs(c) for c in x]
    if spec.kind == "sup":
        return max(a)
    if spec.kind == "l1":
        return sum(a)
    if spec.kind == "euclid":
        return math.sqrt(sum(c * c for c in a))
    p = float(spec.p)
    return sum(c**p for c in a) ** (1 / p)


_REL = 1e-9  # relative margin for float decisions (true errors are ~1e-15)


def _mag(e: VisitEvent):
    if e._mag is None:
        if _even(e._spec):
            r = e._fx.residual(e.q, e.p)
            e._mag = _mag_bounds(e._spec, r, e._fx.slack(e.q))
        else:
            e._mag = (None, None)
    return e._mag


def _cmp_residual(theta, spec, e1: VisitEvent, e2: VisitEvent) -> int:
    """Compare ||p - q theta|| of two events (certified, exact fallback)."""
    (n1, j1), (n2, j2) = e1._rnorm, e2._rnorm
    if n1 > 0 and n2 > 0:
        ratio = math.ldexp(n1 / n2, j2 - j1)
        if ratio < 1 - _REL:
            return -1
        if ratio > 1 + _REL:
            return 1
    if e1._fx is e2._fx:
        a, b = _mag(e1), _mag(e2)
        if a[0] is not None and b[0] is not None:
            if a[1] < b[0]:
                return -1
            if b[1] < a[0]:
                return 1
            if a[0] == a[1] and b[0] == b[1]:
                return (a[0] > b[0]) - (a[0] < b[0])
    from .norms import _magnitude_cmp

    return _magnitude_cmp(spec, theta.residual(e1.q, e1.p), theta.residual(e2.q, e2.p))


def _visit_test(theta, spec, fx: _Fixed, q, p, eps: Fraction, hint: float | None = None) -> bool:
    """q^{1/d} ||p - q theta|| <= eps, certified.  ``hint`` is a float value of
    the left side; it settles every case away from the boundary."""
    d = spec.dim
    if hint is not None:
        e = float(eps)
        if hint < e * (1 - _REL):
            return True
        if hint > e * (1 + _REL):
            return False
    try:
        k = exact_power(spec)
    except UnsupportedExact:
        from .approx import _eps_holds

        return _eps_holds(spec, theta.residual(q, p), q, eps)
    r = fx.residual(q, p)
    lo, hi = _mag_bounds(spec, r, fx.slack(q))
    a, b = eps.numerator, eps.denominator
    rhs = a ** (k * d) * fx.S ** (k * d)
    f = q**k * b ** (k * d)
    if f * hi**d <= rhs:
        return True
    if f * lo**d > rhs:
        return False
    from .approx import _eps_holds

    return _eps_holds(spec, theta.residual(q, p), q, eps)


# ---------------------------------------------------------------------------
# float lattice reduction


def _lll_float(B: list[list[float]], delta: float = 0.99) -> list[list[int]]:
    """LLL on row vectors; returns the integer transform T with T B reduced."""
    n = len(B)
    b = [list(r) for r in B]
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def gso():
        bs, mu, nb = [], [[0.0] * n for _ in range(n)], []
        for i in range(n):
            v = list(b[i])
            for jj in range(i):
                mu[i][jj] = sum(x * y for x, y in zip(b[i], bs[jj])) / nb[jj]
                v = [x - mu[i][jj] * y for x, y in zip(v, bs[jj])]
            bs.append(v)
            nb.append(sum(x * x for x in v))
        return mu, nb

    mu, nb = gso()
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 100000:
            break
        for jj in range(k - 1, -1, -1):
            c = round(mu[k][jj])
            if c:
                b[k] = [x - c * y for x, y in zip(b[k], b[jj])]
                T[k] = [x - c * y for x, y in zip(T[k], T[jj])]
                for l in range(jj + 1):
                    mu[k][l] -= c * (mu[jj][l] if l < jj else 1.0)
        if nb[k] >= (delta - mu[k][k - 1] ** 2) * nb[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            T[k], T[k - 1] = T[k - 1], T[k]
            mu, nb = gso()
            k = max(k - 1, 1)
    return T


def _enumerate_float(B: list[list[float]], radius2: float) -> list[tuple[int, ...]]:
    """All nonzero c (one per +-pair) with |c B|^2 <= radius2 (Fincke-Pohst)."""
    n = len(B)
    bs, mu, nb = [], [[0.0] * n for _ in range(n)], []
    for i in range(n):
        v = list(B[i])
        for jj in range(i):
            mu[i][jj] = sum(x * y for x, y in zip(B[i], bs[jj])) / nb[jj]
            v = [x - mu[i][jj] * y for x, y in zip(v, bs[jj])]
        bs.append(v)
        nb.append(sum(x * x for x in v))
    out = []
    c = [0] * n

    def rec(i, rem):
        centre = -sum(mu[l][i] * c[l] for l in range(i + 1, n))
        span = math.sqrt(max(rem, 0.0) / nb[i])
        for ci in range(math.ceil(centre - span - 1e-9), math.floor(centre + span + 1e-9) + 1):
            used = (ci - centre) ** 2 * nb[i]
            if used > rem * (1 + 1e-9) + 1e-12:
                continue
            c[i] = ci
            if i == 0:
                if any(c):
                    out.append(tuple(c))
            else:
                rec(i - 1, rem - used)
        c[i] = 0

    rec(n - 1, radius2)
    res = []
    for v in out:
        if next(x for x in v if x) > 0:
            res.append(v)
    return res


class _Flow:
    """Integer basis of Z^n kept reduced along the dyadic flow."""

    def __init__(self, theta: TargetVector, spec: NormSpec, r0: Fraction, fx: _Fixed):
        self.theta, self.spec, self.fx = theta, spec, fx
        self.d = spec.dim
        self.n = self.d + 1
        self.U = [[int(i == j) for j in range(self.n)] for i in range(self.n)]  # rows (p..., q)
        self.r0f = float(r0)
        self.wx = 1.0 / (math.sqrt(self.d) * float(r0))
        self.wy = 1.0 / (1 << self.d)

    def image(self, row, j) -> list[float]:
        d, fx = self.d, self.fx
        q = row[-1]
        r = fx.residual(q, row[:-1])
        # x = 2^j (p - q theta) = 2^j r / S ; y = q 2^{-dj}
        xs = [((x << j) / fx.S) * self.wx for x in r]
        return xs + [q / (1 << (d * j)) * self.wy]

    def reduce(self, j):
        for _ in range(50):
            B = [self.image(r, j) for r in self.U]
            T = _lll_float(B)
            if all(T[i][k] == int(i == k) for i in range(self.n) for k in range(self.n)):
                return B
            self.U = [[sum(T[i][k] * self.U[k][c] for k in range(self.n)) for c in range(self.n)] for i in range(self.n)]
        return [self.image(r, j) for r in self.U]

    def window(self, j) -> list[tuple[int, tuple]]:
        """Integer vectors (q, p) with q in [2^{dj}, 2^{d(j+1)}) in the enumeration ellipsoid."""
        B = self.reduce(j)
        out = []
        d, n = self.d, self.n
        lim = self.r0f * (1 + 1e-6) + 1e-9
        for c in _enumerate_float(B, 2.0 * (1 + 1e-7)):
            img = [sum(c[i] * B[i][k] for i in range(n)) for k in range(n)]
            y = abs(img[-1]) / self.wy
            if y < 1 - 1e-6 or y > (1 << d) * (1 + 1e-6):
                continue
            if _float_norm(self.spec, [v / self.wx for v in img[:-1]]) > lim:
                continue
            row = [sum(c[i] * self.U[i][k] for i in range(self.n)) for k in range(self.n)]
            if row[-1] < 0:
                row = [-x for x in row]
            q = row[-1]
            if (1 << (self.d * j)) <= q < (1 << (self.d * (j + 1))):
                out.append((q, tuple(row[:-1])))
        return out


def _bits_for(theta: TargetVector, d: int, q_max: int) -> int:
    j_max = max(1, -(-q_max.bit_length() // d))
    return (d + 1) * (j_max + 2) + 96


def flow_visits(
    theta: TargetVector, geom: CrossSectionGeometry, q_max: int, *, bits: int | None = None
) -> Iterator[VisitEvent]:
    """Visits in increasing (q, p) order, generated window by window.

    in_sharp is set; in_B needs the whole history and is set by :func:`visits`.
    """
    spec, d = geom.spec, geom.d
    if bits is None:
        bits = _bits_for(theta, d, q_max)
    fx = _Fixed(theta, bits)
    flow = _Flow(theta, spec, geom.r0, fx)
    j = 0
    while (1 << (d * j)) <= q_max:
        found = []
        for q, p in flow.window(j):
            if q > q_max or math.gcd(q, *p) != 1:
                continue
            ev = _event(theta, spec, fx, q, p, j)
            if _visit_test(theta, spec, fx, q, p, geom.r0, ev.disp_norm_float):
                found.append(ev)
        found.sort(key=VisitEvent.key)
        i = 0
        while i < len(found):
            k = i
            while k < len(found) and found[k].q == found[i].q:
                k += 1
            for ev in found[i:k]:
                ev.in_sharp = k - i == 1
                yield ev
            i = k
        j += 1


def _scan_visits(theta, geom, q_max) -> list[VisitEvent]:
    spec, d = geom.spec, geom.d
    fx = _Fixed(theta, _bits_for(theta, d, q_max))
    seq = _eps_scan(theta, spec, geom.r0, q_max, 1)
    out = []
    counts = {}
    for v in seq.entries:
        counts[v.q] = counts.get(v.q, 0) + 1
    for v in seq.entries:
        j = (v.q.bit_length() - 1) // d
        ev = _event(theta, spec, fx, v.q, v.p, j)
        ev.in_sharp = counts[v.q] == 1
        out.append(ev)
    return out


def _mark_B(theta, spec, events: list[VisitEvent]) -> None:
    """in_B from the visit list: a strict record of ||p - q theta|| over all
    earlier visits, with no other visit at the same q as close.  Every point
    of the closed cylinder below a visit is itself a visit, so the list
    suffices."""
    best = None
    i = 0
    while i < len(events):
        k = i
        while k < len(events) and events[k].q == events[i].q:
            k += 1
        group = events[i:k]
        for e in group:
            ok = best is None or _cmp_residual(theta, spec, e, best) < 0
            if ok:
                for o in group:
                    if o is not e and _cmp_residual(theta, spec, o, e) <= 0:
                        ok = False
                        break
            e.in_B = ok
        for e in group:
            if best is None or _cmp_residual(theta, spec, e, best) < 0:
                best = e
        i = k


def visits(
    theta: TargetVector, geom: CrossSectionGeometry, q_max: int, *, method: str = "flow", bits: int | None = None
) -> list[VisitEvent]:
    """All visits with q <= q_max, sorted by (t, p), with in_sharp and in_B set."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    if theta.dim != geom.d:
        raise ValueError("target and geometry dimensions differ")
    if method == "flow":
        events = list(flow_visits(theta, geom, q_max, bits=bits))
    elif method == "scan":
        events = _scan_visits(theta, geom, q_max)
    else:
        raise ValueError(f"unknown method {method!r}")
    events.sort(key=VisitEvent.key)
    _mark_B(theta, geom.spec, events)
    return events


def iter_visits(theta: TargetVector, geom: CrossSectionGeometry, q_max: int, *, bits: int | None = None) -> Iterator[VisitEvent]:
    """Streaming form of :func:`visits` for very long runs (in_B set on the fly)."""
    spec = geom.spec
    best = None
    pending: list[VisitEvent] = []

    def flush(group):
        nonlocal best
        for e in group:
            ok = best is None or _cmp_residual(theta, spec, e, best) < 0
            if ok:
                for o in group:
                    if o is not e and _cmp_residual(theta, spec, o, e) <= 0:
                        ok = False
                        break
            e.in_B = ok
        for e in group:
            if best is None or _cmp_residual(theta, spec, e, best) < 0:
                best = e
        return group

    for ev in flow_visits(theta, geom, q_max, bits=bits):
        if pending and ev.q != pending[0].q:
            yield from flush(pending)
            pending = []
        pending.append(ev)
    if pending:
        yield from flush(pending)


def in_B(theta: TargetVector, v: ApproxVector, geom: CrossSectionGeometry) -> bool:
    """Direct test: no primitive (p', q') != (p, q), 1 <= q' <= q, with
    ||p' - q' theta|| <= ||p - q theta|| (closed cylinder, exact)."""
    from .approx import _Mag, _points_within
    from .norms import _numeric_norm

    spec = geom.spec
    r = theta.residual(v.q, v.p)
    mag = _Mag(spec, r)
    rho = _numeric_norm(spec, r, Fraction(1, 1 << 60)).hi
    for qq in range(1, v.q + 1):
        ranges = []
        for c in theta.coords:
            iv = refine(qq * c, Fraction(1, 1 << 40))
            ranges.append(range(math.ceil(iv.lo - rho), math.floor(iv.hi + rho) + 1))
        import itertools

        for pp in itertools.product(*ranges):
            if qq == v.q and tuple(pp) == tuple(v.p):
                continue
            if math.gcd(qq, *pp) != 1:
                continue
            if _Mag(spec, theta.residual(qq, pp)) <= mag:
                return False
    return True


def subset_filter(events: Sequence[VisitEvent], which: str, eps=None, geom: CrossSectionGeometry | None = None) -> list[VisitEvent]:
    """Keep B, S_eps or sharp events.

    ``which`` is ``b`` (closed-cylinder test), ``b_sharp`` (additionally a
    unique primitive vector in D_{r0}), ``eps``, ``sharp`` or ``all``.
    """
    which = which.lower()
    if which == "all":
        return list(events)
    if which == "b":
        return [e for e in events if e.in_B]
    if which == "b_sharp":
        return [e for e in events if e.in_B and e.in_sharp]
    if which == "sharp":
        return [e for e in events if e.in_sharp]
    if which == "eps":
        eps = Fraction(eps)
        if geom is not None and eps > geom.r0:
            raise EpsilonExceedsR0(f"eps = {eps} exceeds r0 = {geom.r0}")
        out = []
        for e in events:
            th, spec = e._theta, e._spec
            fx = _fixed_cache(th, spec, e.q)
            if _visit_test(th, spec, fx, e.q, e.p, eps, e.disp_norm_float):
                out.append(e)
        return out
    raise ValueError(f"unknown section filter {which!r}")


_FX: dict = {}


def _fixed_cache(theta, spec, q) -> _Fixed:
    bits = _bits_for(theta, spec.dim, q)
    key = id(theta)
    fx = _FX.get(key)
    if fx is None or (fx.err and fx.S.bit_length() - 1 < bits):
        fx = _Fixed(theta, bits)
        if len(_FX) > 64:
            _FX.clear()
        _FX[key] = fx
    return fx


@dataclass(frozen=True)
class Alignment:
    k0: int
    l0: int
    common: int


@dataclass(frozen=True)
class Mismatch:
    reason: str


def prefix_equivalence_check(seq_a, seq_b):
    """Minimal (k0, l0) with seq_a[k0:] == seq_b[l0:], or Mismatch.

    Sequences may hold ApproxVectors, VisitEvents or (q, p) keys.
    """
    a = [_key(x) for x in seq_a]
    b = [_key(x) for x in seq_b]
    m = 0
    while m < len(a) and m < len(b) and a[len(a) - 1 - m] == b[len(b) - 1 - m]:
        m += 1
    if m == 0 and (a or b):
        return Mismatch("the sequences have no common tail")
    return Alignment(len(a) - m, len(b) - m, m)


def _key(x):
    if hasattr(x, "key"):
        return x.key()
    q, p = x
    return (q, tuple(p))


def gaps(events: Sequence) -> list[float]:
    """t_{k+1} - t_k with t = (1/d) log q (computed from exact ratios)."""
    out = []
    for a, b in zip(events, events[1:]):
        d = len(a.p)
        out.append(math.log(b.q / a.q) / d)
    return out


# ---------------------------------------------------------------------------
# explicit chart for d = 1


@dataclass(frozen=True)
class D1Report:
    x: Fraction
    y: Fraction
    f1: Fraction
    f2: Fraction
    in_sharp: bool
    in_B: bool
    in_S_eps: bool | None


def d1_coordinates(x, y, eps=None) -> D1Report:
    """Membership of Lambda_{x,y} = u_x h_y Z^2 in B (r0 = 1) and S_eps.

    B holds iff f1(y) < x < f2(y) with f1(t) = -1/(1+t), f2(t) = 1/(2-t);
    at y = 0 the lattice has three vectors in D_1 and is not in B.
    """
    x, y = Fraction(x), Fraction(y)
    if not (abs(x) < 1 and 0 <= y < 1):
        raise OutOfChart("need |x| < 1 and 0 <= y < 1")
    f1 = Fraction(-1) / (1 + y)
    f2 = Fraction(1) / (2 - y)
    sharp = y != 0
    inb = sharp and f1 < x < f2
    s_eps = None if eps is None else abs(x) <= Fraction(eps)
    return D1Report(x, y, f1, f2, sharp, inb, s_eps)


def d1_enumerate(x, y) -> tuple[bool, bool]:
    """(in_sharp, in_B) of u_x h_y Z^2 by listing lattice points.

    Points are (m + x b, b) with b = m y + n; the marked vector is (x, 1).
    """
    x, y = Fraction(x), Fraction(y)
    disk = []
    cyl = []
    for m in range(-2, 3):
        for n in range(-4, 5):
            if math.gcd(m, n) != 1:
                continue
            b = m * y + n
            a = m + x * b
            if b == 1 and abs(a) <= 1:
                disk.append((m, n))
            if (m, n) not in ((0, 1), (0, -1)) and abs(b) <= 1 and abs(a) <= abs(x):
                cyl.append((m, n))
    sharp = len(disk) == 1
    return sharp, sharp and not cyl
