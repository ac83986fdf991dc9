"""Best approximations and epsilon-approximations of a target vector.

The workhorse is a linear scan over q.  A float prefilter (with a rigorous
error margin) discards denominators that cannot matter; every surviving
candidate is decided with exact arithmetic.  For d = 1 a continued-fraction
path gives the same sequences for very large denominators.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .exactnum import (
    FieldElement,
    Interval,
    IncompatibleFields,
    PrecisionExhausted,
    compare,
    nth_root_interval,
    refine,
    to_exact,
)
from .norms import (
    NormSpec,
    UnsupportedExact,
    _magnitude_cmp,
    _numeric_norm,
    exact_power,
    nearest_int_points,
    norm_value,
)

__all__ = [
    "TargetVector",
    "ApproxVector",
    "ApproxSequence",
    "Displacement",
    "make_target",
    "best_approximations",
    "eps_approximations",
    "displacement",
    "is_best",
    "is_eps",
    "convergents",
    "min_displacement",
]

# absolute error allowed for the float prefilter (true errors are ~1e-15)
_SLACK = 1e-11
_CHUNK = 1 << 16
_SCAN_QMAX_LIMIT = 1 << 40


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class TargetVector:
    coords: tuple
    field: object = None

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("target needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def rationality_flags(self) -> tuple[bool, ...]:
        return tuple(isinstance(c, Fraction) or c.is_rational() for c in self.coords)

    def is_rational(self) -> bool:
        return all(self.rationality_flags)

    def rational_coords(self) -> tuple[Fraction, ...]:
        return tuple(c if isinstance(c, Fraction) else c.coeffs[0] for c in self.coords)

    def denominator_lcm(self) -> int:
        return reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in self.rational_coords()), 1)

    def residual(self, q: int, p: Sequence[int]) -> list:
        """Exact p - q*theta."""
        return [pi - q * c for pi, c in zip(p, self.coords)]

    def enclosures(self, width) -> list[Interval]:
        return [refine(c, width) for c in self.coords]

    def float_split(self, q_max: int) -> tuple[np.ndarray, np.ndarray]:
        """theta = hi + lo with q*hi exact in float64 for q <= q_max."""
        his, los = [], []
        for c in self.coords:
            x = c if isinstance(c, Fraction) else refine(c, Fraction(1, 1 << 160)).mid
            ibits = max(1, abs(math.floor(x)).bit_length() + 1)
            k = max(0, 52 - q_max.bit_length() - ibits)
            hi = Fraction(round(x * (1 << k)), 1 << k)
            his.append(float(hi))
            los.append(float(x - hi))
        return np.array(his), np.array(los)


def make_target(coords: Iterable) -> TargetVector:
    """Build a target from Fractions, strings, AlgebraicReals or field elements."""
    vals = [to_exact(c) for c in coords]
    fields = {id(v.field): v.field for v in vals if isinstance(v, FieldElement)}
    fld = None
    if fields:
        flist = list(fields.values())
        fld = flist[0]
        for other in flist[1:]:
            if other != fld:
                raise IncompatibleFields("target coordinates lie in different fields")
        vals = [v if isinstance(v, FieldElement) else fld.element([v]) for v in vals]
        vals = [fld.element(v.coeffs) if v.field is not fld else v for v in vals]
    return TargetVector(tuple(vals), fld)


@dataclass(frozen=True)
class ApproxVector:
    p: tuple
    q: int
    tie: bool = False
    primitive: bool = True
    ties: tuple = ()

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))

    @classmethod
    def of(cls, p: Sequence[int], q: int, **kw) -> "ApproxVector":
        return cls(tuple(p), q, primitive=math.gcd(q, *p) == 1, **kw)

    @property
    def vector(self) -> tuple:
        return self.p + (self.q,)

    def key(self) -> tuple:
        return (self.q, self.p)


@dataclass
class ApproxSequence:
    entries: list
    terminated: bool = False
    q_max_scanned: int = 0

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def keys(self) -> list[tuple]:
        return [v.key() for v in self.entries]


# ---------------------------------------------------------------------------
# exact magnitudes


class _Mag:
    """Norm of a residual vector, ordered exactly."""

    __slots__ = ("spec", "r", "value")

    def __init__(self, spec: NormSpec, r):
        self.spec = spec
        self.r = r
        try:
            self.value = norm_value(spec, r)
        except UnsupportedExact:
            self.value = None

    def cmp(self, other: "_Mag") -> int:
        if self.value is not None:
            return compare(self.value, other.value)
        return _magnitude_cmp(self.spec, self.r, other.r)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def is_zero(self) -> bool:
        return all(compare(c, 0) == 0 for c in self.r)


def _eps_holds(spec: NormSpec, r, q: int, eps: Fraction) -> bool:
    """q * ||r||^d <= eps^d, decided exactly when the norm allows it."""
    d = spec.dim
    try:
        k = exact_power(spec)
    except UnsupportedExact:
        width = Fraction(1, 1 << 60)
        while width > Fraction(1, 1 << 600):
            iv = _numeric_norm(spec, r, width)
            lo, hi = iv.lo**d * q, iv.hi**d * q
            if hi <= eps**d:
                return True
            if lo > eps**d:
                return False
            width /= 1 << 64
        raise PrecisionExhausted("epsilon test undecided")
    m = norm_value(spec, r)
    return compare(m**d * q**k, eps ** (k * d)) <= 0


# ---------------------------------------------------------------------------
# float prefilter


def _float_mag(kind: str, p: float | None, x: np.ndarray) -> np.ndarray:
    a = np.abs(x)
    if kind == "sup":
        return a.max(axis=0)
    if kind == "l1":
        return a.sum(axis=0)
    if kind == "euclid":
        return np.sqrt((a * a).sum(axis=0))
    return (a**p).sum(axis=0) ** (1.0 / p)


def _chunk_residuals(hi: np.ndarray, lo: np.ndarray, q0: int, q1: int) -> tuple[np.ndarray, np.ndarray]:
    q = np.arange(q0, q1, dtype=np.float64)
    a = np.outer(hi, q)
    x = (a - np.rint(a)) + np.outer(lo, q)
    x -= np.rint(x)
    return q, x


def _scan_chunk(args):
    """Worker: candidate records and small-distance denominators for q in [q0, q1)."""
    hi, lo, kind, p, q0, q1, d, eps = args
    q, x = _chunk_residuals(hi, lo, q0, q1)
    m = _float_mag(kind, p, x)
    runmin = np.minimum.accumulate(m)
    prev = np.concatenate(([np.inf], runmin[:-1]))
    rec = np.nonzero(m <= prev + _SLACK)[0]
    out = {"min": float(runmin[-1]), "rec_q": (rec + q0).tolist(), "rec_m": m[rec].tolist()}
    if eps is not None:
        thr = eps * q ** (-1.0 / d) + _SLACK
        hit = np.nonzero(m <= thr)[0]
        out["eps_q"] = (hit + q0).tolist()
    return out


def _run_chunks(theta: TargetVector, spec: NormSpec, q_lo: int, q_hi: int, eps, workers: int):
    hi, lo = theta.float_split(q_hi)
    p = float(spec.p) if spec.kind == "lp" else None
    jobs = [
        (hi, lo, spec.kind, p, a, min(a + _CHUNK, q_hi + 1), spec.dim, None if eps is None else float(eps))
        for a in range(q_lo, q_hi + 1, _CHUNK)
    ]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_scan_chunk, jobs))
    return [_scan_chunk(j) for j in jobs]


def _nearest_rounding(theta: TargetVector, q: int) -> tuple[int, ...]:
    """Coordinatewise nearest integers to q*theta (halves round down)."""
    out = []
    for c in theta.coords:
        x = q * c
        if isinstance(x, Fraction):
            out.append(math.floor(x + Fraction(1, 2)) if (x - math.floor(x)) != Fraction(1, 2) else math.floor(x))
        else:
            iv = refine(x, Fraction(1, 1 << 64))
            n = round(iv.mid)
            out.append(n)
    return tuple(out)


# ---------------------------------------------------------------------------
# best approximations


def _check_qmax(q_max: int):
    if q_max < 1:
        raise ValueError("q_max must be at least 1")


def best_approximations(
    theta: TargetVector, spec: NormSpec, q_max: int, *, method: str = "auto", workers: int = 1
) -> ApproxSequence:
    """All best approximations (p, q) of theta with q <= q_max.

    ``method`` is ``scan`` (linear scan), ``cf`` (continued fractions, d = 1
    only) or ``auto`` (continued fractions when d = 1 and q_max is large).
    """
    _check_qmax(q_max)
    if theta.dim != spec.dim:
        raise ValueError("target and norm dimensions differ")
    if method == "auto":
        method = "cf" if theta.dim == 1 and q_max > 1 << 16 else "scan"
    if method == "cf":
        if theta.dim != 1:
            raise ValueError("continued fractions need d = 1")
        return _best_cf(theta, q_max)
    if method != "scan":
        raise ValueError(f"unknown method {method!r}")
    if q_max > _SCAN_QMAX_LIMIT:
        raise ValueError("linear scan is limited to q_max <= 2^40")
    return _best_scan(theta, spec, q_max, workers)


def _best_entry(theta, spec, q, dist, points) -> ApproxVector:
    p = points[0]
    return ApproxVector(p, q, tie=len(points) > 1, primitive=math.gcd(q, *p) == 1, ties=tuple(points) if len(points) > 1 else ())


def _best_scan(theta: TargetVector, spec: NormSpec, q_max: int, workers: int) -> ApproxSequence:
    chunks = _run_chunks(theta, spec, 1, q_max, None, workers)
    entries = []
    record = None  # exact _Mag of the current record
    fmin = math.inf
    terminated = False
    for ch in chunks:
        for q, m in zip(ch["rec_q"], ch["rec_m"]):
            if m > fmin + _SLACK:
                continue
            dist, points = nearest_int_points(spec, [q * c for c in theta.coords])
            mag = _Mag(spec, theta.residual(q, points[0]))
            if record is None or mag < record:
                record = mag
                entries.append(_best_entry(theta, spec, q, dist, points))
                if mag.is_zero():
                    terminated = True
                    break
            fmin = min(fmin, m)
        if terminated:
            break
        fmin = min(fmin, ch["min"])
    return ApproxSequence(entries, terminated=terminated and theta.is_rational(), q_max_scanned=q_max)


def is_best(theta: TargetVector, spec: NormSpec, v: ApproxVector) -> bool:
    """Direct check of the definition by scanning every q' < q (exact)."""
    mag = _Mag(spec, theta.residual(v.q, v.p))
    dist, _ = nearest_int_points(spec, [v.q * c for c in theta.coords])
    best_here = _Mag(spec, theta.residual(v.q, _[0]))
    if mag.cmp(best_here) != 0:
        return False
    for q in range(1, v.q):
        _, pts = nearest_int_points(spec, [q * c for c in theta.coords])
        if not mag < _Mag(spec, theta.residual(q, pts[0])):
            return False
    return True


# ---------------------------------------------------------------------------
# epsilon-approximations


def is_eps(theta: TargetVector, spec: NormSpec, eps, v: ApproxVector) -> bool:
    """Primitive and q^{1/d} ||p - q theta|| <= eps (exact)."""
    return math.gcd(v.q, *v.p) == 1 and _eps_holds(spec, theta.residual(v.q, v.p), v.q, Fraction(eps))


def _points_within(theta: TargetVector, spec: NormSpec, q: int, eps: Fraction) -> list[tuple]:
    """Every p with q^{1/d} ||p - q theta|| <= eps, by a certified box scan."""
    rho = nth_root_interval(Fraction(1, q), spec.dim, 64).hi * eps
    ranges = []
    for c in theta.coords:
        iv = refine(q * c, Fraction(1, 1 << 40))
        ranges.append(range(math.ceil(iv.lo - rho), math.floor(iv.hi + rho) + 1))
    out = []
    for p in _product(ranges):
        if _eps_holds(spec, theta.residual(q, p), q, eps):
            out.append(p)
    return out


def _product(ranges):
    import itertools

    return itertools.product(*ranges)


def eps_approximations(
    theta: TargetVector, spec: NormSpec, eps, q_max: int, *, method: str = "auto", workers: int = 1
) -> ApproxSequence:
    """All primitive (p, q), q <= q_max, with q^{1/d} ||p - q theta|| <= eps."""
    _check_qmax(q_max)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if theta.dim != spec.dim:
        raise ValueError("target and norm dimensions differ")
    if method == "auto":
        method = "cf" if theta.dim == 1 and eps < 1 and q_max > 1 << 16 else "scan"
    if method == "cf":
        if theta.dim != 1 or eps >= 1:
            raise ValueError("the continued-fraction path needs d = 1 and eps < 1")
        return _eps_cf(theta, spec, eps, q_max)
    if method != "scan":
        raise ValueError(f"unknown method {method!r}")
    if q_max > _SCAN_QMAX_LIMIT:
        raise ValueError("linear scan is limited to q_max <= 2^40")
    return _eps_scan(theta, spec, eps, q_max, workers)


def _eps_scan(theta, spec, eps, q_max, workers) -> ApproxSequence:
    d = spec.dim
    # below q_small the ball around q*theta may hold several integer points
    q_small = min(q_max, math.floor((2 * eps) ** d))
    entries = []
    for q in range(1, q_small + 1):
        for p in _points_within(theta, spec, q, eps):
            if math.gcd(q, *p) == 1:
                entries.append(ApproxVector(p, q))
    if q_small < q_max:
        for ch in _run_chunks(theta, spec, q_small + 1, q_max, eps, workers):
            for q in ch["eps_q"]:
                for p in _nearest_candidates(theta, spec, q):
                    if math.gcd(q, *p) == 1 and _eps_holds(spec, theta.residual(q, p), q, eps):
                        entries.append(ApproxVector(p, q))
    entries.sort(key=ApproxVector.key)
    return ApproxSequence(entries, terminated=False, q_max_scanned=q_max)


def _nearest_candidates(theta, spec, q) -> list[tuple]:
    """Nearest points to q*theta; the exact search only runs at rounding ties."""
    p = _nearest_rounding(theta, q)
    r = theta.residual(q, p)
    if all(compare(abs_c, Fraction(1, 2)) < 0 for abs_c in (x if compare(x, 0) >= 0 else -x for x in r)):
        return [p]
    return nearest_int_points(spec, [q * c for c in theta.coords])[1]


# ---------------------------------------------------------------------------
# continued fractions (d = 1)


def convergents(theta: TargetVector, q_max: int):
    """Yield (p_k, q_k) for k >= 0 with q_k <= q_max, plus the next one.

    Partial quotients come from an enclosure of theta whose endpoints share
    a continued-fraction prefix; the enclosure is refined as needed.
    """
    c = theta.coords[0]
    if isinstance(c, Fraction):
        yield from _convergents_of_interval(Interval.point(c), q_max)
        return
    bits = 2 * q_max.bit_length() + 64
    while True:
        iv = refine(c, Fraction(1, 1 << bits))
        out = list(_convergents_of_interval(iv, q_max))
        if out and out[-1] is not None:
            yield from out
            return
        bits *= 2


def _convergents_of_interval(iv: Interval, q_max: int):
    lo, hi = iv.lo, iv.hi
    p_prev, q_prev, p, q = 1, 0, None, None
    p0, q0 = 0, 1
    # standard recursion on both endpoints simultaneously
    a_lo, a_hi = lo, hi
    p_m2, q_m2, p_m1, q_m1 = 0, 1, 1, 0
    while True:
        fa, fb = math.floor(a_lo), math.floor(a_hi)
        if fa != fb:
            yield None
            return
        a = fa
        p_new, q_new = a * p_m1 + p_m2, a * q_m1 + q_m2
        yield (p_new, q_new)
        if q_new > q_max:
            return
        p_m2, q_m2, p_m1, q_m1 = p_m1, q_m1, p_new, q_new
        fr_lo, fr_hi = a_lo - a, a_hi - a
        if fr_lo == 0 and fr_hi == 0:
            return  # rational: expansion finished
        if fr_lo == 0 or fr_hi == 0:
            yield None
            return
        a_lo, a_hi = 1 / fr_hi, 1 / fr_lo


def _cf_list(theta, q_max) -> tuple[list, bool]:
    out = [x for x in convergents(theta, q_max)]
    finished = out[-1][1] <= q_max
    return [x for x in out if x[1] <= q_max], finished


def _best_cf(theta: TargetVector, q_max: int) -> ApproxSequence:
    spec = NormSpec("sup", 1)
    c = theta.coords[0]
    conv, finished = _cf_list(theta, q_max)
    entries = []
    record = None
    for p, q in conv:
        if entries and entries[-1].q == q:
            continue
        if q == 1:
            dist, points = nearest_int_points(spec, [c])
            mag = _Mag(spec, theta.residual(1, points[0]))
            entries.append(_best_entry(theta, spec, 1, dist, points))
            record = mag
            continue
        mag = _Mag(spec, theta.residual(q, (p,)))
        if mag < record:
            entries.append(ApproxVector((p,), q))
            record = mag
    terminated = theta.is_rational() and finished
    return ApproxSequence(entries, terminated=terminated, q_max_scanned=q_max)


def _eps_cf(theta: TargetVector, spec: NormSpec, eps: Fraction, q_max: int) -> ApproxSequence:
    # q |q theta - p| < 1 forces p/q to be a convergent or a neighbouring
    # mediant (p_{k+1} +- p_k)/(q_{k+1} +- q_k); small q are scanned directly
    conv, _ = _cf_list(theta, q_max)
    cands = set()
    for p, q in conv:
        cands.add((p, q))
    for (p0, q0), (p1, q1) in zip(conv, conv[1:]):
        cands.add((p1 + p0, q1 + q0))
        if q1 - q0 >= 1:
            cands.add((p1 - p0, q1 - q0))
    small = 4
    entries = []
    for q in range(1, min(small, q_max) + 1):
        for p in _points_within(theta, spec, q, eps):
            if math.gcd(q, *p) == 1:
                entries.append(ApproxVector(p, q))
    for p, q in sorted(cands, key=lambda t: (t[1], t[0])):
        if q <= small or q > q_max:
            continue
        if math.gcd(p, q) == 1 and _eps_holds(spec, theta.residual(q, (p,)), q, eps):
            entries.append(ApproxVector((p,), q))
    entries.sort(key=ApproxVector.key)
    return ApproxSequence(entries, terminated=False, q_max_scanned=q_max)


# ---------------------------------------------------------------------------
# smallest displacement over a range of q


def _min_chunk(args):
    hi, lo, kind, p, q0, q1, d = args
    q, x = _chunk_residuals(hi, lo, q0, q1)
    m = _float_mag(kind, p, x) * q ** (1.0 / d)
    k = int(np.argmin(m))
    best = float(m[k])
    near = np.nonzero(m <= best * (1 + 1e-9) + _SLACK * q ** (1.0 / d))[0]
    return best, (near + q0).tolist()


def min_displacement(theta: TargetVector, spec: NormSpec, q_lo: int, q_hi: int, *, workers: int = 1):
    """(min of ||disp||, (q, p)) over q in [q_lo, q_hi] with p nearest to q theta.

    Floats locate the candidates; the winner is chosen by exact comparison
    of q ||p - q theta||^d.
    """
    if not 1 <= q_lo <= q_hi:
        raise ValueError("need 1 <= q_lo <= q_hi")
    hi, lo = theta.float_split(q_hi)
    p = float(spec.p) if spec.kind == "lp" else None
    jobs = [(hi, lo, spec.kind, p, a, min(a + _CHUNK, q_hi + 1), spec.dim) for a in range(q_lo, q_hi + 1, _CHUNK)]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            res = list(ex.map(_min_chunk, jobs))
    else:
        res = [_min_chunk(j) for j in jobs]
    fbest = min(r[0] for r in res)
    cands = [q for r in res if r[0] <= fbest * (1 + 1e-9) + _SLACK * q_hi ** (1.0 / spec.dim) for q in r[1]]
    best = None
    for q in sorted(set(cands)):
        pts = _nearest_candidates(theta, spec, q)
        dsp = displacement(theta, ApproxVector(pts[0], q))
        if best is None or _disp_cmp(spec, dsp, best[0]) < 0:
            best = (dsp, (q, pts[0]))
    dsp, arg = best
    return float(dsp.norm(spec).mid), arg


def _disp_cmp(spec, a: "Displacement", b: "Displacement") -> int:
    try:
        va, _ = a.exact_norm_power(spec)
        vb, _ = b.exact_norm_power(spec)
        return compare(va, vb)
    except UnsupportedExact:
        ia, ib = a.norm(spec), b.norm(spec)
        if ia.hi < ib.lo:
            return -1
        if ib.hi < ia.lo:
            return 1
        raise PrecisionExhausted("displacements too close to order")


# ---------------------------------------------------------------------------
# displacement


@dataclass(frozen=True)
class Displacement:
    q: int
    residual: tuple  # exact p - q theta
    vector: tuple  # enclosures of q^{1/d}(p - q theta)

    @property
    def dim(self) -> int:
        return len(self.residual)

    def exact_norm_power(self, spec: NormSpec):
        """(||disp||^{k d}, k d) as an exact value, k = exact_power(spec)."""
        k = exact_power(spec)
        return norm_value(spec, list(self.residual)) ** self.dim * self.q**k, k * self.dim

    def norm(self, spec: NormSpec, width=Fraction(1, 1 << 80)) -> Interval:
        iv = _numeric_norm(spec, list(self.residual), width)
        s = nth_root_interval(self.q, self.dim, 100)
        return iv * s

    def floats(self) -> list[float]:
        return [float(iv.mid) for iv in self.vector]


def displacement(theta: TargetVector, v: ApproxVector, width=Fraction(1, 1 << 80)) -> Displacement:
    """q^{1/d}(p - q theta) as certified enclosures plus the exact residual."""
    d = theta.dim
    r = theta.residual(v.q, v.p)
    s = nth_root_interval(v.q, d, 100 + v.q.bit_length())
    vec = []
    for x in r:
        iv = refine(x, Fraction(width) / (s.hi + 1))
        vec.append(iv * s)
    return Displacement(v.q, tuple(r), tuple(vec))
