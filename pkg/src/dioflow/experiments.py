"""Reproducible experiments behind ``verify`` and the acceptance suite.

Each ``check_*`` function returns a list of verdict records
``{law, N, statistic, gate, pass, ...}``.  Sample pools are built once and
can be shared between checks.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .approx import (
    ApproxVector,
    TargetVector,
    best_approximations,
    displacement,
    eps_approximations,
    is_best,
    make_target,
    _Mag,
)
from .dynamics import (
    CrossSectionGeometry,
    Mismatch,
    d1_coordinates,
    d1_enumerate,
    gaps,
    iter_visits,
    prefix_equivalence_check,
    subset_filter,
    visits,
)
from .norms import NormSpec, nearest_int_points, parse_norm
from .numfield import eps_zero_estimate, make_field, standard_vector
from .observables import (
    alternate_completion,
    lift_coordinate_d1,
    lift_functional,
    project_lattice,
    reconstruct,
    rho_En,
    shape_invariants,
)
from .stats import (
    DoeblinLenstraAbs,
    DoeblinLenstraSigned,
    LiftD1,
    UniformBallRadial,
    UniformTorus,
    cluster_count,
    clusters,
    congruence_expected,
    kl_expected,
    ks_statistic,
    radial_profile,
    tv_distance,
    verdict,
)

# Gates.  Those marked "pilot" were fixed after one calibration run with
# the default seeds of the check functions and not tuned afterwards; see
# README "Frozen gates".
GATES = {
    "doeblin_half": (0.7213, 0.010),
    "doeblin_ks": 0.012,
    "doeblin_sign": (0.5, 0.01),
    "lift_ks": 0.012,
    "congruence_class": 0.01,
    "kl_d1": 0.02,
    "kl_d2": 0.03,
    "eps_radial_ks": 0.012,
    "radial_sectors": 0.9,
    "direction_case2_min": 0.1,
    "direction_case1_max": 0.02,
    "atoms_top10_mass": 0.5,
    # pilot: a generic target at K = 1000 gave 1000 clusters (ratio 1.0); allow 2% merges
    "atoms_control_ratio": 0.98,
    "scan_seconds": 60.0,
    "speedup": 3.0,
}


# ---------------------------------------------------------------------------
# targets


def random_target(d: int, bits: int, rng: random.Random) -> TargetVector:
    """Dyadic rational target with ``bits`` binary digits per coordinate."""
    return make_target([Fraction(rng.getrandbits(bits), 1 << bits) for _ in range(d)])


def random_targets(d: int, count: int, bits: int = 256, seed: int = 0) -> list[TargetVector]:
    rng = random.Random(f"targets/{d}/{bits}/{seed}")
    return [random_target(d, bits, rng) for _ in range(count)]


def cubic_target(minpoly=(1, 1, -2, -1), embedding="largest") -> TargetVector:
    return standard_vector(make_field(minpoly, embedding)).target()


def _dyadic_disp_d1(theta: TargetVector, v: ApproxVector) -> float:
    """q (q theta - p) as a float, from integers only."""
    c = theta.coords[0]
    num = v.q * (v.q * c.numerator - v.p[0] * c.denominator)
    return num / c.denominator


# ---------------------------------------------------------------------------
# pools


@dataclass
class D1Pool:
    """Best and eps-approximations of random d = 1 targets via continued fractions."""

    targets: list
    best: list = field(default_factory=list)  # per target: list of ApproxVector
    eps: list = field(default_factory=list)
    eps_value: Fraction = Fraction(1, 2)


def build_d1_pool(count: int, *, bits: int = 8704, seed: int = 1, eps=Fraction(1, 2)) -> D1Pool:
    spec = parse_norm("sup", 1)
    q_max = 1 << (bits // 2)
    pool = D1Pool(random_targets(1, count, bits, seed), eps_value=Fraction(eps))
    for th in pool.targets:
        pool.best.append(best_approximations(th, spec, q_max, method="cf").entries)
        pool.eps.append(eps_approximations(th, spec, pool.eps_value, q_max, method="cf").entries)
    return pool


@dataclass
class VisitRecord:
    q: int
    p: tuple
    t: float
    disp: tuple
    norm: float
    in_B: bool
    eps_flags: dict  # eps -> bool


@dataclass
class D2Pool:
    spec: NormSpec
    geom: CrossSectionGeometry
    targets: list
    runs: list = field(default_factory=list)  # per target: list of VisitRecord


def visit_records(theta, geom, q_max, eps_values: Sequence) -> list[VisitRecord]:
    evs = list(iter_visits(theta, geom, q_max))
    flags = {}
    for e in eps_values:
        keep = {ev.key() for ev in subset_filter(evs, "eps", Fraction(e), geom)}
        flags[Fraction(e)] = keep
    return [
        VisitRecord(ev.q, ev.p, ev.t, ev.disp, ev.disp_norm_float, ev.in_B, {e: ev.key() in s for e, s in flags.items()})
        for ev in evs
    ]


def build_d2_pool(count: int, *, norm: str = "euclid", qbits: int = 3600, bits: int = 8192, seed: int = 2, eps_values=(Fraction(1, 2), Fraction(1))) -> D2Pool:
    spec = parse_norm(norm, 2)
    geom = CrossSectionGeometry.default(spec)
    pool = D2Pool(spec, geom, random_targets(2, count, bits, seed))
    for th in pool.targets:
        pool.runs.append(visit_records(th, geom, 1 << qbits, eps_values))
    return pool


def _take(per_target: Sequence[Sequence], n: int) -> list:
    """Pool up to n items taking an equal share from each target."""
    k = -(-n // len(per_target))
    out = []
    for items in per_target:
        out.extend(items[:k])
    return out[:n]


# ---------------------------------------------------------------------------
# criterion 1: flow versus direct scans


def check_oracle(n_targets: int = 100, q_max: int = 10**5, seed: int = 3, eps=Fraction(1, 2)) -> list[dict]:
    rng = random.Random(f"oracle/{seed}")
    mism = 0
    nonempty_d1 = 0
    k0s = []
    t0 = time.time()
    for i in range(n_targets):
        d = 1 + i % 3
        spec = parse_norm("sup" if (i // 3) % 2 == 0 else "euclid", d)
        th = random_target(d, 256, rng)
        geom = CrossSectionGeometry.default(spec, eps)
        evs = visits(th, geom, q_max)
        for which, ref in (
            ("b", best_approximations(th, spec, q_max, method="scan")),
            ("eps", eps_approximations(th, spec, eps, q_max, method="scan")),
        ):
            got = subset_filter(evs, which, eps, geom)
            al = prefix_equivalence_check(got, ref.entries)
            if isinstance(al, Mismatch) or al.l0 != 0 or al.common != len(ref.entries) - al.l0:
                mism += 1
                continue
            k0s.append(al.k0)
            if d == 1 and al.k0 != 0:
                nonempty_d1 += 1
    elapsed = time.time() - t0
    rec = verdict("oracle", n_targets, mism, 0)
    rec.update(max_prefix=max(k0s) if k0s else None, d1_nonempty_prefixes=nonempty_d1, seconds=elapsed)
    rec["pass"] = mism == 0 and nonempty_d1 == 0 and elapsed < 300
    return [rec]


# ---------------------------------------------------------------------------
# criterion 2: exhaustive definition check


def record_keys(theta: TargetVector, spec: NormSpec, q_max: int) -> list[tuple]:
    """Strict records of the exact distance, by exhaustive exact evaluation of every q."""
    best = None
    out = []
    for q in range(1, q_max + 1):
        pts = nearest_int_points(spec, [q * c for c in theta.coords])[1]
        mags = [(_Mag(spec, theta.residual(q, p)), tuple(p)) for p in pts]
        m = mags[0][0]
        for mm, _ in mags[1:]:
            if mm < m:
                m = mm
        if best is None or m < best:
            ties = sorted(p for mm, p in mags if mm.cmp(m) == 0)
            out.append((q, ties[0]))
            best = m
            if m.is_zero():
                break
    return out


def check_definition(n_targets: int = 20, q_max: int = 2000, seed: int = 4) -> list[dict]:
    rng = random.Random(f"definition/{seed}")
    bad = 0
    total = 0
    for i in range(n_targets):
        d = 1 + i % 3
        spec = parse_norm("sup" if i % 2 == 0 else "euclid", d)
        th = random_target(d, 64, rng)
        seq = best_approximations(th, spec, q_max, method="scan")
        total += len(seq)
        for v in seq:
            if not is_best(th, spec, v):
                bad += 1
        if seq.keys() != record_keys(th, spec, q_max):
            bad += 1
    return [verdict("definition", total, bad, 0)]


# ---------------------------------------------------------------------------
# criteria 3 and 4: d = 1 laws


def check_doeblin(pool: D1Pool, n: int = 10**5, n_targets: int = 50) -> list[dict]:
    pairs = list(zip(pool.targets, pool.best))[:n_targets]
    per = [[_dyadic_disp_d1(th, v) for v in seq] for th, seq in pairs]
    xs = _take(per, n)
    absx = [abs(x) for x in xs]
    half = sum(x <= 0.5 for x in absx) / len(absx)
    pos = sum(x > 0 for x in xs) / len(xs)
    c, w = GATES["doeblin_half"]
    r1 = verdict("doeblin_half", len(xs), abs(half - c), w)
    r1["value"] = half
    r2 = verdict("doeblin_ks", len(xs), ks_statistic(absx, DoeblinLenstraAbs()), GATES["doeblin_ks"])
    c, w = GATES["doeblin_sign"]
    r3 = verdict("doeblin_sign", len(xs), abs(pos - c), w)
    r3["value"] = pos
    r4 = verdict("doeblin_signed_ks", len(xs), ks_statistic(xs, DoeblinLenstraSigned()), GATES["doeblin_ks"])
    return [r1, r2, r3, r4]


def check_lift(pool: D1Pool, n: int = 10**5) -> list[dict]:
    hb = _take([[float(lift_coordinate_d1(v.p[0], v.q)) for v in seq] for seq in pool.best], n)
    he = _take([[float(lift_coordinate_d1(v.p[0], v.q)) for v in seq] for seq in pool.eps], n)
    return [
        verdict("lift_best", len(hb), ks_statistic(hb, LiftD1()), GATES["lift_ks"]),
        verdict("lift_eps", len(he), ks_statistic(he, UniformTorus()), GATES["lift_ks"]),
    ]


# ---------------------------------------------------------------------------
# criterion 5: congruences


def _congruence_record(vectors: Sequence[tuple], m: int, d: int) -> dict:
    n = d + 1
    counts: dict = {}
    for v in vectors:
        key = tuple(x % m for x in v)
        counts[key] = counts.get(key, 0) + 1
    N = len(vectors)
    expected = float(congruence_expected(n, m))
    import itertools

    prim = [c for c in itertools.product(range(m), repeat=n) if math.gcd(m, *c) == 1]
    obs = {k: counts.get(k, 0) / N for k in prim}
    nonprim = sum(c for k, c in counts.items() if math.gcd(m, *k) != 1)
    worst = max(abs(f - expected) for f in obs.values())
    rec = verdict(f"congruence_d{d}_m{m}", N, worst, GATES["congruence_class"])
    rec["tv"] = tv_distance(obs, {k: expected for k in prim})
    rec["nonprimitive"] = nonprim
    rec["pass"] = rec["pass"] and nonprim == 0
    return rec


def check_congruence(d1: D1Pool, d2: D2Pool, moduli=(2, 3, 4, 5), n: int = 10**5) -> list[dict]:
    v1 = _take([[v.vector for v in seq] for seq in d1.best], n)
    v2 = _take([[r.p + (r.q,) for r in run if r.in_B] for run in d2.runs], n)
    out = []
    for m in moduli:
        out.append(_congruence_record(v1, m, 1))
        out.append(_congruence_record(v2, m, 2))
    return out


# ---------------------------------------------------------------------------
# criterion 6: Khinchin-Levy means


def check_kl(d1: D1Pool, d2: D2Pool, n_targets: int = 20, eps=Fraction(1, 2)) -> list[dict]:
    eps = Fraction(eps)
    g1 = []
    for seq in d1.eps[:n_targets]:
        g1.extend(math.log(b.q / a.q) for a, b in zip(seq, seq[1:]))
    g2 = []
    d = d2.spec.dim
    for run in d2.runs[:n_targets]:
        # gaps are in t = log(q)/d; the statistic is log(q_{k+1}/q_k)
        g2.extend(d * g for g in gaps([r for r in run if r.eps_flags[eps]]))
    e1 = kl_expected(2, parse_norm("sup", 1), d1.eps_value)
    e2 = kl_expected(3, d2.spec, eps)
    m1, m2 = sum(g1) / len(g1), sum(g2) / len(g2)
    r1 = verdict("kl_d1", len(g1), abs(m1 / e1 - 1), GATES["kl_d1"])
    r1.update(mean=m1, expected=e1)
    r2 = verdict("kl_d2", len(g2), abs(m2 / e2 - 1), GATES["kl_d2"])
    r2.update(mean=m2, expected=e2)
    r1["pass"] = r1["pass"] and len(g1) >= 3 * 10**4
    r2["pass"] = r2["pass"] and len(g2) >= 3 * 10**4
    return [r1, r2]


# ---------------------------------------------------------------------------
# criterion 7: eps-displacements fill the eps-ball uniformly


def check_eps_radial(d1: D1Pool, d2: D2Pool, n: int = 10**5, eps2=Fraction(1)) -> list[dict]:
    e1 = float(d1.eps_value)
    r1 = _take([[abs(_dyadic_disp_d1(th, v)) / e1 for v in seq] for th, seq in zip(d1.targets, d1.eps)], n)
    r2 = _take([[r.norm / float(eps2) for r in run if r.eps_flags[Fraction(eps2)]] for run in d2.runs], n)
    return [
        verdict("eps_radial_d1", len(r1), ks_statistic(r1, UniformBallRadial(1)), GATES["eps_radial_ks"]),
        verdict("eps_radial_d2", len(r2), ks_statistic(r2, UniformBallRadial(2)), GATES["eps_radial_ks"]),
    ]


# ---------------------------------------------------------------------------
# criterion 8: projected lattices and the radial profile (d = 2)


def check_shape(d2: D2Pool, n: int = 20000, eps=Fraction(1), thresholds=(0.4, 0.3, 0.2)) -> list[dict]:
    eps = Fraction(eps)
    best = _take([[r for r in run if r.in_B] for run in d2.runs], n)
    epsr = _take([[r for r in run if r.eps_flags[eps]] for run in d2.runs], n)
    sb = [shape_invariants(project_lattice(r.p + (r.q,)))[0] for r in best]
    se = [shape_invariants(project_lattice(r.p + (r.q,)))[0] for r in epsr]
    ratios = []
    for s in thresholds:
        pb = sum(x <= s for x in sb) / len(sb)
        pe = sum(x <= s for x in se) / len(se)
        ratios.append(pb / pe if pe else math.inf)
    mono = all(a > b for a, b in zip(ratios, ratios[1:]))
    r1 = {"law": "sys_ratio", "N": len(sb), "statistic": ratios, "gate": "strictly decreasing", "pass": mono}
    allb = _take([[r for r in run if r.in_B] for run in d2.runs], 10**5)
    prof = radial_profile([r.disp for r in allb], d2.spec, sectors=16, rings=8, radius=float(d2.geom.r0), need=GATES["radial_sectors"])
    r2 = verdict("radial_profile", len(allb), prof.fraction, GATES["radial_sectors"], upper=False)
    return [r1, r2]


# ---------------------------------------------------------------------------
# criterion 9: Case II singularity


def sup_direction(x: Sequence[float]) -> float:
    """Position of x/||x||_inf on the boundary of the unit square, as arclength/8 in [0, 1)."""
    a, b = x
    m = max(abs(a), abs(b))
    a, b = a / m, b / m
    if a >= 1 - 1e-15 and b >= 0:
        s = b
    elif b >= 1 - 1e-15:
        s = 1 + (1 - a)
    elif a <= -1 + 1e-15:
        s = 3 + (1 - b)
    elif b <= -1 + 1e-15:
        s = 5 + (a + 1)
    else:
        s = 7 + (b + 1)
    return (s / 8) % 1.0


def direction_samples(theta: TargetVector, n: int, eps=Fraction(1, 2), qbits: int = 4000) -> list[float]:
    """Directions of the first n eps-approximation displacements (sup norm, d = 2)."""
    spec = parse_norm("sup", 2)
    geom = CrossSectionGeometry.default(spec)
    eps = Fraction(eps)
    while True:
        evs = list(iter_visits(theta, geom, 1 << qbits))
        sel = subset_filter(evs, "eps", eps, geom)
        if len(sel) >= n:
            return [sup_direction(e.disp) for e in sel[:n]]
        qbits = int(qbits * 1.1 * n / max(len(sel), 1)) + 500


def check_case2(n_dirs: int = 10**4, seed: int = 5, eps=Fraction(1, 2), case1_targets: int = 4) -> list[dict]:
    fv = standard_vector(make_field((1, 1, -2, -1)))
    spec = parse_norm("sup", 2)
    e5 = eps_zero_estimate(fv, spec, 10**5)
    e6 = eps_zero_estimate(fv, spec, 10**6)
    r1 = {
        "law": "case2_running_min",
        "N": 10**6,
        "statistic": [e5.running_min, e6.running_min],
        "gate": "positive and unchanged from 1e5 to 1e6",
        "pass": e6.running_min > 0 and e6.running_min == e5.running_min,
        "argmin": [e5.running_argmin[0], e6.running_argmin[0]],
    }
    d2 = direction_samples(fv.target(), n_dirs, eps)
    share = -(-n_dirs // case1_targets)
    d1 = []
    for th in random_targets(2, case1_targets, 16384, seed):
        d1.extend(direction_samples(th, share, eps))
    d1 = d1[:n_dirs]
    u = UniformTorus(0.0)
    r2 = verdict("case2_directions", len(d2), ks_statistic(d2, u), GATES["direction_case2_min"], upper=False)
    r3 = verdict("case1_directions", len(d1), ks_statistic(d1, u), GATES["direction_case1_max"])
    return [r1, r2, r3]


# ---------------------------------------------------------------------------
# criterion 10: atoms of the gap distribution


def best_events(theta: TargetVector, spec: NormSpec, k: int, qbits_step: int = 1000) -> list:
    geom = CrossSectionGeometry.default(spec)
    qb = qbits_step
    while True:
        bs = [e for e in iter_visits(theta, geom, 1 << qb) if e.in_B]
        if len(bs) >= k:
            return bs[:k]
        qb = int(qb * 1.2 * k / max(len(bs), 1)) + qbits_step


def check_atoms(k_small: int = 10**3, k_large: int = 10**4, width: float = 1e-6, seed: int = 6) -> list[dict]:
    spec = parse_norm("sup", 2)
    ev = best_events(cubic_target(), spec, k_large + 1)
    g_large = gaps(ev)
    g_small = g_large[:k_small]
    c_small, c_large = cluster_count(g_small, width), cluster_count(g_large, width)
    cl = sorted(clusters(g_large, width), key=lambda c: (-sum(c), c[0]))
    top = sum(sum(c) for c in cl[:10]) / sum(g_large)
    r1 = {"law": "atoms_stable", "N": len(g_large), "statistic": [c_small, c_large], "gate": "equal", "pass": c_small == c_large}
    r2 = verdict("atoms_top10_mass", len(g_large), top, GATES["atoms_top10_mass"], upper=False)
    (th1,) = random_targets(2, 1, 8192, seed)
    g1 = gaps(best_events(th1, spec, k_small + 1))
    ratio = cluster_count(g1, width) / len(g1)
    r3 = verdict("atoms_case1_control", len(g1), ratio, GATES["atoms_control_ratio"], upper=False)
    return [r1, r2, r3]


# ---------------------------------------------------------------------------
# criterion 11: exact structural invariants


def _lattice_points(rows, radius_sq) -> set:
    from .lattice import reduce_basis, short_vectors

    rows = reduce_basis(rows)  # same point set, cheaper enumeration
    out = set()
    n = len(rows)
    for c in short_vectors(rows, radius_sq):
        v = tuple(sum(c[i] * rows[i][k] for i in range(n)) for k in range(len(rows[0])))
        out.add(v)
        out.add(tuple(-x for x in v))
    return out


def _ball_points(n: int, radius_sq: int) -> set:
    import itertools

    r = math.isqrt(radius_sq)
    return {v for v in itertools.product(range(-r, r + 1), repeat=n) if 0 < sum(x * x for x in v) <= radius_sq}


def check_invariants(seed: int = 7, n_targets: int = 6, q_max: int = 10**4, chart_points: int = 1000) -> list[dict]:
    rng = random.Random(f"invariants/{seed}")
    fails: dict = {k: 0 for k in ("primitive", "monotone", "lift_completion", "reconstruct", "rho_commutes", "visit_time", "d1_chart")}
    counted = dict.fromkeys(fails, 0)
    vecs = []
    for i in range(n_targets):
        d = 1 + i % 3
        spec = parse_norm("euclid" if i % 2 else "sup", d)
        th = random_target(d, 128, rng)
        seq = best_approximations(th, spec, q_max, method="scan")
        for v in seq:
            counted["primitive"] += 1
            fails["primitive"] += not v.primitive or math.gcd(v.q, *v.p) != 1
        mags = [_Mag(spec, th.residual(v.q, v.p)) for v in seq]
        for a, b, ma, mb in zip(seq, seq.entries[1:], mags, mags[1:]):
            counted["monotone"] += 1
            fails["monotone"] += not (a.q < b.q and mb < ma)
        vecs.extend(v.vector for v in seq.entries[-3:])
        geom = CrossSectionGeometry.default(spec)
        for e in visits(th, geom, q_max):
            counted["visit_time"] += 1
            # the flow time of a visit is (1/d) log q, and the displacement
            # read off there is q^{1/d}(p - q theta)
            ref = displacement(th, ApproxVector(e.p, e.q)).floats()
            ok = e.t == math.log(e.q) / d and all(abs(a - b) <= 1e-12 for a, b in zip(e.disp, ref))
            fails["visit_time"] += not ok
    for v in vecs:
        n = len(v)
        base = lift_functional(v)
        for s in range(2):
            counted["lift_completion"] += 1
            fails["lift_completion"] += not base.same_class(lift_functional(v, alternate_completion(v, s)))
        counted["rho_commutes"] += 1
        fails["rho_commutes"] += not rho_En(v, seed=3).same_class(base)
        counted["reconstruct"] += 1
        rows = reconstruct(base.lattice, base, v)
        fails["reconstruct"] += _lattice_points(rows, 100) != _ball_points(n, 100)
    crng = random.Random(f"chart/{seed}")
    for _ in range(chart_points):
        x = Fraction(crng.randrange(-999, 1000), 1000)
        y = Fraction(crng.randrange(0, 1000), 1000)
        rep = d1_coordinates(x, y)
        counted["d1_chart"] += 1
        fails["d1_chart"] += (rep.in_sharp, rep.in_B) != d1_enumerate(x, y)
    out = []
    for k in fails:
        out.append(verdict(f"invariant_{k}", counted[k], fails[k], 0))
    return out


# ---------------------------------------------------------------------------
# criterion 12: performance


def check_performance(q_max: int = 10**6, q_par: int = 10**8, workers: int = 8, seed: int = 8) -> list[dict]:
    from .cli import format_approx

    spec = parse_norm("euclid", 2)
    (th,) = random_targets(2, 1, 256, seed)
    t0 = time.perf_counter()
    seq = best_approximations(th, spec, q_max, method="scan")
    t1 = time.perf_counter() - t0
    r1 = verdict("scan_time", q_max, t1, GATES["scan_seconds"])
    t0 = time.perf_counter()
    s1 = best_approximations(th, spec, q_par, method="scan", workers=1)
    ta = time.perf_counter() - t0
    t0 = time.perf_counter()
    s8 = best_approximations(th, spec, q_par, method="scan", workers=workers)
    tb = time.perf_counter() - t0
    same = format_approx(th, spec, s1, "csv") == format_approx(th, spec, s8, "csv")
    r2 = verdict("parallel_speedup", q_par, ta / tb, GATES["speedup"], upper=False)
    r2.update(identical=same, seconds=[ta, tb])
    r3 = {"law": "parallel_identical", "N": len(s1), "statistic": same, "gate": True, "pass": same}
    return [r1, r2, r3]
