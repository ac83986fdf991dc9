"""Command line front end.

    dioflow approx best --theta 3/10 --qmax 20
    dioflow approx eps --theta rand --bits 128 --seed 7 --eps 1/2 --qmax 100000
    dioflow xsection visits --theta rand --dim 2 --norm euclid --qmax 100000 --filter b
    dioflow verify doeblin --samples 100000 --seed 1
    dioflow field --minpoly 1,1,-2,-1 --qmax 100000
    dioflow stats hist --input visits.csv --column disp_norm --ref ball:2

Exit codes: 0 success, 1 a verification gate failed, 2 bad configuration
or input, 3 an internal mismatch between the two enumerations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from fractions import Fraction

import mpmath

from .approx import ApproxSequence, TargetVector, best_approximations, eps_approximations, make_target
from .dynamics import CrossSectionGeometry, EpsilonExceedsR0, Mismatch, prefix_equivalence_check, subset_filter, visits
from .exactnum import Interval, format_real, format_sig, parse_real, refine
from .norms import NormSpec, _numeric_norm, parse_norm

__all__ = ["main", "build_parser", "ExperimentConfig", "ConfigError", "format_approx", "parse_target"]

DIGITS = 18


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config files


class ExperimentConfig:
    """Flat ``key = value`` configuration; keys are long option names.

    Order, comments and blank lines are kept, so dump(parse(text)) equals
    text up to whitespace around ``=`` and at line ends.
    """

    def __init__(self, items=None):
        self.lines: list = []  # ("kv", key, value) | ("raw", text)
        for k, v in (items or {}).items():
            self.lines.append(("kv", k, str(v)))

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        cfg = cls()
        for n, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if not s or s.startswith("#"):
                cfg.lines.append(("raw", s))
                continue
            if "=" not in s:
                raise ConfigError(f"line {n}: expected key = value")
            k, v = s.split("=", 1)
            k = k.strip().replace("-", "_")
            if not k.replace("_", "").replace(".", "").isalnum():
                raise ConfigError(f"line {n}: bad key {k!r}")
            cfg.lines.append(("kv", k, v.strip()))
        return cfg

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                return cls.parse(fh.read())
        except OSError as exc:
            raise ConfigError(str(exc)) from exc

    def dump(self) -> str:
        out = []
        for item in self.lines:
            out.append(item[1] if item[0] == "raw" else f"{item[1]} = {item[2]}")
        return "\n".join(out) + "\n"

    def as_dict(self) -> dict:
        return {it[1]: it[2] for it in self.lines if it[0] == "kv"}

    def gates(self) -> dict:
        return {k[5:]: float(v) for k, v in self.as_dict().items() if k.startswith("gate.")}


# ---------------------------------------------------------------------------
# targets and formatting


def parse_target(text: str, dim: int, bits: int, seed: int, minpoly=None) -> TargetVector:
    """``rand`` (dyadic, seeded), ``field`` (power vector of --minpoly) or a comma list of reals."""
    text = text.strip()
    if text == "rand":
        rng = random.Random(seed)
        return make_target([Fraction(rng.getrandbits(bits), 1 << bits) for _ in range(dim)])
    if text == "field":
        from .numfield import make_field, standard_vector

        if not minpoly:
            raise ConfigError("--theta field needs --minpoly")
        return standard_vector(make_field(minpoly)).target()
    try:
        coords = [parse_real(t) for t in text.split(",")]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if len(coords) != dim:
        if dim == 1:
            dim = len(coords)
        else:
            raise ConfigError(f"--theta has {len(coords)} coordinates but --dim is {dim}")
    return make_target(coords)


def _certify(fn, rel_digits: int = DIGITS + 2) -> Interval:
    """Refine ``fn(width)`` until its relative width is below 10^-rel_digits."""
    bits = 80
    while True:
        iv = fn(Fraction(1, 1 << bits))
        scale = max(abs(iv.lo), abs(iv.hi))
        if scale == 0 or iv.width <= scale / 10**rel_digits:
            return iv
        bits *= 2
        if bits > 1 << 16:
            return iv


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (Fraction, Interval)):
        return format_sig(x, DIGITS)
    if isinstance(x, float):
        return format_sig(Fraction(x), DIGITS)
    return str(x)


def _sqrt_iv(x: Fraction, k: int) -> Interval:
    from .exactnum import nth_root_interval

    return nth_root_interval(x, k, 90 + max(0, -x.numerator.bit_length() + x.denominator.bit_length()))


def approx_rows(theta: TargetVector, spec: NormSpec, seq: ApproxSequence) -> list[dict]:
    from .observables import lift_functional

    d = theta.dim
    rows = []
    for k, v in enumerate(seq.entries):
        r = theta.residual(v.q, v.p)
        dist = _certify(lambda w: _numeric_norm(spec, r, w))
        root = _certify(lambda w: _sqrt_iv(Fraction(v.q), d))
        lift = lift_functional(v.vector) if v.primitive else None
        rows.append(
            {
                "k": k,
                "q": v.q,
                "p": " ".join(str(x) for x in v.p),
                "tie": v.tie,
                "primitive": v.primitive,
                "dist": fmt(dist),
                "disp_norm": fmt(dist * root),
                "lift": " ".join(fmt(c) for c in lift.coords) if lift else "",
                "terminated": seq.terminated,
            }
        )
    return rows


def _emit(rows: list[dict], fmt_name: str, meta: dict | None = None) -> str:
    if fmt_name == "json":
        return json.dumps({"meta": meta or {}, "rows": rows}, indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def format_approx(theta, spec, seq, fmt_name: str = "csv") -> str:
    return _emit(approx_rows(theta, spec, seq), fmt_name, {"terminated": seq.terminated, "q_max": seq.q_max_scanned})


def _write(text: str, out: str | None):
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _target_and_norm(a):
    minpoly = _int_list(a.minpoly) if a.minpoly else None
    dim = a.dim
    if a.theta == "field" and minpoly:
        dim = len(minpoly) - 2
    theta = parse_target(a.theta, dim, a.bits, a.seed, minpoly)
    try:
        spec = parse_norm(a.norm, theta.dim)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return theta, spec


def _int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma separated integer list, got {text!r}") from exc


def _fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def cmd_approx(a) -> int:
    theta, spec = _target_and_norm(a)
    q_max = int(a.qmax)
    if a.kind == "best":
        seq = best_approximations(theta, spec, q_max, method=a.method, workers=a.threads)
    else:
        seq = eps_approximations(theta, spec, _fraction(a.eps), q_max, method=a.method, workers=a.threads)
    _write(format_approx(theta, spec, seq, a.format), a.out)
    return 0


def cmd_xsection(a) -> int:
    theta, spec = _target_and_norm(a)
    eps = _fraction(a.eps) if a.eps is not None else None
    geom = CrossSectionGeometry(spec, _fraction(a.r0)) if a.r0 else CrossSectionGeometry.default(spec, eps)
    evs = visits(theta, geom, int(a.qmax), method=a.method)
    evs = subset_filter(evs, a.filter, eps, geom)
    from .approx import displacement

    rows = []
    with mpmath.workdps(40):
        for e in evs:
            disp = displacement(theta, e.v, Fraction(1, 1 << 100))
            n = _certify(lambda w: _numeric_norm(spec, list(theta.residual(e.q, e.p)), w)) * _certify(
                lambda w: _sqrt_iv(Fraction(e.q), spec.dim)
            )
            rows.append(
                {
                    "q": e.q,
                    "p": " ".join(str(x) for x in e.p),
                    "t": mpmath.nstr(mpmath.log(e.q) / spec.dim, DIGITS, min_fixed=0, max_fixed=0),
                    "disp": " ".join(fmt(iv) for iv in disp.vector),
                    "disp_norm": fmt(n),
                    "in_sharp": e.in_sharp,
                    "in_B": e.in_B,
                }
            )
    _write(_emit(rows, a.format, {"r0": str(geom.r0), "filter": a.filter}), a.out)
    return 0


LAWS = ("oracle", "definition", "doeblin", "lift", "congruence", "kl", "eps-radial", "shape", "case2", "atoms", "invariants", "performance", "prefix")


def cmd_verify(a) -> int:
    from . import experiments as ex

    for k, v in getattr(a, "_gates", {}).items():
        if k not in ex.GATES:
            raise ConfigError(f"unknown gate {k!r}")
        ex.GATES[k] = v if not isinstance(ex.GATES[k], tuple) else (ex.GATES[k][0], v)
    law = a.law
    n = int(a.samples) if a.samples else None
    if law == "prefix":
        theta, spec = _target_and_norm(a)
        eps = _fraction(a.eps) if a.eps is not None else Fraction(1, 2)
        geom = CrossSectionGeometry.default(spec, eps)
        q_max = int(a.qmax)
        evs = visits(theta, geom, q_max)
        recs = []
        for which, ref in (
            ("b", best_approximations(theta, spec, q_max, workers=a.threads)),
            ("eps", eps_approximations(theta, spec, eps, q_max, workers=a.threads)),
        ):
            al = prefix_equivalence_check(subset_filter(evs, which, eps, geom), ref.entries)
            if isinstance(al, Mismatch):
                _write(json.dumps({"law": "prefix", "filter": which, "mismatch": al.reason}) + "\n", a.out)
                return 3
            recs.append({"law": f"prefix_{which}", "k0": al.k0, "l0": al.l0, "common": al.common, "pass": al.l0 == 0})
    elif law == "oracle":
        recs = ex.check_oracle(n or 100, int(a.qmax or 10**5), seed=a.seed)
    elif law == "definition":
        recs = ex.check_definition(n or 20, int(a.qmax or 2000), seed=a.seed)
    elif law in ("doeblin", "lift"):
        n = n or 10**5
        pool = ex.build_d1_pool(max(1, -(-n // 2000)), seed=a.seed)
        recs = ex.check_doeblin(pool, n) if law == "doeblin" else ex.check_lift(pool, n)
    elif law in ("congruence", "kl", "eps-radial", "shape"):
        n = n or 10**5
        mods = tuple(_int_list(a.mod)) if a.mod else (2, 3, 4, 5)
        d1 = ex.build_d1_pool(max(1, -(-n // 1650)), seed=a.seed)
        d2 = ex.build_d2_pool(max(1, -(-n // 2000)), seed=a.seed)
        if law == "congruence":
            recs = ex.check_congruence(d1, d2, mods, n)
        elif law == "kl":
            recs = ex.check_kl(d1, d2, n_targets=min(20, len(d2.targets)))
        elif law == "eps-radial":
            recs = ex.check_eps_radial(d1, d2, n)
        else:
            recs = ex.check_shape(d2, min(n, 20000))
    elif law == "case2":
        recs = ex.check_case2(n or 10**4)
    elif law == "atoms":
        recs = ex.check_atoms()
    elif law == "invariants":
        recs = ex.check_invariants(seed=a.seed)
    elif law == "performance":
        recs = ex.check_performance(workers=max(a.threads, 2))
    else:
        raise ConfigError(f"unknown law {law!r}")
    text = "".join(json.dumps(r, default=str) + "\n" for r in recs)
    _write(text, a.out)
    return 0 if all(r["pass"] for r in recs) else 1


def cmd_field(a) -> int:
    from .numfield import Balpha, discriminant, eps_zero_estimate, galpha, make_field, standard_vector, custom_vector

    coeffs = _int_list(a.minpoly)
    emb = a.embedding if a.embedding in ("largest", "smallest") else int(a.embedding)
    K = make_field(coeffs, emb)
    if a.vector == "power":
        fv = standard_vector(K)
    else:
        comps = [[_fraction(c) for c in part.split()] for part in a.vector.split(";")]
        fv = custom_vector(K, comps)
    spec = parse_norm(a.norm, fv.dim)
    g = galpha(fv)
    B = Balpha(fv)
    q_max = int(a.qmax)
    ez = eps_zero_estimate(fv, spec, q_max, workers=a.threads)
    report = {
        "minpoly": coeffs,
        "degree": K.degree,
        "roots": [fmt(r.refine(Fraction(1, 1 << 80))) for r in K.roots],
        "identity_root": K.identity_root_index,
        "discriminant": str(discriminant(coeffs)),
        "galpha": [[fmt(iv) for iv in row] for row in g.matrix],
        "det_galpha": fmt(g.det),
        "B": [[mpmath.nstr(x, DIGITS) for x in row] for row in B.B],
        "c1": mpmath.nstr(B.c1, DIGITS),
        "det_hbar": mpmath.nstr(B.det_hbar(), DIGITS),
        "eps0": {
            "q_max": q_max,
            "running_min": fmt(ez.running_min),
            "running_argmin": ez.running_argmin[0],
            "tail_min": fmt(ez.tail_min),
            "tail_argmin": ez.tail_argmin[0],
        },
    }
    rows = []
    if a.gaps:
        from . import experiments as ex
        from .dynamics import gaps
        from .stats import cluster_count

        ev = ex.best_events(fv.target(), spec, a.events + 1)
        gp = gaps(ev)
        counts = {}
        k = 10
        while k <= len(gp):
            counts[str(k)] = cluster_count(gp[:k], a.width)
            k *= 10
        report["gap_clusters"] = {"width": a.width, "counts": counts}
        rows = [{"k": i, "q": e.q, "gap": fmt(g_)} for i, (e, g_) in enumerate(zip(ev[1:], gp))]
    if a.directions and fv.dim == 2:
        from . import experiments as ex
        from .stats import UniformTorus, ks_statistic

        ds = ex.direction_samples(fv.target(), a.directions)
        report["directions"] = {"N": len(ds), "ks_uniform": ks_statistic(ds, UniformTorus(0.0))}
    if a.format == "csv" and rows:
        _write(_emit(rows, "csv"), a.out)
    else:
        _write(json.dumps(report, indent=1) + "\n", a.out)
    return 0


def _reference(name: str):
    from . import stats

    refs = {
        "doeblin": stats.DoeblinLenstraAbs,
        "doeblin-signed": stats.DoeblinLenstraSigned,
        "lift": stats.LiftD1,
        "torus": stats.UniformTorus,
    }
    if name.startswith("ball:"):
        return stats.UniformBallRadial(int(name[5:]))
    if name not in refs:
        raise ConfigError(f"unknown reference law {name!r}")
    return refs[name]()


def cmd_stats(a) -> int:
    from .stats import histogram, ks_statistic

    try:
        with open(a.input) as fh:
            reader = csv.DictReader(fh)
            xs = [float(row[a.column]) for row in reader]
    except (OSError, KeyError) as exc:
        raise ConfigError(f"cannot read column {a.column!r} from {a.input!r}: {exc}") from exc
    if not xs:
        raise ConfigError("no samples")
    ref = _reference(a.ref) if a.ref else None
    lo = a.lo if a.lo is not None else (ref.support[0] if ref and math.isfinite(ref.support[0]) else None)
    hi = a.hi if a.hi is not None else (ref.support[1] if ref and math.isfinite(ref.support[1]) else None)
    rows = []
    for left, right, c in histogram(xs, a.bins, lo, hi):
        row = {"left": fmt(left), "right": fmt(right), "count": c}
        if ref:
            row["expected"] = fmt(len(xs) * (ref.cdf(right) - ref.cdf(left)))
        rows.append(row)
    meta = {"N": len(xs)}
    if ref:
        meta["ks"] = ks_statistic(xs, ref)
    _write(_emit(rows, a.format, meta), a.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--norm", default="sup", help="euclid, sup, l1 or lp:<p> (default sup)")
    g.add_argument("--dim", type=int, default=1, help="dimension d of the target")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--threads", type=int, default=1, help="worker processes")
    g.add_argument("--out", default=None, help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--config", default=None, help="flat key = value file with defaults")
    g.add_argument("--save-config", default=None, help="write the effective configuration here")
    return p


def _target_opts(p: argparse.ArgumentParser):
    p.add_argument("--theta", default="rand", help="comma list of reals, 'rand' or 'field'")
    p.add_argument("--bits", type=int, default=256, help="bits of a random dyadic target")
    p.add_argument("--minpoly", default=None, help="descending integer coefficients for --theta field")
    p.add_argument("--qmax", default="100000")
    p.add_argument("--eps", default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="dioflow", description="Diophantine approximation through lattice flows.")
    sub = parser.add_subparsers(dest="command", required=True)

    ap = sub.add_parser("approx", help="best or eps-approximations")
    ap_sub = ap.add_subparsers(dest="kind", required=True)
    for kind in ("best", "eps"):
        sp = ap_sub.add_parser(kind, parents=[common])
        _target_opts(sp)
        sp.add_argument("--method", choices=("auto", "scan", "cf"), default="auto")
        sp.set_defaults(func=cmd_approx, kind=kind)

    xs = sub.add_parser("xsection", help="visits of the diagonal flow to the cross-section")
    xs_sub = xs.add_subparsers(dest="kind", required=True)
    sp = xs_sub.add_parser("visits", parents=[common])
    _target_opts(sp)
    sp.add_argument("--r0", default=None)
    sp.add_argument("--filter", default="all", choices=("all", "b", "b_sharp", "sharp", "eps"))
    sp.add_argument("--method", choices=("flow", "scan"), default="flow")
    sp.set_defaults(func=cmd_xsection)

    sp = sub.add_parser("verify", parents=[common], help="statistical and exact checks")
    sp.add_argument("law", choices=LAWS)
    _target_opts(sp)
    sp.set_defaults(qmax=None)
    sp.add_argument("--samples", default=None)
    sp.add_argument("--mod", default=None, help="moduli, e.g. 2,3,4,5")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("field", parents=[common], help="totally real field report")
    sp.add_argument("--minpoly", required=True)
    sp.add_argument("--embedding", default="largest")
    sp.add_argument("--vector", default="power", help="'power' or components like '0 1;0 1 1'")
    sp.add_argument("--qmax", default="100000")
    sp.add_argument("--gaps", action="store_true")
    sp.add_argument("--events", type=int, default=1000)
    sp.add_argument("--width", type=float, default=1e-6)
    sp.add_argument("--directions", type=int, default=0)
    sp.set_defaults(func=cmd_field)

    st = sub.add_parser("stats", help="histograms of a CSV column")
    st_sub = st.add_subparsers(dest="kind", required=True)
    sp = st_sub.add_parser("hist", parents=[common])
    sp.add_argument("--input", required=True)
    sp.add_argument("--column", required=True)
    sp.add_argument("--bins", type=int, default=50)
    sp.add_argument("--lo", type=float, default=None)
    sp.add_argument("--hi", type=float, default=None)
    sp.add_argument("--ref", default=None, help="doeblin, doeblin-signed, lift, torus or ball:<d>")
    sp.set_defaults(func=cmd_stats)
    return parser


_SKIP = {"command", "kind", "func", "config", "save_config", "_gates"}


def _leaf_parser(parser, argv):
    """The subparser that handled argv (for defaults and types)."""
    p = parser
    for tok in argv:
        acts = [a for a in p._actions if isinstance(a, argparse._SubParsersAction)]
        if not acts or tok not in acts[0].choices:
            if acts:
                continue
            break
        p = acts[0].choices[tok]
    return p


def _apply_config(parser, argv, ns) -> None:
    cfg = ExperimentConfig.load(ns.config)
    leaf = _leaf_parser(parser, argv)
    actions = {a.dest: a for a in leaf._actions}
    given = {a.dest for a in leaf._actions for s in a.option_strings if any(t == s or t.startswith(s + "=") for t in argv)}
    for k, v in cfg.as_dict().items():
        if k.startswith("gate."):
            continue
        if k not in actions or k in _SKIP:
            raise ConfigError(f"unknown config key {k!r}")
        if k in given:
            continue
        act = actions[k]
        if isinstance(act, argparse._StoreTrueAction):
            val = v.lower() in ("1", "true", "yes")
        else:
            try:
                val = act.type(v) if act.type else v
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {k}: {v!r}") from exc
            if act.choices and val not in act.choices:
                raise ConfigError(f"bad value for {k}: {v!r}")
        setattr(ns, k, val)
    ns._gates = cfg.gates()


def effective_config(ns) -> ExperimentConfig:
    items = {k: v for k, v in vars(ns).items() if k not in _SKIP and v is not None}
    return ExperimentConfig({k: (int(v) if isinstance(v, bool) else v) for k, v in items.items()})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if ns.config:
            _apply_config(parser, argv, ns)
        if ns.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if ns.save_config:
            with open(ns.save_config, "w") as fh:
                fh.write(effective_config(ns).dump())
        return ns.func(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, EpsilonExceedsR0) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
